#pragma once

// Exact Shannon, Renyi and Tsallis entropies of a known pmf, in nats.
//
// Zero cells follow the plug-in conventions 0*log 0 = 0 and 0^alpha = 0, so
// these functionals apply unchanged to empirical pmfs.

#include "condent/pmf.hpp"
#include "condent/types.hpp"

#include <optional>
#include <span>

namespace condent {

struct EntropyValue {
    double value = 0.0;
    Family family = Family::Shannon;
    std::optional<double> alpha;  // empty for Shannon (the alpha -> 1 limit)
    Direction direction = Direction::Joint;
};

struct PowerSum {
    double value = 0.0;
    double alpha = 1.0;
};

/// -sum p ln p over a validated probability vector.
double shannon(std::span<const double> probs);

/// sum p^alpha; alpha must be positive.
PowerSum power_sum(std::span<const double> probs, double alpha);

/// Renyi entropy ln(S_alpha)/(1-alpha) of a plain vector.
double renyi(std::span<const double> probs, double alpha);

/// Tsallis entropy (S_alpha - 1)/(1-alpha) of a plain vector.
double tsallis(std::span<const double> probs, double alpha);

/// sum_{i,j} p_ij ln(p_marg/p_ij), conditioning on X for YgivenX.
EntropyValue conditional_shannon(const JointPmf& pmf, Direction direction);

/// ln(S_alpha(joint)/S_alpha(conditioning marginal)) / (1-alpha).
EntropyValue conditional_renyi(const JointPmf& pmf, double alpha, Direction direction);

/// (S_alpha(joint)/S_alpha(conditioning marginal) - 1) / (1-alpha).
EntropyValue conditional_tsallis(const JointPmf& pmf, double alpha, Direction direction);

/// Any family in any direction (joint, either marginal, either conditional).
/// alpha is ignored for Shannon and required otherwise.
EntropyValue entropy(const JointPmf& pmf, Family family, std::optional<double> alpha,
                     Direction direction);

/// Residuals of the algebraic identities tying the conditional entropies to
/// joint and marginal ones. Every residual is signed; the slacks are
/// H(marginal) - H(conditional), which must be nonnegative.
struct IdentityReport {
    double alpha = 0.0;
    double shannon_chain_rule = 0.0;     // H(Y|X) - [H(XY) - H(X)]
    double renyi_chain_rule = 0.0;       // R(Y|X) - [R(XY) - R(X)]
    double pseudo_additivity = 0.0;      // T(XY) - [T(X) + T(Y|X) + (1-a) T(X) T(Y|X)]
    double tsallis_renyi_transform = 0.0;  // T(Y|X) - (exp((1-a) R(Y|X)) - 1)/(1-a)
    double monotonicity_slack_x = 0.0;   // H(X) - H(X|Y)
    double monotonicity_slack_y = 0.0;   // H(Y) - H(Y|X)

    /// Largest absolute identity residual (slacks excluded).
    double max_residual() const;
};

IdentityReport check_identities(const JointPmf& pmf, double alpha);

}  // namespace condent
