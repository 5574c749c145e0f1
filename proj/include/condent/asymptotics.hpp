#pragma once

// Almost-sure bound constants and asymptotic variances of the plug-in
// conditional entropy estimators.
//
// Two variance routes are kept side by side and never substituted for one
// another:
//   * variance_paper: the published closed forms, transcribed term by term
//     (including the factor-2 cross sums over k != k'). The Cov(G_marg,
//     G_joint) term left symbolic there is computed by the delta method.
//   * variance_delta: g^T C g with g the exact gradient of the functional and
//     C the multinomial covariance of sqrt(n)(p_hat - p).
// They disagree in general (e.g. uniform pmf, Shannon: ~0.348 vs 0).
//
// Zero cells of empirical pmfs are treated as absent from every sum, so the
// variances can be evaluated at a plug-in pmf. Bound constants need every
// cell positive.

#include "condent/pmf.hpp"
#include "condent/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace condent {

/// Covariance of the normalized deviations sqrt(n/p_k)(p_hat_k - p_k):
/// 1 - p_k on the diagonal and -sqrt(p_k p_k') off it. Entries are computed
/// on demand, so memory stays O(rs).
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(const JointPmf& pmf);

    std::size_t dimension() const { return probs_.size(); }

    /// sigma_(k,k'), 1-based.
    double operator()(std::size_t k, std::size_t kp) const;

    /// Quadratic form u^T Sigma v over 0-based vectors of length dimension().
    double contract(const std::vector<double>& u, const std::vector<double>& v) const;

private:
    std::vector<double> probs_;
};

/// Pieces of a published variance. For Shannon, joint_part is
/// sum p(1-p)(1+ln p)^2, cross_part the -2 sum_{k!=k'} term and
/// marginal_part 0. For Renyi/Tsallis they are sigma^2(marginal),
/// sigma^2(joint) and 2 Cov(G_marg, G_joint).
struct PaperVariance {
    double total = 0.0;
    double marginal_part = 0.0;
    double joint_part = 0.0;
    double cross_part = 0.0;
};

struct AsymptoticProfile {
    Family family = Family::Shannon;
    std::optional<double> alpha;
    Direction direction = Direction::YgivenX;
    double bound_constant = 0.0;
    PaperVariance variance_paper;
    double variance_delta = 0.0;
};

struct SupDeviation {
    double a_z = 0.0;
    double a_x = 0.0;
    double a_y = 0.0;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// A_H, A_{R,alpha} or A_{T,alpha} for a conditional direction. Throws
/// std::domain_error if a cell is zero.
double bound_constant(const JointPmf& pmf, Family family, std::optional<double> alpha,
                      Direction direction);

/// The published variance of sqrt(n)(estimate - truth) for a conditional
/// direction.
PaperVariance variance_paper(const JointPmf& pmf, Family family, std::optional<double> alpha,
                             Direction direction);

/// Gradient of the entropy functional (any direction) with respect to the
/// flat pmf vector, 0-based. Zero cells get a zero component.
std::vector<double> functional_gradient(const JointPmf& pmf, Family family,
                                        std::optional<double> alpha, Direction direction);

/// Delta-method variance g^T C g of sqrt(n)(estimate - truth), any direction.
double variance_delta(const JointPmf& pmf, Family family, std::optional<double> alpha,
                      Direction direction);

AsymptoticProfile asymptotic_profile(const JointPmf& pmf, Family family,
                                     std::optional<double> alpha, Direction direction);

/// value +- z_{(1+level)/2} sqrt(variance/n).
Interval confidence_interval(double value, double variance, std::uint64_t n, double level);

/// Sup-norm deviations of an empirical pmf from the truth over cells and
/// both marginals. Throws std::invalid_argument on a shape mismatch.
SupDeviation sup_deviation(const JointPmf& empirical, const JointPmf& truth);

/// The normalizer each almost-sure bound divides by: a_Z for Shannon and
/// Tsallis, the conditioning marginal's a_X (or a_Y) for Renyi.
double bound_normalizer(const SupDeviation& dev, Family family, Direction direction);

}  // namespace condent
