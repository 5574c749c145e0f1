#include "condent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace condent {

namespace {

double renyi_from_power_sum(double s, double alpha) { return std::log(s) / (1.0 - alpha); }

double tsallis_from_power_sum(double s, double alpha) { return (s - 1.0) / (1.0 - alpha); }

double ratio_or_throw(double joint, double marg) {
    if (!(marg > 0.0)) {
        throw std::domain_error("conditioning power sum is zero; estimator undefined");
    }
    return joint / marg;
}

}  // namespace

double shannon(std::span<const double> probs) {
    validate_probability_vector(probs);
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

PowerSum power_sum(std::span<const double> probs, double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw std::domain_error("power sum needs alpha > 0");
    }
    validate_probability_vector(probs);
    double s = 0.0;
    for (double p : probs) {
        if (p > 0.0) s += std::pow(p, alpha);
    }
    return {s, alpha};
}

double renyi(std::span<const double> probs, double alpha) {
    check_alpha(Family::Renyi, alpha);
    return renyi_from_power_sum(power_sum(probs, alpha).value, alpha);
}

double tsallis(std::span<const double> probs, double alpha) {
    check_alpha(Family::Tsallis, alpha);
    return tsallis_from_power_sum(power_sum(probs, alpha).value, alpha);
}

EntropyValue conditional_shannon(const JointPmf& pmf, Direction direction) {
    if (!is_conditional(direction)) {
        throw std::invalid_argument("conditional_shannon needs direction yx or xy");
    }
    const Axis given = conditioning_axis(direction);
    const MarginalPmf marg = marginal(pmf, given);
    const Shape shape = pmf.shape();
    const auto probs = pmf.probs();
    double h = 0.0;
    for (std::size_t k = 1; k <= shape.cells(); ++k) {
        const double p = probs[k - 1];
        if (p == 0.0) continue;
        const Cell c = unflatten_index(k, shape);
        const double pm = marg.probs[(given == Axis::X ? c.i : c.j) - 1];
        h += p * std::log(pm / p);
    }
    return {h, Family::Shannon, std::nullopt, direction};
}

EntropyValue conditional_renyi(const JointPmf& pmf, double alpha, Direction direction) {
    check_alpha(Family::Renyi, alpha);
    if (!is_conditional(direction)) {
        throw std::invalid_argument("conditional_renyi needs direction yx or xy");
    }
    const double sj = power_sum(pmf.probs(), alpha).value;
    const double sm = power_sum(marginal(pmf, conditioning_axis(direction)).probs, alpha).value;
    return {renyi_from_power_sum(ratio_or_throw(sj, sm), alpha), Family::Renyi, alpha, direction};
}

EntropyValue conditional_tsallis(const JointPmf& pmf, double alpha, Direction direction) {
    check_alpha(Family::Tsallis, alpha);
    if (!is_conditional(direction)) {
        throw std::invalid_argument("conditional_tsallis needs direction yx or xy");
    }
    const double sj = power_sum(pmf.probs(), alpha).value;
    const double sm = power_sum(marginal(pmf, conditioning_axis(direction)).probs, alpha).value;
    return {tsallis_from_power_sum(ratio_or_throw(sj, sm), alpha), Family::Tsallis, alpha,
            direction};
}

EntropyValue entropy(const JointPmf& pmf, Family family, std::optional<double> alpha,
                     Direction direction) {
    check_alpha(family, alpha);
    if (is_conditional(direction)) {
        switch (family) {
            case Family::Shannon: return conditional_shannon(pmf, direction);
            case Family::Renyi: return conditional_renyi(pmf, *alpha, direction);
            case Family::Tsallis: return conditional_tsallis(pmf, *alpha, direction);
        }
    }

    std::vector<double> storage;
    std::span<const double> probs = pmf.probs();
    if (direction != Direction::Joint) {
        storage = marginal(pmf, direction == Direction::MarginalX ? Axis::X : Axis::Y).probs;
        probs = storage;
    }
    EntropyValue out{0.0, family, family == Family::Shannon ? std::nullopt : alpha, direction};
    switch (family) {
        case Family::Shannon: out.value = shannon(probs); break;
        case Family::Renyi: out.value = renyi(probs, *alpha); break;
        case Family::Tsallis: out.value = tsallis(probs, *alpha); break;
    }
    return out;
}

double IdentityReport::max_residual() const {
    return std::max({std::abs(shannon_chain_rule), std::abs(renyi_chain_rule),
                     std::abs(pseudo_additivity), std::abs(tsallis_renyi_transform)});
}

IdentityReport check_identities(const JointPmf& pmf, double alpha) {
    check_alpha(Family::Renyi, alpha);
    const auto [mx, my] = marginals(pmf);

    IdentityReport rep;
    rep.alpha = alpha;

    const double h_xy = shannon(pmf.probs());
    const double h_x = shannon(mx.probs);
    const double h_y = shannon(my.probs);
    const double h_y_x = conditional_shannon(pmf, Direction::YgivenX).value;
    const double h_x_y = conditional_shannon(pmf, Direction::XgivenY).value;
    rep.shannon_chain_rule = h_y_x - (h_xy - h_x);
    rep.monotonicity_slack_x = h_x - h_x_y;
    rep.monotonicity_slack_y = h_y - h_y_x;

    const double r_y_x = conditional_renyi(pmf, alpha, Direction::YgivenX).value;
    rep.renyi_chain_rule = r_y_x - (renyi(pmf.probs(), alpha) - renyi(mx.probs, alpha));

    const double t_xy = tsallis(pmf.probs(), alpha);
    const double t_x = tsallis(mx.probs, alpha);
    const double t_y_x = conditional_tsallis(pmf, alpha, Direction::YgivenX).value;
    rep.pseudo_additivity = t_xy - (t_x + t_y_x + (1.0 - alpha) * t_x * t_y_x);
    rep.tsallis_renyi_transform =
        t_y_x - std::expm1((1.0 - alpha) * r_y_x) / (1.0 - alpha);
    return rep;
}

}  // namespace condent
