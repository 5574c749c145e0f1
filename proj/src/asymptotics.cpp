#include "condent/asymptotics.hpp"

#include "condent/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace condent {

namespace {

struct Parts {
    std::vector<double> joint;     // flat cells
    std::vector<double> marg;      // conditioning marginal
    std::vector<std::size_t> row;  // 0-based marginal index of each cell
};

Parts split(const JointPmf& pmf, Axis axis) {
    Parts parts;
    parts.joint.assign(pmf.probs().begin(), pmf.probs().end());
    parts.marg = marginal(pmf, axis).probs;
    parts.row.resize(pmf.size());
    for (std::size_t k = 1; k <= pmf.size(); ++k) {
        const Cell c = unflatten_index(k, pmf.shape());
        parts.row[k - 1] = (axis == Axis::X ? c.i : c.j) - 1;
    }
    return parts;
}

Axis axis_of(Direction d) {
    switch (d) {
        case Direction::MarginalX:
        case Direction::YgivenX: return Axis::X;
        default: return Axis::Y;
    }
}

// sum over support of p^e
double support_pow_sum(const std::vector<double>& p, double e) {
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) s += std::pow(v, e);
    }
    return s;
}

// sum_k (1-p_k) p_k^{2a-1} - 2 sum_{k != k'} (p_k p_k')^{a-1/2}, over the support.
double paper_power_bracket(const std::vector<double>& p, double alpha) {
    double diag = 0.0;
    double half = 0.0;
    double sq = 0.0;
    for (double v : p) {
        if (!(v > 0.0)) continue;
        diag += (1.0 - v) * std::pow(v, 2.0 * alpha - 1.0);
        half += std::pow(v, alpha - 0.5);
        sq += std::pow(v, 2.0 * alpha - 1.0);
    }
    return diag - 2.0 * (half * half - sq);
}

void require_conditional(Direction d, const char* what) {
    if (!is_conditional(d)) {
        throw std::invalid_argument(std::string(what) + " is defined for directions yx and xy only");
    }
}

// Cov of the limits of two smooth functionals with flat-pmf gradients a, b.
double delta_covariance(const JointPmf& pmf, const std::vector<double>& a,
                        const std::vector<double>& b) {
    const auto p = pmf.probs();
    std::vector<double> ua(a.size()), ub(b.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double root = std::sqrt(p[k]);
        ua[k] = a[k] * root;
        ub[k] = b[k] * root;
    }
    return CovarianceMatrix(pmf).contract(ua, ub);
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const JointPmf& pmf)
    : probs_(pmf.probs().begin(), pmf.probs().end()) {}

double CovarianceMatrix::operator()(std::size_t k, std::size_t kp) const {
    if (k < 1 || k > probs_.size() || kp < 1 || kp > probs_.size()) {
        throw std::domain_error("covariance index outside 1..rs");
    }
    if (k == kp) return 1.0 - probs_[k - 1];
    return -std::sqrt(probs_[k - 1] * probs_[kp - 1]);
}

double CovarianceMatrix::contract(const std::vector<double>& u, const std::vector<double>& v) const {
    const std::size_t m = probs_.size();
    if (u.size() != m || v.size() != m) {
        throw std::invalid_argument("contraction vectors must have length rs");
    }
    std::vector<double> roots(m);
    for (std::size_t k = 0; k < m; ++k) roots[k] = std::sqrt(probs_[k]);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (u[k] == 0.0) continue;
        double row = 0.0;
        for (std::size_t kp = 0; kp < m; ++kp) {
            row += (k == kp ? 1.0 - probs_[k] : -roots[k] * roots[kp]) * v[kp];
        }
        total += u[k] * row;
    }
    return total;
}

double bound_constant(const JointPmf& pmf, Family family, std::optional<double> alpha,
                      Direction direction) {
    require_conditional(direction, "bound constant");
    check_alpha(family, alpha);
    if (!pmf.is_strictly_positive()) {
        throw std::domain_error("bound constants need every p_ij > 0");
    }
    const Parts parts = split(pmf, conditioning_axis(direction));

    if (family == Family::Shannon) {
        double a = 0.0;
        for (double p : parts.joint) a += std::abs(1.0 + std::log(p));
        return a;
    }

    const double al = *alpha;
    const double sj = support_pow_sum(parts.joint, al);
    const double sm = support_pow_sum(parts.marg, al);
    const double tj = support_pow_sum(parts.joint, al - 1.0);
    const double tm = support_pow_sum(parts.marg, al - 1.0);
    if (family == Family::Renyi) {
        return al / std::abs(al - 1.0) * (tj / sj + tm / sm);
    }
    return al / (std::abs(1.0 - al) * sm) * (sj / sm * tm + tj);
}

std::vector<double> functional_gradient(const JointPmf& pmf, Family family,
                                        std::optional<double> alpha, Direction direction) {
    check_alpha(family, alpha);
    const Parts parts = split(pmf, axis_of(direction));
    const std::size_t m = parts.joint.size();
    std::vector<double> g(m, 0.0);

    const bool joint_only = direction == Direction::Joint;
    const bool marg_only = direction == Direction::MarginalX || direction == Direction::MarginalY;

    if (family == Family::Shannon) {
        for (std::size_t k = 0; k < m; ++k) {
            const double p = parts.joint[k];
            if (!(p > 0.0)) continue;
            const double pm = parts.marg[parts.row[k]];
            if (joint_only) g[k] = -std::log(p) - 1.0;
            else if (marg_only) g[k] = -std::log(pm) - 1.0;
            else g[k] = -std::log(p) + std::log(pm);
        }
        return g;
    }

    const double al = *alpha;
    const double sj = support_pow_sum(parts.joint, al);
    const double sm = support_pow_sum(parts.marg, al);
    const double c = al / (1.0 - al);
    for (std::size_t k = 0; k < m; ++k) {
        const double p = parts.joint[k];
        if (!(p > 0.0)) continue;
        const double dp = std::pow(p, al - 1.0);
        const double dm = std::pow(parts.marg[parts.row[k]], al - 1.0);
        if (family == Family::Renyi) {
            if (joint_only) g[k] = c * dp / sj;
            else if (marg_only) g[k] = c * dm / sm;
            else g[k] = c * (dp / sj - dm / sm);
        } else {
            if (joint_only) g[k] = c * dp;
            else if (marg_only) g[k] = c * dm;
            else g[k] = c * (dp / sm - sj * dm / (sm * sm));
        }
    }
    return g;
}

double variance_delta(const JointPmf& pmf, Family family, std::optional<double> alpha,
                      Direction direction) {
    const auto g = functional_gradient(pmf, family, alpha, direction);
    // The quadratic form is PSD; clamp the rounding-level negatives it can
    // produce when the gradient is constant on the simplex.
    return std::max(0.0, delta_covariance(pmf, g, g));
}

PaperVariance variance_paper(const JointPmf& pmf, Family family, std::optional<double> alpha,
                             Direction direction) {
    require_conditional(direction, "literal variance");
    check_alpha(family, alpha);
    const Parts parts = split(pmf, conditioning_axis(direction));
    PaperVariance out;

    if (family == Family::Shannon) {
        double first = 0.0;
        double weighted = 0.0;  // sum p^{3/2} (1 + ln p)
        double self = 0.0;      // sum p^3 (1 + ln p)^2, the k == k' terms
        for (double p : parts.joint) {
            if (!(p > 0.0)) continue;
            const double f = 1.0 + std::log(p);
            first += p * (1.0 - p) * f * f;
            weighted += std::pow(p, 1.5) * f;
            self += p * p * p * f * f;
        }
        out.joint_part = first;
        out.cross_part = -2.0 * (weighted * weighted - self);
        out.total = out.joint_part + out.cross_part;
        return out;
    }

    const double al = *alpha;
    const double sj = support_pow_sum(parts.joint, al);
    const double sm = support_pow_sum(parts.marg, al);
    const double c = al / (1.0 - al);
    const double bracket_m = paper_power_bracket(parts.marg, al);
    const double bracket_j = paper_power_bracket(parts.joint, al);

    // Gradients of the two G-variables with respect to the flat pmf.
    std::vector<double> g_marg(parts.joint.size(), 0.0);
    std::vector<double> g_joint(parts.joint.size(), 0.0);
    for (std::size_t k = 0; k < parts.joint.size(); ++k) {
        const double p = parts.joint[k];
        if (!(p > 0.0)) continue;
        const double dp = std::pow(p, al - 1.0);
        const double dm = std::pow(parts.marg[parts.row[k]], al - 1.0);
        if (family == Family::Renyi) {
            // G_R(p_marg) and G_R(p_joint) are the limits of
            // sqrt(n)(R(p_hat) - R(p)) for each piece.
            g_marg[k] = c * dm / sm;
            g_joint[k] = c * dp / sj;
        } else {
            // The two terms of the Tsallis linearization, with the
            // (S_marg - S_marg_hat) sign of the marginal piece.
            g_marg[k] = -c * sj / (sm * sm) * dm;
            g_joint[k] = c * dp / sm;
        }
    }
    const double cov = delta_covariance(pmf, g_marg, g_joint);

    if (family == Family::Renyi) {
        const double km = al / ((al - 1.0) * sm);
        const double kj = al / ((1.0 - al) * sj);
        out.marginal_part = km * km * bracket_m;
        out.joint_part = kj * kj * bracket_j;
    } else {
        const double km = sj / (sm * sm);
        const double kj = 1.0 / (sm * sm);
        out.marginal_part = c * c * km * km * bracket_m;
        out.joint_part = c * c * kj * kj * bracket_j;
    }
    out.cross_part = 2.0 * cov;
    out.total = out.marginal_part + out.joint_part + out.cross_part;
    return out;
}

AsymptoticProfile asymptotic_profile(const JointPmf& pmf, Family family,
                                     std::optional<double> alpha, Direction direction) {
    AsymptoticProfile prof;
    prof.family = family;
    prof.alpha = family == Family::Shannon ? std::nullopt : alpha;
    prof.direction = direction;
    prof.bound_constant = bound_constant(pmf, family, alpha, direction);
    prof.variance_paper = variance_paper(pmf, family, alpha, direction);
    prof.variance_delta = variance_delta(pmf, family, alpha, direction);
    return prof;
}

Interval confidence_interval(double value, double variance, std::uint64_t n, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
    }
    if (n == 0) throw std::invalid_argument("confidence interval needs n >= 1");
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("variance must be finite and nonnegative");
    }
    if (variance == 0.0) return {value, value};
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(variance / static_cast<double>(n));
    return {value - half, value + half};
}

SupDeviation sup_deviation(const JointPmf& empirical, const JointPmf& truth) {
    if (empirical.shape() != truth.shape()) {
        throw std::invalid_argument("empirical and true pmfs have different shapes");
    }
    SupDeviation dev;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        dev.a_z = std::max(dev.a_z, std::abs(empirical.probs()[k] - truth.probs()[k]));
    }
    const auto [ex, ey] = marginals(empirical);
    const auto [tx, ty] = marginals(truth);
    for (std::size_t i = 0; i < tx.size(); ++i) {
        dev.a_x = std::max(dev.a_x, std::abs(ex.probs[i] - tx.probs[i]));
    }
    for (std::size_t j = 0; j < ty.size(); ++j) {
        dev.a_y = std::max(dev.a_y, std::abs(ey.probs[j] - ty.probs[j]));
    }
    return dev;
}

double bound_normalizer(const SupDeviation& dev, Family family, Direction direction) {
    require_conditional(direction, "bound normalizer");
    if (family == Family::Renyi) {
        return direction == Direction::YgivenX ? dev.a_x : dev.a_y;
    }
    return dev.a_z;
}

}  // namespace condent
