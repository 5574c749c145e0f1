#include "condent/estimation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace condent {

CountTable CountTable::make(Shape shape, std::vector<std::uint64_t> counts) {
    if (shape.r <= 1) throw std::invalid_argument("r must exceed 1");
    if (shape.s <= 1) throw std::invalid_argument("s must exceed 1");
    if (counts.size() != shape.cells()) {
        throw std::invalid_argument("count table needs r*s=" + std::to_string(shape.cells()) +
                                    " cells, got " + std::to_string(counts.size()));
    }
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    if (n == 0) throw std::invalid_argument("empty sample");
    return {shape, std::move(counts), n};
}

SampleSet::SampleSet(Shape shape, std::vector<std::size_t> outcomes)
    : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw std::invalid_argument("empty sample");
    std::vector<std::uint64_t> counts(shape.cells(), 0);
    for (std::size_t l = 0; l < outcomes_.size(); ++l) {
        const std::size_t k = outcomes_[l];
        if (k < 1 || k > shape.cells()) {
            throw std::invalid_argument("outcome " + std::to_string(k) + " at position " +
                                        std::to_string(l + 1) + " outside 1.." +
                                        std::to_string(shape.cells()));
        }
        ++counts[k - 1];
    }
    table_ = CountTable::make(shape, std::move(counts));
}

std::string_view to_string(VarianceSource source) {
    switch (source) {
        case VarianceSource::PaperLiteral: return "paper-literal";
        case VarianceSource::DeltaOracle: return "delta-oracle";
        case VarianceSource::None: return "none";
    }
    return "?";
}

VarianceSource parse_variance_source(std::string_view text) {
    if (text == "paper-literal") return VarianceSource::PaperLiteral;
    if (text == "delta-oracle") return VarianceSource::DeltaOracle;
    if (text == "none") return VarianceSource::None;
    throw std::invalid_argument("unknown variance source '" + std::string(text) +
                                "' (expected paper-literal, delta-oracle or none)");
}

JointPmf empirical_joint(const CountTable& table) {
    return JointPmf::from_counts(table.counts, table.shape.r, table.shape.s);
}

JointPmf empirical_joint(const SampleSet& samples) { return empirical_joint(samples.table()); }

std::pair<MarginalPmf, MarginalPmf> empirical_marginals(const CountTable& table) {
    const Shape shape = table.shape;
    std::vector<std::uint64_t> in_a(shape.r, 0);
    std::vector<std::uint64_t> in_b(shape.s, 0);
    for (std::size_t k = 1; k <= shape.cells(); ++k) {
        const Cell c = unflatten_index(k, shape);
        in_a[c.i - 1] += table.counts[k - 1];
        in_b[c.j - 1] += table.counts[k - 1];
    }
    const double n = static_cast<double>(table.n);
    MarginalPmf x{Axis::X, std::vector<double>(shape.r)};
    MarginalPmf y{Axis::Y, std::vector<double>(shape.s)};
    for (std::size_t i = 0; i < shape.r; ++i) x.probs[i] = static_cast<double>(in_a[i]) / n;
    for (std::size_t j = 0; j < shape.s; ++j) y.probs[j] = static_cast<double>(in_b[j]) / n;
    return {std::move(x), std::move(y)};
}

std::pair<MarginalPmf, MarginalPmf> empirical_marginals(const SampleSet& samples) {
    return empirical_marginals(samples.table());
}

EntropyEstimate with_confidence_interval(EntropyEstimate estimate, double level) {
    if (!estimate.variance) {
        throw std::invalid_argument("estimate carries no variance");
    }
    const Interval ci = confidence_interval(estimate.value, *estimate.variance, estimate.n, level);
    estimate.ci_low = ci.low;
    estimate.ci_high = ci.high;
    return estimate;
}

EntropyEstimate estimate_entropy(const CountTable& table, Family family,
                                 std::optional<double> alpha, Direction direction,
                                 const EstimateOptions& options) {
    const JointPmf pmf = empirical_joint(table);
    const EntropyValue v = entropy(pmf, family, alpha, direction);

    EntropyEstimate est;
    est.value = v.value;
    est.family = family;
    est.alpha = v.alpha;
    est.direction = direction;
    est.n = table.n;

    if (options.variance_source == VarianceSource::None) return est;
    if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
        throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
    }
    est.variance_source = options.variance_source;
    const double var = options.variance_source == VarianceSource::DeltaOracle
                           ? variance_delta(pmf, family, alpha, direction)
                           : variance_paper(pmf, family, alpha, direction).total;
    // The published formulas can go negative; such a value is no variance.
    if (std::isfinite(var) && var >= 0.0) {
        est.variance = var;
        est = with_confidence_interval(std::move(est), options.ci_level);
    }
    return est;
}

EntropyEstimate estimate_entropy(const SampleSet& samples, Family family,
                                 std::optional<double> alpha, Direction direction,
                                 const EstimateOptions& options) {
    return estimate_entropy(samples.table(), family, alpha, direction, options);
}

PowerSumEstimates estimate_power_sums(const CountTable& table, double alpha) {
    const JointPmf pmf = empirical_joint(table);
    const auto [x, y] = empirical_marginals(table);
    return {power_sum(pmf.probs(), alpha), power_sum(x.probs, alpha), power_sum(y.probs, alpha)};
}

PowerSumEstimates estimate_power_sums(const SampleSet& samples, double alpha) {
    return estimate_power_sums(samples.table(), alpha);
}

}  // namespace condent
