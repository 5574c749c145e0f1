#pragma once

// Plug-in estimation from i.i.d. paired categorical samples. Samples are flat
// outcomes k in 1..rs; label handling lives in the io layer.

#include "condent/asymptotics.hpp"
#include "condent/entropy.hpp"
#include "condent/pmf.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace condent {

/// Cell counts of a sample; the part of a sample every estimator needs.
struct CountTable {
    Shape shape;
    std::vector<std::uint64_t> counts;  // length rs, 0-based by k-1
    std::uint64_t n = 0;

    /// Validates shape (r, s > 1), length, and n >= 1.
    static CountTable make(Shape shape, std::vector<std::uint64_t> counts);
};

class SampleSet {
public:
    /// Throws std::invalid_argument for an empty sample, r <= 1 or s <= 1,
    /// or an outcome outside 1..rs (reported with its position).
    SampleSet(Shape shape, std::vector<std::size_t> outcomes);

    Shape shape() const { return table_.shape; }
    std::uint64_t n() const { return table_.n; }
    std::span<const std::size_t> outcomes() const { return outcomes_; }
    std::span<const std::uint64_t> counts() const { return table_.counts; }
    const CountTable& table() const { return table_; }

private:
    std::vector<std::size_t> outcomes_;
    CountTable table_;
};

enum class VarianceSource { PaperLiteral, DeltaOracle, None };

std::string_view to_string(VarianceSource source);
VarianceSource parse_variance_source(std::string_view text);

struct EntropyEstimate {
    double value = 0.0;
    Family family = Family::Shannon;
    std::optional<double> alpha;
    Direction direction = Direction::YgivenX;
    std::uint64_t n = 0;
    VarianceSource variance_source = VarianceSource::None;
    std::optional<double> variance;  // of sqrt(n)(estimate - truth), nats^2
    std::optional<double> ci_low;
    std::optional<double> ci_high;
};

struct EstimateOptions {
    VarianceSource variance_source = VarianceSource::None;
    double ci_level = 0.95;
};

JointPmf empirical_joint(const CountTable& table);
JointPmf empirical_joint(const SampleSet& samples);

/// (X marginal, Y marginal) as the normalized counts of the sets
/// A_i = {k : row(k) = i} and B_j = {k : col(k) = j}.
std::pair<MarginalPmf, MarginalPmf> empirical_marginals(const CountTable& table);
std::pair<MarginalPmf, MarginalPmf> empirical_marginals(const SampleSet& samples);

/// The exact functional applied to the empirical pmf. With a variance
/// source other than None, the chosen variance formula is evaluated at the
/// empirical pmf and, when nonnegative, a confidence interval is attached.
EntropyEstimate estimate_entropy(const CountTable& table, Family family,
                                 std::optional<double> alpha, Direction direction,
                                 const EstimateOptions& options = {});
EntropyEstimate estimate_entropy(const SampleSet& samples, Family family,
                                 std::optional<double> alpha, Direction direction,
                                 const EstimateOptions& options = {});

struct PowerSumEstimates {
    PowerSum joint;
    PowerSum x;
    PowerSum y;
};

PowerSumEstimates estimate_power_sums(const CountTable& table, double alpha);
PowerSumEstimates estimate_power_sums(const SampleSet& samples, double alpha);

/// Attaches a confidence interval from the estimate's own variance.
EntropyEstimate with_confidence_interval(EntropyEstimate estimate, double level);

}  // namespace condent
