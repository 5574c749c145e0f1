#pragma once

// Seeded sampling and Monte Carlo campaigns for the plug-in estimators.
//
// Random bits come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard; uniforms are built from the top 53 bits of each word and
// categorical draws use an inverse CDF, so a (pmf, n, seed) triple gives the
// same sample on every conforming platform. Trial t at sample size n draws
// from its own stream seeded with stream_seed(seed, n, t).

#include "condent/asymptotics.hpp"
#include "condent/estimation.hpp"
#include "condent/pmf.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace condent {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// seed XOR hash(n, trial).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed probability vector.
class CategoricalSampler {
public:
    explicit CategoricalSampler(std::span<const double> probs);

    std::size_t size() const { return cumulative_.size(); }

    /// 1-based outcome.
    std::size_t draw(Rng& rng) const;

private:
    std::vector<double> cumulative_;
};

struct ZipfSpec {
    double beta = 2.0;
    std::size_t m = 6;
};

/// k^-beta / sum_{i<=m} i^-beta for k = 1..m.
std::vector<double> zipf_pmf(const ZipfSpec& spec);

/// A Zipf law laid out as an r x s joint pmf (needs r*s == m).
JointPmf zipf_joint(const ZipfSpec& spec, std::size_t r, std::size_t s);

/// n i.i.d. outcomes of the pmf.
SampleSet sample(const JointPmf& pmf, std::size_t n, std::uint64_t seed);

/// Counts of n draws; the same draw sequence as sample() for the same seed.
CountTable sample_counts(const JointPmf& pmf, std::size_t n, std::uint64_t seed);

struct CampaignConfig {
    JointPmf truth;
    Family family = Family::Shannon;
    std::optional<double> alpha;
    Direction direction = Direction::YgivenX;
    std::vector<std::size_t> sample_sizes;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    VarianceSource variance_source = VarianceSource::DeltaOracle;
    unsigned workers = 1;

    /// Throws std::invalid_argument naming the first problem.
    void validate() const;
};

struct TrialRecord {
    std::size_t n = 0;
    std::size_t trial = 0;
    double estimate = 0.0;
    double error = 0.0;  // estimate - truth
    SupDeviation deviation;
    double standardized = 0.0;  // sqrt(n) * error / sigma; NaN without sigma
    std::string failure;        // non-empty when the estimator threw
};

struct QqPair {
    double empirical = 0.0;
    double normal = 0.0;
};

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
};

struct SizeSummary {
    std::size_t n = 0;
    std::size_t completed = 0;
    double mean = 0.0;
    double variance = 0.0;         // sample variance of the estimates
    double scaled_variance = 0.0;  // sample variance of sqrt(n)(estimate - truth)
    double median_abs_error = 0.0;
    std::optional<double> ks;      // of the standardized statistics
    std::vector<QqPair> qq;
    Histogram histogram;
};

struct SimulationTrace {
    double truth_value = 0.0;
    std::optional<double> sigma;
    VarianceSource variance_source = VarianceSource::None;
    std::vector<TrialRecord> records;  // ordered by (n, trial)
    std::vector<SizeSummary> summaries;
};

/// Fresh samples for every (n, trial); records every estimate and error.
SimulationTrace run_convergence(const CampaignConfig& config);

/// Single sample size; standardizes by the configured sigma and reports the
/// KS distance and Q-Q pairs. Throws std::domain_error if sigma is zero or
/// unavailable, suggesting another variance source.
SimulationTrace run_normality(const CampaignConfig& config);

/// sup_t |F_emp(t) - Phi(t)| over sorted values, evaluated at the jumps.
double ks_distance(std::span<const double> sorted_values);

/// Sorted values paired with Phi^-1((t - 0.5)/T).
std::vector<QqPair> qq_pairs(std::span<const double> values);

/// Freedman-Diaconis bins; falls back to a single bin when the IQR is zero.
Histogram freedman_diaconis(std::span<const double> values);

struct BoundCheck {
    std::size_t holds = 0;
    std::size_t total = 0;
    double max_ratio = 0.0;  // max |error| / (A * normalizer)
};

/// Counts trials with |error| <= slack * A * normalizer, A and normalizer as
/// chosen by bound_constant and bound_normalizer.
BoundCheck check_as_bound(const SimulationTrace& trace, const CampaignConfig& config,
                          double slack);

}  // namespace condent
