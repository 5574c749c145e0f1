#include "condent/simulation.hpp"

#include "condent/entropy.hpp"
#include "condent/normal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace condent {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial) {
    return seed ^ mix64(mix64(n) ^ trial);
}

CategoricalSampler::CategoricalSampler(std::span<const double> probs) {
    validate_probability_vector(probs);
    cumulative_.resize(probs.size());
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        cumulative_[k] = acc;
        if (probs[k] > 0.0) last_positive = k;
    }
    // Pin the top of the CDF so every u in [0, 1) lands on a positive cell.
    for (std::size_t k = last_positive; k < cumulative_.size(); ++k) cumulative_[k] = 1.0;
}

std::size_t CategoricalSampler::draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(it - cumulative_.begin()) + 1;
}

std::vector<double> zipf_pmf(const ZipfSpec& spec) {
    if (spec.m == 0) throw std::invalid_argument("Zipf support size m must be at least 1");
    if (!std::isfinite(spec.beta) || spec.beta < 0.0) {
        throw std::invalid_argument("Zipf exponent beta must be finite and nonnegative");
    }
    std::vector<double> p(spec.m);
    for (std::size_t k = 1; k <= spec.m; ++k) p[k - 1] = std::pow(static_cast<double>(k), -spec.beta);
    const double harmonic = stable_sum(p);
    for (double& v : p) v /= harmonic;
    return p;
}

JointPmf zipf_joint(const ZipfSpec& spec, std::size_t r, std::size_t s) {
    if (r * s != spec.m) {
        throw std::invalid_argument("Zipf support m=" + std::to_string(spec.m) +
                                    " does not factor as r*s=" + std::to_string(r * s));
    }
    return JointPmf::validate(zipf_pmf(spec), r, s, PmfMode::Strict);
}

SampleSet sample(const JointPmf& pmf, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample size must be at least 1");
    const CategoricalSampler sampler(pmf.probs());
    Rng rng(seed);
    std::vector<std::size_t> outcomes(n);
    for (auto& k : outcomes) k = sampler.draw(rng);
    return SampleSet(pmf.shape(), std::move(outcomes));
}

CountTable sample_counts(const JointPmf& pmf, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample size must be at least 1");
    const CategoricalSampler sampler(pmf.probs());
    Rng rng(seed);
    std::vector<std::uint64_t> counts(pmf.size(), 0);
    for (std::size_t l = 0; l < n; ++l) ++counts[sampler.draw(rng) - 1];
    return CountTable::make(pmf.shape(), std::move(counts));
}

void CampaignConfig::validate() const {
    check_alpha(family, alpha);
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (sample_sizes.empty()) throw std::invalid_argument("sample_sizes is empty");
    for (std::size_t t = 0; t < sample_sizes.size(); ++t) {
        if (sample_sizes[t] < 2) throw std::invalid_argument("sample sizes must be at least 2");
        if (t > 0 && sample_sizes[t] <= sample_sizes[t - 1]) {
            throw std::invalid_argument("sample sizes must be strictly ascending");
        }
    }
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    // Linear interpolation between order statistics.
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_variance(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
}

std::optional<double> sigma_for(const CampaignConfig& c) {
    if (c.variance_source == VarianceSource::None) return std::nullopt;
    const double var = c.variance_source == VarianceSource::DeltaOracle
                           ? variance_delta(c.truth, c.family, c.alpha, c.direction)
                           : variance_paper(c.truth, c.family, c.alpha, c.direction).total;
    if (!(var > 0.0) || !std::isfinite(var)) return std::nullopt;
    return std::sqrt(var);
}

TrialRecord run_trial(const CampaignConfig& c, double truth_value, std::optional<double> sigma,
                      std::size_t n, std::size_t trial) {
    TrialRecord rec;
    rec.n = n;
    rec.trial = trial;
    rec.standardized = std::numeric_limits<double>::quiet_NaN();
    try {
        const CountTable table = sample_counts(c.truth, n, stream_seed(c.seed, n, trial));
        const EntropyEstimate est = estimate_entropy(table, c.family, c.alpha, c.direction);
        rec.estimate = est.value;
        rec.error = est.value - truth_value;
        rec.deviation = sup_deviation(empirical_joint(table), c.truth);
        if (sigma) rec.standardized = std::sqrt(static_cast<double>(n)) * rec.error / *sigma;
    } catch (const std::exception& e) {
        rec.failure = e.what();
        rec.estimate = rec.error = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

SizeSummary summarize(std::size_t n, const std::vector<TrialRecord>& records,
                      std::size_t first, std::size_t count, bool with_normality) {
    SizeSummary sum;
    sum.n = n;
    std::vector<double> est, scaled, abs_err, stdz;
    for (std::size_t t = first; t < first + count; ++t) {
        const TrialRecord& rec = records[t];
        if (!rec.failure.empty()) continue;
        est.push_back(rec.estimate);
        scaled.push_back(std::sqrt(static_cast<double>(n)) * rec.error);
        abs_err.push_back(std::abs(rec.error));
        if (std::isfinite(rec.standardized)) stdz.push_back(rec.standardized);
    }
    sum.completed = est.size();
    if (est.empty()) return sum;

    sum.mean = std::accumulate(est.begin(), est.end(), 0.0) / static_cast<double>(est.size());
    sum.variance = sample_variance(est, sum.mean);
    const double scaled_mean =
        std::accumulate(scaled.begin(), scaled.end(), 0.0) / static_cast<double>(scaled.size());
    sum.scaled_variance = sample_variance(scaled, scaled_mean);
    std::sort(abs_err.begin(), abs_err.end());
    sum.median_abs_error = quantile_sorted(abs_err, 0.5);

    if (with_normality && !stdz.empty()) {
        std::sort(stdz.begin(), stdz.end());
        sum.ks = ks_distance(stdz);
        sum.qq = qq_pairs(stdz);
        sum.histogram = freedman_diaconis(stdz);
    }
    return sum;
}

SimulationTrace run_campaign(const CampaignConfig& c, bool require_sigma) {
    c.validate();
    SimulationTrace trace;
    trace.truth_value = entropy(c.truth, c.family, c.alpha, c.direction).value;
    trace.variance_source = c.variance_source;
    trace.sigma = sigma_for(c);
    if (require_sigma && !trace.sigma) {
        throw std::domain_error(std::string("sigma from variance source '") +
                                std::string(to_string(c.variance_source)) +
                                "' is zero or unavailable; switch the variance source");
    }

    const std::size_t jobs = c.sample_sizes.size() * c.trials;
    trace.records.resize(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t n = c.sample_sizes[job / c.trials];
            trace.records[job] = run_trial(c, trace.truth_value, trace.sigma, n, job % c.trials);
        }
    };
    const unsigned threads = std::min<std::size_t>(c.workers, jobs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }

    for (std::size_t idx = 0; idx < c.sample_sizes.size(); ++idx) {
        trace.summaries.push_back(summarize(c.sample_sizes[idx], trace.records, idx * c.trials,
                                            c.trials, c.trials >= 2));
    }
    return trace;
}

}  // namespace

SimulationTrace run_convergence(const CampaignConfig& config) {
    return run_campaign(config, false);
}

SimulationTrace run_normality(const CampaignConfig& config) {
    if (config.sample_sizes.size() != 1) {
        throw std::invalid_argument("a normality campaign uses exactly one sample size");
    }
    return run_campaign(config, true);
}

double ks_distance(std::span<const double> sorted_values) {
    if (sorted_values.empty()) throw std::invalid_argument("KS distance of an empty sample");
    if (!std::is_sorted(sorted_values.begin(), sorted_values.end())) {
        throw std::invalid_argument("KS distance expects sorted values");
    }
    const double t = static_cast<double>(sorted_values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
        const double phi = normal_cdf(sorted_values[i]);
        d = std::max({d, static_cast<double>(i + 1) / t - phi, phi - static_cast<double>(i) / t});
    }
    return std::clamp(d, 0.0, 1.0);
}

std::vector<QqPair> qq_pairs(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double t = static_cast<double>(sorted.size());
    std::vector<QqPair> out(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out[i] = {sorted[i], normal_quantile((static_cast<double>(i) + 0.5) / t)};
    }
    return out;
}

Histogram freedman_diaconis(std::span<const double> values) {
    Histogram h;
    if (values.empty()) return h;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));

    std::size_t bins = 1;
    if (width > 0.0 && hi > lo) {
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        bins = std::clamp<std::size_t>(bins, 1, 10000);
    }
    const double step = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + step * static_cast<double>(b);
    h.edges.back() = hi > lo ? hi : lo + 1.0;
    h.counts.assign(bins, 0);
    for (double v : sorted) {
        auto b = static_cast<std::size_t>((v - lo) / step);
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

BoundCheck check_as_bound(const SimulationTrace& trace, const CampaignConfig& config,
                          double slack) {
    const double a = bound_constant(config.truth, config.family, config.alpha, config.direction);
    BoundCheck check;
    for (const TrialRecord& rec : trace.records) {
        if (!rec.failure.empty()) continue;
        ++check.total;
        const double bound = a * bound_normalizer(rec.deviation, config.family, config.direction);
        const double err = std::abs(rec.error);
        const double ratio = bound > 0.0 ? err / bound
                                         : (err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        check.max_ratio = std::max(check.max_ratio, ratio);
        if (err <= slack * bound) ++check.holds;
    }
    return check;
}

}  // namespace condent
