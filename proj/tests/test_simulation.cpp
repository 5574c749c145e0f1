#include "condent/entropy.hpp"
#include "condent/normal.hpp"
#include "condent/simulation.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace condent;

namespace {

CampaignConfig zipf_campaign(Family f, std::optional<double> a, Direction d,
                             std::vector<std::size_t> sizes, std::size_t trials, std::uint64_t seed) {
    CampaignConfig c{.truth = testing::zipf3x2(), .alpha = a, .sample_sizes = std::move(sizes)};
    c.family = f;
    c.direction = d;
    c.trials = trials;
    c.seed = seed;
    return c;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("mt19937_64 reference output") {
    // The standard fixes the 10000th output for the default seed.
    std::mt19937_64 e;
    e.discard(9999);
    CHECK(e() == 9981545732273789042ULL);
    Rng rng(5489);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("stream seeds differ across n and trial") {
    CHECK(stream_seed(1, 100, 0) != stream_seed(1, 100, 1));
    CHECK(stream_seed(1, 100, 0) != stream_seed(1, 200, 0));
    CHECK(stream_seed(1, 100, 0) == stream_seed(1, 100, 0));
}

TEST_CASE("zipf pmf") {
    const auto p = zipf_pmf({2.0, 6});
    const double expected[] = {3600, 900, 400, 225, 144, 100};
    for (int k = 0; k < 6; ++k) CHECK(p[k] == doctest::Approx(expected[k] / 5369).epsilon(1e-15));
    CHECK(zipf_pmf({3.7, 1}) == std::vector<double>{1.0});
    CHECK(zipf_pmf({0.0, 4}) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(zipf_pmf({2.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(zipf_pmf({-1.0, 3}), std::invalid_argument);
    CHECK_THROWS(zipf_joint({2.0, 6}, 2, 2));
}

TEST_CASE("sampler") {
    const JointPmf point = JointPmf::validate({0, 0, 1, 0}, 2, 2, PmfMode::Empirical);
    const SampleSet s = sample(point, 5, 123);
    for (std::size_t k : s.outcomes()) CHECK(k == 3);

    const JointPmf u = testing::uniform(2, 2);
    const SampleSet big = sample(u, 100000, 99);
    for (auto c : big.counts()) CHECK(std::abs(static_cast<double>(c) - 25000.0) <= 3 * std::sqrt(100000 * 0.25 * 0.75));

    const SampleSet a = sample(testing::zipf3x2(), 1000, 7);
    const SampleSet b = sample(testing::zipf3x2(), 1000, 7);
    CHECK(std::equal(a.outcomes().begin(), a.outcomes().end(), b.outcomes().begin()));
    const CountTable t = sample_counts(testing::zipf3x2(), 1000, 7);
    CHECK(std::equal(t.counts.begin(), t.counts.end(), a.counts().begin()));
}

TEST_CASE("sampling passes a chi-square test in at least 19 of 20 seeds") {
    const JointPmf truth = testing::zipf3x2();
    const double critical = 20.515005652432873;  // 99.9% point, 5 degrees of freedom
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const CountTable t = sample_counts(truth, 100000, seed);
        double chi = 0.0;
        for (std::size_t k = 0; k < 6; ++k) {
            const double e = 100000 * truth.probs()[k];
            chi += (t.counts[k] - e) * (t.counts[k] - e) / e;
        }
        passes += chi < critical;
    }
    CHECK(passes >= 19);
}

TEST_CASE("ks distance") {
    CHECK(ks_distance(std::vector<double>{0.0}) == doctest::Approx(0.5));
    CHECK(ks_distance(std::vector<double>(10, 10.0)) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> grid(1000);
    for (std::size_t t = 1; t <= 1000; ++t) grid[t - 1] = normal_quantile((t - 0.5) / 1000);
    CHECK(ks_distance(grid) < 0.001);
    CHECK(ks_distance(grid) >= 0.0);
    CHECK_THROWS(ks_distance(std::vector<double>{}));
    CHECK_THROWS(ks_distance(std::vector<double>{1.0, 0.0}));
}

TEST_CASE("qq pairs and histograms") {
    const std::vector<double> v{0.3, -1.2, 2.0, 0.0};
    const auto qq = qq_pairs(v);
    REQUIRE(qq.size() == 4);
    CHECK(std::is_sorted(qq.begin(), qq.end(), [](auto& a, auto& b) { return a.empirical < b.empirical; }));
    CHECK(qq[0].normal == doctest::Approx(normal_quantile(0.125)));

    std::mt19937_64 gen(2);
    std::normal_distribution<double> z;
    std::vector<double> xs(1000);
    for (double& x : xs) x = z(gen);
    const Histogram h = freedman_diaconis(xs);
    CHECK(h.edges.size() == h.counts.size() + 1);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 1000);
    CHECK(h.edges.front() <= *std::min_element(xs.begin(), xs.end()));
    CHECK(h.edges.back() >= *std::max_element(xs.begin(), xs.end()));
    const Histogram flat = freedman_diaconis(std::vector<double>(5, 1.0));
    CHECK(flat.counts.size() == 1);
    CHECK(flat.counts[0] == 5);
}

TEST_CASE("campaign validation") {
    auto c = zipf_campaign(Family::Shannon, {}, Direction::YgivenX, {100, 200}, 0, 1);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.trials = 1;
    c.sample_sizes = {200, 100};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.sample_sizes = {1, 100};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.sample_sizes = {};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.sample_sizes = {100};
    CHECK_NOTHROW(c.validate());
    c.family = Family::Renyi;
    CHECK_THROWS(c.validate());
}

TEST_CASE("trace shape") {
    CampaignConfig c{.truth = JointPmf::validate({0.97, 0.01, 0.01, 0.01}, 2, 2), .alpha = std::nullopt,
                     .sample_sizes = {2}};
    c.trials = 1;
    const SimulationTrace t = run_convergence(c);
    CHECK(t.records.size() == 1);
    CHECK(t.summaries.size() == 1);
    CHECK(t.truth_value == entropy(c.truth, Family::Shannon, {}, Direction::YgivenX).value);
}

TEST_CASE("determinism regardless of worker count") {
    auto c = zipf_campaign(Family::Renyi, 2.0, Direction::XgivenY, {50, 500, 5000}, 40, 77);
    c.workers = 1;
    const SimulationTrace a = run_convergence(c);
    c.workers = 4;
    const SimulationTrace b = run_convergence(c);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].n == b.records[i].n);
        CHECK(a.records[i].trial == b.records[i].trial);
        CHECK(same_bits(a.records[i].estimate, b.records[i].estimate));
        CHECK(same_bits(a.records[i].standardized, b.records[i].standardized));
    }
    for (std::size_t i = 0; i < a.summaries.size(); ++i) {
        CHECK(same_bits(a.summaries[i].mean, b.summaries[i].mean));
        CHECK(same_bits(*a.summaries[i].ks, *b.summaries[i].ks));
    }
}

TEST_CASE("single-trial convergence on Zipf(2,6)") {
    std::vector<std::size_t> grid;
    for (std::size_t n = 100; n <= 30000; n += 100) grid.push_back(n);
    const auto t = run_convergence(zipf_campaign(Family::Shannon, {}, Direction::YgivenX, grid, 1, 5));
    CHECK(std::abs(t.records.back().estimate - 0.52623) < 0.02);
    CHECK(t.records.back().n == 30000);
}

TEST_CASE("uniform 2x2: median error falls from n=100 to n=10000") {
    for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
        const std::optional<double> a = f == Family::Shannon ? std::nullopt : std::optional(2.0);
        CampaignConfig c{.truth = testing::uniform(2, 2), .alpha = a, .sample_sizes = {100, 10000}};
        c.family = f;
        c.trials = 10;
        c.seed = 3;
        const auto t = run_convergence(c);
        CHECK(t.summaries[1].median_abs_error < t.summaries[0].median_abs_error);
    }
}

TEST_CASE("property: median error falls for every family, direction and alpha") {
    for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
        for (double a : {0.5, 2.0}) {
            if (f == Family::Shannon && a == 2.0) continue;
            const std::optional<double> alpha = f == Family::Shannon ? std::nullopt : std::optional(a);
            for (Direction d : {Direction::YgivenX, Direction::XgivenY}) {
                const auto t = run_convergence(zipf_campaign(f, alpha, d, {100, 30000}, 100, 17));
                CHECK(t.summaries[1].median_abs_error < t.summaries[0].median_abs_error);
            }
        }
    }
}

TEST_CASE("normality run shape and errors") {
    CampaignConfig c{.truth = testing::uniform(2, 2), .alpha = 2.0, .sample_sizes = {400}};
    c.family = Family::Renyi;
    c.trials = 100;
    // the uniform pmf has a constant gradient: sigma is zero
    CHECK_THROWS_AS(run_normality(c), std::domain_error);

    auto z = zipf_campaign(Family::Renyi, 2.0, Direction::YgivenX, {2000}, 100, 4);
    const auto t = run_normality(z);
    REQUIRE(t.summaries.size() == 1);
    CHECK(t.summaries[0].qq.size() == 100);
    CHECK(std::is_sorted(t.summaries[0].qq.begin(), t.summaries[0].qq.end(),
                         [](auto& a, auto& b) { return a.empirical < b.empirical; }));
    REQUIRE(t.summaries[0].ks);
    CHECK(*t.summaries[0].ks >= 0.0);
    CHECK(*t.summaries[0].ks <= 1.0);
    z.sample_sizes = {100, 200};
    CHECK_THROWS(run_normality(z));
    z.sample_sizes = {100};
    z.variance_source = VarianceSource::None;
    CHECK_THROWS_AS(run_normality(z), std::domain_error);
}

TEST_CASE("ks against a fitted normal is affine invariant") {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> v(500);
    for (double& x : v) x = z(gen);
    const auto fitted = [](std::vector<double> xs) {
        double m = 0.0, q = 0.0;
        for (double x : xs) m += x;
        m /= xs.size();
        for (double x : xs) q += (x - m) * (x - m);
        const double sd = std::sqrt(q / (xs.size() - 1));
        for (double& x : xs) x = (x - m) / sd;
        std::sort(xs.begin(), xs.end());
        return ks_distance(xs);
    };
    std::vector<double> w = v;
    for (double& x : w) x = 3.5 * x - 7.0;
    CHECK(fitted(v) == doctest::Approx(fitted(w)).epsilon(1e-12));
}

TEST_CASE("CLT: Monte Carlo variance matches the delta variance") {
    for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
        for (double a : {0.5, 2.0}) {
            if (f == Family::Shannon && a == 2.0) continue;
            const std::optional<double> alpha = f == Family::Shannon ? std::nullopt : std::optional(a);
            for (Direction d : {Direction::YgivenX, Direction::XgivenY}) {
                const auto t = run_normality(zipf_campaign(f, alpha, d, {30000}, 1000, 555));
                const double expected = *t.sigma * *t.sigma;
                CAPTURE(to_string(f));
                CAPTURE(a);
                CAPTURE(to_string(d));
                CHECK(std::abs(t.summaries[0].scaled_variance / expected - 1.0) < 0.15);
            }
        }
    }
}
