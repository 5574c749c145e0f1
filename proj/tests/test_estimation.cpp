#include "condent/entropy.hpp"
#include "condent/estimation.hpp"
#include "condent/simulation.hpp"

#include "doctest.h"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

using namespace condent;

namespace {

SampleSet small() { return SampleSet({3, 2}, {1, 1, 3, 4}); }

}  // namespace

TEST_CASE("SampleSet counting and validation") {
    const SampleSet s = small();
    CHECK(s.n() == 4);
    CHECK(std::vector<std::uint64_t>(s.counts().begin(), s.counts().end()) ==
          std::vector<std::uint64_t>{2, 0, 1, 1, 0, 0});
    CHECK_THROWS_AS(SampleSet({3, 2}, {}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({3, 2}, {1, 7}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({3, 2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(SampleSet({1, 2}, {1}), std::invalid_argument);
    try {
        SampleSet({2, 2}, {1, 2, 9});
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find('3') != std::string::npos);
    }
    CHECK_THROWS_AS(CountTable::make({2, 2}, {0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(CountTable::make({2, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("empirical joint and marginals") {
    const JointPmf p = empirical_joint(small());
    CHECK(std::vector<double>(p.probs().begin(), p.probs().end()) ==
          std::vector<double>{0.5, 0, 0.25, 0.25, 0, 0});
    CHECK(p.mode() == PmfMode::Empirical);
    const auto [px, py] = empirical_marginals(small());
    CHECK(px.probs == std::vector<double>{0.5, 0.5, 0.0});
    CHECK(py.probs == std::vector<double>{0.75, 0.25});

    const JointPmf q = empirical_joint(SampleSet({3, 2}, std::vector<std::size_t>(7, 2)));
    CHECK(std::vector<double>(q.probs().begin(), q.probs().end()) ==
          std::vector<double>{0, 1, 0, 0, 0, 0});
}

TEST_CASE("property: marginals of the empirical joint equal counted marginals") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 50; ++rep) {
        const JointPmf truth = testing::random_strict(gen, 2 + rep % 4, 2 + rep % 5);
        const SampleSet s = sample(truth, 1 + 37 * rep, 1000 + rep);
        const auto [jx, jy] = marginals(empirical_joint(s));
        const auto [ex, ey] = empirical_marginals(s);
        for (std::size_t i = 0; i < jx.size(); ++i) CHECK(jx.probs[i] == doctest::Approx(ex.probs[i]).epsilon(1e-15));
        for (std::size_t j = 0; j < jy.size(); ++j) CHECK(jy.probs[j] == doctest::Approx(ey.probs[j]).epsilon(1e-15));
    }
}

TEST_CASE("hand-computed estimates") {
    const EntropyEstimate e = estimate_entropy(small(), Family::Shannon, {}, Direction::YgivenX);
    // row 1 deterministic (weight 1/2), row 2 uniform over two Y values (weight 1/2)
    CHECK(e.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(e.n == 4);
    CHECK(e.variance_source == VarianceSource::None);
    CHECK_FALSE(e.variance.has_value());

    const SampleSet four({2, 3}, {1, 1, 5, 6});
    CHECK(estimate_entropy(four, Family::Shannon, {}, Direction::YgivenX).value ==
          doctest::Approx(0.346574).epsilon(1e-6));

    const SampleSet point({2, 2}, std::vector<std::size_t>(9, 3));
    for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
        const std::optional<double> a = f == Family::Shannon ? std::nullopt : std::optional(0.5);
        for (Direction d : {Direction::YgivenX, Direction::XgivenY})
            CHECK(estimate_entropy(point, f, a, d).value == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("power sums") {
    const PowerSumEstimates ps = estimate_power_sums(small(), 2.0);
    CHECK(ps.joint.value == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(ps.x.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ps.y.value == doctest::Approx(0.625).epsilon(1e-15));
    const PowerSumEstimates one = estimate_power_sums(small(), 1.0);
    CHECK(one.joint.value == doctest::Approx(1.0));
    CHECK(one.x.value == doctest::Approx(1.0));
    CHECK(one.y.value == doctest::Approx(1.0));
    CHECK_THROWS(estimate_power_sums(small(), 0.0));
}

TEST_CASE("estimates are the exact functional at the empirical pmf") {
    std::mt19937_64 gen(4);
    for (int rep = 0; rep < 30; ++rep) {
        const JointPmf truth = testing::random_strict(gen, 3, 4);
        const SampleSet s = sample(truth, 500, rep);
        const JointPmf emp = empirical_joint(s);
        for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
            const std::optional<double> a = f == Family::Shannon ? std::nullopt : std::optional(2.0);
            for (Direction d : {Direction::YgivenX, Direction::XgivenY})
                CHECK(estimate_entropy(s, f, a, d).value == entropy(emp, f, a, d).value);
        }
        bool full_rows = true;
        for (double v : marginal(emp, Axis::X).probs) full_rows = full_rows && v > 0;
        if (full_rows) {
            CHECK(estimate_entropy(s, Family::Shannon, {}, Direction::YgivenX).value ==
                  doctest::Approx(shannon(emp.probs()) - shannon(marginal(emp, Axis::X).probs)).epsilon(1e-12));
        }
    }
}

TEST_CASE("30000 Zipf draws") {
    const JointPmf truth = testing::zipf3x2();
    const SampleSet s = sample(truth, 30000, 2024);
    const JointPmf emp = empirical_joint(s);
    double a_z = 0.0;
    for (std::size_t k = 0; k < 6; ++k) a_z = std::max(a_z, std::abs(emp.probs()[k] - truth.probs()[k]));
    CHECK(a_z < 0.01);
    CHECK(std::abs(empirical_marginals(s).first.probs[0] - 4500.0 / 5369) < 0.01);
    CHECK(std::abs(estimate_power_sums(s, 2.0).joint.value - 0.48607) < 0.01);

    const EntropyEstimate e = estimate_entropy(s, Family::Shannon, {}, Direction::YgivenX,
                                               {VarianceSource::DeltaOracle, 0.95});
    CHECK(std::abs(e.value - 0.52623) < 0.02);
    REQUIRE(e.variance);
    REQUIRE(e.ci_low);
    REQUIRE(e.ci_high);
    CHECK(*e.ci_low <= e.value);
    CHECK(e.value <= *e.ci_high);
    CHECK((*e.ci_high - *e.ci_low) / 2 < 0.03);
}

TEST_CASE("variance attachment") {
    const SampleSet s = sample(testing::zipf3x2(), 5000, 1);
    const auto lit = estimate_entropy(s, Family::Shannon, {}, Direction::YgivenX,
                                      {VarianceSource::PaperLiteral, 0.9});
    CHECK(lit.variance_source == VarianceSource::PaperLiteral);
    REQUIRE(lit.variance);
    CHECK(*lit.variance > 0.0);
    // negative paper-literal values carry no interval
    const auto neg = estimate_entropy(s, Family::Renyi, 2.0, Direction::YgivenX,
                                      {VarianceSource::PaperLiteral, 0.9});
    CHECK_FALSE(neg.ci_low.has_value());
    CHECK_THROWS_AS(estimate_entropy(s, Family::Shannon, {}, Direction::YgivenX,
                                     {VarianceSource::DeltaOracle, 1.5}),
                    std::invalid_argument);
    CHECK(parse_variance_source("delta-oracle") == VarianceSource::DeltaOracle);
    CHECK(parse_variance_source("paper-literal") == VarianceSource::PaperLiteral);
    CHECK(parse_variance_source("none") == VarianceSource::None);
    CHECK_THROWS(parse_variance_source("bootstrap"));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(estimate_entropy(small(), Family::Renyi, 1.0, Direction::YgivenX), std::domain_error);
    CHECK_THROWS_AS(estimate_entropy(small(), Family::Tsallis, -1.0, Direction::XgivenY), std::domain_error);
}

TEST_CASE("scale: n = 1e6 with rs = 4096 in under a second") {
    std::vector<std::size_t> outcomes(1'000'000);
    std::mt19937_64 gen(1);
    for (auto& k : outcomes) k = 1 + gen() % 4096;
    const auto t0 = std::chrono::steady_clock::now();
    const SampleSet s({64, 64}, std::move(outcomes));
    double sink = 0.0;
    for (Family f : {Family::Shannon, Family::Renyi, Family::Tsallis}) {
        const std::optional<double> a = f == Family::Shannon ? std::nullopt : std::optional(2.0);
        sink += estimate_entropy(s, f, a, Direction::YgivenX).value;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(std::isfinite(sink));
    CHECK(secs < 1.0);
}
