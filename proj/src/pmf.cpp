#include "condent/pmf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace condent {

std::size_t flatten_index(std::size_t i, std::size_t j, Shape shape) {
    if (i < 1 || i > shape.r) {
        throw std::domain_error("row index i=" + std::to_string(i) + " outside 1.." +
                                std::to_string(shape.r));
    }
    if (j < 1 || j > shape.s) {
        throw std::domain_error("column index j=" + std::to_string(j) + " outside 1.." +
                                std::to_string(shape.s));
    }
    return shape.s * (i - 1) + j;
}

Cell unflatten_index(std::size_t k, Shape shape) {
    if (k < 1 || k > shape.cells()) {
        throw std::domain_error("flat index k=" + std::to_string(k) + " outside 1.." +
                                std::to_string(shape.cells()));
    }
    const std::size_t q = (k - 1) / shape.s;
    return {1 + q, k - shape.s * q};
}

double stable_sum(std::span<const double> values) {
    // Neumaier's variant of Kahan summation.
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

void validate_probability_vector(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("probability vector is empty");
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (!std::isfinite(probs[k]) || probs[k] < 0.0) {
            throw std::invalid_argument("entry " + std::to_string(k + 1) +
                                        " is negative or not finite");
        }
    }
    const double total = stable_sum(probs);
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) +
                                    ", not 1");
    }
}

JointPmf JointPmf::validate(std::vector<double> probs, std::size_t r, std::size_t s,
                            PmfMode mode) {
    if (r <= 1) throw std::invalid_argument("r must exceed 1");
    if (s <= 1) throw std::invalid_argument("s must exceed 1");
    if (probs.size() != r * s) {
        throw std::invalid_argument("expected r*s=" + std::to_string(r * s) +
                                    " probabilities, got " + std::to_string(probs.size()));
    }
    validate_probability_vector(probs);
    if (mode == PmfMode::Strict) {
        for (std::size_t k = 0; k < probs.size(); ++k) {
            if (probs[k] == 0.0) {
                const Cell c = unflatten_index(k + 1, {r, s});
                throw std::invalid_argument("cell (" + std::to_string(c.i) + "," +
                                            std::to_string(c.j) +
                                            ") is zero; strict mode needs every p_ij > 0");
            }
        }
    }
    return JointPmf({r, s}, std::move(probs), mode);
}

JointPmf JointPmf::from_counts(std::span<const std::uint64_t> counts, std::size_t r,
                               std::size_t s) {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    if (n == 0) throw std::invalid_argument("empty sample");
    std::vector<double> probs(counts.size());
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        probs[k] = static_cast<double>(counts[k]) / dn;
    }
    return validate(std::move(probs), r, s, PmfMode::Empirical);
}

double JointPmf::flat(std::size_t k) const {
    if (k < 1 || k > probs_.size()) {
        throw std::domain_error("flat index k=" + std::to_string(k) + " outside 1.." +
                                std::to_string(probs_.size()));
    }
    return probs_[k - 1];
}

bool JointPmf::is_strictly_positive() const {
    for (double p : probs_) {
        if (!(p > 0.0)) return false;
    }
    return true;
}

JointPmf JointPmf::transposed() const {
    std::vector<double> out(probs_.size());
    const Shape flipped{shape_.s, shape_.r};
    for (std::size_t i = 1; i <= shape_.r; ++i) {
        for (std::size_t j = 1; j <= shape_.s; ++j) {
            out[flatten_index(j, i, flipped) - 1] = probs_[flatten_index(i, j, shape_) - 1];
        }
    }
    return JointPmf(flipped, std::move(out), mode_);
}

MarginalPmf marginal(const JointPmf& pmf, Axis axis) {
    const Shape shape = pmf.shape();
    MarginalPmf out{axis, std::vector<double>(axis == Axis::X ? shape.r : shape.s, 0.0)};
    const auto probs = pmf.probs();
    for (std::size_t k = 1; k <= shape.cells(); ++k) {
        const Cell c = unflatten_index(k, shape);
        out.probs[(axis == Axis::X ? c.i : c.j) - 1] += probs[k - 1];
    }
    return out;
}

std::pair<MarginalPmf, MarginalPmf> marginals(const JointPmf& pmf) {
    return {marginal(pmf, Axis::X), marginal(pmf, Axis::Y)};
}

ConditionalPmfTable conditionals(const JointPmf& pmf, Axis given_axis) {
    const Shape shape = pmf.shape();
    const MarginalPmf given = marginal(pmf, given_axis);
    const std::size_t other = given_axis == Axis::X ? shape.s : shape.r;

    ConditionalPmfTable table{given_axis, {}};
    table.rows.reserve(given.size());
    for (std::size_t g = 1; g <= given.size(); ++g) {
        const double mass = given.probs[g - 1];
        if (mass == 0.0) {
            if (pmf.mode() == PmfMode::Strict) {
                throw std::domain_error("conditioning outcome " + std::to_string(g) +
                                        " has zero probability");
            }
            table.rows.emplace_back(std::nullopt);
            continue;
        }
        std::vector<double> row(other);
        for (std::size_t o = 1; o <= other; ++o) {
            row[o - 1] = given_axis == Axis::X ? pmf.at(g, o) / mass : pmf.at(o, g) / mass;
        }
        table.rows.emplace_back(std::move(row));
    }
    return table;
}

}  // namespace condent
