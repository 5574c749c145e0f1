#pragma once

// Joint probability mass functions of a pair (X, Y) with r and s outcomes,
// stored as the law of the single variable Z over the flat index
// k = s(i-1) + j. All indices at this boundary are 1-based.

#include "condent/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace condent {

/// Sum tolerance for an exact pmf.
inline constexpr double kNormalizationTolerance = 1e-12;

struct Shape {
    std::size_t r = 0;
    std::size_t s = 0;

    std::size_t cells() const { return r * s; }
    friend bool operator==(const Shape&, const Shape&) = default;
};

struct Cell {
    std::size_t i = 0;
    std::size_t j = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Maps the pair (i, j) to k = s(i-1)+j. Throws std::domain_error naming the
/// offending index when i is outside 1..r or j outside 1..s.
std::size_t flatten_index(std::size_t i, std::size_t j, Shape shape);

/// Inverse of flatten_index: k -> (1 + floor((k-1)/s), k - s*floor((k-1)/s)).
Cell unflatten_index(std::size_t k, Shape shape);

/// Compensated sum; keeps long probability vectors within 1e-12 of their
/// true total.
double stable_sum(std::span<const double> values);

/// Validates a plain probability vector: nonnegative, finite, sums to 1.
/// Throws std::invalid_argument.
void validate_probability_vector(std::span<const double> probs);

struct MarginalPmf {
    Axis axis = Axis::X;
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
};

/// Conditional law of one variable given each outcome of the other. A row is
/// empty (nullopt) when its conditioning mass is zero, which can only happen
/// for empirical pmfs.
struct ConditionalPmfTable {
    Axis given_axis = Axis::X;
    std::vector<std::optional<std::vector<double>>> rows;
};

class JointPmf {
public:
    /// Builds a validated pmf. Strict mode enforces every cell > 0; empirical
    /// mode allows zeros. Throws std::invalid_argument when r <= 1 or s <= 1,
    /// the length is not r*s, an entry is negative or non-finite, or the sum
    /// is off by more than kNormalizationTolerance.
    static JointPmf validate(std::vector<double> probs, std::size_t r, std::size_t s,
                             PmfMode mode = PmfMode::Strict);

    /// Empirical pmf counts[k]/n with a single division per cell.
    static JointPmf from_counts(std::span<const std::uint64_t> counts, std::size_t r,
                                std::size_t s);

    std::size_t r() const { return shape_.r; }
    std::size_t s() const { return shape_.s; }
    Shape shape() const { return shape_; }
    std::size_t size() const { return probs_.size(); }
    PmfMode mode() const { return mode_; }

    std::span<const double> probs() const { return probs_; }

    /// p_{i,j}, 1-based.
    double at(std::size_t i, std::size_t j) const { return probs_[flatten_index(i, j, shape_) - 1]; }
    /// p_{Z,k}, 1-based.
    double flat(std::size_t k) const;

    /// Every cell positive.
    bool is_strictly_positive() const;

    /// The pmf of (Y, X); cell (j, i) of the result equals cell (i, j) here.
    JointPmf transposed() const;

private:
    JointPmf(Shape shape, std::vector<double> probs, PmfMode mode)
        : shape_(shape), probs_(std::move(probs)), mode_(mode) {}

    Shape shape_;
    std::vector<double> probs_;
    PmfMode mode_;
};

MarginalPmf marginal(const JointPmf& pmf, Axis axis);
std::pair<MarginalPmf, MarginalPmf> marginals(const JointPmf& pmf);

/// Throws std::domain_error if a conditioning outcome has zero mass and the
/// pmf is in strict mode (which validate() already rules out).
ConditionalPmfTable conditionals(const JointPmf& pmf, Axis given_axis);

}  // namespace condent
