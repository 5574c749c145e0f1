#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace condent {

enum class Axis { X, Y };

enum class Family { Shannon, Renyi, Tsallis };

/// Which entropy of the pair is meant. Conditional directions name the
/// variable being described first: YgivenX is H(Y|X).
enum class Direction { Joint, MarginalX, MarginalY, YgivenX, XgivenY };

enum class PmfMode { Strict, Empirical };

/// Raised when an input file cannot be read or an output cannot be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string_view to_string(Axis axis);
std::string_view to_string(Family family);
std::string_view to_string(Direction direction);

Family parse_family(std::string_view text);
Direction parse_direction(std::string_view text);

inline bool is_conditional(Direction d) {
    return d == Direction::YgivenX || d == Direction::XgivenY;
}

/// Axis of the conditioning variable for a conditional direction.
inline Axis conditioning_axis(Direction d) {
    return d == Direction::YgivenX ? Axis::X : Axis::Y;
}

/// Rejects alpha <= 0, and alpha == 1 for the Renyi/Tsallis families.
void check_alpha(Family family, std::optional<double> alpha);

}  // namespace condent
