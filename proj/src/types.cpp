#include "condent/types.hpp"

#include <cmath>
#include <string>

namespace condent {

std::string_view to_string(Axis axis) { return axis == Axis::X ? "X" : "Y"; }

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Shannon: return "shannon";
        case Family::Renyi: return "renyi";
        case Family::Tsallis: return "tsallis";
    }
    return "?";
}

std::string_view to_string(Direction direction) {
    switch (direction) {
        case Direction::Joint: return "joint";
        case Direction::MarginalX: return "x";
        case Direction::MarginalY: return "y";
        case Direction::YgivenX: return "yx";
        case Direction::XgivenY: return "xy";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    if (text == "shannon") return Family::Shannon;
    if (text == "renyi") return Family::Renyi;
    if (text == "tsallis") return Family::Tsallis;
    throw std::invalid_argument("unknown family '" + std::string(text) +
                                "' (expected shannon, renyi or tsallis)");
}

Direction parse_direction(std::string_view text) {
    if (text == "yx") return Direction::YgivenX;
    if (text == "xy") return Direction::XgivenY;
    if (text == "joint") return Direction::Joint;
    if (text == "x") return Direction::MarginalX;
    if (text == "y") return Direction::MarginalY;
    throw std::invalid_argument("unknown direction '" + std::string(text) +
                                "' (expected yx, xy, joint, x or y)");
}

void check_alpha(Family family, std::optional<double> alpha) {
    if (family == Family::Shannon) return;
    if (!alpha) {
        throw std::invalid_argument(std::string(to_string(family)) + " entropy needs an order alpha");
    }
    const double a = *alpha;
    if (!std::isfinite(a) || a <= 0.0) {
        throw std::domain_error("alpha must be a finite positive number, got " + std::to_string(a));
    }
    if (a == 1.0) {
        throw std::domain_error("alpha=1: request Shannon");
    }
}

}  // namespace condent
