#pragma once

// The work behind each CLI subcommand. Every command returns its report as
// JSON so it can be exercised without a process boundary.

#include "condent/io.hpp"
#include "condent/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace condent {

inline constexpr std::string_view kToolName = "condent";
std::string_view tool_version();

enum class Unit { Nats, Bits, Hartley };

Unit parse_unit(std::string_view text);
std::string_view to_string(Unit unit);
/// Multiplier from nats: 1, 1/ln 2, 1/ln 10.
double unit_factor(Unit unit);

/// Expands "all" into every family; otherwise a single one.
std::vector<Family> parse_families(std::string_view text);
/// "both" -> {YgivenX, XgivenY}.
std::vector<Direction> parse_directions(std::string_view text);

struct ExactRequest {
    std::filesystem::path pmf_path;
    std::vector<Family> families{Family::Shannon, Family::Renyi, Family::Tsallis};
    std::vector<double> alphas{2.0};
    std::vector<Direction> directions{Direction::YgivenX, Direction::XgivenY};
    Unit unit = Unit::Nats;
};

struct EstimateRequest {
    std::filesystem::path data_path;
    std::optional<PairFormat> format;  // from the extension when empty
    std::vector<Family> families{Family::Shannon, Family::Renyi, Family::Tsallis};
    std::vector<double> alphas{2.0};
    std::vector<Direction> directions{Direction::YgivenX, Direction::XgivenY};
    double ci_level = 0.95;
    Unit unit = Unit::Nats;
};

enum class SimulateMode { Convergence, Normality };

struct SimulateRequest {
    SimulateMode mode = SimulateMode::Convergence;
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<unsigned> workers;
};

struct SampleRequest {
    std::optional<std::filesystem::path> pmf_path;
    std::optional<ZipfSpec> zipf;
    std::size_t r = 0;  // layout of a Zipf truth
    std::size_t s = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::filesystem::path out;
};

/// Exact entropies, identity residuals and (for strictly positive pmfs)
/// asymptotic profiles. When the pmf is the Zipf(2, 6) law laid out 3 x 2
/// the report also compares against the published reference values.
nlohmann::json cmd_exact(const ExactRequest& request);

/// Plug-in estimates with both plug-in variances and their intervals.
nlohmann::json cmd_estimate(const EstimateRequest& request);

/// Runs a campaign and writes trace.csv, summary.json, histogram.csv and
/// qq.csv into out_dir. Returns the summary.
nlohmann::json cmd_simulate(const SimulateRequest& request);

/// Draws labeled pairs from a pmf (or Zipf law) into a CSV file.
nlohmann::json cmd_sample(const SampleRequest& request);

/// Writes the per-(n, trial) records as CSV.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace condent
