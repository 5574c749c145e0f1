#pragma once

// File formats: labeled pair files (CSV or JSONL), pmf documents
// {"r", "s", "probs"} and campaign configurations.

#include "condent/estimation.hpp"
#include "condent/pmf.hpp"
#include "condent/simulation.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace condent {

enum class PairFormat { Csv, Jsonl };

/// Picks JSONL for .jsonl/.ndjson extensions, CSV otherwise.
PairFormat format_from_path(const std::filesystem::path& path);
PairFormat parse_pair_format(std::string_view text);

/// Sorted distinct labels; x_labels[i-1] names outcome i of X.
struct LabelMapping {
    std::vector<std::string> x_labels;
    std::vector<std::string> y_labels;
};

struct IngestResult {
    SampleSet samples;
    LabelMapping mapping;
};

/// Reads paired labels and maps them lexicographically to (i, j), then to
/// flat k. CSV rows are "x,y" with optional double quotes; a first row is a
/// header when it reads x,y (any case) or when it is the only non-numeric
/// row. JSONL lines are objects {"x": ..., "y": ...}. Blank lines are
/// skipped. Throws std::invalid_argument (with the line number for malformed
/// rows) and IoError when the file cannot be read.
IngestResult ingest_pairs(const std::filesystem::path& path, PairFormat format);
IngestResult ingest_pairs(std::istream& in, PairFormat format);

/// Labels x1..xr and y1..ys, zero padded so lexicographic order is numeric.
LabelMapping default_labels(Shape shape);

/// One "x,y" row per outcome, in sample order, with a header row.
void write_pairs_csv(std::ostream& out, const SampleSet& samples, const LabelMapping& mapping);
void write_pairs_csv(const std::filesystem::path& path, const SampleSet& samples,
                     const LabelMapping& mapping);

nlohmann::json pmf_to_json(const JointPmf& pmf);
/// Strict mode unless a cell is zero, in which case the empirical mode is
/// used.
JointPmf pmf_from_json(const nlohmann::json& doc);
JointPmf read_pmf(const std::filesystem::path& path);
void write_pmf(const std::filesystem::path& path, const JointPmf& pmf);

/// Campaign config document; see README for the fields.
CampaignConfig campaign_from_json(const nlohmann::json& doc);
CampaignConfig read_campaign(const std::filesystem::path& path);

/// Whole file as bytes; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double value);

}  // namespace condent
