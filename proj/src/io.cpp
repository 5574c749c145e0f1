#include "condent/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace condent {

namespace {

std::string trim(std::string_view s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last;
}

std::string line_error(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

// Splits one CSV record; fields may be wrapped in double quotes with "" as an
// escaped quote.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t p = 0; p < line.size(); ++p) {
        const char ch = line[p];
        if (quoted) {
            if (ch == '"') {
                if (p + 1 < line.size() && line[p + 1] == '"') {
                    cur += '"';
                    ++p;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && trim(cur).empty()) {
            quoted = true;
            was_quoted = true;
            cur.clear();
        } else if (ch == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur += ch;
        }
    }
    if (quoted) throw std::invalid_argument(line_error(line_no, "unterminated quote"));
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

struct RawRow {
    std::size_t line = 0;
    std::string x;
    std::string y;
};

std::vector<RawRow> read_csv_rows(std::istream& in) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_csv(line, line_no);
        if (fields.size() != 2) {
            throw std::invalid_argument(line_error(
                line_no, "expected 2 comma-separated fields, got " + std::to_string(fields.size())));
        }
        rows.emplace_back(line_no, std::move(fields));
    }

    bool header = false;
    if (!rows.empty()) {
        const auto& first = rows.front().second;
        if (lower(trim(first[0])) == "x" && lower(trim(first[1])) == "y") {
            header = true;
        } else if (rows.size() > 1 && !(is_numeric(first[0]) && is_numeric(first[1]))) {
            header = std::all_of(rows.begin() + 1, rows.end(), [](const auto& r) {
                return is_numeric(r.second[0]) && is_numeric(r.second[1]);
            });
        }
    }

    std::vector<RawRow> out;
    for (std::size_t t = header ? 1 : 0; t < rows.size(); ++t) {
        out.push_back({rows[t].first, rows[t].second[0], rows[t].second[1]});
    }
    return out;
}

std::string json_label(const nlohmann::json& v, std::size_t line_no, const char* key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw std::invalid_argument(
        line_error(line_no, std::string("field '") + key + "' must be a string or number"));
}

std::vector<RawRow> read_jsonl_rows(std::istream& in) {
    std::vector<RawRow> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(line_error(line_no, std::string("invalid JSON: ") + e.what()));
        }
        if (!obj.is_object() || !obj.contains("x") || !obj.contains("y")) {
            throw std::invalid_argument(line_error(line_no, "expected an object with keys x and y"));
        }
        out.push_back({line_no, json_label(obj["x"], line_no, "x"), json_label(obj["y"], line_no, "y")});
    }
    return out;
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::size_t index_of(const std::vector<std::string>& sorted, const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), label) -
                                    sorted.begin()) +
           1;
}

double require_number(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw std::invalid_argument(std::string("'") + key + "' must be a number");
    }
    return doc[key].get<double>();
}

std::size_t require_count(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
        throw std::invalid_argument(std::string("'") + key + "' must be a nonnegative integer");
    }
    return doc[key].get<std::size_t>();
}

}  // namespace

PairFormat format_from_path(const std::filesystem::path& path) {
    const std::string ext = lower(path.extension().string());
    return (ext == ".jsonl" || ext == ".ndjson") ? PairFormat::Jsonl : PairFormat::Csv;
}

PairFormat parse_pair_format(std::string_view text) {
    if (text == "csv") return PairFormat::Csv;
    if (text == "jsonl") return PairFormat::Jsonl;
    throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected csv or jsonl)");
}

IngestResult ingest_pairs(std::istream& in, PairFormat format) {
    const std::vector<RawRow> rows =
        format == PairFormat::Csv ? read_csv_rows(in) : read_jsonl_rows(in);
    if (rows.empty()) throw std::invalid_argument("no data rows");

    std::vector<std::string> xs, ys;
    xs.reserve(rows.size());
    ys.reserve(rows.size());
    for (const RawRow& row : rows) {
        const std::string x = trim(row.x);
        const std::string y = trim(row.y);
        if (x.empty() || y.empty()) {
            throw std::invalid_argument(line_error(row.line, "blank label"));
        }
        xs.push_back(x);
        ys.push_back(y);
    }

    LabelMapping mapping{sorted_unique(xs), sorted_unique(ys)};
    const Shape shape{mapping.x_labels.size(), mapping.y_labels.size()};
    if (shape.r <= 1) throw std::invalid_argument("r must exceed 1 (only one distinct x label)");
    if (shape.s <= 1) throw std::invalid_argument("s must exceed 1 (only one distinct y label)");

    std::vector<std::size_t> outcomes(rows.size());
    for (std::size_t l = 0; l < rows.size(); ++l) {
        outcomes[l] = flatten_index(index_of(mapping.x_labels, xs[l]),
                                    index_of(mapping.y_labels, ys[l]), shape);
    }
    return {SampleSet(shape, std::move(outcomes)), std::move(mapping)};
}

IngestResult ingest_pairs(const std::filesystem::path& path, PairFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return ingest_pairs(in, format);
}

LabelMapping default_labels(Shape shape) {
    auto make = [](char prefix, std::size_t count) {
        const std::size_t width = std::to_string(count).size();
        std::vector<std::string> labels;
        for (std::size_t t = 1; t <= count; ++t) {
            std::string digits = std::to_string(t);
            labels.push_back(std::string(1, prefix) + std::string(width - digits.size(), '0') + digits);
        }
        return labels;
    };
    return {make('x', shape.r), make('y', shape.s)};
}

void write_pairs_csv(std::ostream& out, const SampleSet& samples, const LabelMapping& mapping) {
    const Shape shape = samples.shape();
    if (mapping.x_labels.size() != shape.r || mapping.y_labels.size() != shape.s) {
        throw std::invalid_argument("label mapping does not match the sample shape");
    }
    out << "x,y\n";
    for (std::size_t k : samples.outcomes()) {
        const Cell c = unflatten_index(k, shape);
        out << mapping.x_labels[c.i - 1] << ',' << mapping.y_labels[c.j - 1] << '\n';
    }
}

void write_pairs_csv(const std::filesystem::path& path, const SampleSet& samples,
                     const LabelMapping& mapping) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_pairs_csv(out, samples, mapping);
    if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json pmf_to_json(const JointPmf& pmf) {
    return {{"r", pmf.r()}, {"s", pmf.s()},
            {"probs", std::vector<double>(pmf.probs().begin(), pmf.probs().end())}};
}

JointPmf pmf_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("pmf document must be a JSON object");
    const std::size_t r = require_count(doc, "r");
    const std::size_t s = require_count(doc, "s");
    if (!doc.contains("probs") || !doc["probs"].is_array()) {
        throw std::invalid_argument("'probs' must be an array of numbers");
    }
    std::vector<double> probs;
    for (const auto& v : doc["probs"]) {
        if (!v.is_number()) throw std::invalid_argument("'probs' must be an array of numbers");
        probs.push_back(v.get<double>());
    }
    const bool has_zero = std::any_of(probs.begin(), probs.end(), [](double p) { return p == 0.0; });
    return JointPmf::validate(std::move(probs), r, s, has_zero ? PmfMode::Empirical : PmfMode::Strict);
}

JointPmf read_pmf(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
    }
    return pmf_from_json(doc);
}

void write_pmf(const std::filesystem::path& path, const JointPmf& pmf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << pmf_to_json(pmf).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

CampaignConfig campaign_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (!doc.contains("truth") || !doc["truth"].is_object()) {
        throw std::invalid_argument("'truth' must be an object (inline pmf or zipf spec)");
    }
    const auto& truth_doc = doc["truth"];
    std::optional<JointPmf> truth;
    if (truth_doc.contains("zipf")) {
        const auto& z = truth_doc["zipf"];
        if (!z.is_object()) throw std::invalid_argument("'truth.zipf' must be an object");
        const ZipfSpec spec{require_number(z, "beta"), require_count(z, "m")};
        truth = zipf_joint(spec, require_count(truth_doc, "r"), require_count(truth_doc, "s"));
    } else {
        truth = pmf_from_json(truth_doc);
    }

    CampaignConfig c{.truth = *truth, .alpha = std::nullopt, .sample_sizes = {}};
    c.family = parse_family(doc.value("family", std::string("shannon")));
    if (doc.contains("alpha") && !doc["alpha"].is_null()) c.alpha = require_number(doc, "alpha");
    c.direction = parse_direction(doc.value("direction", std::string("yx")));
    if (!is_conditional(c.direction)) {
        throw std::invalid_argument("campaign direction must be yx or xy");
    }

    if (!doc.contains("sample_sizes")) throw std::invalid_argument("'sample_sizes' is required");
    const auto& sizes = doc["sample_sizes"];
    if (sizes.is_array()) {
        for (const auto& v : sizes) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                throw std::invalid_argument("'sample_sizes' must hold nonnegative integers");
            }
            c.sample_sizes.push_back(v.get<std::size_t>());
        }
    } else if (sizes.is_object()) {
        const std::size_t start = require_count(sizes, "start");
        const std::size_t stop = require_count(sizes, "stop");
        const std::size_t step = require_count(sizes, "step");
        if (step == 0) throw std::invalid_argument("'sample_sizes.step' must be positive");
        for (std::size_t n = start; n <= stop; n += step) c.sample_sizes.push_back(n);
    } else {
        throw std::invalid_argument("'sample_sizes' must be an array or {start, stop, step}");
    }

    c.trials = doc.contains("trials") ? require_count(doc, "trials") : 1;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw std::invalid_argument("'seed' must be an integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    c.variance_source = parse_variance_source(doc.value("variance_source", std::string("delta-oracle")));
    c.workers = doc.contains("workers") ? static_cast<unsigned>(require_count(doc, "workers")) : 1;
    c.validate();
    return c;
}

CampaignConfig read_campaign(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
    }
    return campaign_from_json(doc);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return buf.str();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int b = 0; b < len; ++b) hex << std::setw(2) << static_cast<int>(digest[b]);
    return hex.str();
}

std::string format_number(double value) {
    std::ostringstream out;
    out << std::setprecision(17) << value;
    return out.str();
}

}  // namespace condent
