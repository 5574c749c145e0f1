#include "condent/commands.hpp"

#include "condent/asymptotics.hpp"
#include "condent/entropy.hpp"
#include "condent/estimation.hpp"
#include "condent/simulation.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#ifndef CONDENT_VERSION
#define CONDENT_VERSION "0.0.0"
#endif

namespace condent {

using nlohmann::json;

std::string_view tool_version() { return CONDENT_VERSION; }

Unit parse_unit(std::string_view text) {
    if (text == "nats") return Unit::Nats;
    if (text == "bits") return Unit::Bits;
    if (text == "hartley") return Unit::Hartley;
    throw std::invalid_argument("unknown unit '" + std::string(text) +
                                "' (expected nats, bits or hartley)");
}

std::string_view to_string(Unit unit) {
    switch (unit) {
        case Unit::Nats: return "nats";
        case Unit::Bits: return "bits";
        case Unit::Hartley: return "hartley";
    }
    return "?";
}

double unit_factor(Unit unit) {
    switch (unit) {
        case Unit::Nats: return 1.0;
        case Unit::Bits: return 1.0 / std::numbers::ln2;
        case Unit::Hartley: return 1.0 / std::numbers::ln10;
    }
    return 1.0;
}

std::vector<Family> parse_families(std::string_view text) {
    if (text == "all") return {Family::Shannon, Family::Renyi, Family::Tsallis};
    return {parse_family(text)};
}

std::vector<Direction> parse_directions(std::string_view text) {
    if (text == "both") return {Direction::YgivenX, Direction::XgivenY};
    const Direction d = parse_direction(text);
    if (!is_conditional(d)) throw std::invalid_argument("direction must be yx, xy or both");
    return {d};
}

namespace {

json alpha_json(std::optional<double> alpha) { return alpha ? json(*alpha) : json(nullptr); }

json header(std::string_view command, const std::filesystem::path& input, std::string_view bytes,
            Unit unit) {
    return {{"tool", kToolName},
            {"version", tool_version()},
            {"command", command},
            {"input", {{"path", input.string()}, {"sha256", sha256_hex(bytes)}}},
            {"unit", to_string(unit)}};
}

json entropy_json(const EntropyValue& v, double factor) {
    return {{"family", to_string(v.family)},
            {"alpha", alpha_json(v.alpha)},
            {"direction", to_string(v.direction)},
            {"value", v.value * factor}};
}

json profile_json(const AsymptoticProfile& p, double factor) {
    const double f2 = factor * factor;
    return {{"family", to_string(p.family)},
            {"alpha", alpha_json(p.alpha)},
            {"direction", to_string(p.direction)},
            {"bound_constant", p.bound_constant * factor},
            {"bound_normalizer",
             p.family == Family::Renyi ? (p.direction == Direction::YgivenX ? "a_x" : "a_y") : "a_z"},
            {"variance_paper",
             {{"total", p.variance_paper.total * f2},
              {"marginal_part", p.variance_paper.marginal_part * f2},
              {"joint_part", p.variance_paper.joint_part * f2},
              {"cross_part", p.variance_paper.cross_part * f2}}},
            {"variance_delta", p.variance_delta * f2}};
}

void validate_alphas(const std::vector<double>& alphas) {
    for (double a : alphas) check_alpha(Family::Renyi, a);
}

// The published Zipf(2, 6) 3 x 2 example values, in nats.
struct ReferenceValue {
    Family family;
    std::optional<double> alpha;
    Direction direction;
    double listed;
};

constexpr double kReferenceTolerance = 1e-4;

json reference_check(const JointPmf& pmf) {
    const JointPmf zipf = zipf_joint({2.0, 6}, 3, 2);
    if (pmf.shape() != zipf.shape()) return nullptr;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (std::abs(pmf.probs()[k] - zipf.probs()[k]) > 1e-12) return nullptr;
    }
    const ReferenceValue refs[] = {
        {Family::Shannon, std::nullopt, Direction::YgivenX, 0.52623},
        {Family::Renyi, 2.0, Direction::YgivenX, 0.39027},
        {Family::Tsallis, 2.0, Direction::YgivenX, 0.32312},
        {Family::Shannon, std::nullopt, Direction::XgivenY, 0.64150},
        {Family::Renyi, 2.0, Direction::XgivenY, 0.28723},
        {Family::Tsallis, 2.0, Direction::XgivenY, 0.24966},
    };
    json rows = json::array();
    for (const auto& ref : refs) {
        const double computed = entropy(pmf, ref.family, ref.alpha, ref.direction).value;
        const bool matches = std::abs(computed - ref.listed) <= kReferenceTolerance;
        json row = {{"family", to_string(ref.family)},
                    {"alpha", alpha_json(ref.alpha)},
                    {"direction", to_string(ref.direction)},
                    {"listed_nats", ref.listed},
                    {"computed_nats", computed},
                    {"matches", matches}};
        if (!matches) {
            row["note"] =
                "listed value is inconsistent with H(X,Y) - H(Y) on the same cells; "
                "the computed value is authoritative (treated as an erratum)";
        }
        rows.push_back(std::move(row));
    }
    return {{"pmf", "zipf(beta=2, m=6) as 3x2"}, {"tolerance_nats", kReferenceTolerance},
            {"values", rows}};
}

json summary_json(const SizeSummary& s) {
    json j = {{"n", s.n},
              {"completed", s.completed},
              {"mean", s.mean},
              {"variance", s.variance},
              {"scaled_variance", s.scaled_variance},
              {"median_abs_error", s.median_abs_error}};
    j["ks"] = s.ks ? json(*s.ks) : json(nullptr);
    return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace

json cmd_exact(const ExactRequest& request) {
    validate_alphas(request.alphas);
    const std::string bytes = read_file(request.pmf_path);
    const JointPmf pmf = read_pmf(request.pmf_path);
    const double factor = unit_factor(request.unit);

    json report = header("exact", request.pmf_path, bytes, request.unit);
    report["pmf"] = pmf_to_json(pmf);
    report["mode"] = pmf.mode() == PmfMode::Strict ? "strict" : "empirical";

    const Direction fixed[] = {Direction::Joint, Direction::MarginalX, Direction::MarginalY};
    json values = json::array();
    json profiles = json::array();
    for (Family family : request.families) {
        std::vector<std::optional<double>> orders;
        if (family == Family::Shannon) orders.emplace_back(std::nullopt);
        else orders.assign(request.alphas.begin(), request.alphas.end());
        for (const auto& alpha : orders) {
            for (Direction d : fixed) values.push_back(entropy_json(entropy(pmf, family, alpha, d), factor));
            for (Direction d : request.directions) {
                values.push_back(entropy_json(entropy(pmf, family, alpha, d), factor));
                if (pmf.is_strictly_positive()) {
                    profiles.push_back(profile_json(asymptotic_profile(pmf, family, alpha, d), factor));
                }
            }
        }
    }
    report["entropies"] = std::move(values);
    report["profiles"] = std::move(profiles);

    json identities = json::array();
    for (double alpha : request.alphas) {
        const IdentityReport id = check_identities(pmf, alpha);
        identities.push_back({{"alpha", alpha},
                              {"shannon_chain_rule", id.shannon_chain_rule * factor},
                              {"renyi_chain_rule", id.renyi_chain_rule * factor},
                              {"pseudo_additivity", id.pseudo_additivity * factor},
                              {"tsallis_renyi_transform", id.tsallis_renyi_transform * factor},
                              {"monotonicity_slack_x", id.monotonicity_slack_x * factor},
                              {"monotonicity_slack_y", id.monotonicity_slack_y * factor}});
    }
    report["identities"] = std::move(identities);

    if (json ref = reference_check(pmf); !ref.is_null()) report["reference_check"] = std::move(ref);
    return report;
}

json cmd_estimate(const EstimateRequest& request) {
    if (!(request.ci_level > 0.0 && request.ci_level < 1.0)) {
        throw std::invalid_argument("confidence level must lie strictly between 0 and 1");
    }
    validate_alphas(request.alphas);
    const std::string bytes = read_file(request.data_path);
    const IngestResult data =
        ingest_pairs(request.data_path, request.format.value_or(format_from_path(request.data_path)));
    const double factor = unit_factor(request.unit);
    const double f2 = factor * factor;

    json report = header("estimate", request.data_path, bytes, request.unit);
    const SampleSet& samples = data.samples;
    report["n"] = samples.n();
    report["r"] = samples.shape().r;
    report["s"] = samples.shape().s;
    report["mapping"] = {{"x", data.mapping.x_labels}, {"y", data.mapping.y_labels}};
    report["ci_level"] = request.ci_level;

    json estimates = json::array();
    for (Family family : request.families) {
        std::vector<std::optional<double>> orders;
        if (family == Family::Shannon) orders.emplace_back(std::nullopt);
        else orders.assign(request.alphas.begin(), request.alphas.end());
        for (const auto& alpha : orders) {
            for (Direction d : request.directions) {
                const EntropyEstimate base = estimate_entropy(samples, family, alpha, d);
                json entry = {{"family", to_string(family)},
                              {"alpha", alpha_json(base.alpha)},
                              {"direction", to_string(d)},
                              {"n", base.n},
                              {"value", base.value * factor}};
                json variances = json::object();
                for (VarianceSource src : {VarianceSource::DeltaOracle, VarianceSource::PaperLiteral}) {
                    const EntropyEstimate est =
                        estimate_entropy(samples, family, alpha, d, {src, request.ci_level});
                    if (est.variance) {
                        variances[std::string(to_string(src))] = {{"variance", *est.variance * f2},
                                                                  {"ci_low", *est.ci_low * factor},
                                                                  {"ci_high", *est.ci_high * factor}};
                    } else {
                        const JointPmf pmf = empirical_joint(samples);
                        const double raw = variance_paper(pmf, family, alpha, d).total;
                        variances[std::string(to_string(src))] = {
                            {"variance", nullptr},
                            {"raw_value", raw * f2},
                            {"note", "formula is negative at this pmf; no interval"}};
                    }
                }
                entry["variances"] = std::move(variances);
                estimates.push_back(std::move(entry));
            }
        }
    }
    report["estimates"] = std::move(estimates);

    json sums = json::array();
    for (double alpha : request.alphas) {
        const PowerSumEstimates ps = estimate_power_sums(samples, alpha);
        sums.push_back({{"alpha", alpha}, {"joint", ps.joint.value}, {"x", ps.x.value}, {"y", ps.y.value}});
    }
    report["power_sums"] = std::move(sums);
    return report;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "n,trial,estimate,error,a_z,a_x,a_y,standardized,failure\n";
    for (const TrialRecord& rec : trace.records) {
        out << rec.n << ',' << rec.trial << ',' << format_number(rec.estimate) << ','
            << format_number(rec.error) << ',' << format_number(rec.deviation.a_z) << ','
            << format_number(rec.deviation.a_x) << ',' << format_number(rec.deviation.a_y) << ','
            << format_number(rec.standardized) << ',';
        if (!rec.failure.empty()) {
            std::string quoted = rec.failure;
            for (std::size_t p = 0; (p = quoted.find('"', p)) != std::string::npos; p += 2) {
                quoted.insert(p, 1, '"');
            }
            out << '"' << quoted << '"';
        }
        out << '\n';
    }
}

json cmd_simulate(const SimulateRequest& request) {
    CampaignConfig config = read_campaign(request.config_path);
    if (request.workers) config.workers = *request.workers;

    const SimulationTrace trace = request.mode == SimulateMode::Convergence
                                      ? run_convergence(config)
                                      : run_normality(config);

    std::error_code ec;
    std::filesystem::create_directories(request.out_dir, ec);
    if (ec) throw IoError("cannot create " + request.out_dir.string() + ": " + ec.message());

    json summary = header(request.mode == SimulateMode::Convergence ? "simulate convergence"
                                                                    : "simulate normality",
                          request.config_path, read_file(request.config_path), Unit::Nats);
    summary["config"] = {{"truth", pmf_to_json(config.truth)},
                         {"family", to_string(config.family)},
                         {"alpha", alpha_json(config.family == Family::Shannon ? std::nullopt : config.alpha)},
                         {"direction", to_string(config.direction)},
                         {"trials", config.trials},
                         {"seed", config.seed},
                         {"variance_source", to_string(config.variance_source)},
                         {"sample_sizes", config.sample_sizes}};
    summary["truth_value"] = trace.truth_value;
    summary["sigma"] = trace.sigma ? json(*trace.sigma) : json(nullptr);
    if (config.truth.is_strictly_positive()) {
        summary["profile"] = profile_json(
            asymptotic_profile(config.truth, config.family, config.alpha, config.direction), 1.0);
    }

    json per_n = json::array();
    for (const SizeSummary& s : trace.summaries) per_n.push_back(summary_json(s));
    summary["per_n"] = std::move(per_n);

    const SizeSummary& last = trace.summaries.back();
    const TrialRecord& final_rec = trace.records[(trace.summaries.size() - 1) * config.trials];
    summary["final"] = {{"n", last.n},
                        {"estimate", final_rec.estimate},
                        {"error", final_rec.error},
                        {"median_abs_error", last.median_abs_error},
                        {"ks", last.ks ? json(*last.ks) : json(nullptr)}};
    if (config.truth.is_strictly_positive()) {
        SimulationTrace tail;
        for (const TrialRecord& rec : trace.records) {
            if (rec.n == last.n) tail.records.push_back(rec);
        }
        const BoundCheck bc = check_as_bound(tail, config, 1.1);
        summary["bound_check"] = {{"n", last.n}, {"slack", 1.1}, {"holds", bc.holds},
                                  {"total", bc.total}, {"max_ratio", bc.max_ratio}};
    }

    {
        auto out = open_out(request.out_dir / "trace.csv");
        write_trace_csv(out, trace);
    }
    {
        auto out = open_out(request.out_dir / "histogram.csv");
        out << "bin_low,bin_high,count\n";
        const Histogram& h = last.histogram;
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            out << format_number(h.edges[b]) << ',' << format_number(h.edges[b + 1]) << ','
                << h.counts[b] << '\n';
        }
    }
    {
        auto out = open_out(request.out_dir / "qq.csv");
        out << "empirical,normal\n";
        for (const QqPair& q : last.qq) {
            out << format_number(q.empirical) << ',' << format_number(q.normal) << '\n';
        }
    }
    {
        auto out = open_out(request.out_dir / "summary.json");
        out << summary.dump(2) << '\n';
        if (!out) throw IoError("write failed for summary.json");
    }
    return summary;
}

json cmd_sample(const SampleRequest& request) {
    if (request.pmf_path.has_value() == request.zipf.has_value()) {
        throw std::invalid_argument("give exactly one of a pmf file or a Zipf spec");
    }
    const JointPmf truth = request.pmf_path ? read_pmf(*request.pmf_path)
                                            : zipf_joint(*request.zipf, request.r, request.s);
    const SampleSet samples = sample(truth, request.n, request.seed);
    write_pairs_csv(request.out, samples, default_labels(truth.shape()));
    return {{"tool", kToolName}, {"version", tool_version()}, {"command", "sample"},
            {"n", request.n},    {"seed", request.seed},      {"out", request.out.string()},
            {"truth", pmf_to_json(truth)}};
}

}  // namespace condent
