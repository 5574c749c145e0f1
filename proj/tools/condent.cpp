// condent: exact and plug-in conditional entropies from the command line.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error. Errors are printed
// to stderr as a one-line JSON object.

#include "condent/commands.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace {

using namespace condent;
using nlohmann::json;

int report_error(int code, std::string_view kind, std::string_view message) {
    json err = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    std::cerr << err.dump() << '\n';
    return code;
}

void emit(const json& report, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw IoError("cannot write " + out);
    file << report.dump(2) << '\n';
    if (!file) throw IoError("write failed for " + out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and plug-in conditional Shannon, Renyi and Tsallis entropies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    std::vector<double> alphas;
    std::string family_text = "all";
    std::string direction_text = "both";
    std::string unit_text = "nats";
    std::string out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", alphas, "Order for Renyi/Tsallis (repeatable, default 2)");
        cmd->add_option("--family", family_text, "shannon|renyi|tsallis|all")->capture_default_str();
        cmd->add_option("--direction", direction_text, "yx|xy|both")->capture_default_str();
        cmd->add_option("--unit", unit_text, "nats|bits|hartley")->capture_default_str();
        cmd->add_option("--out", out, "Write the JSON report here instead of stdout");
    };

    std::string pmf_path;
    auto* exact = app.add_subcommand("exact", "Exact entropies of a pmf document");
    exact->add_option("pmf", pmf_path, "pmf JSON {\"r\",\"s\",\"probs\"}")->required();
    add_common(exact);

    std::string data_path;
    std::string format_text;
    double ci_level = 0.95;
    auto* estimate = app.add_subcommand("estimate", "Plug-in estimates from labeled pairs");
    estimate->add_option("data", data_path, "CSV or JSONL pair file")->required();
    estimate->add_option("--format", format_text, "csv|jsonl (default: from extension)");
    estimate->add_option("--ci", ci_level, "Confidence level in (0, 1)")->capture_default_str();
    add_common(estimate);

    std::string mode_text;
    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
    simulate->add_option("mode", mode_text, "convergence|normality")
        ->required()
        ->check(CLI::IsMember({"convergence", "normality"}));
    simulate->add_option("config", config_path, "Campaign config JSON")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--workers", workers, "Worker threads (overrides the config)");

    std::string sample_pmf;
    double zipf_beta = 2.0;
    std::size_t zipf_m = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "Draw labeled pairs into a CSV file");
    auto* pmf_opt = sample_cmd->add_option("--pmf", sample_pmf, "pmf JSON to sample from");
    sample_cmd->add_option("--zipf-beta", zipf_beta, "Zipf exponent")->capture_default_str();
    auto* m_opt = sample_cmd->add_option("--zipf-m", zipf_m, "Zipf support size (= r*s)");
    sample_cmd->add_option("-r", rows, "Rows of the Zipf layout");
    sample_cmd->add_option("-s", cols, "Columns of the Zipf layout");
    sample_cmd->add_option("-n", n, "Number of pairs")->required();
    sample_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sample_cmd->add_option("--out", sample_out, "CSV path")->required();
    pmf_opt->excludes(m_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(2, "usage", e.what());
    }

    try {
        const std::vector<double> orders = alphas.empty() ? std::vector<double>{2.0} : alphas;
        if (*exact) {
            ExactRequest req;
            req.pmf_path = pmf_path;
            req.families = parse_families(family_text);
            req.alphas = orders;
            req.directions = parse_directions(direction_text);
            req.unit = parse_unit(unit_text);
            emit(cmd_exact(req), out);
        } else if (*estimate) {
            EstimateRequest req;
            req.data_path = data_path;
            if (!format_text.empty()) req.format = parse_pair_format(format_text);
            req.families = parse_families(family_text);
            req.alphas = orders;
            req.directions = parse_directions(direction_text);
            req.ci_level = ci_level;
            req.unit = parse_unit(unit_text);
            emit(cmd_estimate(req), out);
        } else if (*simulate) {
            SimulateRequest req;
            req.mode = mode_text == "normality" ? SimulateMode::Normality : SimulateMode::Convergence;
            req.config_path = config_path;
            req.out_dir = out_dir;
            if (workers > 0) req.workers = workers;
            const json summary = cmd_simulate(req);
            std::cout << json{{"out", out_dir},
                              {"final", summary["final"]},
                              {"truth_value", summary["truth_value"]}}
                             .dump(2)
                      << '\n';
        } else if (*sample_cmd) {
            SampleRequest req;
            if (!sample_pmf.empty()) req.pmf_path = sample_pmf;
            if (zipf_m > 0) req.zipf = ZipfSpec{zipf_beta, zipf_m};
            req.r = rows;
            req.s = cols;
            req.n = n;
            req.seed = seed;
            req.out = sample_out;
            std::cout << cmd_sample(req).dump(2) << '\n';
        }
    } catch (const IoError& e) {
        return report_error(3, "io", e.what());
    } catch (const nlohmann::json::exception& e) {
        return report_error(2, "validation", e.what());
    } catch (const std::invalid_argument& e) {
        return report_error(2, "validation", e.what());
    } catch (const std::domain_error& e) {
        return report_error(2, "validation", e.what());
    } catch (const std::exception& e) {
        return report_error(1, "internal", e.what());
    }
    return 0;
}
