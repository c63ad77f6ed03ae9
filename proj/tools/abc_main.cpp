// abc: config-driven experiment runner for the likelihood-free samplers.
//
//   abc run <config-path> [--seed N] [--workers N] [--out DIR]
//   abc presets list
//   abc presets write <name> [--out DIR]
//   abc presets run <name> [--seed N] [--workers N] [--out DIR]
//   abc oracle <model> --error uniform|gaussian --delta D [--grid lo:hi:n] [--out DIR] [--file NAME]
//
// Exit status is 0 iff every requested artifact was written; failures are
// reported as a single JSON object on stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abc/experiment.hpp"
#include "abc/io.hpp"

namespace {

using nlohmann::json;

void print_error_json(const std::string& type, const std::string& message,
                      const std::vector<abc::ConfigIssue>* issues = nullptr) {
    json err;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    if (issues != nullptr) {
        json list = json::array();
        for (const auto& i : *issues) {
            json item;
            switch (i.kind) {
                case abc::ConfigIssue::Kind::Parse: item["kind"] = "parse_error"; break;
                case abc::ConfigIssue::Kind::UnknownName: item["kind"] = "unknown_name"; break;
                case abc::ConfigIssue::Kind::ConstraintViolation: item["kind"] = "constraint_violation"; break;
            }
            item["field"] = i.field;
            item["line"] = i.line;
            item["message"] = i.message;
            list.push_back(item);
        }
        err["error"]["issues"] = list;
    }
    std::cerr << err.dump(2) << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw abc::Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GridSpec {
    double lo = -10.0;
    double hi = 10.0;
    std::size_t points = 2001;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    if (text.empty()) return g;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? std::string::npos : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw abc::Error("grid must be lo:hi:points, got '" + text + "'");
    }
    g.lo = std::stod(text.substr(0, c1));
    g.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.points = std::stoull(text.substr(c2 + 1));
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"likelihood-free (ABC) inference engine"};
    app.require_subcommand(1);

    // --- run ---
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    unsigned workers_override = 0;
    bool seed_set = false;
    bool workers_set = false;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "path to the experiment config")->required();
    run->add_option("--seed", seed_override, "override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--workers", workers_override, "override the config worker count")
        ->each([&](const std::string&) { workers_set = true; });
    run->add_option("--out", out_dir, "output directory (ABC_OUT_DIR overrides)");

    // --- presets ---
    auto* presets_cmd = app.add_subcommand("presets", "shipped experiment bundles");
    auto* presets_list = presets_cmd->add_subcommand("list", "list available presets");
    std::string preset_name;
    auto* presets_write = presets_cmd->add_subcommand("write", "write a preset's config files");
    presets_write->add_option("name", preset_name, "preset name")->required();
    presets_write->add_option("--out", out_dir, "output directory");
    auto* presets_run = presets_cmd->add_subcommand("run", "write and run a preset");
    presets_run->add_option("name", preset_name, "preset name")->required();
    presets_run->add_option("--seed", seed_override, "override every config seed")
        ->each([&](const std::string&) { seed_set = true; });
    presets_run->add_option("--workers", workers_override, "override every config worker count")
        ->each([&](const std::string&) { workers_set = true; });
    presets_run->add_option("--out", out_dir, "output directory");
    presets_cmd->require_subcommand(1);

    // --- oracle ---
    std::string oracle_model;
    std::string oracle_error = "uniform";
    double oracle_delta = 1.0;
    std::string oracle_grid;
    std::string oracle_file;
    auto* oracle = app.add_subcommand("oracle", "write an analytic posterior density table");
    oracle->add_option("model", oracle_model, "model name (toy_mixture)")->required();
    oracle->add_option("--error", oracle_error, "error kind: uniform or gaussian");
    oracle->add_option("--delta", oracle_delta, "tolerance delta")->required();
    oracle->add_option("--grid", oracle_grid, "uniform grid lo:hi:points (default -10:10:2001)");
    oracle->add_option("--out", out_dir, "output directory");
    oracle->add_option("--file", oracle_file, "output file name (default derived)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            abc::ExperimentConfig cfg = abc::parse_config(read_file(config_path));
            if (seed_set) cfg.seed = seed_override;
            if (workers_set) cfg.workers = workers_override;
            const abc::RunResult r = abc::run_experiment(cfg, out_dir);
            for (const auto& a : r.artifacts) std::cout << a.string() << "\n";
            return 0;
        }
        if (presets_list->parsed()) {
            for (const auto& p : abc::presets()) {
                std::cout << p.name << "\t" << p.description << "\n";
            }
            return 0;
        }
        if (presets_write->parsed()) {
            for (const auto& a : abc::write_preset(preset_name, out_dir)) {
                std::cout << a.string() << "\n";
            }
            return 0;
        }
        if (presets_run->parsed()) {
            std::optional<std::uint64_t> seed;
            std::optional<unsigned> workers;
            if (seed_set) seed = seed_override;
            if (workers_set) workers = workers_override;
            for (const auto& a : abc::run_preset(preset_name, out_dir, seed, workers)) {
                std::cout << a.string() << "\n";
            }
            return 0;
        }
        if (oracle->parsed()) {
            if (oracle_model != "toy_mixture") {
                throw abc::Error("analytic density tables exist for toy_mixture only");
            }
            const GridSpec g = parse_grid(oracle_grid);
            std::string fname = oracle_file;
            if (fname.empty()) {
                fname = "oracle_" + oracle_error + "_delta" + abc::io::format_double(oracle_delta) + ".csv";
            }
            const auto path = abc::write_toy_density_table(oracle_error, oracle_delta, g.lo, g.hi, g.points,
                                                           std::filesystem::path(out_dir) / fname);
            std::cout << path.string() << "\n";
            return 0;
        }
    } catch (const abc::ConfigParseError& e) {
        print_error_json("config", e.what(), &e.issues());
        return 2;
    } catch (const std::exception& e) {
        print_error_json("runtime", e.what());
        return 1;
    }
    return 0;
}
