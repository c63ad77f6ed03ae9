#include "abc/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "abc/estimators.hpp"
#include "abc/io.hpp"
#include "abc/mcmc.hpp"
#include "abc/models/discrete.hpp"
#include "abc/models/fossil.hpp"
#include "abc/models/pritchard.hpp"
#include "abc/models/toy_mixture.hpp"
#include "abc/rejection.hpp"

namespace abc {

namespace {

using nlohmann::json;

std::string issue_kind_name(ConfigIssue::Kind k) {
    switch (k) {
        case ConfigIssue::Kind::Parse: return "parse_error";
        case ConfigIssue::Kind::UnknownName: return "unknown_name";
        case ConfigIssue::Kind::ConstraintViolation: return "constraint_violation";
    }
    return "?";
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

} // namespace

ConfigParseError::ConfigParseError(std::vector<ConfigIssue> issues)
    : Error([&issues] {
          std::string msg = "invalid experiment config (" + std::to_string(issues.size()) + " issue(s)):";
          for (const auto& i : issues) {
              msg += "\n  [" + issue_kind_name(i.kind) + "] " + i.field;
              if (i.line > 0) msg += " (line " + std::to_string(i.line) + ")";
              msg += ": " + i.message;
          }
          return msg;
      }()),
      issues_(std::move(issues)) {}

const std::vector<std::string>& registered_algorithms() {
    static const std::vector<std::string> v = {"rejection", "weighted", "mcmc-c", "mcmc-d", "evidence"};
    return v;
}

const std::vector<std::string>& registered_models() {
    static const std::vector<std::string> v = {"toy_mixture", "discrete_oracle", "pritchard", "fossil"};
    return v;
}

const std::vector<std::string>& registered_kernel_families() {
    static const std::vector<std::string> v = {"uniform_ball", "epanechnikov", "gaussian", "product",
                                               "exact_binomial"};
    return v;
}

const std::vector<std::string>& registered_metrics() {
    static const std::vector<std::string> v = {"euclidean", "max_component", "max_relative"};
    return v;
}

// --- parsing ---

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

struct RawConfig {
    // section -> key -> entry (later duplicates reported)
    std::map<std::string, std::map<std::string, RawEntry>> sections;
    std::map<std::string, int> section_lines;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text, std::vector<ConfigIssue>& issues) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                issues.push_back({ConfigIssue::Kind::Parse, "", lineno, "malformed section header: " + t});
                continue;
            }
            section = trim(t.substr(1, t.size() - 2));
            raw.section_lines.emplace(section, lineno);
            raw.sections[section]; // a section may be empty
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            issues.push_back({ConfigIssue::Kind::Parse, "", lineno, "expected key = value, got: " + t});
            continue;
        }
        if (section.empty()) {
            issues.push_back({ConfigIssue::Kind::Parse, "", lineno, "key outside any [section]"});
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            issues.push_back({ConfigIssue::Kind::Parse, "", lineno, "empty key"});
            continue;
        }
        auto [it, inserted] = raw.sections[section].emplace(key, RawEntry{value, lineno, false});
        if (!inserted) {
            issues.push_back({ConfigIssue::Kind::Parse, section + "." + key, lineno,
                              "duplicate key (first defined on line " + std::to_string(it->second.line) + ")"});
        }
    }
    return raw;
}

class Extractor {
public:
    Extractor(RawConfig& raw, std::vector<ConfigIssue>& issues) : raw_(raw), issues_(issues) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto sit = raw_.sections.find(section);
        if (sit == raw_.sections.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        kit->second.consumed = true;
        return kit->second.value;
    }

    int line_of(const std::string& section, const std::string& key) const {
        auto sit = raw_.sections.find(section);
        if (sit == raw_.sections.end()) return 0;
        auto kit = sit->second.find(key);
        return kit == sit->second.end() ? 0 : kit->second.line;
    }

    void constraint(const std::string& field, int line, const std::string& message) {
        issues_.push_back({ConfigIssue::Kind::ConstraintViolation, field, line, message});
    }

    void unknown(const std::string& field, int line, const std::string& message) {
        issues_.push_back({ConfigIssue::Kind::UnknownName, field, line, message});
    }

    void parse_issue(const std::string& field, int line, const std::string& message) {
        issues_.push_back({ConfigIssue::Kind::Parse, field, line, message});
    }

    std::optional<double> get_double(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        char* end = nullptr;
        const double d = std::strtod(v->c_str(), &end);
        if (end == v->c_str() || *end != '\0') {
            parse_issue(section + "." + key, line_of(section, key), "not a number: '" + *v + "'");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::uint64_t> get_u64(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        char* end = nullptr;
        const unsigned long long u = std::strtoull(v->c_str(), &end, 10);
        if (end == v->c_str() || *end != '\0' || v->find('-') != std::string::npos) {
            parse_issue(section + "." + key, line_of(section, key),
                        "not a nonnegative integer: '" + *v + "'");
            return std::nullopt;
        }
        return static_cast<std::uint64_t>(u);
    }

    std::optional<std::vector<double>> get_double_list(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        std::vector<double> out;
        std::istringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            char* end = nullptr;
            const double d = std::strtod(tok.c_str(), &end);
            if (tok.empty() || end == tok.c_str() || *end != '\0') {
                parse_issue(section + "." + key, line_of(section, key),
                            "not a comma-separated number list: '" + *v + "'");
                return std::nullopt;
            }
            out.push_back(d);
        }
        if (out.empty()) {
            parse_issue(section + "." + key, line_of(section, key), "empty list");
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::vector<std::string>> get_string_list(const std::string& section,
                                                            const std::string& key) {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        std::vector<std::string> out;
        std::istringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) {
                parse_issue(section + "." + key, line_of(section, key), "empty list element");
                return std::nullopt;
            }
            out.push_back(tok);
        }
        return out;
    }

    void report_unconsumed(const std::map<std::string, std::vector<std::string>>& known) {
        for (auto& [section, keys] : raw_.sections) {
            auto kit = known.find(section);
            if (kit == known.end()) {
                unknown(section, raw_.section_lines.count(section) ? raw_.section_lines.at(section) : 0,
                        "unknown section; expected one of: experiment, model, kernel, algorithm, output");
                continue;
            }
            for (auto& [key, entry] : keys) {
                if (!entry.consumed) {
                    unknown(section + "." + key, entry.line,
                            "unknown key; known keys here: " + join(kit->second));
                }
            }
        }
    }

private:
    RawConfig& raw_;
    std::vector<ConfigIssue>& issues_;
};

bool name_registered(const std::string& name, const std::vector<std::string>& registry) {
    for (const auto& r : registry) {
        if (r == name) return true;
    }
    return false;
}

// Per-model parameter key registry; consumed generically so unknown model
// parameters are reported with the full set of valid keys.
const std::map<std::string, std::vector<std::string>>& model_param_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"toy_mixture", {}},
        {"discrete_oracle", {"table_seed", "obs_index"}},
        {"pritchard", {}},
        {"fossil", {"lambda_grid", "tau", "alpha", "mu", "epochs", "counts", "rate_multipliers"}},
    };
    return keys;
}

std::optional<std::vector<double>> try_parse_list(const std::string& value) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        char* end = nullptr;
        const double d = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end == tok.c_str() || *end != '\0') return std::nullopt;
        out.push_back(d);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

void validate_fossil_params(const ModelSpec& model, Extractor& ex, int model_line) {
    auto list_param = [&](const char* key, bool required) -> std::optional<std::vector<double>> {
        auto it = model.params.find(key);
        if (it == model.params.end()) {
            if (required) {
                ex.constraint(std::string("model.") + key, model_line,
                              "fossil model requires the '" + std::string(key) + "' parameter");
            }
            return std::nullopt;
        }
        auto parsed = try_parse_list(it->second);
        if (!parsed) {
            ex.parse_issue(std::string("model.") + key, model_line, "not a number list: " + it->second);
        }
        return parsed;
    };
    auto num_param = [&](const char* key, bool required, double fallback) -> std::optional<double> {
        auto it = model.params.find(key);
        if (it == model.params.end()) {
            if (required) {
                ex.constraint(std::string("model.") + key, model_line,
                              "fossil model requires the '" + std::string(key) + "' parameter");
                return std::nullopt;
            }
            return fallback;
        }
        char* end = nullptr;
        const double d = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0') {
            ex.parse_issue(std::string("model.") + key, model_line, "not a number: " + it->second);
            return std::nullopt;
        }
        return d;
    };

    const auto grid = list_param("lambda_grid", true);
    if (grid) {
        for (double g : *grid) {
            if (!(g > 0.0)) {
                ex.constraint("model.lambda_grid", model_line, "birth rates must be > 0");
                break;
            }
        }
    }
    if (auto tau = num_param("tau", true, 0.0); tau && !(*tau > 0.0)) {
        ex.constraint("model.tau", model_line, "tau must be > 0");
    }
    if (auto alpha = num_param("alpha", true, 0.0); alpha && (*alpha < 0.0 || *alpha > 1.0)) {
        ex.constraint("model.alpha", model_line, "alpha must lie in [0, 1]");
    }
    if (auto mu = num_param("mu", false, 0.0); mu && *mu < 0.0) {
        ex.constraint("model.mu", model_line, "mu must be >= 0");
    }
    const auto epochs = list_param("epochs", true);
    if (epochs) {
        for (std::size_t j = 0; j < epochs->size(); ++j) {
            if (!((*epochs)[j] < 0.0) || (j > 0 && !((*epochs)[j - 1] < (*epochs)[j]))) {
                ex.constraint("model.epochs", model_line,
                              "epoch boundaries must be strictly ascending negative times");
                break;
            }
        }
    }
    const auto counts = list_param("counts", true);
    if (counts) {
        for (double c : *counts) {
            if (c < 0.0 || c != std::nearbyint(c)) {
                ex.constraint("model.counts", model_line, "fossil counts must be nonnegative integers");
                break;
            }
        }
    }
    if (epochs && counts && epochs->size() != counts->size()) {
        ex.constraint("model.counts", model_line, "one observed count per epoch required");
    }
    if (auto mult = list_param("rate_multipliers", false); mult && epochs && mult->size() != epochs->size()) {
        ex.constraint("model.rate_multipliers", model_line, "one rate multiplier per epoch required");
    }
}

// Fixed output dimension per model; fossil's is its epoch count.
std::optional<std::size_t> model_output_dim(const ModelSpec& model) {
    if (model.name == "toy_mixture" || model.name == "discrete_oracle") return 1;
    if (model.name == "pritchard") return 3;
    if (model.name == "fossil") {
        auto it = model.params.find("epochs");
        if (it == model.params.end()) return std::nullopt;
        auto parsed = try_parse_list(it->second);
        if (!parsed) return std::nullopt;
        return parsed->size();
    }
    return std::nullopt;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::vector<ConfigIssue> issues;
    RawConfig raw = tokenize(text, issues);
    Extractor ex(raw, issues);
    ExperimentConfig cfg;

    // [experiment]
    if (auto v = ex.get("experiment", "algorithm")) {
        cfg.algorithm = *v;
        if (!name_registered(cfg.algorithm, registered_algorithms())) {
            ex.unknown("experiment.algorithm", ex.line_of("experiment", "algorithm"),
                       "unknown algorithm '" + cfg.algorithm +
                           "'; registered: " + join(registered_algorithms()));
        }
    } else {
        ex.constraint("experiment.algorithm", 0, "required");
    }
    if (auto v = ex.get_u64("experiment", "seed")) cfg.seed = *v;
    if (auto v = ex.get_u64("experiment", "workers")) {
        if (*v < 1) {
            ex.constraint("experiment.workers", ex.line_of("experiment", "workers"), "must be >= 1");
        } else {
            cfg.workers = static_cast<unsigned>(*v);
        }
    }

    // [model]
    const int model_line = ex.line_of("model", "name");
    if (auto v = ex.get("model", "name")) {
        cfg.model.name = *v;
        if (!name_registered(cfg.model.name, registered_models())) {
            ex.unknown("model.name", model_line,
                       "unknown model '" + cfg.model.name + "'; registered: " + join(registered_models()));
        }
    } else {
        ex.constraint("model.name", 0, "required");
    }
    if (auto keys = model_param_keys().find(cfg.model.name); keys != model_param_keys().end()) {
        for (const auto& key : keys->second) {
            if (auto v = ex.get("model", key)) cfg.model.params[key] = *v;
        }
    }

    // [kernel] — every mode evaluates pi_eps, so a kernel is always required.
    if (auto v = ex.get("kernel", "family")) {
        cfg.kernel.family = *v;
        if (!name_registered(cfg.kernel.family, registered_kernel_families())) {
            ex.unknown("kernel.family", ex.line_of("kernel", "family"),
                       "unknown kernel family '" + cfg.kernel.family +
                           "'; registered: " + join(registered_kernel_families()));
        }
    } else {
        ex.constraint("kernel.family", 0, "required");
    }
    {
        // delta and sigma are aliases; both accept a scalar or a list.
        auto d = ex.get_double_list("kernel", "delta");
        auto s = ex.get_double_list("kernel", "sigma");
        if (d && s) {
            ex.constraint("kernel.delta", ex.line_of("kernel", "delta"),
                          "give either delta or sigma, not both");
        }
        if (d) cfg.kernel.deltas = *d;
        if (s) cfg.kernel.deltas = *s;
        for (double dv : cfg.kernel.deltas) {
            if (!(dv > 0.0)) {
                ex.constraint("kernel.delta", std::max(ex.line_of("kernel", "delta"), ex.line_of("kernel", "sigma")),
                              "tolerance/scale must be > 0, got " + io::format_double(dv));
                break;
            }
        }
        if (cfg.kernel.deltas.empty() && cfg.kernel.family != "exact_binomial" && !cfg.kernel.family.empty()) {
            ex.constraint("kernel.delta", 0, "required for family " + cfg.kernel.family);
        }
    }
    if (auto v = ex.get("kernel", "metric")) {
        cfg.kernel.metric = *v;
        if (!name_registered(cfg.kernel.metric, registered_metrics())) {
            ex.unknown("kernel.metric", ex.line_of("kernel", "metric"),
                       "unknown metric '" + cfg.kernel.metric + "'; registered: " + join(registered_metrics()));
        }
    }
    if (auto v = ex.get_double("kernel", "c")) {
        if (!(*v > 0.0)) {
            ex.constraint("kernel.c", ex.line_of("kernel", "c"), "normalizing bound must be > 0");
        } else {
            cfg.kernel.c = *v;
        }
    }
    if (auto v = ex.get_string_list("kernel", "families")) {
        cfg.kernel.child_families = *v;
        for (const auto& f : cfg.kernel.child_families) {
            if (f != "uniform_ball" && f != "epanechnikov" && f != "gaussian") {
                ex.unknown("kernel.families", ex.line_of("kernel", "families"),
                           "product child family '" + f + "' must be uniform_ball, epanechnikov or gaussian");
            }
        }
    }
    if (cfg.kernel.family == "product") {
        if (cfg.kernel.child_families.empty()) {
            ex.constraint("kernel.families", 0, "product kernel requires per-component families");
        } else if (cfg.kernel.child_families.size() != cfg.kernel.deltas.size()) {
            ex.constraint("kernel.families", ex.line_of("kernel", "families"),
                          "families and delta lists must have equal length");
        }
    }
    if (cfg.kernel.family == "exact_binomial") {
        if (cfg.model.name != "fossil") {
            ex.constraint("kernel.family", ex.line_of("kernel", "family"),
                          "exact_binomial acceptance is defined only for the fossil model");
        }
        if (cfg.algorithm != "rejection") {
            ex.constraint("kernel.family", ex.line_of("kernel", "family"),
                          "exact_binomial acceptance requires algorithm = rejection");
        }
    }

    // [algorithm]
    cfg.alg.n_target = ex.get_u64("algorithm", "n_target");
    cfg.alg.n_proposals = ex.get_u64("algorithm", "n_proposals");
    cfg.alg.n_steps = ex.get_u64("algorithm", "n_steps");
    if (auto v = ex.get_u64("algorithm", "burn_in")) cfg.alg.burn_in = *v;
    if (auto v = ex.get_u64("algorithm", "thin")) cfg.alg.thin = *v;
    cfg.alg.n = ex.get_u64("algorithm", "n");
    cfg.alg.m = ex.get_u64("algorithm", "m");
    if (auto v = ex.get_double("algorithm", "proposal_scale")) cfg.alg.proposal_scale = *v;
    if (auto v = ex.get_u64("algorithm", "n_chains")) cfg.alg.n_chains = static_cast<unsigned>(*v);

    if (cfg.algorithm == "rejection" || cfg.algorithm == "weighted") {
        if (cfg.alg.n_target.has_value() == cfg.alg.n_proposals.has_value()) {
            ex.constraint("algorithm.n_target", 0,
                          "exactly one of n_target / n_proposals must be set for " + cfg.algorithm);
        }
        if (cfg.algorithm == "weighted" && !cfg.alg.n_proposals) {
            ex.constraint("algorithm.n_proposals", 0, "weighted mode needs n_proposals");
        }
        if (cfg.alg.n_target && *cfg.alg.n_target == 0) {
            ex.constraint("algorithm.n_target", ex.line_of("algorithm", "n_target"), "must be >= 1");
        }
        if (cfg.alg.n_proposals && *cfg.alg.n_proposals == 0) {
            ex.constraint("algorithm.n_proposals", ex.line_of("algorithm", "n_proposals"), "must be >= 1");
        }
    } else if (cfg.algorithm == "mcmc-c" || cfg.algorithm == "mcmc-d") {
        if (!cfg.alg.n_steps || *cfg.alg.n_steps == 0) {
            ex.constraint("algorithm.n_steps", 0, "mcmc needs n_steps >= 1");
        } else if (cfg.alg.burn_in >= *cfg.alg.n_steps) {
            ex.constraint("algorithm.burn_in", ex.line_of("algorithm", "burn_in"),
                          "burn_in must be smaller than n_steps");
        }
        if (cfg.alg.thin == 0) {
            ex.constraint("algorithm.thin", ex.line_of("algorithm", "thin"), "thin must be >= 1");
        }
        if (cfg.alg.n_chains == 0) {
            ex.constraint("algorithm.n_chains", ex.line_of("algorithm", "n_chains"), "must be >= 1");
        }
        if (!(cfg.alg.proposal_scale > 0.0)) {
            ex.constraint("algorithm.proposal_scale", ex.line_of("algorithm", "proposal_scale"),
                          "must be > 0");
        }
    } else if (cfg.algorithm == "evidence") {
        if (!cfg.alg.n || *cfg.alg.n == 0) ex.constraint("algorithm.n", 0, "evidence needs n >= 1");
        if (!cfg.alg.m || *cfg.alg.m == 0) ex.constraint("algorithm.m", 0, "evidence needs m >= 1");
    }

    // [output]
    if (auto v = ex.get("output", "samples")) cfg.output.samples = *v;
    if (auto v = ex.get("output", "diagnostics")) cfg.output.diagnostics = *v;
    if (cfg.output.samples.empty()) ex.constraint("output.samples", 0, "must not be empty");
    if (cfg.output.diagnostics.empty()) ex.constraint("output.diagnostics", 0, "must not be empty");

    // model-specific parameter validation
    if (cfg.model.name == "fossil") {
        validate_fossil_params(cfg.model, ex, model_line);
    }
    if (cfg.model.name == "discrete_oracle" && cfg.model.params.count("obs_index")) {
        char* end = nullptr;
        const unsigned long long idx = std::strtoull(cfg.model.params.at("obs_index").c_str(), &end, 10);
        if (end == cfg.model.params.at("obs_index").c_str() || *end != '\0' || idx > 7) {
            ex.constraint("model.obs_index", model_line, "obs_index must be an integer in [0, 7]");
        }
    }

    // kernel-vs-model dimension compatibility (model output dims are fixed)
    if (auto dim = model_output_dim(cfg.model); dim && !cfg.kernel.deltas.empty()) {
        const std::size_t nd = cfg.kernel.deltas.size();
        if (cfg.kernel.family == "gaussian" && nd != 1 && nd != *dim) {
            ex.constraint("kernel.delta", 0,
                          "gaussian kernel needs 1 or " + std::to_string(*dim) + " scales for model " +
                              cfg.model.name + ", got " + std::to_string(nd));
        } else if (cfg.kernel.family == "product" && nd != *dim) {
            ex.constraint("kernel.delta", 0,
                          "product kernel needs " + std::to_string(*dim) + " per-component tolerances, got " +
                              std::to_string(nd));
        } else if ((cfg.kernel.family == "uniform_ball" || cfg.kernel.family == "epanechnikov") && nd != 1) {
            ex.constraint("kernel.delta", 0, "ball kernels take a single tolerance");
        }
    }

    ex.report_unconsumed({
        {"experiment", {"algorithm", "seed", "workers"}},
        {"model", {"name", "lambda_grid", "tau", "alpha", "mu", "epochs", "counts", "rate_multipliers",
                   "table_seed", "obs_index"}},
        {"kernel", {"family", "delta", "sigma", "metric", "c", "families"}},
        {"algorithm", {"n_target", "n_proposals", "n_steps", "burn_in", "thin", "n", "m",
                       "proposal_scale", "n_chains"}},
        {"output", {"samples", "diagnostics"}},
    });

    if (!issues.empty()) throw ConfigParseError(std::move(issues));
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "algorithm = " << cfg.algorithm << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "workers = " << cfg.workers << "\n";
    os << "\n[model]\n";
    os << "name = " << cfg.model.name << "\n";
    for (const auto& [k, v] : cfg.model.params) os << k << " = " << v << "\n";
    os << "\n[kernel]\n";
    os << "family = " << cfg.kernel.family << "\n";
    if (!cfg.kernel.deltas.empty()) {
        os << "delta = ";
        for (std::size_t i = 0; i < cfg.kernel.deltas.size(); ++i) {
            if (i) os << ",";
            os << io::format_double(cfg.kernel.deltas[i]);
        }
        os << "\n";
    }
    os << "metric = " << cfg.kernel.metric << "\n";
    if (cfg.kernel.c) os << "c = " << io::format_double(*cfg.kernel.c) << "\n";
    if (!cfg.kernel.child_families.empty()) {
        os << "families = ";
        for (std::size_t i = 0; i < cfg.kernel.child_families.size(); ++i) {
            if (i) os << ",";
            os << cfg.kernel.child_families[i];
        }
        os << "\n";
    }
    os << "\n[algorithm]\n";
    if (cfg.alg.n_target) os << "n_target = " << *cfg.alg.n_target << "\n";
    if (cfg.alg.n_proposals) os << "n_proposals = " << *cfg.alg.n_proposals << "\n";
    if (cfg.alg.n_steps) os << "n_steps = " << *cfg.alg.n_steps << "\n";
    if (cfg.alg.burn_in != 0) os << "burn_in = " << cfg.alg.burn_in << "\n";
    if (cfg.alg.thin != 1) os << "thin = " << cfg.alg.thin << "\n";
    if (cfg.alg.n) os << "n = " << *cfg.alg.n << "\n";
    if (cfg.alg.m) os << "m = " << *cfg.alg.m << "\n";
    if (cfg.alg.proposal_scale != 1.0) os << "proposal_scale = " << io::format_double(cfg.alg.proposal_scale) << "\n";
    if (cfg.alg.n_chains != 1) os << "n_chains = " << cfg.alg.n_chains << "\n";
    os << "\n[output]\n";
    os << "samples = " << cfg.output.samples << "\n";
    os << "diagnostics = " << cfg.output.diagnostics << "\n";
    return os.str();
}

// --- running ---

namespace {

std::vector<double> parse_list_or_throw(const std::string& value, const std::string& field) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        char* end = nullptr;
        const double d = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end == tok.c_str() || *end != '\0') {
            throw Error(field + ": not a number list: " + value);
        }
        out.push_back(d);
    }
    if (out.empty()) throw Error(field + ": empty list");
    return out;
}

double parse_double_or(const std::map<std::string, std::string>& params, const std::string& key,
                       double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    char* end = nullptr;
    const double d = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') throw Error("model." + key + ": not a number");
    return d;
}

std::uint64_t parse_u64_or(const std::map<std::string, std::string>& params, const std::string& key,
                           std::uint64_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    return std::strtoull(it->second.c_str(), nullptr, 10);
}

/// A model bound to concrete prior/simulator/observation objects plus the
/// default proposal for its parameter space.
struct BoundModel {
    std::shared_ptr<const void> keepalive;
    const Prior* prior = nullptr;
    const Simulator* sim = nullptr;
    DataVector obs;
    std::shared_ptr<const ProposalKernel> proposal;
    const models::FossilModel* fossil = nullptr;
};

BoundModel bind_model(const ExperimentConfig& cfg) {
    BoundModel bm;
    const auto& params = cfg.model.params;
    if (cfg.model.name == "toy_mixture") {
        auto m = std::make_shared<models::ToyMixtureModel>();
        bm.keepalive = m;
        bm.prior = &m->prior();
        bm.sim = &m->simulator();
        bm.obs = m->observation();
        bm.proposal = std::make_shared<GaussianWalkProposal>(std::vector<double>{cfg.alg.proposal_scale});
    } else if (cfg.model.name == "discrete_oracle") {
        auto m = std::make_shared<models::DiscreteOracleModel>(
            models::DiscreteOracleModel::make_default_spec(parse_u64_or(params, "table_seed", 1234)));
        bm.keepalive = m;
        bm.prior = &m->prior();
        bm.sim = &m->simulator();
        bm.obs = m->observation(parse_u64_or(params, "obs_index", 0));
        bm.proposal = std::shared_ptr<const ProposalKernel>(m, &m->grid_proposal());
    } else if (cfg.model.name == "pritchard") {
        auto m = std::make_shared<models::PritchardSyntheticModel>();
        bm.keepalive = m;
        bm.prior = &m->prior();
        bm.sim = &m->simulator();
        bm.obs = m->observation();
        bm.proposal = std::make_shared<GaussianWalkProposal>(std::vector<double>{
            cfg.alg.proposal_scale * 0.1, cfg.alg.proposal_scale * 0.05, cfg.alg.proposal_scale * 20.0});
    } else if (cfg.model.name == "fossil") {
        models::FossilConfig fc;
        fc.lambda = 0.0; // drawn from the grid prior
        fc.mu = parse_double_or(params, "mu", 0.0);
        fc.tau = parse_double_or(params, "tau", 1.0);
        fc.alpha = parse_double_or(params, "alpha", 0.5);
        fc.epoch_boundaries = parse_list_or_throw(params.at("epochs"), "model.epochs");
        fc.observed_counts = parse_list_or_throw(params.at("counts"), "model.counts");
        if (params.count("rate_multipliers")) {
            fc.rate_multipliers = parse_list_or_throw(params.at("rate_multipliers"), "model.rate_multipliers");
        }
        auto grid = parse_list_or_throw(params.at("lambda_grid"), "model.lambda_grid");
        auto m = std::make_shared<models::FossilModel>(std::move(fc), std::move(grid));
        bm.keepalive = m;
        bm.fossil = m.get();
        bm.prior = &m->prior();
        bm.sim = &m->simulator();
        bm.obs = m->observation();
        bm.proposal = std::shared_ptr<const ProposalKernel>(m, &m->grid_proposal());
    } else {
        throw Error("unknown model: " + cfg.model.name);
    }
    return bm;
}

DiscrepancyKernel build_kernel(const KernelSpec& spec, std::size_t dim) {
    Metric metric = Metric::Euclidean;
    if (spec.metric == "max_component") metric = Metric::MaxComponent;
    if (spec.metric == "max_relative") metric = Metric::MaxRelative;

    std::vector<double> deltas = spec.deltas;
    if (deltas.size() == 1 && dim > 1 && spec.family == "gaussian") {
        deltas.assign(dim, deltas[0]);
    }

    DiscrepancyKernel k = [&] {
        if (spec.family == "uniform_ball") return DiscrepancyKernel::uniform_ball(deltas.at(0), metric, dim);
        if (spec.family == "epanechnikov") return DiscrepancyKernel::epanechnikov(deltas.at(0), metric, dim);
        if (spec.family == "gaussian") return DiscrepancyKernel::gaussian(deltas);
        if (spec.family == "product") {
            std::vector<DiscrepancyKernel> children;
            for (std::size_t i = 0; i < spec.child_families.size(); ++i) {
                const auto& f = spec.child_families[i];
                if (f == "uniform_ball") {
                    children.push_back(DiscrepancyKernel::uniform_ball(deltas.at(i), metric, 1));
                } else if (f == "epanechnikov") {
                    children.push_back(DiscrepancyKernel::epanechnikov(deltas.at(i), metric, 1));
                } else {
                    children.push_back(DiscrepancyKernel::gaussian(deltas.at(i)));
                }
            }
            return DiscrepancyKernel::product(std::move(children));
        }
        throw Error("unknown kernel family: " + spec.family);
    }();
    if (spec.c) k = k.with_bound(*spec.c);
    return k;
}

json meta_to_json(const SampleMeta& meta, const WeightedSample& sample) {
    json j;
    j["seed"] = meta.seed;
    j["algorithm"] = meta.algorithm;
    j["kernel"] = meta.kernel;
    j["total_proposals"] = meta.total_proposals;
    j["n_entries"] = sample.size();
    j["acceptance_rate"] = meta.acceptance_rate;
    j["all_weights_zero"] = meta.all_weights_zero;
    if (!meta.all_weights_zero) j["effective_sample_size"] = effective_sample_size(sample);
    if (!meta.per_chain_acceptance.empty()) j["per_chain_acceptance"] = meta.per_chain_acceptance;
    if (meta.nonfinite_ratio_rejects > 0) j["nonfinite_ratio_rejects"] = meta.nonfinite_ratio_rejects;
    return j;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir_in) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::path out_dir = out_dir_in;
    if (const char* env = std::getenv("ABC_OUT_DIR"); env != nullptr && *env != '\0') {
        out_dir = env;
    }
    std::filesystem::create_directories(out_dir);

    BoundModel bm = bind_model(cfg);
    RunResult result;
    json diag;
    diag["model"] = cfg.model.name;
    diag["workers"] = cfg.workers;
    diag["config_echo"] = serialize_config(cfg);

    const bool exact_binomial = cfg.kernel.family == "exact_binomial";
    std::optional<DiscrepancyKernel> kernel;
    if (!exact_binomial) kernel = build_kernel(cfg.kernel, bm.obs.dim());

    if (cfg.algorithm == "evidence") {
        const EvidenceEstimate est =
            estimate_evidence(*bm.prior, *bm.sim, bm.obs, *kernel, *cfg.alg.n, *cfg.alg.m, cfg.seed,
                              cfg.workers);
        diag["algorithm"] = "evidence";
        diag["estimate"] = est.value;
        diag["std_error"] = est.std_error;
        diag["n"] = est.n;
        diag["m"] = est.m;
        diag["seed"] = cfg.seed;
        diag["kernel"] = kernel->describe();
    } else {
        WeightedSample sample = [&] {
            if (cfg.algorithm == "rejection" || cfg.algorithm == "weighted") {
                RejectionConfig rc(exact_binomial ? DiscrepancyKernel::uniform_ball(1.0) : *kernel);
                rc.n_target = cfg.alg.n_target;
                rc.n_proposals = cfg.alg.n_proposals;
                rc.seed = cfg.seed;
                rc.workers = cfg.workers;
                if (cfg.algorithm == "weighted") return run_weighted(*bm.prior, *bm.sim, bm.obs, rc);
                if (exact_binomial) {
                    const auto* fossil = bm.fossil;
                    return run_rejection_with_rule(
                        *bm.prior, *bm.sim, bm.obs,
                        [fossil](const DataVector& d, const DataVector& x) {
                            return fossil->accept_prob(d, x);
                        },
                        rc, "exact_binomial(alpha=" + io::format_double(fossil->config().alpha) + ")");
                }
                return run_rejection(*bm.prior, *bm.sim, bm.obs, rc);
            }
            McmcConfig mc(*kernel, bm.proposal);
            mc.algorithm = cfg.algorithm == "mcmc-d" ? McmcAlgorithm::D : McmcAlgorithm::C;
            mc.n_steps = *cfg.alg.n_steps;
            mc.burn_in = cfg.alg.burn_in;
            mc.thin = cfg.alg.thin;
            mc.seed = cfg.seed;
            mc.n_chains = cfg.alg.n_chains;
            return run_chain(mc, *bm.prior, *bm.sim, bm.obs);
        }();

        const std::filesystem::path samples_path = out_dir / cfg.output.samples;
        io::write_samples_csv(samples_path, sample);
        result.artifacts.push_back(samples_path);
        diag.update(meta_to_json(sample.meta, sample));
    }

    const auto t1 = std::chrono::steady_clock::now();
    diag["runtime_seconds"] = std::chrono::duration<double>(t1 - t0).count();

    const std::filesystem::path diag_path = out_dir / cfg.output.diagnostics;
    io::write_text_atomic(diag_path, diag.dump(2) + "\n");
    result.artifacts.push_back(diag_path);
    result.diagnostics_json = diag.dump(2);
    return result;
}

std::filesystem::path write_toy_density_table(const std::string& error_kind, double delta,
                                              double grid_lo, double grid_hi, std::size_t grid_points,
                                              const std::filesystem::path& out_path) {
    if (grid_points < 2) throw Error("density table needs at least 2 grid points");
    if (!(grid_hi > grid_lo)) throw Error("density table: grid_hi must exceed grid_lo");
    const bool uniform = error_kind == "uniform";
    if (!uniform && error_kind != "gaussian") {
        throw Error("unknown toy error kind '" + error_kind + "'; expected uniform or gaussian");
    }
    std::vector<double> grid(grid_points), dens(grid_points);
    const double h = (grid_hi - grid_lo) / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        grid[i] = grid_lo + h * static_cast<double>(i);
        dens[i] = uniform ? models::toy_posterior_uniform_error(grid[i], delta)
                          : models::toy_posterior_gaussian_error(grid[i], delta);
    }
    // Trapezoid normalization over the same grid.
    double z = 0.0;
    for (std::size_t i = 0; i + 1 < grid_points; ++i) z += 0.5 * (dens[i] + dens[i + 1]) * h;
    if (!(z > 0.0)) throw Error("density table: zero mass on the grid");
    for (double& d : dens) d /= z;
    io::write_density_table_csv(out_path, grid, dens);
    return out_path;
}

// --- presets ---

namespace {

std::string toy_posteriors_config(const std::string& family, double delta, const std::string& tag) {
    std::ostringstream os;
    os << "# Toy-model posterior sampling for the " << family << " acceptance kernel, delta = " << delta
       << "\n[experiment]\nalgorithm = rejection\nseed = 20090731\nworkers = 4\n\n[model]\nname = toy_mixture\n\n"
       << "[kernel]\nfamily = " << family << "\n";
    if (family == "gaussian") {
        // sigma^2 = delta^2/3 matches the variance of a U[-delta, delta] error.
        os << "sigma = " << io::format_double(delta / std::sqrt(3.0)) << "\n";
    } else {
        os << "delta = " << io::format_double(delta) << "\nmetric = euclidean\n";
    }
    os << "\n[algorithm]\nn_target = 200000\n\n[output]\nsamples = " << tag
       << "_samples.csv\ndiagnostics = " << tag << "_diagnostics.json\n";
    return os.str();
}

std::string fossil_mini_config() {
    return R"(# Miniature fossil-record study: exact binomial acceptance on a lambda grid
[experiment]
algorithm = rejection
seed = 424242
workers = 4

[model]
name = fossil
lambda_grid = 0.4,0.7,1.0,1.3,1.6
tau = 1.8
alpha = 0.35
mu = 0
epochs = -1.2,-0.6
counts = 1,2

[kernel]
family = exact_binomial

[algorithm]
n_target = 20000

[output]
samples = fossil_samples.csv
diagnostics = fossil_diagnostics.json
)";
}

std::string relative_box_config() {
    return R"(# Three-summary synthetic study: 10% relative-error box acceptance
[experiment]
algorithm = rejection
seed = 1999
workers = 4

[model]
name = pritchard

[kernel]
family = uniform_ball
delta = 0.1
metric = max_relative

[algorithm]
n_target = 20000

[output]
samples = relative_box_samples.csv
diagnostics = relative_box_diagnostics.json
)";
}

} // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> v;
        Preset toy;
        toy.name = "toy_posteriors";
        toy.description =
            "Toy-model posteriors for uniform and gaussian error at delta = 1 and delta = 0.1, "
            "plus the four analytic density tables";
        toy.files = {
            {"toy_uniform_delta1.ini", toy_posteriors_config("uniform_ball", 1.0, "toy_uniform_delta1")},
            {"toy_gaussian_delta1.ini", toy_posteriors_config("gaussian", 1.0, "toy_gaussian_delta1")},
            {"toy_uniform_delta01.ini", toy_posteriors_config("uniform_ball", 0.1, "toy_uniform_delta01")},
            {"toy_gaussian_delta01.ini", toy_posteriors_config("gaussian", 0.1, "toy_gaussian_delta01")},
        };
        v.push_back(std::move(toy));

        Preset fossil;
        fossil.name = "fossil_mini";
        fossil.description = "Miniature fossil branching-process study with exact binomial acceptance";
        fossil.files = {{"fossil_mini.ini", fossil_mini_config()}};
        v.push_back(std::move(fossil));

        Preset box;
        box.name = "relative_box";
        box.description = "Relative-error box acceptance on the three-summary synthetic model";
        box.files = {{"relative_box.ini", relative_box_config()}};
        v.push_back(std::move(box));
        return v;
    }();
    return all;
}

namespace {

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw Error("unknown preset '" + name + "'; available: " + known);
}

} // namespace

std::vector<std::filesystem::path> write_preset(const std::string& name,
                                                const std::filesystem::path& out_dir) {
    const Preset& p = find_preset(name);
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& [fname, text] : p.files) {
        const auto path = out_dir / fname;
        io::write_text_atomic(path, text);
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> run_preset(const std::string& name,
                                              const std::filesystem::path& out_dir,
                                              std::optional<std::uint64_t> seed_override,
                                              std::optional<unsigned> workers_override) {
    const Preset& p = find_preset(name);
    std::vector<std::filesystem::path> artifacts = write_preset(name, out_dir);
    for (const auto& [fname, text] : p.files) {
        ExperimentConfig cfg = parse_config(text);
        if (seed_override) cfg.seed = *seed_override;
        if (workers_override) cfg.workers = *workers_override;
        RunResult r = run_experiment(cfg, out_dir);
        artifacts.insert(artifacts.end(), r.artifacts.begin(), r.artifacts.end());
    }
    if (name == "toy_posteriors") {
        artifacts.push_back(write_toy_density_table("uniform", 1.0, -10.0, 10.0, 2001,
                                                    out_dir / "toy_oracle_uniform_delta1.csv"));
        artifacts.push_back(write_toy_density_table("gaussian", 1.0, -10.0, 10.0, 2001,
                                                    out_dir / "toy_oracle_gaussian_delta1.csv"));
        artifacts.push_back(write_toy_density_table("uniform", 0.1, -10.0, 10.0, 2001,
                                                    out_dir / "toy_oracle_uniform_delta01.csv"));
        artifacts.push_back(write_toy_density_table("gaussian", 0.1, -10.0, 10.0, 2001,
                                                    out_dir / "toy_oracle_gaussian_delta01.csv"));
    }
    return artifacts;
}

} // namespace abc
