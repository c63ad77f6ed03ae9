#ifndef ABC_EXPERIMENT_HPP
#define ABC_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abc/errors.hpp"

namespace abc {

/// One problem found while parsing or validating a config document.
struct ConfigIssue {
    enum class Kind { Parse, UnknownName, ConstraintViolation };
    Kind kind = Kind::Parse;
    std::string field; // "section.key" when known
    int line = 0;      // 0 when not tied to a source line
    std::string message;
};

/// Carries every issue found, not just the first.
class ConfigParseError : public Error {
public:
    explicit ConfigParseError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct KernelSpec {
    std::string family = "uniform_ball"; // uniform_ball|epanechnikov|gaussian|product|exact_binomial
    std::vector<double> deltas;          // tolerance/sigma, one per component (or one, replicated)
    std::string metric = "euclidean";    // euclidean|max_component|max_relative
    std::optional<double> c;             // explicit normalizing bound
    std::vector<std::string> child_families; // product: per-component families

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

struct ModelSpec {
    std::string name; // toy_mixture|discrete_oracle|pritchard|fossil
    std::map<std::string, std::string> params;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct AlgorithmSpec {
    std::optional<std::uint64_t> n_target;
    std::optional<std::uint64_t> n_proposals;
    std::optional<std::uint64_t> n_steps;
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 1;
    std::optional<std::uint64_t> n; // evidence outer draws
    std::optional<std::uint64_t> m; // evidence inner simulations
    double proposal_scale = 1.0;
    unsigned n_chains = 1;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

struct OutputSpec {
    std::string samples = "samples.csv";
    std::string diagnostics = "diagnostics.json";

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
    std::string algorithm; // rejection|weighted|mcmc-c|mcmc-d|evidence
    ModelSpec model;
    KernelSpec kernel;
    AlgorithmSpec alg;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    OutputSpec output;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the sectioned key=value experiment document. Returns the fully
/// validated config; otherwise throws ConfigParseError carrying every
/// problem found (parse errors, unknown names against the registries,
/// constraint violations).
ExperimentConfig parse_config(const std::string& text);

/// Canonical document form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

const std::vector<std::string>& registered_algorithms();
const std::vector<std::string>& registered_models();
const std::vector<std::string>& registered_kernel_families();
const std::vector<std::string>& registered_metrics();

struct RunResult {
    std::vector<std::filesystem::path> artifacts;
    std::string diagnostics_json;
};

/// Executes one experiment and writes its artifacts under out_dir:
/// a samples CSV (sampler modes) and a diagnostics JSON. The environment
/// variable ABC_OUT_DIR overrides out_dir when set.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Density-table mode: analytic toy-model posterior on a uniform grid,
/// normalized to integrate to 1, written as `theta,normalized_density`.
/// error_kind is "uniform" or "gaussian".
std::filesystem::path write_toy_density_table(const std::string& error_kind, double delta,
                                              double grid_lo, double grid_hi, std::size_t grid_points,
                                              const std::filesystem::path& out_path);

/// A shipped experiment bundle: config files plus any oracle tables its
/// runner produces.
struct Preset {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> files; // filename -> config text
};

const std::vector<Preset>& presets();

/// Writes the preset's config files into out_dir and returns their paths.
std::vector<std::filesystem::path> write_preset(const std::string& name,
                                                const std::filesystem::path& out_dir);

/// Writes, then runs, every config in the preset; the toy_posteriors preset also
/// emits the four analytic density tables.
std::vector<std::filesystem::path> run_preset(const std::string& name,
                                              const std::filesystem::path& out_dir,
                                              std::optional<std::uint64_t> seed_override = {},
                                              std::optional<unsigned> workers_override = {});

} // namespace abc

#endif // ABC_EXPERIMENT_HPP
