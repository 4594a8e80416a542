#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>
#include "json.hpp"

#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/errors.hpp"
#include "gvar/gamma_norms.hpp"
#include "gvar/random.hpp"

namespace gvar::experiments {

using json = nlohmann::json;

/// Invalid configuration; field() names the offending entry ("engine.samples").
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct EngineSpec {
    std::uint64_t samples = 100000;
    Index paths = 100000;
    std::uint64_t seed = 1;
    double z = 3.0;
    SearchOptions search{};
};

struct OutputSpec {
    std::optional<std::string> report;
    std::optional<std::string> csv;
    std::optional<std::string> svg;
};

/// One experiment, read from a single JSON document:
///
///   {"partition": {"uniform": N} | {"weights": [..]} | {"boundaries": [..]},
///    "space": {"dim": d, "norm": "l1" | "l2" | "linf" | {"lp": p}},
///    "input": {"measure": [[..]..]} | {"density": [[..]..]} | {"generator_seed": s},
///    "document": <measure document>, "document_kind": "measure" | "density",
///    "engine": {"samples", "paths", "seed", "z", "search", "include_partial"},
///    "output": {"report", "csv", "svg"},
///    "suite": {suite-specific parameters}}
///
/// "document" replaces partition/space/input. Every section is optional; what a
/// command needs is checked when it runs.
struct ExperimentConfig {
    std::optional<AtomPartition> partition;
    std::optional<NormedSpace> space;
    std::optional<Eigen::MatrixXd> measure_values; ///< d x N
    std::optional<Eigen::MatrixXd> density_values; ///< d x N
    std::optional<std::uint64_t> generator_seed;
    EngineSpec engine;
    OutputSpec output;
    json suite = json::object();

    /// The configuration as parsed, with command-line overrides applied; echoed in reports.
    json echo = json::object();

    bool has_input() const { return measure_values || density_values || generator_seed; }
    RandomStream stream() const { return {engine.seed, 0}; }

    /// The configured step function (density values or generator draw). Requires partition and space.
    std::optional<StepFunction> density() const;
    /// The configured measure: explicit values, or the measure of density().
    std::optional<VectorMeasure> measure() const;
};

ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<Index> paths;
};

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

// Typed access to "suite" parameters with defaults and field-level errors.
std::uint64_t suite_uint(const ExperimentConfig& c, const std::string& key, std::uint64_t fallback);
double suite_double(const ExperimentConfig& c, const std::string& key, double fallback);
std::vector<Index> suite_indices(const ExperimentConfig& c, const std::string& key,
                                 std::vector<Index> fallback);
std::vector<json> suite_norms(const ExperimentConfig& c, const std::string& key, std::vector<json> fallback);

} // namespace gvar::experiments
