#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schwinger/continuum.hpp"
#include "schwinger/model.hpp"
#include "schwinger/noise.hpp"

namespace schwinger {

enum class ExperimentKind { evolve, trotter, noise, entropy, continuum, compare };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Either an explicit list of points or start/stop/step.
struct TimeGrid {
    double start = 0.0;
    double stop = 5.0;
    double step = 0.1;
    std::vector<double> points;

    std::vector<double> values() const;
};

struct TrotterConfig {
    double cycle_time = 0.75;
    double dt_III = 0.0;
};

struct CompareConfig {
    std::vector<double> cycle_times{0.75, 1.5, 3.0};
};

struct RunConfig {
    ExperimentKind kind = ExperimentKind::evolve;
    ModelParams model;
    /// False when j0 was left to default to minimal_j0(model).
    bool j0_given = false;
    TimeGrid time;
    /// "bare_vacuum" or "snapshot" (read from initial_snapshot).
    std::string initial = "bare_vacuum";
    std::string initial_snapshot;
    std::vector<std::string> observables{"nu", "loschmidt", "lambda", "entropy", "magnetization"};
    int entropy_cut = 0;  // 0 means N/2
    double tol = 1e-9;
    std::optional<TrotterConfig> trotter;
    std::optional<NoiseParams> noise;
    long hiding_shots = 100000;
    CompareConfig compare;
    std::optional<SweepConfig> continuum;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

/// Command-line overrides, applied after the file.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    /// "dotted.path=json-value" assignments, e.g. "model.n_sites=10".
    std::vector<std::string> assignments;
};

/// Parses the document (JSON, comments allowed), applies overrides, fills
/// defaults and validates. Unknown keys and invalid values throw ConfigError
/// naming the field. `expected` rejects a mismatching "kind".
RunConfig parse_config(const nlohmann::json& document, const ConfigOverrides& overrides = {},
                       std::optional<ExperimentKind> expected = std::nullopt);
RunConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {},
                            std::optional<ExperimentKind> expected = std::nullopt);
RunConfig load_config(const std::string& path, const ConfigOverrides& overrides = {},
                      std::optional<ExperimentKind> expected = std::nullopt);

/// Fully explicit form: every default that influences the run is present.
nlohmann::json to_json(const RunConfig& config);

} // namespace schwinger
