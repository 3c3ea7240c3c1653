#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pnp/diagnostics.hpp"
#include "pnp/harness.hpp"
#include "pnp/scheme.hpp"

namespace pnp {

struct GridSpec {
    int dimension = 1;
    double ax = 0.0, bx = 1.0;  ///< "a"/"b" in 1D
    double ay = 0.0, by = 1.0;
    std::size_t nx = 0;         ///< "n" in 1D
    std::size_t ny = 0;
};

struct TimeSpec {
    std::optional<double> t_final;
    bool steady_state = false;
    std::optional<double> k;  ///< empty means "auto"
    double max_time = 100.0;  ///< cap for steady-state mode
};

struct CflSpec {
    CflPolicy policy = CflPolicy::Auto;
    double safety = 0.9;
};

struct OutputSpec {
    std::string directory;
    std::size_t snapshot_every = 0;  ///< 0: first and last snapshot only
    std::size_t trace_every = 1;
};

struct ToleranceSpec {
    double compatibility = kDefaultCompatibilityTolerance;
    SteadyTolerances steady;
};

/**
 * @brief A validated run description.
 *
 * JSON layout (all quantities dimensionless):
 * @code
 * {
 *   "grid":     {"dimension": 1, "a": 0, "b": 1, "n": 160}
 *               | {"dimension": 2, "ax": 0, "bx": 1, "ay": 0, "by": 1, "nx": 40, "ny": 40},
 *   "species":  [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 1}}],
 *   "boundary": {"sigma_a": -1, "sigma_b": 0}
 *               | {"left": -1, "right": -1, "bottom": -1, "top": -1} | {"sigma": -1},
 *   "time":     {"t_final": 10, "k": "auto"} | {"steady_state": true, "max_time": 50},
 *   "cfl":      {"policy": "strict" | "warn" | "auto", "safety": 0.9},
 *   "output":   {"directory": "out", "snapshot_every": 1000, "trace_every": 1},
 *   "tolerances": {"compatibility": 1e-10, "steady_residual": 1e-8, "steady_g_flatness": 1e-6}
 * }
 * @endcode
 * Initial conditions: constant {value}, linear {intercept, slope}, step {at, left, right},
 * product {x: profile, y: profile}, tabulated {values}.
 */
struct SimConfig {
    GridSpec grid;
    std::vector<SpeciesSpec> species;
    EdgeSigma boundary;
    TimeSpec time;
    CflSpec cfl;
    OutputSpec output;
    ToleranceSpec tolerances;
    double compatibility_defect = 0.0;  ///< filled in by parse_config
};

/// Throws ConfigError (with a line number for JSON syntax errors) or CompatibilityError.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

/// Convergence-study view of a config (requires time.t_final).
TestCase to_test_case(const SimConfig& config);

}  // namespace pnp
