#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pnp/config.hpp"
#include "pnp/diagnostics.hpp"
#include "pnp/species.hpp"

namespace pnp {

enum class Termination { TFinalReached, SteadyState, Error };

std::string to_string(Termination t);

/// Why a run ended in error; selects the CLI exit status.
enum class FailureKind { None, Config, Compatibility, Positivity, Solver };

struct RunRecord {
    std::vector<TraceRow> rows;  ///< initial state plus every traced step
    std::vector<Species> final_species;
    PotentialField final_psi;
    Termination termination = Termination::TFinalReached;
    FailureKind failure = FailureKind::None;
    std::string message;
    std::optional<std::size_t> steady_row;  ///< row index where steady state was detected
    double step = 0.0;                      ///< nominal k after CFL resolution
    std::size_t steps = 0;
    std::vector<std::string> warnings;
};

/// 0 success, 2 config, 3 compatibility, 4 CFL/positivity, 5 solver failure.
int exit_code(const RunRecord& record);
int exit_code(FailureKind kind);

/**
 * @brief Runs the configured simulation.
 *
 * When `out_dir` is non-empty it receives trace.csv (t,dt,mass_<s>...,F,dissipation,min_c)
 * and snapshot_<step>.csv files (x[,y],c_<s>...,psi). Library errors raised while
 * running are captured in the record rather than thrown.
 */
RunRecord run(const SimConfig& config, const std::filesystem::path& out_dir = {});

/// Snapshot CSV text for a 1D or 2D state.
std::string snapshot_csv(const Grid1D& grid, const std::vector<Species>& species,
                         const PotentialField& psi);
std::string snapshot_csv(const Grid2D& grid, const std::vector<Species>& species,
                         const PotentialField& psi);

}  // namespace pnp
