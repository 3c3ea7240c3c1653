#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/poisson.hpp"
#include "pnp/species.hpp"

namespace pnp {

/**
 * @brief Discrete free energy split into its parts.
 *
 * F = entropy_part + potential_part + boundary_part, where
 *   entropy_part   = vol * sum_i sum_j c ln c          (0 ln 0 = 0)
 *   potential_part = vol * sum_i sum_j q_i c psi / 2
 *   boundary_part  = (sigma_a psi_first + sigma_b psi_last) / 2          in 1D
 *                    (h / 2) * sum over boundary faces of sigma psi_cell in 2D
 */
struct EnergyReport {
    double F = 0.0;
    std::optional<double> dissipation;  ///< empty when some concentration is zero
    double entropy_part = 0.0;
    double potential_part = 0.0;
    double boundary_part = 0.0;
};

EnergyReport free_energy(std::span<const Species> states, const PotentialField& psi,
                         const BoundaryData1D& bc, const Grid1D& grid);
EnergyReport free_energy(std::span<const Species> states, const PotentialField& psi,
                         const BoundaryData2D& bc, const Grid2D& grid);

/**
 * @brief Time derivative of F along the semi-discrete flow,
 *   -(1/h) sum_i sum_faces e^{-q_i psi_face} (ln g_hi - ln g_lo)(g_hi - g_lo)   (1D),
 * with prefactor 1 instead of 1/h in 2D. Always <= 0.
 *
 * Returns nullopt when any concentration is <= 0 (ln g undefined there).
 */
std::optional<double> dissipation_rate(std::span<const Species> states, const PotentialField& psi,
                                       const Grid1D& grid);
std::optional<double> dissipation_rate(std::span<const Species> states, const PotentialField& psi,
                                       const Grid2D& grid);

/// max |g_hi - g_lo| over interior faces divided by max g, worst species.
/// g = c e^{q psi} is evaluated relative to max(q psi) so it cannot overflow.
double g_flatness(std::span<const Species> states, const PotentialField& psi, const Grid1D& grid);
double g_flatness(std::span<const Species> states, const PotentialField& psi, const Grid2D& grid);

struct SteadyTolerances {
    double residual = 1e-8;
    double g_flatness = 1e-6;
};

struct SteadyStateReport {
    double residual = 0.0;    ///< max |c_next - c_prev| / k over species and cells
    double g_flatness = 0.0;
    bool converged = false;
};

/// `psi` must belong to `next`.
template <class Grid>
SteadyStateReport detect_steady(std::span<const Species> prev, std::span<const Species> next,
                                const PotentialField& psi, double k, const Grid& grid,
                                const SteadyTolerances& tol = {});

/// One row of a run trace.
struct TraceRow {
    double t = 0.0;
    double dt = 0.0;
    std::vector<double> mass;
    double F = 0.0;
    std::optional<double> dissipation;
    double min_c = 0.0;
};

struct EnergyStabilityTolerances {
    double step_increase = 1e-10;  ///< allowed F^{n+1} - F^n
    double plateau = 1e-4;         ///< allowed |F(end) - F(steady)|
};

/**
 * @brief True when F never rises by more than `step_increase` between rows and,
 * if `steady_row` is given, F at the last row stays within `plateau` of F there.
 */
bool long_time_energy_stability(std::span<const TraceRow> rows,
                                std::optional<std::size_t> steady_row = std::nullopt,
                                const EnergyStabilityTolerances& tol = {});

}  // namespace pnp
