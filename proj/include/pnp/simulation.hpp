#pragma once

#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "pnp/diagnostics.hpp"
#include "pnp/errors.hpp"
#include "pnp/grid.hpp"
#include "pnp/poisson.hpp"
#include "pnp/scheme.hpp"
#include "pnp/species.hpp"

namespace pnp {

/// Picks the step actually taken. `requested` empty means "as large as allowed".
/// Strict throws CflViolationError when requested > bound; Warn passes requested
/// through; Auto clamps to safety * bound.
double resolve_time_step(std::optional<double> requested, CflPolicy policy, double safety,
                         double bound);

/**
 * @brief Coupled time loop state: grid, Neumann data, species and the potential
 * that belongs to the current concentrations.
 *
 * Each step() advances all species with forward Euler against the current
 * potential, then re-solves Poisson so potential() always matches species().
 */
template <class GridT>
class Simulation {
public:
    using Grid = GridT;
    using Boundary = std::conditional_t<std::is_same_v<GridT, Grid1D>, BoundaryData1D,
                                        BoundaryData2D>;
    using Solver = std::conditional_t<std::is_same_v<GridT, Grid1D>, PoissonSolver1D,
                                      PoissonSolver2D>;

    Simulation(const Grid& grid, Boundary bc, std::vector<Species> species,
               double compatibility_tolerance = kDefaultCompatibilityTolerance)
        : solver_(grid), bc_(std::move(bc)), species_(std::move(species)),
          tolerance_(compatibility_tolerance) {
        for (const auto& s : species_) {
            if (s.c.size() != grid.size()) {
                throw Error("species '" + s.name + "' does not match the grid size");
            }
        }
        if constexpr (std::is_same_v<GridT, Grid1D>) {
            ratio_bound_ = cfl_multi(species_, bc_, grid).lambda_multi;
        } else {
            ratio_bound_ = cfl_2d(bc_, grid.h());
        }
        psi_ = solve_potential();
    }

    const Grid& grid() const noexcept { return solver_.grid(); }
    const Boundary& boundary() const noexcept { return bc_; }
    const std::vector<Species>& species() const noexcept { return species_; }
    const PotentialField& potential() const noexcept { return psi_; }
    double time() const noexcept { return time_; }

    /// Bound on k / h^2 (lambda_multi in 1D, cfl_2d in 2D).
    double ratio_bound() const noexcept { return ratio_bound_; }
    /// Largest step with the positivity guarantee: h^2 * ratio_bound().
    double step_bound() const noexcept { return grid().h() * grid().h() * ratio_bound_; }

    StepReport step(double k, CflPolicy policy) {
        StepReport r = euler_step(species_, psi_, grid(), k, policy, time_);
        psi_ = solve_potential();
        time_ = r.time;
        return r;
    }

    /// Sets the clock, e.g. to land exactly on step_count * k.
    void set_time(double t) noexcept { time_ = t; }

    EnergyReport energy() const { return free_energy(species_, psi_, bc_, grid()); }
    double flatness() const { return g_flatness(species_, psi_, grid()); }
    std::vector<double> masses() const {
        std::vector<double> m;
        for (const auto& s : species_) m.push_back(discrete_mass(s.c, grid().cell_volume()));
        return m;
    }

private:
    PotentialField solve_potential() const {
        return solver_.solve(ChargeSource::from_species(species_, grid().size()), bc_,
                             tolerance_);
    }

    Solver solver_;
    Boundary bc_;
    std::vector<Species> species_;
    double tolerance_;
    double ratio_bound_ = 0.0;
    PotentialField psi_;
    double time_ = 0.0;
};

using Simulation1D = Simulation<Grid1D>;
using Simulation2D = Simulation<Grid2D>;

}  // namespace pnp
