#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/poisson.hpp"
#include "pnp/species.hpp"

namespace pnp {

/// What to do when a step could break nonnegativity.
enum class CflPolicy {
    Strict,  ///< reject steps above the bound; throw on any negative concentration
    Warn,    ///< accept any step, flag negative output in the StepReport
    Auto,    ///< clamp the step to safety * bound
};

CflPolicy parse_cfl_policy(const std::string& name);
std::string to_string(CflPolicy policy);

/**
 * @brief Positivity limits on the mesh ratio k / h^2.
 *
 * lambda0 is the single-species bound 1 / (e^{-h sigma_b / 2} + e^{-h sigma_a / 2}).
 * With several species the increments of q*psi can grow by the total negative
 * charge C-, and the bound shrinks to e^{h C- / 2} * lambda0. The multi-species
 * argument assumes |q_i| = 1.
 */
struct CflBound {
    double lambda0 = 0.0;
    double lambda_multi = 0.0;
    double c_minus = 0.0;  ///< h * sum of q_i c_j over negatively charged species (<= 0)
    double c_plus = 0.0;   ///< same over positively charged species (>= 0)

    /// Largest step with guaranteed nonnegativity on a grid of width h.
    double max_step(double h) const noexcept { return h * h * lambda_multi; }
};

double cfl_lambda0(const BoundaryData1D& bc, double h);
CflBound cfl_multi(std::span<const Species> species, const BoundaryData1D& bc,
                   const Grid1D& grid);

/// Conservative mesh-ratio bound for the 2D update: 1 / (4 e^{h max|sigma| / 2}).
/// Not backed by a proof; the strict policy still checks every output for sign.
double cfl_2d(const BoundaryData2D& bc, double h);

/**
 * @brief Right-hand side Q of the semi-discrete scheme for one species.
 *
 * Face fluxes use the increment form
 *   F_{j+1/2} = (c_{j+1} e^{q A_j / 2} - c_j e^{-q A_j / 2}) / h,  A_j = psi_{j+1} - psi_j,
 * which equals e^{-q psi_{j+1/2}} (g_{j+1} - g_j) / h with g = c e^{q psi} but never
 * evaluates e^{q psi} itself. Boundary faces carry zero flux.
 */
std::vector<double> semi_discrete_rhs_1d(const Species& species, const PotentialField& psi,
                                         const Grid1D& grid);
/// Same flux applied direction by direction on the five-point stencil.
std::vector<double> semi_discrete_rhs_2d(const Species& species, const PotentialField& psi,
                                         const Grid2D& grid);

struct StepReport {
    double time = 0.0;      ///< time after the step
    double dt_used = 0.0;
    double min_c = 0.0;
    std::vector<double> mass;  ///< per species, after the step
    bool positive = true;      ///< false when some concentration went negative
};

/**
 * @brief Forward Euler update c <- c + k Q(c, q psi) for every species against one psi.
 *
 * Under CflPolicy::Strict a negative output throws PositivityViolationError and
 * leaves `states` untouched. No step-size check is made here; see Simulation1D.
 */
StepReport euler_step(std::vector<Species>& states, const PotentialField& psi,
                      const Grid1D& grid, double k, CflPolicy policy, double time = 0.0);
StepReport euler_step(std::vector<Species>& states, const PotentialField& psi,
                      const Grid2D& grid, double k, CflPolicy policy, double time = 0.0);

struct CoupledStep {
    PotentialField psi;  ///< potential used for the update (from the incoming state)
    StepReport report;
};

/// One full cycle: solve Poisson for the current concentrations, then Euler-step each species.
CoupledStep step_coupled(std::vector<Species>& states, const BoundaryData1D& bc,
                         const Grid1D& grid, double k, CflPolicy policy = CflPolicy::Strict,
                         double tolerance = kDefaultCompatibilityTolerance);
CoupledStep step_coupled(std::vector<Species>& states, const BoundaryData2D& bc,
                         const PoissonSolver2D& solver, double k,
                         CflPolicy policy = CflPolicy::Strict,
                         double tolerance = kDefaultCompatibilityTolerance);

}  // namespace pnp
