#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/initial.hpp"
#include "pnp/poisson.hpp"
#include "pnp/simulation.hpp"

namespace pnp {

enum class SplineEnd {
    NotAKnot,  ///< third derivative continuous at the second and second-to-last knots
    Natural,   ///< second derivative zero at both ends
};

/**
 * @brief Interpolating cubic spline through (knots, values).
 *
 * Not-a-knot ends reproduce cubics exactly; natural ends reproduce linears only.
 * Queries outside the knot range use the polynomial of the nearest end interval.
 */
class CubicSpline {
public:
    /// Knots must be strictly increasing, at least 4 of them.
    CubicSpline(std::vector<double> knots, std::vector<double> values,
                SplineEnd end = SplineEnd::NotAKnot);

    double operator()(double x) const;
    std::vector<double> operator()(std::span<const double> xs) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at knots
};

std::vector<double> cubic_spline_eval(std::span<const double> knots, std::span<const double> values,
                                      std::span<const double> queries,
                                      SplineEnd end = SplineEnd::NotAKnot);

/// max_i |values[i] - reference(points[i])|.
double linf_error(std::span<const double> points, std::span<const double> values,
                  const CubicSpline& reference);

/// Tensor-product not-a-knot spline of fine cell values, evaluated at coarse cell
/// centers (splines along y for each fine column, then along x).
std::vector<double> spline_resample(const Grid2D& fine, std::span<const double> values,
                                    const Grid2D& coarse);
std::vector<double> spline_resample(const Grid1D& fine, std::span<const double> values,
                                    const Grid1D& coarse);

struct ConvergenceRow {
    double h = 0.0;
    double error_c = 0.0;
    std::optional<double> order_c;
    double error_psi = 0.0;
    std::optional<double> order_psi;
};

/// Fills order = log2(e_prev / e) for every row after the first. A zero error
/// on either side leaves the order empty.
std::vector<ConvergenceRow> observed_orders(std::vector<ConvergenceRow> rows);

/// CSV with header h,error_c,order_c,error_psi,order_psi; missing orders are empty cells.
std::string convergence_csv(std::span<const ConvergenceRow> rows);

struct SpeciesSpec {
    std::string name;
    double charge = 1.0;
    InitialCondition initial;
};

/// Neumann data by edge. 1D uses sigma_a (x = a) and sigma_b (x = b) only.
struct EdgeSigma {
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    double left = 0.0;
    double right = 0.0;
    double bottom = 0.0;
    double top = 0.0;
};

struct TestCase {
    std::string name;
    std::string description;
    int dimension = 1;
    double ax = 0.0, bx = 1.0;  ///< 1D interval or x extent
    double ay = 0.0, by = 1.0;  ///< y extent (2D only)
    std::vector<SpeciesSpec> species;
    EdgeSigma sigma;
    double t_final = 0.5;
    std::optional<double> expected_free_energy;
    std::vector<double> h_list;
    double h_ref = 0.0;

    Grid1D grid_1d(double h) const;
    Grid2D grid_2d(double h) const;
    Simulation1D simulation_1d(double h) const;
    Simulation2D simulation_2d(double h) const;
};

/**
 * @brief The eight reference problems on the unit interval / square.
 *
 *   paper-1d-case{1,2,3}    one species, sigma_a = -1, sigma_b = 0, unit mass:
 *                           c = 1, c = 2 - 2x, c = 2 on [0.5, 1] and 0 elsewhere
 *   paper-1d2s-case{1,2,3}  q = (+1, -1), masses (2, 1), same sigma:
 *                           (2, 1), (4 - 4x, 2x), (4x, 2 - 2x)
 *   paper-2d-case1          c = 4, sigma = -1 on every edge
 *   paper-2d-case2          c = 2, sigma = -1 on x = 1 and y = 0, 0 elsewhere
 */
std::vector<TestCase> builtin_cases();
std::optional<TestCase> find_builtin_case(const std::string& name);

/// Advances with fixed step k; the last step is shortened to land on t_final.
template <class Sim>
void advance_to(Sim& sim, double t_final, double k, CflPolicy policy = CflPolicy::Warn);

struct ConvergenceOptions {
    /// k = step_fraction * h^2 * ratio bound, so the O(k) time error tracks O(h^2).
    double step_fraction = 0.4;
    /// Use the reference grid's step on every grid, leaving only spatial error.
    bool common_step = false;
};

/**
 * @brief Runs `tc` to t_final on every h in `hs` and on h_ref, interpolates the
 * reference with not-a-knot splines and tabulates l-infinity errors and orders.
 *
 * The potential is compared after shifting the interpolated reference so it is 0
 * at the coarse gauge cell, matching the pin of the coarse solution. The c error is
 * the worst species.
 */
std::vector<ConvergenceRow> run_convergence_study(const TestCase& tc, std::span<const double> hs,
                                                  double h_ref, double t_final,
                                                  const ConvergenceOptions& options = {});

}  // namespace pnp
