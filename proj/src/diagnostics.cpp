#include "pnp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "pnp/errors.hpp"

namespace pnp {

namespace {

double entropy_sum(std::span<const Species> states) {
    double sum = 0.0;
    for (const auto& s : states) {
        for (double c : s.c) {
            if (c > 0.0) sum += c * std::log(c);
        }
    }
    return sum;
}

double potential_sum(std::span<const Species> states, const PotentialField& psi) {
    double sum = 0.0;
    for (const auto& s : states) {
        for (std::size_t j = 0; j < s.c.size(); ++j) sum += 0.5 * s.charge * s.c[j] * psi[j];
    }
    return sum;
}

// (ln g_hi - ln g_lo) * e^{-q psi_face} (g_hi - g_lo) in increment form.
inline double face_dissipation(double c_lo, double c_hi, double q_increment) {
    const double half = 0.5 * q_increment;
    const double weighted_dg = c_hi * std::exp(half) - c_lo * std::exp(-half);
    const double dlog = std::log(c_hi) - std::log(c_lo) + q_increment;
    // Both factors share the sign of g_hi - g_lo; round-off near equilibrium can split them.
    return std::abs(dlog) * std::abs(weighted_dg);
}

bool all_positive(std::span<const Species> states) {
    for (const auto& s : states) {
        for (double c : s.c) {
            if (!(c > 0.0)) return false;
        }
    }
    return true;
}

// Visits every interior face (lo, hi) in row-major order.
template <class Fn>
void for_each_face(const Grid1D& grid, Fn&& fn) {
    for (std::size_t j = 0; j + 1 < grid.n(); ++j) fn(j, j + 1);
}

template <class Fn>
void for_each_face(const Grid2D& grid, Fn&& fn) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (std::size_t j = 0; j < grid.ny(); ++j) {
            const std::size_t p = grid.index(i, j);
            if (i + 1 < grid.nx()) fn(p, grid.index(i + 1, j));
            if (j + 1 < grid.ny()) fn(p, grid.index(i, j + 1));
        }
    }
}

template <class Grid>
std::optional<double> dissipation_impl(std::span<const Species> states,
                                       const PotentialField& psi, const Grid& grid,
                                       double prefactor) {
    if (!all_positive(states)) return std::nullopt;
    double sum = 0.0;
    for (const auto& s : states) {
        for_each_face(grid, [&](std::size_t lo, std::size_t hi) {
            sum += face_dissipation(s.c[lo], s.c[hi], s.charge * (psi[hi] - psi[lo]));
        });
    }
    return -prefactor * sum;
}

template <class Grid>
double g_flatness_impl(std::span<const Species> states, const PotentialField& psi,
                       const Grid& grid) {
    double worst = 0.0;
    std::vector<double> g(grid.size());
    for (const auto& s : states) {
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.size(); ++j) shift = std::max(shift, s.charge * psi[j]);
        double gmax = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            g[j] = s.c[j] * std::exp(s.charge * psi[j] - shift);
            gmax = std::max(gmax, g[j]);
        }
        if (!(gmax > 0.0)) continue;
        double dmax = 0.0;
        for_each_face(grid, [&](std::size_t lo, std::size_t hi) {
            dmax = std::max(dmax, std::abs(g[hi] - g[lo]));
        });
        worst = std::max(worst, dmax / gmax);
    }
    return worst;
}

}  // namespace

EnergyReport free_energy(std::span<const Species> states, const PotentialField& psi,
                         const BoundaryData1D& bc, const Grid1D& grid) {
    EnergyReport r;
    const double h = grid.h();
    r.entropy_part = h * entropy_sum(states);
    r.potential_part = h * potential_sum(states, psi);
    r.boundary_part = 0.5 * bc.sigma_a * psi[0] + 0.5 * bc.sigma_b * psi[grid.n() - 1];
    r.F = r.entropy_part + r.potential_part + r.boundary_part;
    r.dissipation = dissipation_rate(states, psi, grid);
    return r;
}

EnergyReport free_energy(std::span<const Species> states, const PotentialField& psi,
                         const BoundaryData2D& bc, const Grid2D& grid) {
    EnergyReport r;
    const double h = grid.h();
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    r.entropy_part = grid.cell_volume() * entropy_sum(states);
    r.potential_part = grid.cell_volume() * potential_sum(states, psi);
    double boundary = 0.0;
    for (std::size_t j = 0; j < ny; ++j) boundary += bc.sigma(Edge::Left, j) * psi[grid.index(0, j)];
    for (std::size_t j = 0; j < ny; ++j) {
        boundary += bc.sigma(Edge::Right, j) * psi[grid.index(nx - 1, j)];
    }
    for (std::size_t i = 0; i < nx; ++i) boundary += bc.sigma(Edge::Bottom, i) * psi[grid.index(i, 0)];
    for (std::size_t i = 0; i < nx; ++i) {
        boundary += bc.sigma(Edge::Top, i) * psi[grid.index(i, ny - 1)];
    }
    r.boundary_part = 0.5 * h * boundary;
    r.F = r.entropy_part + r.potential_part + r.boundary_part;
    r.dissipation = dissipation_rate(states, psi, grid);
    return r;
}

std::optional<double> dissipation_rate(std::span<const Species> states, const PotentialField& psi,
                                       const Grid1D& grid) {
    return dissipation_impl(states, psi, grid, 1.0 / grid.h());
}

std::optional<double> dissipation_rate(std::span<const Species> states, const PotentialField& psi,
                                       const Grid2D& grid) {
    return dissipation_impl(states, psi, grid, 1.0);
}

double g_flatness(std::span<const Species> states, const PotentialField& psi, const Grid1D& grid) {
    return g_flatness_impl(states, psi, grid);
}

double g_flatness(std::span<const Species> states, const PotentialField& psi, const Grid2D& grid) {
    return g_flatness_impl(states, psi, grid);
}

template <class Grid>
SteadyStateReport detect_steady(std::span<const Species> prev, std::span<const Species> next,
                                const PotentialField& psi, double k, const Grid& grid,
                                const SteadyTolerances& tol) {
    if (!(k > 0.0)) throw Error("detect_steady: time step must be positive");
    if (prev.size() != next.size()) throw Error("detect_steady: species count mismatch");
    SteadyStateReport r;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        for (std::size_t j = 0; j < prev[i].c.size(); ++j) {
            r.residual = std::max(r.residual, std::abs(next[i].c[j] - prev[i].c[j]) / k);
        }
    }
    r.g_flatness = g_flatness(next, psi, grid);
    r.converged = r.residual < tol.residual && r.g_flatness < tol.g_flatness;
    return r;
}

template SteadyStateReport detect_steady<Grid1D>(std::span<const Species>,
                                                 std::span<const Species>,
                                                 const PotentialField&, double, const Grid1D&,
                                                 const SteadyTolerances&);
template SteadyStateReport detect_steady<Grid2D>(std::span<const Species>,
                                                 std::span<const Species>,
                                                 const PotentialField&, double, const Grid2D&,
                                                 const SteadyTolerances&);

bool long_time_energy_stability(std::span<const TraceRow> rows,
                                std::optional<std::size_t> steady_row,
                                const EnergyStabilityTolerances& tol) {
    for (std::size_t n = 1; n < rows.size(); ++n) {
        if (rows[n].F > rows[n - 1].F + tol.step_increase) return false;
    }
    if (steady_row && !rows.empty()) {
        if (*steady_row >= rows.size()) return false;
        if (std::abs(rows.back().F - rows[*steady_row].F) > tol.plateau) return false;
    }
    return true;
}

}  // namespace pnp
