#include "pnp/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

CflPolicy parse_cfl_policy(const std::string& name) {
    if (name == "strict") return CflPolicy::Strict;
    if (name == "warn") return CflPolicy::Warn;
    if (name == "auto") return CflPolicy::Auto;
    throw Error("unknown CFL policy '" + name + "' (expected strict, warn or auto)");
}

std::string to_string(CflPolicy policy) {
    switch (policy) {
        case CflPolicy::Strict: return "strict";
        case CflPolicy::Warn: return "warn";
        case CflPolicy::Auto: return "auto";
    }
    return "unknown";
}

double cfl_lambda0(const BoundaryData1D& bc, double h) {
    return 1.0 / (std::exp(-h * bc.sigma_b / 2.0) + std::exp(-h * bc.sigma_a / 2.0));
}

CflBound cfl_multi(std::span<const Species> species, const BoundaryData1D& bc,
                   const Grid1D& grid) {
    CflBound bound;
    bound.lambda0 = cfl_lambda0(bc, grid.h());
    for (const auto& s : species) {
        double sum = 0.0;
        for (double v : s.c) sum += s.charge * v;
        if (s.charge > 0.0) bound.c_plus += grid.h() * sum;
        if (s.charge < 0.0) bound.c_minus += grid.h() * sum;
    }
    bound.lambda_multi = std::exp(grid.h() * bound.c_minus / 2.0) * bound.lambda0;
    return bound;
}

double cfl_2d(const BoundaryData2D& bc, double h) {
    return 1.0 / (4.0 * std::exp(h * bc.max_abs() / 2.0));
}

namespace {

inline double face_flux(double c_lo, double c_hi, double q_increment, double h) {
    const double half = 0.5 * q_increment;
    return (c_hi * std::exp(half) - c_lo * std::exp(-half)) / h;
}

}  // namespace

std::vector<double> semi_discrete_rhs_1d(const Species& species, const PotentialField& psi,
                                         const Grid1D& grid) {
    const std::size_t n = grid.n();
    const double h = grid.h();
    const auto& c = species.c;
    std::vector<double> q(n, 0.0);
    double left = 0.0;  // flux through face j (zero at the boundary)
    for (std::size_t j = 0; j < n; ++j) {
        double right = 0.0;
        if (j + 1 < n) {
            right = face_flux(c[j], c[j + 1], species.charge * (psi[j + 1] - psi[j]), h);
        }
        q[j] = (right - left) / h;
        left = right;
    }
    return q;
}

std::vector<double> semi_discrete_rhs_2d(const Species& species, const PotentialField& psi,
                                         const Grid2D& grid) {
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    const double h = grid.h();
    const auto& c = species.c;
    std::vector<double> q(grid.size(), 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t p = grid.index(i, j);
            if (i + 1 < nx) {
                const std::size_t e = grid.index(i + 1, j);
                const double f = face_flux(c[p], c[e], species.charge * (psi[e] - psi[p]), h) / h;
                q[p] += f;
                q[e] -= f;
            }
            if (j + 1 < ny) {
                const std::size_t t = grid.index(i, j + 1);
                const double f = face_flux(c[p], c[t], species.charge * (psi[t] - psi[p]), h) / h;
                q[p] += f;
                q[t] -= f;
            }
        }
    }
    return q;
}

namespace {

template <class Grid>
StepReport euler_step_impl(std::vector<Species>& states, const PotentialField& psi,
                           const Grid& grid, double k, CflPolicy policy, double time) {
    if (!(k > 0.0)) throw Error("time step must be positive");
    std::vector<std::vector<double>> next;
    next.reserve(states.size());
    for (const auto& s : states) {
        std::vector<double> rhs;
        if constexpr (std::is_same_v<Grid, Grid1D>) {
            rhs = semi_discrete_rhs_1d(s, psi, grid);
        } else {
            rhs = semi_discrete_rhs_2d(s, psi, grid);
        }
        for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] = s.c[j] + k * rhs[j];
        next.push_back(std::move(rhs));
    }

    StepReport report;
    report.time = time + k;
    report.dt_used = k;
    report.min_c = std::numeric_limits<double>::infinity();
    for (const auto& c : next) {
        for (double v : c) report.min_c = std::min(report.min_c, v);
    }
    report.positive = !(report.min_c < 0.0);
    if (!report.positive && policy == CflPolicy::Strict) {
        std::ostringstream os;
        os.precision(17);
        os << "positivity violated: min concentration " << report.min_c << " after step k = " << k;
        throw PositivityViolationError(os.str(), report.min_c);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        states[i].c = std::move(next[i]);
        report.mass.push_back(discrete_mass(states[i].c, grid.cell_volume()));
    }
    return report;
}

}  // namespace

StepReport euler_step(std::vector<Species>& states, const PotentialField& psi,
                      const Grid1D& grid, double k, CflPolicy policy, double time) {
    return euler_step_impl(states, psi, grid, k, policy, time);
}

StepReport euler_step(std::vector<Species>& states, const PotentialField& psi,
                      const Grid2D& grid, double k, CflPolicy policy, double time) {
    return euler_step_impl(states, psi, grid, k, policy, time);
}

CoupledStep step_coupled(std::vector<Species>& states, const BoundaryData1D& bc,
                         const Grid1D& grid, double k, CflPolicy policy, double tolerance) {
    CoupledStep out;
    out.psi = solve_poisson_1d(ChargeSource::from_species(states, grid.size()), bc, grid,
                               tolerance);
    out.report = euler_step(states, out.psi, grid, k, policy);
    return out;
}

CoupledStep step_coupled(std::vector<Species>& states, const BoundaryData2D& bc,
                         const PoissonSolver2D& solver, double k, CflPolicy policy,
                         double tolerance) {
    CoupledStep out;
    out.psi = solver.solve(ChargeSource::from_species(states, solver.grid().size()), bc,
                           tolerance);
    out.report = euler_step(states, out.psi, solver.grid(), k, policy);
    return out;
}

}  // namespace pnp
