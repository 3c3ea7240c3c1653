#include "pnp/poisson.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

namespace {

void require_compatible(double defect, double tolerance) {
    if (!(std::abs(defect) <= tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "incompatible Neumann data: boundary flux plus total charge = " << defect
           << " (tolerance " << tolerance << ")";
        throw CompatibilityError(os.str(), defect);
    }
}

}  // namespace

BoundaryData2D BoundaryData2D::uniform(const Grid2D& grid, double sigma) {
    return edges(grid, sigma, sigma, sigma, sigma);
}

BoundaryData2D BoundaryData2D::edges(const Grid2D& grid, double left, double right,
                                     double bottom, double top) {
    BoundaryData2D bc;
    bc.faces(Edge::Left).assign(grid.ny(), left);
    bc.faces(Edge::Right).assign(grid.ny(), right);
    bc.faces(Edge::Bottom).assign(grid.nx(), bottom);
    bc.faces(Edge::Top).assign(grid.nx(), top);
    return bc;
}

double BoundaryData2D::max_abs() const {
    double m = 0.0;
    for (const auto& edge : faces_) {
        for (double v : edge) m = std::max(m, std::abs(v));
    }
    return m;
}

double BoundaryData2D::face_sum() const {
    double sum = 0.0;
    for (const auto& edge : faces_) {
        for (double v : edge) sum += v;
    }
    return sum;
}

bool BoundaryData2D::fits(const Grid2D& grid) const {
    return faces_[slot(Edge::Left)].size() == grid.ny() &&
           faces_[slot(Edge::Right)].size() == grid.ny() &&
           faces_[slot(Edge::Bottom)].size() == grid.nx() &&
           faces_[slot(Edge::Top)].size() == grid.nx();
}

ChargeSource ChargeSource::from_species(std::span<const Species> species, std::size_t cells) {
    ChargeSource src;
    src.density.assign(cells, 0.0);
    for (const auto& s : species) {
        if (s.c.size() != cells) {
            throw Error("species '" + s.name + "' does not match the grid size");
        }
        for (std::size_t j = 0; j < cells; ++j) src.density[j] += s.charge * s.c[j];
    }
    return src;
}

double compatibility_defect(const ChargeSource& source, const BoundaryData1D& bc,
                            const Grid1D& grid) {
    double sum = 0.0;
    for (double s : source.density) sum += s;
    return bc.sigma_a + bc.sigma_b + grid.h() * sum;
}

double compatibility_defect(const ChargeSource& source, const BoundaryData2D& bc,
                            const Grid2D& grid) {
    double sum = 0.0;
    for (double s : source.density) sum += s;
    return grid.h() * bc.face_sum() + grid.cell_volume() * sum;
}

PotentialField solve_poisson_1d(const ChargeSource& source, const BoundaryData1D& bc,
                                const Grid1D& grid, double tolerance) {
    const std::size_t n = grid.n();
    if (source.density.size() != n) throw Error("charge source does not match the grid size");
    require_compatible(compatibility_defect(source, bc, grid), tolerance);

    const double h2 = grid.h() * grid.h();
    // Pinned tridiagonal system: sub/diag/super/rhs per row.
    std::vector<double> sub(n, 1.0), diag(n, -2.0), sup(n, 1.0), rhs(n);
    diag[0] = 1.0;
    sup[0] = 0.0;
    sub[0] = 0.0;
    rhs[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) rhs[j] = -source.density[j] * h2;
    diag[n - 1] = -1.0;
    sup[n - 1] = 0.0;
    rhs[n - 1] -= bc.sigma_b * grid.h();

    // Forward elimination.
    for (std::size_t j = 1; j < n; ++j) {
        const double m = sub[j] / diag[j - 1];
        diag[j] -= m * sup[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    PotentialField psi;
    psi.values.assign(n, 0.0);
    psi.values[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t j = n - 1; j-- > 1;) {
        psi.values[j] = (rhs[j] - sup[j] * psi.values[j + 1]) / diag[j];
    }
    psi.values[0] = 0.0;
    return psi;
}

struct PoissonSolver2D::Factorization {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

PoissonSolver2D::PoissonSolver2D(const Grid2D& grid) : grid_(grid) {
    const std::size_t nx = grid.nx();
    const std::size_t ny = grid.ny();
    const auto cells = static_cast<Eigen::Index>(grid.size());

    // Unknowns are cells 1..N-1; cell 0 is pinned and its column drops out.
    // Stored negated so the matrix is symmetric positive definite.
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(5 * grid.size());
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t p = grid.index(i, j);
            if (p == 0) continue;
            const auto row = static_cast<Eigen::Index>(p - 1);
            double neighbours = 0.0;
            auto couple = [&](std::size_t q) {
                neighbours += 1.0;
                if (q != 0) entries.emplace_back(row, static_cast<Eigen::Index>(q - 1), -1.0);
            };
            if (i > 0) couple(grid.index(i - 1, j));
            if (i + 1 < nx) couple(grid.index(i + 1, j));
            if (j > 0) couple(grid.index(i, j - 1));
            if (j + 1 < ny) couple(grid.index(i, j + 1));
            entries.emplace_back(row, row, neighbours);
        }
    }
    Eigen::SparseMatrix<double> m(cells - 1, cells - 1);
    m.setFromTriplets(entries.begin(), entries.end());

    auto f = std::make_shared<Factorization>();
    f->ldlt.compute(m);
    if (f->ldlt.info() != Eigen::Success) {
        throw SolverError("factorization of the 2D Poisson matrix failed");
    }
    factor_ = std::move(f);
}

PotentialField PoissonSolver2D::solve(const ChargeSource& source, const BoundaryData2D& bc,
                                      double tolerance) const {
    const std::size_t nx = grid_.nx();
    const std::size_t ny = grid_.ny();
    if (source.density.size() != grid_.size()) {
        throw Error("charge source does not match the grid size");
    }
    if (!bc.fits(grid_)) throw Error("boundary data does not match the grid");
    require_compatible(compatibility_defect(source, bc, grid_), tolerance);

    const double h = grid_.h();
    const double h2 = h * h;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(grid_.size() - 1));
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t p = grid_.index(i, j);
            if (p == 0) continue;
            double flux = 0.0;
            if (i == 0) flux += bc.sigma(Edge::Left, j);
            if (i + 1 == nx) flux += bc.sigma(Edge::Right, j);
            if (j == 0) flux += bc.sigma(Edge::Bottom, i);
            if (j + 1 == ny) flux += bc.sigma(Edge::Top, i);
            rhs[static_cast<Eigen::Index>(p - 1)] = source.density[p] * h2 + flux * h;
        }
    }
    const Eigen::VectorXd x = factor_->ldlt.solve(rhs);
    if (factor_->ldlt.info() != Eigen::Success) throw SolverError("2D Poisson solve failed");

    PotentialField psi;
    psi.values.assign(grid_.size(), 0.0);
    for (Eigen::Index r = 0; r < x.size(); ++r) {
        psi.values[static_cast<std::size_t>(r) + 1] = x[r];
    }
    return psi;
}

PotentialField solve_poisson_2d(const ChargeSource& source, const BoundaryData2D& bc,
                                const Grid2D& grid, double tolerance) {
    return PoissonSolver2D(grid).solve(source, bc, tolerance);
}

std::vector<double> potential_increments_1d(const PotentialField& psi, const BoundaryData1D& bc,
                                            const Grid1D& grid) {
    const std::size_t n = grid.n();
    std::vector<double> a(n + 1);
    a[0] = -grid.h() * bc.sigma_a;
    for (std::size_t j = 1; j < n; ++j) a[j] = psi.values[j] - psi.values[j - 1];
    a[n] = grid.h() * bc.sigma_b;
    return a;
}

}  // namespace pnp
