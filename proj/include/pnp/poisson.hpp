#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/species.hpp"

namespace pnp {

inline constexpr double kDefaultCompatibilityTolerance = 1e-10;

/// Neumann data in 1D: psi_x(a) = -sigma_a, psi_x(b) = sigma_b (outward derivative sigma).
struct BoundaryData1D {
    double sigma_a = 0.0;
    double sigma_b = 0.0;
};

/**
 * @brief Outward normal derivative of the potential, one value per boundary face.
 *
 * Left/Right faces are indexed by j (ny entries), Bottom/Top faces by i
 * (nx entries).
 */
class BoundaryData2D {
public:
    BoundaryData2D() = default;

    static BoundaryData2D uniform(const Grid2D& grid, double sigma);
    static BoundaryData2D edges(const Grid2D& grid, double left, double right, double bottom,
                                double top);

    double sigma(Edge e, std::size_t k) const { return faces_[slot(e)][k]; }
    std::span<const double> faces(Edge e) const { return faces_[slot(e)]; }
    std::vector<double>& faces(Edge e) { return faces_[slot(e)]; }

    /// Largest |sigma| over all faces.
    double max_abs() const;
    /// Sum of sigma over all faces, edges in Left, Right, Bottom, Top order.
    double face_sum() const;

    /// Matches the face counts of grid.
    bool fits(const Grid2D& grid) const;

private:
    static std::size_t slot(Edge e) { return static_cast<std::size_t>(e); }

    std::array<std::vector<double>, 4> faces_;
};

/// Net charge density s_j = sum_i q_i c^i_j that drives the Poisson equation.
struct ChargeSource {
    std::vector<double> density;

    /// All species must share `cells`; an empty species list gives a zero source.
    static ChargeSource from_species(std::span<const Species> species, std::size_t cells);
};

/// sigma_a + sigma_b + h * sum(s). Zero (to round-off) when the problem is solvable.
double compatibility_defect(const ChargeSource& source, const BoundaryData1D& bc,
                            const Grid1D& grid);
/// h * sum over faces of sigma + h^2 * sum(s).
double compatibility_defect(const ChargeSource& source, const BoundaryData2D& bc,
                            const Grid2D& grid);

/**
 * @brief Solves the pinned 1D Neumann problem by a tridiagonal sweep.
 *
 * Row 0 is psi_0 = 0, interior rows are psi_{j-1} - 2 psi_j + psi_{j+1} = -s_j h^2 and
 * the last row is psi_{n-2} - psi_{n-1} = -s_{n-1} h^2 - sigma_b h. The left boundary
 * row is implied by compatibility.
 *
 * Throws CompatibilityError when |defect| > tolerance.
 */
PotentialField solve_poisson_1d(const ChargeSource& source, const BoundaryData1D& bc,
                                const Grid1D& grid,
                                double tolerance = kDefaultCompatibilityTolerance);

/// Stateless 1D counterpart of PoissonSolver2D.
class PoissonSolver1D {
public:
    explicit PoissonSolver1D(const Grid1D& grid) : grid_(grid) {}

    const Grid1D& grid() const noexcept { return grid_; }
    PotentialField solve(const ChargeSource& source, const BoundaryData1D& bc,
                         double tolerance = kDefaultCompatibilityTolerance) const {
        return solve_poisson_1d(source, bc, grid_, tolerance);
    }

private:
    Grid1D grid_;
};

/**
 * @brief Direct solver for the pinned 2D Neumann problem on one grid.
 *
 * The five-point matrix depends only on the grid, so it is factorized once at
 * construction and reused by every solve. Instances are immutable and share
 * the factorization on copy.
 */
class PoissonSolver2D {
public:
    explicit PoissonSolver2D(const Grid2D& grid);

    const Grid2D& grid() const noexcept { return grid_; }

    /// Throws CompatibilityError when |defect| > tolerance.
    PotentialField solve(const ChargeSource& source, const BoundaryData2D& bc,
                         double tolerance = kDefaultCompatibilityTolerance) const;

private:
    struct Factorization;

    Grid2D grid_;
    std::shared_ptr<const Factorization> factor_;
};

/// One-shot convenience wrapper; prefer PoissonSolver2D inside time loops.
PotentialField solve_poisson_2d(const ChargeSource& source, const BoundaryData2D& bc,
                                const Grid2D& grid,
                                double tolerance = kDefaultCompatibilityTolerance);

/**
 * @brief Face increments of the potential, A_0 = -h sigma_a, A_j = psi_j - psi_{j-1}
 * at interior faces, A_n = h sigma_b.
 *
 * Returned vector has n + 1 entries, one per face. Consecutive increments satisfy
 * A_j - A_{j-1} = -h^2 s_j.
 */
std::vector<double> potential_increments_1d(const PotentialField& psi, const BoundaryData1D& bc,
                                            const Grid1D& grid);

}  // namespace pnp
