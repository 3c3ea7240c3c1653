#pragma once

#include <cstddef>

namespace pnp {

/**
 * @brief Uniform cell-centered partition of [a, b].
 *
 * Faces sit at a + h*j for j = 0..n; cell j (0-based) has center
 * a + h*(j + 1/2). Boundary data attaches to the two end faces.
 */
class Grid1D {
public:
    /// Throws InvalidGridError unless b > a and n >= 2.
    static Grid1D build(double a, double b, std::size_t n);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return n_; }

    double center(std::size_t j) const noexcept {
        return a_ + h_ * (static_cast<double>(j) + 0.5);
    }
    double cell_volume() const noexcept { return h_; }

private:
    Grid1D(double a, double b, std::size_t n);

    double a_;
    double b_;
    std::size_t n_;
    double h_;
};

enum class Edge { Left, Right, Bottom, Top };

/**
 * @brief Uniform cell-centered partition of [ax, bx] x [ay, by] with one
 * cell width h in both directions.
 *
 * Cells are stored row by row: cell (i, j), i along x and j along y, lives
 * at linear index i*ny + j.
 */
class Grid2D {
public:
    /// Throws InvalidGridError when the two directions disagree on h
    /// (relative tolerance 1e-12) or either direction has fewer than 1 cell.
    static Grid2D build(double ax, double bx, double ay, double by,
                        std::size_t nx, std::size_t ny);

    double ax() const noexcept { return ax_; }
    double bx() const noexcept { return bx_; }
    double ay() const noexcept { return ay_; }
    double by() const noexcept { return by_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return nx_ * ny_; }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * ny_ + j; }
    double center_x(std::size_t i) const noexcept {
        return ax_ + h_ * (static_cast<double>(i) + 0.5);
    }
    double center_y(std::size_t j) const noexcept {
        return ay_ + h_ * (static_cast<double>(j) + 0.5);
    }
    double cell_volume() const noexcept { return h_ * h_; }

    /// Number of boundary faces along an edge.
    std::size_t edge_faces(Edge e) const noexcept {
        return (e == Edge::Left || e == Edge::Right) ? ny_ : nx_;
    }

private:
    Grid2D(double ax, double bx, double ay, double by, std::size_t nx, std::size_t ny, double h);

    double ax_, bx_, ay_, by_;
    std::size_t nx_, ny_;
    double h_;
};

}  // namespace pnp
