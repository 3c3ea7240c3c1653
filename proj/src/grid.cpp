#include "pnp/grid.hpp"

#include <cmath>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

Grid1D::Grid1D(double a, double b, std::size_t n)
    : a_(a), b_(b), n_(n), h_((b - a) / static_cast<double>(n)) {}

Grid1D Grid1D::build(double a, double b, std::size_t n) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        std::ostringstream os;
        os << "invalid grid: interval [" << a << ", " << b << "] has non-positive length";
        throw InvalidGridError(os.str());
    }
    if (n < 2) {
        throw InvalidGridError("invalid grid: at least 2 cells are required");
    }
    return Grid1D(a, b, n);
}

Grid2D::Grid2D(double ax, double bx, double ay, double by, std::size_t nx, std::size_t ny,
               double h)
    : ax_(ax), bx_(bx), ay_(ay), by_(by), nx_(nx), ny_(ny), h_(h) {}

Grid2D Grid2D::build(double ax, double bx, double ay, double by, std::size_t nx,
                     std::size_t ny) {
    if (!(bx > ax) || !(by > ay) || !std::isfinite(bx - ax) || !std::isfinite(by - ay)) {
        throw InvalidGridError("invalid grid: rectangle has non-positive extent");
    }
    if (nx < 1 || ny < 1 || nx * ny < 2) {
        throw InvalidGridError("invalid grid: at least 2 cells are required");
    }
    const double hx = (bx - ax) / static_cast<double>(nx);
    const double hy = (by - ay) / static_cast<double>(ny);
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
        std::ostringstream os;
        os << "invalid grid: cell widths differ (hx = " << hx << ", hy = " << hy << ")";
        throw InvalidGridError(os.str());
    }
    return Grid2D(ax, bx, ay, by, nx, ny, hx);
}

}  // namespace pnp
