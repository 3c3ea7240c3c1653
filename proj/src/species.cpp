#include "pnp/species.hpp"

#include <algorithm>
#include <limits>

namespace pnp {

double discrete_mass(std::span<const double> c, double cell_volume) {
    double sum = 0.0;
    for (double v : c) sum += v;
    return cell_volume * sum;
}

double min_concentration(std::span<const Species> species) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : species) {
        for (double v : s.c) m = std::min(m, v);
    }
    return m;
}

}  // namespace pnp
