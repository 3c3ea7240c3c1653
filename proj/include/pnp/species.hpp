#pragma once

#include <span>
#include <string>
#include <vector>

namespace pnp {

/// Concentration of one ionic species over the cells of a grid, with its signed charge.
struct Species {
    std::string name;
    double charge = 1.0;
    std::vector<double> c;
};

/// Electrostatic potential at cell centers; the gauge cell (index 0) is pinned to 0.
struct PotentialField {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Discrete mass volume * sum(c), summed left to right.
double discrete_mass(std::span<const double> c, double cell_volume);

/// Smallest concentration over all species (+inf when there are none).
double min_concentration(std::span<const Species> species);

}  // namespace pnp
