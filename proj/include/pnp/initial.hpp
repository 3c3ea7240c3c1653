#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pnp/grid.hpp"

namespace pnp {

/// Piecewise-polynomial 1D profile with closed-form cell averages.
struct Profile {
    enum class Kind { Constant, Linear, Step };

    Kind kind = Kind::Constant;
    double value = 0.0;      ///< Constant: value; Linear: value at x = 0
    double slope = 0.0;      ///< Linear only
    double at = 0.0;         ///< Step: jump location (value `right` from x >= at)
    double left = 0.0;
    double right = 0.0;

    static Profile constant(double v);
    static Profile linear(double value_at_zero, double slope);
    static Profile step(double at, double left, double right);

    double operator()(double x) const;
    /// Exact mean over [x0, x1].
    double average(double x0, double x1) const;
};

/**
 * @brief Initial concentration: a profile along x, a product u(x) v(y), or
 * tabulated cell values.
 *
 * Sampling produces exact cell averages, so discrete mass equals the integral
 * of the profile.
 */
class InitialCondition {
public:
    struct Product {
        Profile x;
        Profile y;
    };
    struct Tabulated {
        std::vector<double> values;
    };

    InitialCondition() = default;
    InitialCondition(Profile p) : spec_(p) {}  // NOLINT(google-explicit-constructor)
    InitialCondition(Product p) : spec_(p) {}  // NOLINT(google-explicit-constructor)
    InitialCondition(Tabulated t) : spec_(std::move(t)) {}  // NOLINT

    std::vector<double> sample(const Grid1D& grid) const;
    std::vector<double> sample(const Grid2D& grid) const;

    const std::variant<Profile, Product, Tabulated>& spec() const noexcept { return spec_; }

private:
    std::variant<Profile, Product, Tabulated> spec_;
};

}  // namespace pnp
