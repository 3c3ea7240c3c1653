#include "pnp/initial.hpp"

#include <algorithm>

#include "pnp/errors.hpp"

namespace pnp {

Profile Profile::constant(double v) {
    Profile p;
    p.kind = Kind::Constant;
    p.value = v;
    return p;
}

Profile Profile::linear(double value_at_zero, double slope) {
    Profile p;
    p.kind = Kind::Linear;
    p.value = value_at_zero;
    p.slope = slope;
    return p;
}

Profile Profile::step(double at, double left, double right) {
    Profile p;
    p.kind = Kind::Step;
    p.at = at;
    p.left = left;
    p.right = right;
    return p;
}

double Profile::operator()(double x) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::Linear: return value + slope * x;
        case Kind::Step: return x >= at ? right : left;
    }
    return 0.0;
}

double Profile::average(double x0, double x1) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::Linear: return value + slope * 0.5 * (x0 + x1);
        case Kind::Step: {
            if (x1 <= at) return left;
            if (x0 >= at) return right;
            return (left * (at - x0) + right * (x1 - at)) / (x1 - x0);
        }
    }
    return 0.0;
}

std::vector<double> InitialCondition::sample(const Grid1D& grid) const {
    std::vector<double> c(grid.n());
    const double h = grid.h();
    if (const auto* p = std::get_if<Profile>(&spec_)) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double x0 = grid.a() + h * static_cast<double>(j);
            c[j] = p->average(x0, x0 + h);
        }
    } else if (const auto* t = std::get_if<Tabulated>(&spec_)) {
        if (t->values.size() != c.size()) {
            throw Error("tabulated initial condition has " + std::to_string(t->values.size()) +
                        " values, grid has " + std::to_string(c.size()) + " cells");
        }
        c = t->values;
    } else {
        throw Error("product initial condition needs a 2D grid");
    }
    return c;
}

std::vector<double> InitialCondition::sample(const Grid2D& grid) const {
    std::vector<double> c(grid.size());
    const double h = grid.h();
    Product prod;
    if (const auto* p = std::get_if<Profile>(&spec_)) {
        prod = Product{*p, Profile::constant(1.0)};
    } else if (const auto* q = std::get_if<Product>(&spec_)) {
        prod = *q;
    } else {
        const auto& t = std::get<Tabulated>(spec_);
        if (t.values.size() != c.size()) {
            throw Error("tabulated initial condition has " + std::to_string(t.values.size()) +
                        " values, grid has " + std::to_string(c.size()) + " cells");
        }
        return t.values;
    }
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double x0 = grid.ax() + h * static_cast<double>(i);
        const double u = prod.x.average(x0, x0 + h);
        for (std::size_t j = 0; j < grid.ny(); ++j) {
            const double y0 = grid.ay() + h * static_cast<double>(j);
            c[grid.index(i, j)] = u * prod.y.average(y0, y0 + h);
        }
    }
    return c;
}

}  // namespace pnp
