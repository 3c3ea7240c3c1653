#include "doctest.h"

#include <cmath>

#include "pnp/diagnostics.hpp"
#include "pnp/poisson.hpp"
#include "pnp/scheme.hpp"

using namespace pnp;

TEST_CASE("free energy") {
    const auto g = Grid1D::build(0, 1, 8);
    SUBCASE("uniform unit density, no field") {
        std::vector<Species> s{{"c", 1.0, std::vector<double>(8, 1.0)}};
        const auto e = free_energy(s, PotentialField{std::vector<double>(8, 0.0)}, {}, g);
        CHECK(e.F == 0.0);
    }
    SUBCASE("hand assembled terms") {
        const auto g2 = Grid1D::build(0, 1, 2);
        std::vector<Species> s{{"c", 1.0, {1.0, 1.0}}};
        const BoundaryData1D bc{-1.0, 0.0};
        const auto psi = solve_poisson_1d(ChargeSource::from_species(s, 2), bc, g2);
        const auto e = free_energy(s, psi, bc, g2);
        // 0.5 * (0.5 * 1 * 0.25) for the field, sigma_a * psi_first / 2 = 0.
        CHECK(e.F == doctest::Approx(0.0625));
        CHECK(e.entropy_part == 0.0);
        CHECK(e.boundary_part == 0.0);
    }
    SUBCASE("zero concentration contributes nothing") {
        std::vector<Species> s{{"c", 1.0, {0.0, 2.0, 2.0, 0.0, 0.0, 1.0, 1.0, 2.0}}};
        const auto e = free_energy(s, PotentialField{std::vector<double>(8, 0.0)}, {}, g);
        CHECK(std::isfinite(e.F));
        CHECK_FALSE(e.dissipation.has_value());
    }
}

TEST_CASE("dissipation rate") {
    const auto g = Grid1D::build(0, 1, 2);
    std::vector<Species> s{{"c", 1.0, {1.0, 2.0}}};
    const auto d = dissipation_rate(s, PotentialField{{0.0, 0.0}}, g);
    REQUIRE(d.has_value());
    CHECK(*d == doctest::Approx(-2.0 * std::log(2.0)));

    std::vector<Species> flat{{"c", 1.0, {std::exp(-0.0), std::exp(-0.3)}}};
    CHECK(*dissipation_rate(flat, PotentialField{{0.0, 0.3}}, g) == doctest::Approx(0.0));

    std::vector<Species> empty{{"c", 1.0, {0.0, 1.0}}};
    CHECK_FALSE(dissipation_rate(empty, PotentialField{{0.0, 0.0}}, g).has_value());
}

TEST_CASE("dissipation is the time derivative of F along the semi-discrete flow") {
    // Directional derivative of F at c in the direction Q(c), psi re-solved each time.
    const auto g = Grid1D::build(0, 1, 12);
    const BoundaryData1D bc{-1.0, 0.0};
    std::vector<Species> s{{"p", 1.0, {}}, {"m", -1.0, {}}};
    for (std::size_t j = 0; j < 12; ++j) {
        const double x = g.center(j);
        s[0].c.push_back(4.0 - 4.0 * x);
        s[1].c.push_back(2.0 * x);
    }
    auto energy_at = [&](double eps) {
        auto t = s;
        const auto psi0 = solve_poisson_1d(ChargeSource::from_species(s, 12), bc, g);
        for (auto& sp : t) {
            const auto q = semi_discrete_rhs_1d(sp, psi0, g);
            for (std::size_t j = 0; j < 12; ++j) sp.c[j] += eps * q[j];
        }
        const auto psi = solve_poisson_1d(ChargeSource::from_species(t, 12), bc, g);
        return free_energy(t, psi, bc, g).F;
    };
    const double eps = 1e-6;
    const double slope = (energy_at(eps) - energy_at(-eps)) / (2 * eps);
    const auto psi = solve_poisson_1d(ChargeSource::from_species(s, 12), bc, g);
    const auto d = dissipation_rate(s, psi, g);
    REQUIRE(d.has_value());
    CHECK(*d < 0.0);
    CHECK(slope == doctest::Approx(*d).epsilon(1e-6));
}

TEST_CASE("2D dissipation matches the derivative of F") {
    const auto g = Grid2D::build(0, 1, 0, 1, 5, 5);
    const auto bc = BoundaryData2D::edges(g, 0.0, -1.0, -1.0, 0.0);
    std::vector<Species> s{{"c", 1.0, {}}};
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) s[0].c.push_back(1.0 + g.center_x(i) * 2.0 * g.center_y(j));
    // rescale to mass 2 so the data is compatible
    double m = 0.0;
    for (double v : s[0].c) m += v * g.cell_volume();
    for (double& v : s[0].c) v *= 2.0 / m;
    const PoissonSolver2D solver(g);
    auto energy_at = [&](double eps) {
        auto t = s;
        const auto psi0 = solver.solve(ChargeSource::from_species(s, 25), bc);
        const auto q = semi_discrete_rhs_2d(t[0], psi0, g);
        for (std::size_t p = 0; p < 25; ++p) t[0].c[p] += eps * q[p];
        return free_energy(t, solver.solve(ChargeSource::from_species(t, 25), bc), bc, g).F;
    };
    const double eps = 1e-6;
    const double slope = (energy_at(eps) - energy_at(-eps)) / (2 * eps);
    const auto d = dissipation_rate(s, solver.solve(ChargeSource::from_species(s, 25), bc), g);
    REQUIRE(d.has_value());
    CHECK(slope == doctest::Approx(*d).epsilon(1e-6));
}

TEST_CASE("steady-state detection") {
    const auto g = Grid1D::build(0, 1, 4);
    std::vector<double> psi{0.0, 0.2, 0.5, 0.3}, c(4);
    for (std::size_t j = 0; j < 4; ++j) c[j] = 0.8 * std::exp(-psi[j]);
    std::vector<Species> s{{"c", 1.0, c}};
    CHECK(g_flatness(s, PotentialField{psi}, g) < 1e-15);
    const auto r = detect_steady<Grid1D>(s, s, PotentialField{psi}, 0.01, g);
    CHECK(r.residual == 0.0);
    CHECK(r.converged);

    std::vector<Species> bumpy{{"c", 1.0, {1.0, 1.0, 2.0, 1.0}}};
    const auto r2 = detect_steady<Grid1D>(bumpy, bumpy, PotentialField{{0, 0, 0, 0}}, 0.01, g);
    CHECK(r2.g_flatness == doctest::Approx(0.5));
    CHECK_FALSE(r2.converged);
}

TEST_CASE("long-time energy stability") {
    std::vector<TraceRow> rows;
    for (int n = 0; n < 10; ++n) rows.push_back({0.1 * n, 0.1, {1.0}, 1.0 / (1 + n), std::nullopt, 0.5});
    CHECK(long_time_energy_stability(rows));
    rows[6].F = rows[5].F + 1e-6;
    CHECK_FALSE(long_time_energy_stability(rows));
}
