#include "doctest.h"

#include <cmath>

#include "pnp/errors.hpp"
#include "pnp/grid.hpp"
#include "pnp/initial.hpp"
#include "pnp/species.hpp"

using namespace pnp;

TEST_CASE("1D grid spacing and centers") {
    const auto g = Grid1D::build(0.0, 1.0, 4);
    CHECK(g.h() == 0.25);
    CHECK(g.center(0) == 0.125);
    CHECK(g.center(1) == 0.375);
    CHECK(g.center(2) == 0.625);
    CHECK(g.center(3) == 0.875);
    CHECK(Grid1D::build(0.0, 1.0, 320).h() == doctest::Approx(0.003125).epsilon(1e-15));
}

TEST_CASE("1D grid rejects bad input") {
    CHECK_THROWS_AS(Grid1D::build(0.0, 1.0, 1), InvalidGridError);
    CHECK_THROWS_AS(Grid1D::build(1.0, 1.0, 4), InvalidGridError);
    CHECK_THROWS_AS(Grid1D::build(1.0, 0.0, 4), InvalidGridError);
}

TEST_CASE("2D grid") {
    const auto g = Grid2D::build(0, 1, 0, 1, 5, 5);
    CHECK(g.h() == doctest::Approx(0.2));
    CHECK(g.size() == 25);
    CHECK(g.index(2, 3) == 13);
    CHECK(g.edge_faces(Edge::Left) == 5);
    CHECK(Grid2D::build(0, 1, 0, 1, 80, 80).h() == doctest::Approx(0.0125));
    CHECK_THROWS_AS(Grid2D::build(0, 1, 0, 1, 5, 10), InvalidGridError);
    CHECK_THROWS_AS(Grid2D::build(0, 1, 0, 1, 1, 1), InvalidGridError);
    // Rectangles are fine when the spacing agrees.
    CHECK(Grid2D::build(0, 2, 0, 1, 10, 5).size() == 50);
}

TEST_CASE("mass and minimum") {
    const std::vector<double> c{1.0, 2.0, 3.0};
    CHECK(discrete_mass(c, 0.5) == 3.0);
    std::vector<Species> s{{"a", 1.0, {1.0, 0.5}}, {"b", -1.0, {0.25, 2.0}}};
    CHECK(min_concentration(s) == 0.25);
    CHECK(std::isinf(min_concentration(std::span<const Species>{})));
}

TEST_CASE("cell averages of initial profiles") {
    const auto g = Grid1D::build(0.0, 1.0, 4);
    SUBCASE("linear profile averages to the center value") {
        const auto v = InitialCondition(Profile::linear(2.0, -2.0)).sample(g);
        for (std::size_t j = 0; j < 4; ++j) CHECK(v[j] == doctest::Approx(2.0 - 2.0 * g.center(j)));
    }
    SUBCASE("step inside a cell is split by length") {
        const auto g3 = Grid1D::build(0.0, 1.0, 3);
        const auto v = InitialCondition(Profile::step(0.5, 0.0, 2.0)).sample(g3);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == doctest::Approx(1.0));
        CHECK(v[2] == 2.0);
        CHECK(discrete_mass(v, g3.h()) == doctest::Approx(1.0));
    }
    SUBCASE("tabulated length must match") {
        CHECK_THROWS(InitialCondition(InitialCondition::Tabulated{{1.0, 2.0}}).sample(g));
    }
    SUBCASE("2D product") {
        const auto g2 = Grid2D::build(0, 1, 0, 1, 4, 4);
        const auto v = InitialCondition(InitialCondition::Product{Profile::linear(0.0, 1.0),
                                                                  Profile::constant(3.0)})
                           .sample(g2);
        CHECK(v[g2.index(1, 2)] == doctest::Approx(3.0 * g2.center_x(1)));
    }
}
