#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "pnp/errors.hpp"
#include "pnp/poisson.hpp"

using namespace pnp;

namespace {

// Source scaled so the compatibility defect vanishes for the given sigma.
std::vector<double> compatible_source_1d(std::mt19937_64& rng, std::size_t n, double h,
                                         double sa, double sb) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> s(n);
    double sum = 0.0;
    for (auto& v : s) { v = u(rng); sum += v; }
    const double shift = (-(sa + sb) / h - sum) / static_cast<double>(n);
    for (auto& v : s) v += shift;
    return s;
}

}  // namespace

TEST_CASE("compatibility defect") {
    const auto g = Grid1D::build(0, 1, 10);
    CHECK(compatibility_defect(ChargeSource{std::vector<double>(10, 1.0)}, {-1.0, 0.0}, g) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(compatibility_defect(ChargeSource{std::vector<double>(10, 0.0)}, {0.0, 0.0}, g) == 0.0);
    CHECK(compatibility_defect(ChargeSource{std::vector<double>(10, 1.0)}, {0.0, 0.0}, g) ==
          doctest::Approx(1.0));

    const auto g2 = Grid2D::build(0, 1, 0, 1, 5, 5);
    const auto bc = BoundaryData2D::uniform(g2, -1.0);
    CHECK(std::abs(compatibility_defect(ChargeSource{std::vector<double>(25, 4.0)}, bc, g2)) < 1e-13);
}

TEST_CASE("1D pinned solves") {
    SUBCASE("zero data") {
        const auto psi = solve_poisson_1d(ChargeSource{std::vector<double>(5, 0.0)}, {}, Grid1D::build(0, 1, 5));
        for (double v : psi.values) CHECK(v == 0.0);
    }
    SUBCASE("two cells") {
        const auto g = Grid1D::build(0, 1, 2);
        const BoundaryData1D bc{-1.0, 0.0};
        const auto psi = solve_poisson_1d(ChargeSource{{1.0, 1.0}}, bc, g);
        const auto ref = oracle::poisson_1d({1.0, 1.0}, -1.0, 0.0, 0.5);
        CHECK(ref[1] == doctest::Approx(0.25));
        CHECK(psi[0] == 0.0);
        CHECK(psi[1] == doctest::Approx(0.25).epsilon(1e-15));
        const auto inc = potential_increments_1d(psi, bc, g);
        REQUIRE(inc.size() == 3);
        CHECK(inc[0] == doctest::Approx(0.5));
        CHECK(inc[1] == doctest::Approx(0.25));
        CHECK(inc[2] == 0.0);
    }
    SUBCASE("three cells, charge in the gauge cell") {
        const auto g = Grid1D::build(0, 1, 3);
        const auto psi = solve_poisson_1d(ChargeSource{{3.0, 0.0, 0.0}}, {-1.0, 0.0}, g);
        for (double v : psi.values) CHECK(std::abs(v) < 1e-15);
    }
    SUBCASE("incompatible data") {
        const auto g = Grid1D::build(0, 1, 4);
        try {
            solve_poisson_1d(ChargeSource{std::vector<double>(4, 1.0)}, {}, g);
            FAIL("expected CompatibilityError");
        } catch (const CompatibilityError& e) {
            CHECK(e.defect() == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("1D matches dense elimination") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t n = 2; n <= 40; ++n) {
        const auto g = Grid1D::build(0, 1, n);
        const double sa = u(rng), sb = u(rng);
        const auto s = compatible_source_1d(rng, n, g.h(), sa, sb);
        const auto psi = solve_poisson_1d(ChargeSource{s}, {sa, sb}, g);
        CHECK(oracle::max_abs_diff(psi.values, oracle::poisson_1d(s, sa, sb, g.h())) < 1e-12);
    }
}

TEST_CASE("2D matches dense elimination") {
    SUBCASE("3x3, sigma -1, c = 4") {
        const auto g = Grid2D::build(0, 1, 0, 1, 3, 3);
        const auto bc = BoundaryData2D::uniform(g, -1.0);
        const std::vector<double> s(9, 4.0);
        const auto psi = solve_poisson_2d(ChargeSource{s}, bc, g);
        CHECK(oracle::max_abs_diff(psi.values, oracle::poisson_2d(s, bc, g)) < 1e-12);
    }
    SUBCASE("zero data") {
        const auto g = Grid2D::build(0, 1, 0, 1, 4, 4);
        const auto psi = solve_poisson_2d(ChargeSource{std::vector<double>(16, 0.0)},
                                          BoundaryData2D::uniform(g, 0.0), g);
        for (double v : psi.values) CHECK(v == 0.0);
    }
    SUBCASE("random face data, cached factorization reused") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto g = Grid2D::build(0, 1, 0, 0.75, 8, 6);
        const PoissonSolver2D solver(g);
        for (int rep = 0; rep < 5; ++rep) {
            auto bc = BoundaryData2D::uniform(g, 0.0);
            for (Edge e : {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top})
                for (auto& v : bc.faces(e)) v = u(rng);
            std::vector<double> s(g.size());
            double sum = 0.0;
            for (auto& v : s) { v = u(rng); sum += v; }
            const double shift = (-bc.face_sum() / g.h() - sum) / static_cast<double>(g.size());
            for (auto& v : s) v += shift;
            const auto psi = solver.solve(ChargeSource{s}, bc);
            CHECK(oracle::max_abs_diff(psi.values, oracle::poisson_2d(s, bc, g)) < 1e-12);
        }
    }
    SUBCASE("incompatible data throws") {
        const auto g = Grid2D::build(0, 1, 0, 1, 3, 3);
        CHECK_THROWS_AS(solve_poisson_2d(ChargeSource{std::vector<double>(9, 1.0)},
                                         BoundaryData2D::uniform(g, 0.0), g),
                        CompatibilityError);
    }
}

TEST_CASE("source from species") {
    std::vector<Species> sp{{"p", 1.0, {2.0, 1.0}}, {"m", -1.0, {1.0, 1.0}}};
    const auto src = ChargeSource::from_species(sp, 2);
    CHECK(src.density == std::vector<double>{1.0, 0.0});
    CHECK(ChargeSource::from_species({}, 3).density == std::vector<double>(3, 0.0));
}
