#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnp/config.hpp"
#include "pnp/errors.hpp"
#include "pnp/run.hpp"

using namespace pnp;
namespace fs = std::filesystem;

namespace {

const char* kCase1 = R"({
  "grid": {"dimension": 1, "a": 0, "b": 1, "n": 20},
  "species": [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 1}}],
  "boundary": {"sigma_a": -1, "sigma_b": 0},
  "time": {"t_final": 0.02}
})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("pnp_unit_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("valid config") {
    const auto cfg = parse_config(kCase1);
    CHECK(cfg.grid.nx == 20);
    CHECK(cfg.species.size() == 1);
    CHECK(cfg.cfl.policy == CflPolicy::Auto);
    CHECK(*cfg.time.t_final == 0.02);
    CHECK_FALSE(cfg.time.k.has_value());
}

TEST_CASE("config errors") {
    SUBCASE("syntax error carries a line number") {
        try {
            parse_config("{\n  \"grid\": {\n    \"n\": 4,,\n  }\n}");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("unit mass with zero sigma") {
        std::string text = kCase1;
        text.replace(text.find("\"sigma_a\": -1"), 13, "\"sigma_a\": 0");
        try {
            parse_config(text);
            FAIL("expected CompatibilityError");
        } catch (const CompatibilityError& e) {
            CHECK(e.defect() == doctest::Approx(1.0));
            CHECK(std::string(e.what()).find("defect") != std::string::npos);
        }
    }
    SUBCASE("both t_final and steady_state") {
        std::string text = kCase1;
        text.replace(text.find("\"t_final\": 0.02"), 15, "\"t_final\": 1, \"steady_state\": true");
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
    SUBCASE("unknown key") {
        std::string text = kCase1;
        text.replace(text.find("\"n\": 20"), 7, "\"n\": 20, \"m\": 3");
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
    SUBCASE("tabulated length mismatch") {
        std::string text = kCase1;
        text.replace(text.find("{\"type\": \"constant\", \"value\": 1}"), 32,
                     "{\"type\": \"tabulated\", \"values\": [1, 1]}");
        CHECK_THROWS_AS(parse_config(text), Error);
    }
}

TEST_CASE("run to t_final writes trace and snapshots") {
    const auto out = scratch("tfinal");
    const auto rec = run(parse_config(kCase1), out);
    CHECK(rec.termination == Termination::TFinalReached);
    CHECK(exit_code(rec) == 0);
    CHECK(rec.rows.back().t == doctest::Approx(0.02).epsilon(1e-14));
    for (std::size_t i = 1; i < rec.rows.size(); ++i) CHECK(rec.rows[i].t > rec.rows[i - 1].t);
    const auto trace = slurp(out / "trace.csv");
    CHECK(trace.rfind("t,dt,mass_c,F,dissipation,min_c\n", 0) == 0);
    CHECK(fs::exists(out / "snapshot_0.csv"));
    CHECK(fs::exists(out / ("snapshot_" + std::to_string(rec.steps) + ".csv")));
    // Same input, same bytes.
    const auto out2 = scratch("tfinal2");
    run(parse_config(kCase1), out2);
    CHECK(slurp(out2 / "trace.csv") == trace);
}

TEST_CASE("zero species") {
    const auto cfg = parse_config(R"({
      "grid": {"dimension": 1, "a": 0, "b": 1, "n": 8},
      "species": [],
      "boundary": {"sigma_a": 0, "sigma_b": 0},
      "time": {"t_final": 1}
    })");
    const auto rec = run(cfg);
    CHECK(rec.termination == Termination::TFinalReached);
    CHECK(rec.final_species.empty());
    CHECK(rec.steps == 0);
}

TEST_CASE("strict policy with an oversized step") {
    std::string text = kCase1;
    text.replace(text.find("\"t_final\": 0.02"), 15, "\"t_final\": 0.02, \"k\": 0.01");
    text.insert(text.rfind('}'), ", \"cfl\": {\"policy\": \"strict\"}");
    const auto rec = run(parse_config(text));
    CHECK(rec.termination == Termination::Error);
    CHECK(exit_code(rec) == 4);
    CHECK(rec.message.find("bound") != std::string::npos);
}

TEST_CASE("steady mode on a coarse grid") {
    const auto rec = run(parse_config(R"({
      "grid": {"dimension": 1, "a": 0, "b": 1, "n": 20},
      "species": [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 1}}],
      "boundary": {"sigma_a": -1, "sigma_b": 0},
      "time": {"steady_state": true},
      "output": {"trace_every": 100}
    })"));
    CHECK(rec.termination == Termination::SteadyState);
    REQUIRE(rec.steady_row.has_value());
    CHECK(rec.rows.back().F == doctest::Approx(0.15375).epsilon(0.05));
}

TEST_CASE("2D config") {
    const auto rec = run(parse_config(R"({
      "grid": {"dimension": 2, "ax": 0, "bx": 1, "ay": 0, "by": 1, "nx": 5, "ny": 5},
      "species": [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 4}}],
      "boundary": {"sigma": -1},
      "time": {"t_final": 0.01}
    })"));
    CHECK(rec.termination == Termination::TFinalReached);
    CHECK(rec.rows.back().mass[0] == doctest::Approx(4.0).epsilon(1e-13));
}
