#include "pnp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pnp/errors.hpp"

namespace pnp {

namespace {

using nlohmann::json;

int line_of(const std::string& text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + " must be finite");
    return d;
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, where, key) : fallback;
}

std::size_t count(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ConfigError(where + "." + key + " is required");
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

Profile parse_profile(const json& obj, const std::string& where) {
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string()) {
        throw ConfigError(where + " needs a string 'type'");
    }
    const auto type = obj.at("type").get<std::string>();
    if (type == "constant") {
        only_keys(obj, where, {"type", "value"});
        return Profile::constant(number(obj, where, "value"));
    }
    if (type == "linear") {
        only_keys(obj, where, {"type", "intercept", "slope"});
        return Profile::linear(number(obj, where, "intercept"), number(obj, where, "slope"));
    }
    if (type == "step") {
        only_keys(obj, where, {"type", "at", "left", "right"});
        return Profile::step(number(obj, where, "at"), number(obj, where, "left"),
                             number(obj, where, "right"));
    }
    throw ConfigError(where + ": unknown profile type '" + type + "'");
}

InitialCondition parse_initial(const json& obj, const std::string& where) {
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string()) {
        throw ConfigError(where + " needs a string 'type'");
    }
    const auto type = obj.at("type").get<std::string>();
    if (type == "product") {
        only_keys(obj, where, {"type", "x", "y"});
        if (!obj.contains("x") || !obj.contains("y")) {
            throw ConfigError(where + ": product needs 'x' and 'y' profiles");
        }
        return InitialCondition::Product{parse_profile(obj.at("x"), where + ".x"),
                                         parse_profile(obj.at("y"), where + ".y")};
    }
    if (type == "tabulated") {
        only_keys(obj, where, {"type", "values"});
        if (!obj.contains("values") || !obj.at("values").is_array()) {
            throw ConfigError(where + ".values must be an array");
        }
        std::vector<double> values;
        for (const auto& v : obj.at("values")) {
            if (!v.is_number()) throw ConfigError(where + ".values must hold numbers");
            values.push_back(v.get<double>());
        }
        return InitialCondition::Tabulated{std::move(values)};
    }
    return parse_profile(obj, where);
}

SimConfig from_json(const json& doc) {
    only_keys(doc, "config", {"grid", "species", "boundary", "time", "cfl", "output", "tolerances"});
    SimConfig cfg;

    if (!doc.contains("grid")) throw ConfigError("config.grid is required");
    const auto& g = doc.at("grid");
    if (!g.is_object()) throw ConfigError("grid must be an object");
    cfg.grid.dimension = static_cast<int>(count(g, "grid", "dimension"));
    if (cfg.grid.dimension == 1) {
        only_keys(g, "grid", {"dimension", "a", "b", "n"});
        cfg.grid.ax = number(g, "grid", "a");
        cfg.grid.bx = number(g, "grid", "b");
        cfg.grid.nx = count(g, "grid", "n");
    } else if (cfg.grid.dimension == 2) {
        only_keys(g, "grid", {"dimension", "ax", "bx", "ay", "by", "nx", "ny"});
        cfg.grid.ax = number(g, "grid", "ax");
        cfg.grid.bx = number(g, "grid", "bx");
        cfg.grid.ay = number(g, "grid", "ay");
        cfg.grid.by = number(g, "grid", "by");
        cfg.grid.nx = count(g, "grid", "nx");
        cfg.grid.ny = count(g, "grid", "ny");
    } else {
        throw ConfigError("grid.dimension must be 1 or 2");
    }

    if (doc.contains("species")) {
        const auto& list = doc.at("species");
        if (!list.is_array()) throw ConfigError("species must be an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "species[" + std::to_string(i) + "]";
            const auto& s = list.at(i);
            only_keys(s, where, {"name", "charge", "initial"});
            SpeciesSpec spec;
            spec.name = s.contains("name") && s.at("name").is_string()
                            ? s.at("name").get<std::string>()
                            : "s" + std::to_string(i + 1);
            if (!names.insert(spec.name).second) {
                throw ConfigError("duplicate species name '" + spec.name + "'");
            }
            spec.charge = number(s, where, "charge");
            if (!s.contains("initial")) throw ConfigError(where + ".initial is required");
            spec.initial = parse_initial(s.at("initial"), where + ".initial");
            cfg.species.push_back(std::move(spec));
        }
    }

    if (doc.contains("boundary")) {
        const auto& b = doc.at("boundary");
        if (cfg.grid.dimension == 1) {
            only_keys(b, "boundary", {"sigma_a", "sigma_b"});
            cfg.boundary.sigma_a = number_or(b, "boundary", "sigma_a", 0.0);
            cfg.boundary.sigma_b = number_or(b, "boundary", "sigma_b", 0.0);
        } else {
            only_keys(b, "boundary", {"sigma", "left", "right", "bottom", "top"});
            const double all = number_or(b, "boundary", "sigma", 0.0);
            cfg.boundary.left = number_or(b, "boundary", "left", all);
            cfg.boundary.right = number_or(b, "boundary", "right", all);
            cfg.boundary.bottom = number_or(b, "boundary", "bottom", all);
            cfg.boundary.top = number_or(b, "boundary", "top", all);
        }
    }

    if (!doc.contains("time")) throw ConfigError("config.time is required");
    const auto& t = doc.at("time");
    only_keys(t, "time", {"t_final", "steady_state", "k", "max_time"});
    if (t.contains("t_final")) cfg.time.t_final = number(t, "time", "t_final");
    if (t.contains("steady_state")) {
        if (!t.at("steady_state").is_boolean()) throw ConfigError("time.steady_state must be a boolean");
        cfg.time.steady_state = t.at("steady_state").get<bool>();
    }
    if (cfg.time.t_final.has_value() == cfg.time.steady_state) {
        throw ConfigError("time: set exactly one of t_final and steady_state");
    }
    if (cfg.time.t_final && !(*cfg.time.t_final > 0.0)) {
        throw ConfigError("time.t_final must be positive");
    }
    cfg.time.max_time = number_or(t, "time", "max_time", cfg.time.max_time);
    if (t.contains("k")) {
        const auto& k = t.at("k");
        if (k.is_string() && k.get<std::string>() == "auto") {
            cfg.time.k.reset();
        } else if (k.is_number() && k.get<double>() > 0.0) {
            cfg.time.k = k.get<double>();
        } else {
            throw ConfigError("time.k must be a positive number or \"auto\"");
        }
    }

    if (doc.contains("cfl")) {
        const auto& c = doc.at("cfl");
        only_keys(c, "cfl", {"policy", "safety"});
        if (c.contains("policy")) {
            if (!c.at("policy").is_string()) throw ConfigError("cfl.policy must be a string");
            try {
                cfg.cfl.policy = parse_cfl_policy(c.at("policy").get<std::string>());
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }
        cfg.cfl.safety = number_or(c, "cfl", "safety", cfg.cfl.safety);
        if (!(cfg.cfl.safety > 0.0)) throw ConfigError("cfl.safety must be positive");
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        only_keys(o, "output", {"directory", "snapshot_every", "trace_every"});
        if (o.contains("directory")) {
            if (!o.at("directory").is_string()) throw ConfigError("output.directory must be a string");
            cfg.output.directory = o.at("directory").get<std::string>();
        }
        if (o.contains("snapshot_every")) cfg.output.snapshot_every = count(o, "output", "snapshot_every");
        if (o.contains("trace_every")) cfg.output.trace_every = count(o, "output", "trace_every");
        if (cfg.output.trace_every == 0) throw ConfigError("output.trace_every must be at least 1");
    }

    if (doc.contains("tolerances")) {
        const auto& tol = doc.at("tolerances");
        only_keys(tol, "tolerances", {"compatibility", "steady_residual", "steady_g_flatness"});
        cfg.tolerances.compatibility =
            number_or(tol, "tolerances", "compatibility", cfg.tolerances.compatibility);
        cfg.tolerances.steady.residual =
            number_or(tol, "tolerances", "steady_residual", cfg.tolerances.steady.residual);
        cfg.tolerances.steady.g_flatness =
            number_or(tol, "tolerances", "steady_g_flatness", cfg.tolerances.steady.g_flatness);
    }
    return cfg;
}

template <class Grid, class Boundary>
double defect_of(const SimConfig& cfg, const Grid& grid, const Boundary& bc) {
    std::vector<Species> species;
    for (const auto& s : cfg.species) {
        try {
            species.push_back(Species{s.name, s.charge, s.initial.sample(grid)});
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        for (double v : species.back().c) {
            if (v < 0.0) throw ConfigError("initial concentration of '" + s.name + "' is negative");
        }
    }
    return compatibility_defect(ChargeSource::from_species(species, grid.size()), bc, grid);
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const int line = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("parse error at line " + std::to_string(line) + ": " + e.what(), line);
    }
    SimConfig cfg;
    try {
        cfg = from_json(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }

    try {
        if (cfg.grid.dimension == 1) {
            const auto grid = Grid1D::build(cfg.grid.ax, cfg.grid.bx, cfg.grid.nx);
            cfg.compatibility_defect =
                defect_of(cfg, grid, BoundaryData1D{cfg.boundary.sigma_a, cfg.boundary.sigma_b});
        } else {
            const auto grid = Grid2D::build(cfg.grid.ax, cfg.grid.bx, cfg.grid.ay, cfg.grid.by,
                                            cfg.grid.nx, cfg.grid.ny);
            cfg.compatibility_defect = defect_of(
                cfg, grid,
                BoundaryData2D::edges(grid, cfg.boundary.left, cfg.boundary.right,
                                      cfg.boundary.bottom, cfg.boundary.top));
        }
    } catch (const InvalidGridError& e) {
        throw ConfigError(e.what());
    }
    if (!(std::abs(cfg.compatibility_defect) <= cfg.tolerances.compatibility)) {
        std::ostringstream os;
        os.precision(17);
        os << "incompatible initial data and boundary flux: defect = " << cfg.compatibility_defect;
        throw CompatibilityError(os.str(), cfg.compatibility_defect);
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

TestCase to_test_case(const SimConfig& config) {
    TestCase tc;
    tc.name = "config";
    tc.description = "user configuration";
    tc.dimension = config.grid.dimension;
    tc.ax = config.grid.ax;
    tc.bx = config.grid.bx;
    tc.ay = config.grid.ay;
    tc.by = config.grid.by;
    tc.species = config.species;
    tc.sigma = config.boundary;
    if (config.time.t_final) tc.t_final = *config.time.t_final;
    return tc;
}

}  // namespace pnp
