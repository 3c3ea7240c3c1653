#include "pnp/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pnp/errors.hpp"
#include "pnp/simulation.hpp"

namespace pnp {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class TraceWriter {
public:
    TraceWriter(const std::filesystem::path& dir, const std::vector<Species>& species) {
        if (dir.empty()) return;
        out_.open(dir / "trace.csv", std::ios::binary);
        if (!out_) throw Error("cannot write " + (dir / "trace.csv").string());
        out_ << "t,dt";
        for (const auto& s : species) out_ << ",mass_" << s.name;
        out_ << ",F,dissipation,min_c\n";
    }

    void write(const TraceRow& row, bool has_species) {
        if (!out_.is_open()) return;
        std::string line = num(row.t) + "," + num(row.dt);
        for (double m : row.mass) line += "," + num(m);
        line += "," + num(row.F) + ",";
        if (row.dissipation) line += num(*row.dissipation);
        line += ",";
        if (has_species) line += num(row.min_c);
        line += "\n";
        out_ << line;
    }

private:
    std::ofstream out_;
};

template <class Sim>
TraceRow trace_row(const Sim& sim, double dt) {
    TraceRow row;
    row.t = sim.time();
    row.dt = dt;
    row.mass = sim.masses();
    const EnergyReport e = sim.energy();
    row.F = e.F;
    row.dissipation = e.dissipation;
    row.min_c = min_concentration(sim.species());
    return row;
}

template <class Sim>
void write_snapshot(const std::filesystem::path& dir, std::size_t step, const Sim& sim) {
    if (dir.empty()) return;
    const auto path = dir / ("snapshot_" + std::to_string(step) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << snapshot_csv(sim.grid(), sim.species(), sim.potential());
}

template <class Sim>
Sim make_simulation(const SimConfig& cfg) {
    if constexpr (std::is_same_v<Sim, Simulation1D>) {
        const auto grid = Grid1D::build(cfg.grid.ax, cfg.grid.bx, cfg.grid.nx);
        std::vector<Species> species;
        for (const auto& s : cfg.species) species.push_back({s.name, s.charge, s.initial.sample(grid)});
        return Simulation1D(grid, BoundaryData1D{cfg.boundary.sigma_a, cfg.boundary.sigma_b},
                            std::move(species), cfg.tolerances.compatibility);
    } else {
        const auto grid = Grid2D::build(cfg.grid.ax, cfg.grid.bx, cfg.grid.ay, cfg.grid.by,
                                        cfg.grid.nx, cfg.grid.ny);
        std::vector<Species> species;
        for (const auto& s : cfg.species) species.push_back({s.name, s.charge, s.initial.sample(grid)});
        return Simulation2D(grid,
                            BoundaryData2D::edges(grid, cfg.boundary.left, cfg.boundary.right,
                                                  cfg.boundary.bottom, cfg.boundary.top),
                            std::move(species), cfg.tolerances.compatibility);
    }
}

template <class Sim>
void run_loop(const SimConfig& cfg, const std::filesystem::path& dir, RunRecord& rec) {
    Sim sim = make_simulation<Sim>(cfg);
    const double bound = sim.step_bound();
    const double k = resolve_time_step(cfg.time.k, cfg.cfl.policy, cfg.cfl.safety, bound);
    rec.step = k;
    if (k > bound) {
        rec.warnings.push_back("time step " + num(k) + " exceeds the positivity bound h^2*lambda = " +
                               num(bound));
    }
    const bool has_species = !sim.species().empty();
    TraceWriter trace(dir, sim.species());

    auto record_row = [&](double dt) {
        rec.rows.push_back(trace_row(sim, dt));
        trace.write(rec.rows.back(), has_species);
    };
    auto finish = [&](Termination t) {
        rec.termination = t;
        rec.final_species = sim.species();
        rec.final_psi = sim.potential();
    };

    record_row(0.0);
    write_snapshot(dir, 0, sim);
    if (!has_species) {
        finish(Termination::TFinalReached);
        return;
    }

    bool warned_negative = false;
    auto take_step = [&](double dt) {
        const StepReport r = sim.step(dt, cfg.cfl.policy);
        if (!r.positive && !warned_negative) {
            rec.warnings.push_back("negative concentration " + num(r.min_c) + " at t = " + num(r.time));
            warned_negative = true;
        }
        ++rec.steps;
    };
    auto after_step = [&](double dt, bool force_trace) {
        if (force_trace || rec.steps % cfg.output.trace_every == 0) record_row(dt);
        if (cfg.output.snapshot_every > 0 && rec.steps % cfg.output.snapshot_every == 0) {
            write_snapshot(dir, rec.steps, sim);
        }
    };

    if (cfg.time.t_final) {
        const double t_final = *cfg.time.t_final;
        const auto full = static_cast<std::size_t>(std::floor(t_final / k));
        const double rest = t_final - static_cast<double>(full) * k;
        const bool partial = rest > 1e-12 * t_final;
        for (std::size_t n = 1; n <= full; ++n) {
            take_step(k);
            const bool last = (n == full) && !partial;
            sim.set_time(last ? t_final : static_cast<double>(n) * k);
            after_step(k, last);
        }
        if (partial) {
            take_step(rest);
            sim.set_time(t_final);
            after_step(rest, true);
        }
        if (cfg.output.snapshot_every == 0 || rec.steps % cfg.output.snapshot_every != 0) {
            write_snapshot(dir, rec.steps, sim);
        }
        finish(Termination::TFinalReached);
        return;
    }

    // Steady-state mode.
    std::size_t n = 0;
    while (true) {
        const std::vector<Species> prev = sim.species();
        take_step(k);
        ++n;
        sim.set_time(static_cast<double>(n) * k);
        const SteadyStateReport steady =
            detect_steady(prev, sim.species(), sim.potential(), k, sim.grid(), cfg.tolerances.steady);
        const bool capped = sim.time() >= cfg.time.max_time;
        after_step(k, steady.converged || capped);
        if (steady.converged || capped) {
            if (steady.converged) rec.steady_row = rec.rows.size() - 1;
            if (cfg.output.snapshot_every == 0 || rec.steps % cfg.output.snapshot_every != 0) {
                write_snapshot(dir, rec.steps, sim);
            }
            finish(steady.converged ? Termination::SteadyState : Termination::TFinalReached);
            return;
        }
    }
}

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::TFinalReached: return "t_final_reached";
        case Termination::SteadyState: return "steady_state";
        case Termination::Error: return "error";
    }
    return "unknown";
}

int exit_code(FailureKind kind) {
    switch (kind) {
        case FailureKind::None: return 0;
        case FailureKind::Config: return 2;
        case FailureKind::Compatibility: return 3;
        case FailureKind::Positivity: return 4;
        case FailureKind::Solver: return 5;
    }
    return 5;
}

int exit_code(const RunRecord& record) { return exit_code(record.failure); }

RunRecord run(const SimConfig& config, const std::filesystem::path& out_dir) {
    RunRecord rec;
    auto fail = [&](FailureKind kind, const std::string& what) {
        rec.termination = Termination::Error;
        rec.failure = kind;
        rec.message = what;
    };
    try {
        if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
        if (config.grid.dimension == 1) {
            run_loop<Simulation1D>(config, out_dir, rec);
        } else {
            run_loop<Simulation2D>(config, out_dir, rec);
        }
    } catch (const ConfigError& e) {
        fail(FailureKind::Config, e.what());
    } catch (const CompatibilityError& e) {
        fail(FailureKind::Compatibility, e.what());
    } catch (const CflViolationError& e) {
        fail(FailureKind::Positivity, e.what());
    } catch (const PositivityViolationError& e) {
        fail(FailureKind::Positivity, e.what());
    } catch (const std::exception& e) {
        fail(FailureKind::Solver, e.what());
    }
    return rec;
}

std::string snapshot_csv(const Grid1D& grid, const std::vector<Species>& species,
                         const PotentialField& psi) {
    std::string out = "x";
    for (const auto& s : species) out += ",c_" + s.name;
    out += ",psi\n";
    for (std::size_t j = 0; j < grid.n(); ++j) {
        out += num(grid.center(j));
        for (const auto& s : species) out += "," + num(s.c[j]);
        out += "," + num(psi[j]) + "\n";
    }
    return out;
}

std::string snapshot_csv(const Grid2D& grid, const std::vector<Species>& species,
                         const PotentialField& psi) {
    std::string out = "x,y";
    for (const auto& s : species) out += ",c_" + s.name;
    out += ",psi\n";
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (std::size_t j = 0; j < grid.ny(); ++j) {
            const std::size_t p = grid.index(i, j);
            out += num(grid.center_x(i)) + "," + num(grid.center_y(j));
            for (const auto& s : species) out += "," + num(s.c[p]);
            out += "," + num(psi[p]) + "\n";
        }
    }
    return out;
}

}  // namespace pnp
