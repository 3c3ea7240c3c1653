// pnp: command-line front end for the structure-preserving PNP solver.
//
//   pnp run --config <file> --out <dir>
//   pnp converge (--case <name> | --config <file>) --h <list> --out <dir>
//   pnp cases

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pnp/config.hpp"
#include "pnp/errors.hpp"
#include "pnp/harness.hpp"
#include "pnp/run.hpp"

namespace {

int report_failure(pnp::FailureKind kind, const std::string& what) {
    std::cerr << "pnp: " << what << "\n";
    return pnp::exit_code(kind);
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    pnp::SimConfig cfg;
    try {
        cfg = pnp::load_config(config_path);
    } catch (const pnp::CompatibilityError& e) {
        return report_failure(pnp::FailureKind::Compatibility, e.what());
    } catch (const pnp::ConfigError& e) {
        return report_failure(pnp::FailureKind::Config, e.what());
    }
    std::filesystem::path out = out_dir.empty() ? cfg.output.directory : out_dir;
    if (out.empty()) out = ".";

    const pnp::RunRecord rec = pnp::run(cfg, out);
    for (const auto& w : rec.warnings) std::cerr << "pnp: warning: " << w << "\n";
    if (rec.termination == pnp::Termination::Error) {
        return report_failure(rec.failure, rec.message);
    }
    std::printf("termination: %s\n", pnp::to_string(rec.termination).c_str());
    std::printf("steps: %zu  k: %.6g  t: %.10g\n", rec.steps, rec.step,
                rec.rows.empty() ? 0.0 : rec.rows.back().t);
    if (!rec.rows.empty()) std::printf("free energy: %.10g\n", rec.rows.back().F);
    return 0;
}

int cmd_converge(const std::string& case_name, const std::string& config_path,
                 std::vector<double> hs, std::optional<double> h_ref, std::optional<double> t_final,
                 pnp::ConvergenceOptions options, const std::string& out_dir) {
    pnp::TestCase tc;
    if (!case_name.empty()) {
        auto found = pnp::find_builtin_case(case_name);
        if (!found) return report_failure(pnp::FailureKind::Config, "unknown case '" + case_name + "'");
        tc = *found;
    } else {
        try {
            const auto cfg = pnp::load_config(config_path);
            if (!cfg.time.t_final && !t_final) {
                return report_failure(pnp::FailureKind::Config,
                                      "convergence study needs time.t_final or --t-final");
            }
            tc = pnp::to_test_case(cfg);
        } catch (const pnp::CompatibilityError& e) {
            return report_failure(pnp::FailureKind::Compatibility, e.what());
        } catch (const pnp::ConfigError& e) {
            return report_failure(pnp::FailureKind::Config, e.what());
        }
    }
    if (hs.empty()) hs = tc.h_list;
    if (hs.empty()) return report_failure(pnp::FailureKind::Config, "no cell widths given (--h)");
    double min_h = hs.front();
    for (double h : hs) min_h = std::min(min_h, h);
    const double ref = h_ref ? *h_ref : (tc.h_ref > 0.0 ? tc.h_ref : min_h / 4.0);
    const double t = t_final ? *t_final : tc.t_final;

    std::vector<pnp::ConvergenceRow> rows;
    try {
        rows = pnp::run_convergence_study(tc, hs, ref, t, options);
    } catch (const pnp::CompatibilityError& e) {
        return report_failure(pnp::FailureKind::Compatibility, e.what());
    } catch (const pnp::PositivityViolationError& e) {
        return report_failure(pnp::FailureKind::Positivity, e.what());
    } catch (const pnp::InvalidGridError& e) {
        return report_failure(pnp::FailureKind::Config, e.what());
    } catch (const std::exception& e) {
        return report_failure(pnp::FailureKind::Solver, e.what());
    }

    const std::filesystem::path out = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(out);
    std::ofstream(out / "convergence.csv", std::ios::binary) << pnp::convergence_csv(rows);

    std::printf("case %s, t = %g, h_ref = %g\n", tc.name.c_str(), t, ref);
    std::printf("%10s %14s %8s %14s %8s\n", "h", "error_c", "order", "error_psi", "order");
    for (const auto& r : rows) {
        auto order = [](const std::optional<double>& o) {
            char buf[16];
            if (o) std::snprintf(buf, sizeof buf, "%8.4f", *o);
            else std::snprintf(buf, sizeof buf, "%8s", "-");
            return std::string(buf);
        };
        std::printf("%10g %14.6e %s %14.6e %s\n", r.h, r.error_c, order(r.order_c).c_str(),
                    r.error_psi, order(r.order_psi).c_str());
    }
    return 0;
}

int cmd_cases() {
    for (const auto& tc : pnp::builtin_cases()) {
        std::printf("%-18s %dD  t_final=%-5g %s\n", tc.name.c_str(), tc.dimension, tc.t_final,
                    tc.description.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving finite difference solver for Poisson-Nernst-Planck systems"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "Run a simulation from a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides output.directory)");

    std::string case_name, conv_config, conv_out;
    std::vector<double> hs;
    std::optional<double> h_ref, t_final;
    pnp::ConvergenceOptions conv_options;
    auto* conv = app.add_subcommand("converge", "Grid-refinement study against a fine reference");
    auto* case_opt = conv->add_option("--case", case_name, "Builtin case name (see `pnp cases`)");
    auto* cfg_opt = conv->add_option("--config", conv_config, "Config file");
    case_opt->excludes(cfg_opt);
    conv->add_option("--h", hs, "Cell widths, coarse to fine")->delimiter(',');
    conv->add_option("--h-ref", h_ref, "Reference cell width");
    conv->add_option("--t-final", t_final, "Final time");
    conv->add_option("--step-fraction", conv_options.step_fraction, "k = fraction * h^2 * bound");
    conv->add_flag("--common-step", conv_options.common_step,
                   "Use the reference grid's time step on every grid");
    conv->add_option("--out", conv_out, "Output directory")->required();

    app.add_subcommand("cases", "List builtin test cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return pnp::exit_code(pnp::FailureKind::Config);
    }

    if (*run) return cmd_run(config_path, out_dir);
    if (*conv) {
        if (case_name.empty() == conv_config.empty()) {
            std::cerr << "pnp: converge needs exactly one of --case and --config\n";
            return pnp::exit_code(pnp::FailureKind::Config);
        }
        return cmd_converge(case_name, conv_config, hs, h_ref, t_final, conv_options, conv_out);
    }
    return cmd_cases();
}
