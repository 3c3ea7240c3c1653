#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pnp/config.hpp"
#include "pnp/diagnostics.hpp"
#include "pnp/errors.hpp"
#include "pnp/grid.hpp"
#include "pnp/harness.hpp"
#include "pnp/initial.hpp"
#include "pnp/poisson.hpp"
#include "pnp/run.hpp"
#include "pnp/scheme.hpp"
#include "pnp/simulation.hpp"
#include "pnp/species.hpp"

namespace py = pybind11;
using namespace pnp;

namespace {

// Python callers pass lists and get fresh lists back; the C++ API mutates in place.
std::pair<std::vector<Species>, StepReport> euler_1d(std::vector<Species> states,
                                                      const PotentialField& psi,
                                                      const Grid1D& grid, double k,
                                                      CflPolicy policy, double time) {
    StepReport r = euler_step(states, psi, grid, k, policy, time);
    return {std::move(states), std::move(r)};
}

std::pair<std::vector<Species>, StepReport> euler_2d(std::vector<Species> states,
                                                      const PotentialField& psi,
                                                      const Grid2D& grid, double k,
                                                      CflPolicy policy, double time) {
    StepReport r = euler_step(states, psi, grid, k, policy, time);
    return {std::move(states), std::move(r)};
}

PotentialField field(std::vector<double> v) { return PotentialField{std::move(v)}; }

template <class Sim>
void bind_simulation(py::module_& m, const char* name) {
    py::class_<Sim>(m, name)
        .def(py::init<const typename Sim::Grid&, typename Sim::Boundary, std::vector<Species>,
                      double>(),
             py::arg("grid"), py::arg("boundary"), py::arg("species"),
             py::arg("compatibility_tolerance") = kDefaultCompatibilityTolerance)
        .def_property_readonly("grid", &Sim::grid)
        .def_property_readonly("boundary", &Sim::boundary)
        .def_property_readonly("species", &Sim::species)
        .def_property_readonly("potential", &Sim::potential)
        .def_property_readonly("time", &Sim::time)
        .def_property_readonly("ratio_bound", &Sim::ratio_bound)
        .def_property_readonly("step_bound", &Sim::step_bound)
        .def("step", &Sim::step, py::arg("k"), py::arg("policy") = CflPolicy::Strict)
        .def("energy", &Sim::energy)
        .def("flatness", &Sim::flatness)
        .def("masses", &Sim::masses)
        .def("advance_to", [](Sim& s, double t, double k, CflPolicy policy) {
            advance_to(s, t, k, policy);
        }, py::arg("t_final"), py::arg("k"), py::arg("policy") = CflPolicy::Warn);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Positivity-preserving finite differences for Poisson-Nernst-Planck systems.";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidGridError>(m, "InvalidGridError", base.ptr());
    py::register_exception<CompatibilityError>(m, "CompatibilityError", base.ptr());
    py::register_exception<CflViolationError>(m, "CflViolationError", base.ptr());
    py::register_exception<PositivityViolationError>(m, "PositivityViolationError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Grid1D>(m, "Grid1D")
        .def_static("build", &Grid1D::build, py::arg("a"), py::arg("b"), py::arg("n"))
        .def_property_readonly("a", &Grid1D::a)
        .def_property_readonly("b", &Grid1D::b)
        .def_property_readonly("n", &Grid1D::n)
        .def_property_readonly("h", &Grid1D::h)
        .def("center", &Grid1D::center)
        .def("centers", [](const Grid1D& g) {
            std::vector<double> x(g.n());
            for (std::size_t j = 0; j < g.n(); ++j) x[j] = g.center(j);
            return x;
        })
        .def("__len__", &Grid1D::size);

    py::enum_<Edge>(m, "Edge")
        .value("Left", Edge::Left)
        .value("Right", Edge::Right)
        .value("Bottom", Edge::Bottom)
        .value("Top", Edge::Top);

    py::class_<Grid2D>(m, "Grid2D")
        .def_static("build", &Grid2D::build, py::arg("ax"), py::arg("bx"), py::arg("ay"),
                    py::arg("by"), py::arg("nx"), py::arg("ny"))
        .def_property_readonly("nx", &Grid2D::nx)
        .def_property_readonly("ny", &Grid2D::ny)
        .def_property_readonly("h", &Grid2D::h)
        .def("index", &Grid2D::index)
        .def("center_x", &Grid2D::center_x)
        .def("center_y", &Grid2D::center_y)
        .def("__len__", &Grid2D::size);

    py::class_<Species>(m, "Species")
        .def(py::init([](std::string name, double charge, std::vector<double> c) {
                 return Species{std::move(name), charge, std::move(c)};
             }),
             py::arg("name"), py::arg("charge"), py::arg("c"))
        .def_readwrite("name", &Species::name)
        .def_readwrite("charge", &Species::charge)
        .def_readwrite("c", &Species::c)
        .def("__repr__", [](const Species& s) {
            return "Species('" + s.name + "', q=" + std::to_string(s.charge) + ", n=" +
                   std::to_string(s.c.size()) + ")";
        });

    py::class_<PotentialField>(m, "PotentialField")
        .def(py::init(&field), py::arg("values"))
        .def_readwrite("values", &PotentialField::values)
        .def("__len__", &PotentialField::size)
        .def("__getitem__", [](const PotentialField& p, std::size_t i) {
            if (i >= p.size()) throw py::index_error();
            return p[i];
        });

    m.def("discrete_mass", [](const std::vector<double>& c, double vol) {
        return discrete_mass(c, vol);
    });

    py::class_<BoundaryData1D>(m, "BoundaryData1D")
        .def(py::init([](double a, double b) { return BoundaryData1D{a, b}; }),
             py::arg("sigma_a") = 0.0, py::arg("sigma_b") = 0.0)
        .def_readwrite("sigma_a", &BoundaryData1D::sigma_a)
        .def_readwrite("sigma_b", &BoundaryData1D::sigma_b);

    py::class_<BoundaryData2D>(m, "BoundaryData2D")
        .def_static("uniform", &BoundaryData2D::uniform)
        .def_static("edges", &BoundaryData2D::edges, py::arg("grid"), py::arg("left"),
                    py::arg("right"), py::arg("bottom"), py::arg("top"))
        .def("sigma", &BoundaryData2D::sigma)
        .def("faces", [](const BoundaryData2D& b, Edge e) {
            auto f = b.faces(e);
            return std::vector<double>(f.begin(), f.end());
        })
        .def("set_faces", [](BoundaryData2D& b, Edge e, std::vector<double> v) {
            b.faces(e) = std::move(v);
        })
        .def("max_abs", &BoundaryData2D::max_abs)
        .def("face_sum", &BoundaryData2D::face_sum);

    py::class_<ChargeSource>(m, "ChargeSource")
        .def(py::init([](std::vector<double> d) { return ChargeSource{std::move(d)}; }))
        .def_readwrite("density", &ChargeSource::density)
        .def_static("from_species", [](const std::vector<Species>& s, std::size_t cells) {
            return ChargeSource::from_species(s, cells);
        });

    m.def("compatibility_defect",
          py::overload_cast<const ChargeSource&, const BoundaryData1D&, const Grid1D&>(
              &compatibility_defect));
    m.def("compatibility_defect",
          py::overload_cast<const ChargeSource&, const BoundaryData2D&, const Grid2D&>(
              &compatibility_defect));
    m.def("solve_poisson_1d", &solve_poisson_1d, py::arg("source"), py::arg("bc"),
          py::arg("grid"), py::arg("tolerance") = kDefaultCompatibilityTolerance);
    m.def("solve_poisson_2d", &solve_poisson_2d, py::arg("source"), py::arg("bc"),
          py::arg("grid"), py::arg("tolerance") = kDefaultCompatibilityTolerance);
    m.def("potential_increments_1d", &potential_increments_1d);

    py::class_<PoissonSolver2D>(m, "PoissonSolver2D")
        .def(py::init<const Grid2D&>())
        .def("solve", &PoissonSolver2D::solve, py::arg("source"), py::arg("bc"),
             py::arg("tolerance") = kDefaultCompatibilityTolerance);

    py::enum_<CflPolicy>(m, "CflPolicy")
        .value("Strict", CflPolicy::Strict)
        .value("Warn", CflPolicy::Warn)
        .value("Auto", CflPolicy::Auto);

    py::class_<CflBound>(m, "CflBound")
        .def_readonly("lambda0", &CflBound::lambda0)
        .def_readonly("lambda_multi", &CflBound::lambda_multi)
        .def_readonly("c_minus", &CflBound::c_minus)
        .def_readonly("c_plus", &CflBound::c_plus)
        .def("max_step", &CflBound::max_step);

    m.def("cfl_lambda0", &cfl_lambda0);
    m.def("cfl_multi", [](const std::vector<Species>& s, const BoundaryData1D& bc,
                          const Grid1D& g) { return cfl_multi(s, bc, g); });
    m.def("cfl_2d", &cfl_2d);
    m.def("semi_discrete_rhs_1d", &semi_discrete_rhs_1d);
    m.def("semi_discrete_rhs_2d", &semi_discrete_rhs_2d);
    m.def("resolve_time_step", &resolve_time_step, py::arg("requested"), py::arg("policy"),
          py::arg("safety"), py::arg("bound"));

    py::class_<StepReport>(m, "StepReport")
        .def_readonly("time", &StepReport::time)
        .def_readonly("dt_used", &StepReport::dt_used)
        .def_readonly("min_c", &StepReport::min_c)
        .def_readonly("mass", &StepReport::mass)
        .def_readonly("positive", &StepReport::positive);

    m.def("euler_step", &euler_1d, py::arg("states"), py::arg("psi"), py::arg("grid"),
          py::arg("k"), py::arg("policy") = CflPolicy::Strict, py::arg("time") = 0.0);
    m.def("euler_step", &euler_2d, py::arg("states"), py::arg("psi"), py::arg("grid"),
          py::arg("k"), py::arg("policy") = CflPolicy::Strict, py::arg("time") = 0.0);

    bind_simulation<Simulation1D>(m, "Simulation1D");
    bind_simulation<Simulation2D>(m, "Simulation2D");

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("F", &EnergyReport::F)
        .def_readonly("dissipation", &EnergyReport::dissipation)
        .def_readonly("entropy_part", &EnergyReport::entropy_part)
        .def_readonly("potential_part", &EnergyReport::potential_part)
        .def_readonly("boundary_part", &EnergyReport::boundary_part);

    m.def("free_energy", [](const std::vector<Species>& s, const PotentialField& p,
                            const BoundaryData1D& bc, const Grid1D& g) {
        return free_energy(s, p, bc, g);
    });
    m.def("free_energy", [](const std::vector<Species>& s, const PotentialField& p,
                            const BoundaryData2D& bc, const Grid2D& g) {
        return free_energy(s, p, bc, g);
    });
    m.def("dissipation_rate", [](const std::vector<Species>& s, const PotentialField& p,
                                 const Grid1D& g) { return dissipation_rate(s, p, g); });
    m.def("dissipation_rate", [](const std::vector<Species>& s, const PotentialField& p,
                                 const Grid2D& g) { return dissipation_rate(s, p, g); });
    m.def("g_flatness", [](const std::vector<Species>& s, const PotentialField& p,
                           const Grid1D& g) { return g_flatness(s, p, g); });
    m.def("g_flatness", [](const std::vector<Species>& s, const PotentialField& p,
                           const Grid2D& g) { return g_flatness(s, p, g); });

    py::class_<SteadyStateReport>(m, "SteadyStateReport")
        .def_readonly("residual", &SteadyStateReport::residual)
        .def_readonly("g_flatness", &SteadyStateReport::g_flatness)
        .def_readonly("converged", &SteadyStateReport::converged);
    m.def("detect_steady", [](const std::vector<Species>& prev, const std::vector<Species>& next,
                              const PotentialField& p, double k, const Grid1D& g) {
        return detect_steady(prev, next, p, k, g);
    });

    py::enum_<SplineEnd>(m, "SplineEnd")
        .value("NotAKnot", SplineEnd::NotAKnot)
        .value("Natural", SplineEnd::Natural);

    py::class_<CubicSpline>(m, "CubicSpline")
        .def(py::init<std::vector<double>, std::vector<double>, SplineEnd>(), py::arg("knots"),
             py::arg("values"), py::arg("end") = SplineEnd::NotAKnot)
        .def("__call__", py::overload_cast<double>(&CubicSpline::operator(), py::const_))
        .def("__call__", [](const CubicSpline& s, const std::vector<double>& xs) {
            return s(xs);
        });

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def(py::init([](double h, double ec, double ep) {
                 return ConvergenceRow{h, ec, std::nullopt, ep, std::nullopt};
             }),
             py::arg("h"), py::arg("error_c"), py::arg("error_psi"))
        .def_readonly("h", &ConvergenceRow::h)
        .def_readonly("error_c", &ConvergenceRow::error_c)
        .def_readonly("order_c", &ConvergenceRow::order_c)
        .def_readonly("error_psi", &ConvergenceRow::error_psi)
        .def_readonly("order_psi", &ConvergenceRow::order_psi);
    m.def("observed_orders", &observed_orders);

    py::class_<TestCase>(m, "TestCase")
        .def_readonly("name", &TestCase::name)
        .def_readonly("description", &TestCase::description)
        .def_readonly("dimension", &TestCase::dimension)
        .def_readonly("t_final", &TestCase::t_final)
        .def_readonly("expected_free_energy", &TestCase::expected_free_energy)
        .def_readonly("h_list", &TestCase::h_list)
        .def_readonly("h_ref", &TestCase::h_ref)
        .def("simulation_1d", &TestCase::simulation_1d)
        .def("simulation_2d", &TestCase::simulation_2d);
    m.def("builtin_cases", &builtin_cases);
    m.def("find_builtin_case", &find_builtin_case);
    m.def("run_convergence_study",
          [](const TestCase& tc, const std::vector<double>& hs, double h_ref, double t_final,
             double step_fraction) {
              ConvergenceOptions opt;
              opt.step_fraction = step_fraction;
              return run_convergence_study(tc, hs, h_ref, t_final, opt);
          },
          py::arg("case"), py::arg("hs"), py::arg("h_ref"), py::arg("t_final"),
          py::arg("step_fraction") = 0.4);

    py::class_<SimConfig>(m, "SimConfig");
    m.def("parse_config", &parse_config);
    m.def("load_config", &load_config);

    py::enum_<Termination>(m, "Termination")
        .value("TFinalReached", Termination::TFinalReached)
        .value("SteadyState", Termination::SteadyState)
        .value("Error", Termination::Error);

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("t", &TraceRow::t)
        .def_readonly("dt", &TraceRow::dt)
        .def_readonly("mass", &TraceRow::mass)
        .def_readonly("F", &TraceRow::F)
        .def_readonly("dissipation", &TraceRow::dissipation)
        .def_readonly("min_c", &TraceRow::min_c);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("rows", &RunRecord::rows)
        .def_readonly("final_species", &RunRecord::final_species)
        .def_readonly("final_psi", &RunRecord::final_psi)
        .def_readonly("termination", &RunRecord::termination)
        .def_readonly("message", &RunRecord::message)
        .def_readonly("steady_row", &RunRecord::steady_row)
        .def_readonly("step", &RunRecord::step)
        .def_readonly("steps", &RunRecord::steps)
        .def_readonly("warnings", &RunRecord::warnings)
        .def_property_readonly("exit_code", [](const RunRecord& r) { return exit_code(r); });
    m.def("run", &run, py::arg("config"), py::arg("out_dir") = std::filesystem::path{});
}
