#include "pnp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values, SplineEnd end)
    : x_(std::move(knots)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 4) throw Error("cubic spline needs at least 4 knots");
    if (y_.size() != n) throw Error("cubic spline: knot and value counts differ");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw Error("cubic spline: knots must be strictly increasing");
    }
    // Continuity of the first derivative at interior knots gives a tridiagonal
    // system in the second derivatives m_1..m_{n-2}.
    const std::size_t k = n - 2;
    std::vector<double> sub(k, 0.0), diag(k), sup(k, 0.0), rhs(k);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t i = r + 1;
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        sub[r] = hl;
        diag[r] = 2.0 * (hl + hr);
        sup[r] = hr;
        rhs[r] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    const double h0 = x_[1] - x_[0];
    const double h1 = x_[2] - x_[1];
    const double hn = x_[n - 1] - x_[n - 2];
    const double hm = x_[n - 2] - x_[n - 3];
    if (end == SplineEnd::NotAKnot) {
        // m_0 = (1 + h0/h1) m_1 - (h0/h1) m_2, and the mirror image at the right end.
        diag[0] += h0 * (1.0 + h0 / h1);
        sup[0] -= h0 * h0 / h1;
        diag[k - 1] += hn * (1.0 + hn / hm);
        sub[k - 1] -= hn * hn / hm;
    }
    for (std::size_t r = 1; r < k; ++r) {
        const double f = sub[r] / diag[r - 1];
        diag[r] -= f * sup[r - 1];
        rhs[r] -= f * rhs[r - 1];
    }
    m_.assign(n, 0.0);
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t r = k - 1; r-- > 0;) m_[r + 1] = (rhs[r] - sup[r] * m_[r + 2]) / diag[r];
    if (end == SplineEnd::NotAKnot) {
        m_[0] = (1.0 + h0 / h1) * m_[1] - (h0 / h1) * m_[2];
        m_[n - 1] = (1.0 + hn / hm) * m_[n - 2] - (hn / hm) * m_[n - 3];
    }
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = x_.size();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1);  // interval [x_{i-1}, x_i]
    const double h = x_[i] - x_[i - 1];
    const double a = (x_[i] - x) / h;
    const double b = (x - x_[i - 1]) / h;
    return a * y_[i - 1] + b * y_[i] +
           ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
}

std::vector<double> CubicSpline::operator()(std::span<const double> xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back((*this)(x));
    return out;
}

std::vector<double> cubic_spline_eval(std::span<const double> knots, std::span<const double> values,
                                      std::span<const double> queries, SplineEnd end) {
    return CubicSpline({knots.begin(), knots.end()}, {values.begin(), values.end()}, end)(queries);
}

double linf_error(std::span<const double> points, std::span<const double> values,
                  const CubicSpline& reference) {
    if (points.size() != values.size()) throw Error("linf_error: size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        e = std::max(e, std::abs(values[i] - reference(points[i])));
    }
    return e;
}

namespace {

std::vector<double> centers(const Grid1D& g) {
    std::vector<double> x(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) x[j] = g.center(j);
    return x;
}

std::vector<double> centers_x(const Grid2D& g) {
    std::vector<double> x(g.nx());
    for (std::size_t i = 0; i < g.nx(); ++i) x[i] = g.center_x(i);
    return x;
}

std::vector<double> centers_y(const Grid2D& g) {
    std::vector<double> y(g.ny());
    for (std::size_t j = 0; j < g.ny(); ++j) y[j] = g.center_y(j);
    return y;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

std::size_t cells_for(double length, double h) {
    const double n = std::round(length / h);
    if (n < 1.0 || std::abs(n * h - length) > 1e-9 * length) {
        std::ostringstream os;
        os << "cell width " << h << " does not divide the domain length " << length;
        throw InvalidGridError(os.str());
    }
    return static_cast<std::size_t>(n);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::vector<double> spline_resample(const Grid1D& fine, std::span<const double> values,
                                    const Grid1D& coarse) {
    return CubicSpline(centers(fine), {values.begin(), values.end()})(centers(coarse));
}

std::vector<double> spline_resample(const Grid2D& fine, std::span<const double> values,
                                    const Grid2D& coarse) {
    const auto fy = centers_y(fine);
    const auto fx = centers_x(fine);
    const auto cy = centers_y(coarse);
    const auto cx = centers_x(coarse);
    // Along y: for each fine column i, values at coarse y.
    std::vector<double> partial(fine.nx() * coarse.ny());
    for (std::size_t i = 0; i < fine.nx(); ++i) {
        std::vector<double> column(values.begin() + static_cast<std::ptrdiff_t>(fine.index(i, 0)),
                                   values.begin() + static_cast<std::ptrdiff_t>(fine.index(i, 0) + fine.ny()));
        const auto at = CubicSpline(fy, std::move(column))(cy);
        std::copy(at.begin(), at.end(), partial.begin() + static_cast<std::ptrdiff_t>(i * coarse.ny()));
    }
    std::vector<double> out(coarse.size());
    for (std::size_t j = 0; j < coarse.ny(); ++j) {
        std::vector<double> row(fine.nx());
        for (std::size_t i = 0; i < fine.nx(); ++i) row[i] = partial[i * coarse.ny() + j];
        const auto at = CubicSpline(fx, std::move(row))(cx);
        for (std::size_t i = 0; i < coarse.nx(); ++i) out[coarse.index(i, j)] = at[i];
    }
    return out;
}

std::vector<ConvergenceRow> observed_orders(std::vector<ConvergenceRow> rows) {
    auto order = [](double coarse, double fine) -> std::optional<double> {
        if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
        return std::log2(coarse / fine);
    };
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k == 0) {
            rows[k].order_c.reset();
            rows[k].order_psi.reset();
            continue;
        }
        rows[k].order_c = order(rows[k - 1].error_c, rows[k].error_c);
        rows[k].order_psi = order(rows[k - 1].error_psi, rows[k].error_psi);
    }
    return rows;
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
    std::string out = "h,error_c,order_c,error_psi,order_psi\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : rows) {
        out += format_number(r.h) + "," + format_number(r.error_c) + "," + opt(r.order_c) + "," +
               format_number(r.error_psi) + "," + opt(r.order_psi) + "\n";
    }
    return out;
}

Grid1D TestCase::grid_1d(double h) const { return Grid1D::build(ax, bx, cells_for(bx - ax, h)); }

Grid2D TestCase::grid_2d(double h) const {
    return Grid2D::build(ax, bx, ay, by, cells_for(bx - ax, h), cells_for(by - ay, h));
}

Simulation1D TestCase::simulation_1d(double h) const {
    if (dimension != 1) throw Error("case '" + name + "' is not one-dimensional");
    const Grid1D grid = grid_1d(h);
    std::vector<Species> list;
    for (const auto& s : species) list.push_back(Species{s.name, s.charge, s.initial.sample(grid)});
    return Simulation1D(grid, BoundaryData1D{sigma.sigma_a, sigma.sigma_b}, std::move(list));
}

Simulation2D TestCase::simulation_2d(double h) const {
    if (dimension != 2) throw Error("case '" + name + "' is not two-dimensional");
    const Grid2D grid = grid_2d(h);
    std::vector<Species> list;
    for (const auto& s : species) list.push_back(Species{s.name, s.charge, s.initial.sample(grid)});
    return Simulation2D(grid,
                        BoundaryData2D::edges(grid, sigma.left, sigma.right, sigma.bottom, sigma.top),
                        std::move(list));
}

std::vector<TestCase> builtin_cases() {
    std::vector<TestCase> cases;
    const std::vector<double> h1d{0.2, 0.1, 0.05, 0.025, 0.0125};

    auto one_d = [&](std::string name, std::string description, std::vector<SpeciesSpec> species,
                     double expected_f) {
        TestCase tc;
        tc.name = std::move(name);
        tc.description = std::move(description);
        tc.dimension = 1;
        tc.species = std::move(species);
        tc.sigma.sigma_a = -1.0;
        tc.sigma.sigma_b = 0.0;
        tc.t_final = 0.5;
        tc.expected_free_energy = expected_f;
        tc.h_list = h1d;
        tc.h_ref = 0.003125;
        cases.push_back(std::move(tc));
    };

    one_d("paper-1d-case1", "single species, c = 1",
          {{"c", 1.0, Profile::constant(1.0)}}, 0.15375);
    one_d("paper-1d-case2", "single species, c = 2 - 2x",
          {{"c", 1.0, Profile::linear(2.0, -2.0)}}, 0.15375);
    one_d("paper-1d-case3", "single species, c = 2 on [0.5, 1], 0 elsewhere",
          {{"c", 1.0, Profile::step(0.5, 0.0, 2.0)}}, 0.15375);
    cases.back().h_list = {0.1, 0.05, 0.025, 0.0125, 0.00625};

    one_d("paper-1d2s-case1", "two species q = +1/-1, c1 = 2, c2 = 1",
          {{"c1", 1.0, Profile::constant(2.0)}, {"c2", -1.0, Profile::constant(1.0)}}, 1.5147);
    one_d("paper-1d2s-case2", "two species q = +1/-1, c1 = 4 - 4x, c2 = 2x",
          {{"c1", 1.0, Profile::linear(4.0, -4.0)}, {"c2", -1.0, Profile::linear(0.0, 2.0)}},
          1.5147);
    one_d("paper-1d2s-case3", "two species q = +1/-1, c1 = 4x, c2 = 2 - 2x",
          {{"c1", 1.0, Profile::linear(0.0, 4.0)}, {"c2", -1.0, Profile::linear(2.0, -2.0)}},
          1.5147);

    auto two_d = [&](std::string name, std::string description, double c0, EdgeSigma sigma) {
        TestCase tc;
        tc.name = std::move(name);
        tc.description = std::move(description);
        tc.dimension = 2;
        tc.species = {{"c", 1.0, Profile::constant(c0)}};
        tc.sigma = sigma;
        tc.t_final = 0.05;
        tc.h_list = {0.2, 0.1, 0.05, 0.025};
        tc.h_ref = 0.0125;
        cases.push_back(std::move(tc));
    };
    EdgeSigma all{};
    all.left = all.right = all.bottom = all.top = -1.0;
    two_d("paper-2d-case1", "unit square, c = 4, sigma = -1 on every edge", 4.0, all);
    EdgeSigma selective{};
    selective.right = -1.0;
    selective.bottom = -1.0;
    two_d("paper-2d-case2", "unit square, c = 2, sigma = -1 on x = 1 and y = 0", 2.0, selective);
    return cases;
}

std::optional<TestCase> find_builtin_case(const std::string& name) {
    for (auto& tc : builtin_cases()) {
        if (tc.name == name) return tc;
    }
    return std::nullopt;
}

template <class Sim>
void advance_to(Sim& sim, double t_final, double k, CflPolicy policy) {
    if (!(k > 0.0)) throw Error("advance_to: time step must be positive");
    const double t0 = sim.time();
    const double span = t_final - t0;
    if (!(span > 0.0)) return;
    const auto full = static_cast<std::size_t>(std::floor(span / k));
    for (std::size_t n = 0; n < full; ++n) {
        sim.step(k, policy);
        sim.set_time(t0 + static_cast<double>(n + 1) * k);
    }
    const double rest = span - static_cast<double>(full) * k;
    if (rest > 1e-12 * span) sim.step(rest, policy);
    sim.set_time(t_final);
}

template void advance_to<Simulation1D>(Simulation1D&, double, double, CflPolicy);
template void advance_to<Simulation2D>(Simulation2D&, double, double, CflPolicy);

namespace {

template <class Sim>
Sim make_case(const TestCase& tc, double h) {
    if constexpr (std::is_same_v<Sim, Simulation1D>) {
        return tc.simulation_1d(h);
    } else {
        return tc.simulation_2d(h);
    }
}

template <class Sim>
std::vector<ConvergenceRow> study(const TestCase& tc, std::span<const double> hs, double h_ref,
                                  double t_final, const ConvergenceOptions& options) {
    Sim ref = make_case<Sim>(tc, h_ref);
    const double ref_step = options.step_fraction * ref.step_bound();
    advance_to(ref, t_final, ref_step, CflPolicy::Strict);
    std::vector<ConvergenceRow> rows;
    for (double h : hs) {
        if (!(h > h_ref)) throw Error("reference cell width must be smaller than every h");
        Sim sim = make_case<Sim>(tc, h);
        const double k = options.common_step ? ref_step : options.step_fraction * sim.step_bound();
        advance_to(sim, t_final, k, CflPolicy::Strict);
        ConvergenceRow row;
        row.h = h;
        for (std::size_t s = 0; s < sim.species().size(); ++s) {
            const auto ref_c = spline_resample(ref.grid(), ref.species()[s].c, sim.grid());
            row.error_c = std::max(row.error_c, max_abs_diff(sim.species()[s].c, ref_c));
        }
        auto ref_psi = spline_resample(ref.grid(), ref.potential().values, sim.grid());
        const double gauge = ref_psi[0];
        for (double& v : ref_psi) v -= gauge;
        row.error_psi = max_abs_diff(sim.potential().values, ref_psi);
        rows.push_back(row);
    }
    return observed_orders(std::move(rows));
}

}  // namespace

std::vector<ConvergenceRow> run_convergence_study(const TestCase& tc, std::span<const double> hs,
                                                  double h_ref, double t_final,
                                                  const ConvergenceOptions& options) {
    if (tc.dimension == 1) return study<Simulation1D>(tc, hs, h_ref, t_final, options);
    return study<Simulation2D>(tc, hs, h_ref, t_final, options);
}

}  // namespace pnp
