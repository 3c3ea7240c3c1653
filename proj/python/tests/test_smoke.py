import math

import pytest

import pnpfd


def test_poisson_two_cells():
    g = pnpfd.Grid1D.build(0.0, 1.0, 2)
    src = pnpfd.ChargeSource([1.0, 1.0])
    psi = pnpfd.solve_poisson_1d(src, pnpfd.BoundaryData1D(-1.0, 0.0), g)
    assert psi.values == pytest.approx([0.0, 0.25], abs=1e-14)


def test_incompatible_raises():
    g = pnpfd.Grid1D.build(0.0, 1.0, 4)
    src = pnpfd.ChargeSource([1.0] * 4)
    with pytest.raises(pnpfd.CompatibilityError):
        pnpfd.solve_poisson_1d(src, pnpfd.BoundaryData1D(0.0, 0.0), g)


def test_lambda0():
    assert pnpfd.cfl_lambda0(pnpfd.BoundaryData1D(-1.0, 0.0), 0.1) == pytest.approx(
        1.0 / (1.0 + math.exp(0.05)))


def test_euler_step_returns_new_states():
    g = pnpfd.Grid1D.build(0.0, 1.0, 3)
    s = [pnpfd.Species("c", 1.0, [1.0, 2.0, 3.0])]
    out, rep = pnpfd.euler_step(s, pnpfd.PotentialField([0.0, 0.0, 0.0]), g, 0.01)
    assert s[0].c == [1.0, 2.0, 3.0]
    assert sum(out[0].c) == pytest.approx(6.0, rel=1e-15)
    assert rep.positive


def test_simulation_energy_decreases():
    case = pnpfd.find_builtin_case("paper-1d-case2")
    sim = case.simulation_1d(0.05)
    f0 = sim.energy().F
    m0 = sim.masses()
    k = 0.9 * sim.step_bound
    for _ in range(50):
        sim.step(k, pnpfd.CflPolicy.Strict)
    assert sim.energy().F < f0
    assert sim.masses()[0] == pytest.approx(m0[0], rel=1e-12)


def test_builtin_cases_listed():
    names = [c.name for c in pnpfd.builtin_cases()]
    assert len(names) == 8
    assert "paper-2d-case1" in names


def test_observed_orders():
    rows = pnpfd.observed_orders([pnpfd.ConvergenceRow(0.1, 4e-3, 1e-3),
                                  pnpfd.ConvergenceRow(0.05, 1e-3, 2.5e-4)])
    assert rows[0].order_c is None
    assert rows[1].order_c == pytest.approx(2.0)


def test_config_and_run(tmp_path):
    cfg = pnpfd.parse_config("""{
      "grid": {"dimension": 1, "a": 0, "b": 1, "n": 20},
      "species": [{"name": "c", "charge": 1, "initial": {"type": "constant", "value": 1}}],
      "boundary": {"sigma_a": -1, "sigma_b": 0},
      "time": {"t_final": 0.01}
    }""")
    rec = pnpfd.run(cfg, tmp_path)
    assert rec.exit_code == 0
    assert rec.termination == pnpfd.Termination.TFinalReached
    assert (tmp_path / "trace.csv").exists()
    assert rec.rows[-1].t == pytest.approx(0.01)


def test_bad_config_raises():
    with pytest.raises(pnpfd.ConfigError):
        pnpfd.parse_config('{"grid": {"dimension": 1}')
