import math

import numpy as np
import pytest

from polbjj.equilibria import Family
from polbjj.errors import InvalidParameterError
from polbjj.integrator import IntegratorConfig, integrate
from polbjj.model import State, make_params
from polbjj.regimes import Label, classify, critical_imbalance
from polbjj.sweep import (
    SweepSpec, default_workers, figure2_suite, figure3a_spec, figure3b_spec, first_mqst, jumps,
    phase_portrait, portrait_grid, run_sweep,
)

SC = 0.258819045102520762


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        SweepSpec(-2, 1, "gamma", [0.1])
    with pytest.raises(InvalidParameterError):
        SweepSpec(-2, 1, "beta", [])
    with pytest.raises(InvalidParameterError):
        SweepSpec(-2, 1, "beta", [0.1, 0.3, 0.2])
    with pytest.raises(InvalidParameterError):
        SweepSpec(-2, 1, "beta", [0.1, math.nan])
    SweepSpec(-2, 1, "beta", [0.3, 0.2, 0.1])


def test_rows_follow_grid_order():
    spec = SweepSpec(-2, 1, "varsigma0", [0.4, 0.3, 0.1], integrator=IntegratorConfig(t_max=20))
    res = run_sweep(spec, workers=3)
    assert list(res.values) == [0.4, 0.3, 0.1]
    assert all(r.report is not None for r in res.rows)


def test_single_point_matches_direct_run():
    cfg = IntegratorConfig(t_max=100)
    (row,) = run_sweep(SweepSpec(-2, 1, "varsigma0", [0.2], integrator=cfg)).rows
    rep = classify(integrate(State(0.2, 0.0), make_params(-2, 1), cfg))
    assert row.report == rep
    assert row.mean_varsigma == rep.mean_varsigma and row.label == rep.label
    assert row.flags == ()


@pytest.mark.parametrize("var, value, expect", [
    ("theta0", 0.7, (-2, 1, 0.2, 0.7)),
    ("beta", 0.5, (-2, 0.5, 0.2, 0.0)),
    ("lambda", -3.0, (-3, 1, 0.2, 0.0)),
])
def test_spec_point(var, value, expect):
    p, s = SweepSpec(-2, 1, var, [value], State(0.2, 0.0)).point(value)
    assert (p.lam, p.beta, s.varsigma, s.theta) == expect


def test_parallel_matches_serial():
    spec = figure3a_spec(n=24)
    a = run_sweep(spec, workers=1)
    b = run_sweep(spec, workers=4)
    assert a.rows == b.rows
    assert np.array_equal(a.means, b.means)


def test_failed_row_is_data():
    spec = SweepSpec(-2, 1, "varsigma0", [0.5, 1.0], integrator=IntegratorConfig(t_max=10))
    res = run_sweep(spec, workers=1)
    assert res.rows[0].label is not None
    bad = res.rows[1]
    assert bad.label is None and any(f.startswith("error:") for f in bad.flags)


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("POLBJJ_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("POLBJJ_THREADS", "x")
    with pytest.raises(InvalidParameterError):
        default_workers()


def test_figure3a_window():
    # grid over [0, 2 varsigma_c]
    spec = SweepSpec(-2, 1, "varsigma0", np.linspace(0, 2 * SC, 41))
    res = run_sweep(spec)
    for r in res.rows:
        assert r.varsigma_c == pytest.approx(SC, abs=1e-14)
        if r.value < SC:
            assert abs(r.mean_varsigma) <= 0.01
        elif r.value > 1.05 * SC:
            assert r.mqst
    assert res.rows[-1].ratio == pytest.approx(2.0)


def _jump_location(n):
    res = run_sweep(figure3a_spec(n=n))
    return first_mqst(res).value


@pytest.mark.slow
def test_figure3a_grid_refinement():
    cell = 0.5 / 200
    assert abs(_jump_location(201) - _jump_location(401)) < cell


@pytest.mark.slow
def test_figure3a_monotone_tail():
    spec = SweepSpec(-2, 1, "varsigma0", np.linspace(1.05 * SC, 0.9, 60))
    res = run_sweep(spec)
    assert all(r.mqst for r in res.rows)
    assert np.all(np.abs(res.means) > 0.02)


@pytest.mark.slow
def test_figure3b_transition():
    res = run_sweep(figure3b_spec())
    js = jumps(res)
    assert js
    assert abs(js[0][0] - 1.2) <= 0.1


def test_jumps():
    spec = SweepSpec(-2, 1, "varsigma0", [0.1, 0.2, 0.3], integrator=IntegratorConfig(t_max=50))
    res = run_sweep(spec, workers=1)
    (loc, size), = jumps(res)
    assert loc == pytest.approx(0.25) and size > 0.1


def test_portrait_balanced():
    p = make_params(-2, 1)
    pp = phase_portrait(p, portrait_grid(7, 5), IntegratorConfig(t_max=100, stride=10),
                        keep_trajectories=False)
    labels = {e.report.label for e in pp.entries if e.report}
    assert {Label.ZERO_PHASE_OSCILLATION, Label.PI_PHASE_OSCILLATION} <= labels
    assert labels & {Label.MQST_ZERO_PHASE, Label.MQST_PI_PHASE, Label.MQST_RUNNING_PHASE}
    assert all(e.trajectory is None for e in pp.entries)
    assert len(pp.entries) == 35


def test_portrait_overlay_small_beta():
    pp = phase_portrait(make_params(-2, 0.15), [State(0.1, 0.0)], IntegratorConfig(t_max=10))
    sad = [pt for pt in pp.stationary if pt.family is Family.OUT_OF_PHASE_SADDLE]
    assert sorted(pt.theta for pt in sad) == pytest.approx([-1.0407263569966988, 1.0407263569966988])


def test_portrait_free_evolution():
    grid = portrait_grid(5, 3, s_max=0.9)
    pp = phase_portrait(make_params(0, 1), grid, IntegratorConfig(t_max=20))
    for e in pp.entries:
        assert e.report.label in (Label.RUNNING_PHASE, Label.MQST_RUNNING_PHASE)
        assert e.report.mean_varsigma == pytest.approx(e.ic.varsigma, abs=1e-14)


def test_figure2_suite():
    out = {name: rep for name, _, rep in figure2_suite()}
    assert out["curve1"].label is Label.MQST_ZERO_PHASE and out["curve1"].mean_varsigma < -0.5
    assert out["curve2"].label is Label.MQST_PI_PHASE
    assert out["curve3"].label is Label.MQST_PI_PHASE and out["curve3"].amplitude > 0.3
    assert out["curve4"].label is Label.MQST_RUNNING_PHASE
