import math

import numpy as np
import pytest

from polbjj.errors import DomainError, InvalidParameterError, NotOscillatoryError
from polbjj.integrator import IntegratorConfig, integrate, measure_frequency, time_average
from polbjj.model import State, make_params

from conftest import FIG2


def test_free_evolution():
    tr = integrate(State(0.3, 0.7), make_params(0, 1), IntegratorConfig(t_max=10))
    assert np.all(tr.varsigma == 0.3)
    assert tr.theta[-1] - 0.7 == pytest.approx(10 * math.sqrt(2), abs=1e-8)
    assert tr.times[0] == 0 and tr.times[-1] == pytest.approx(10)
    assert np.all(np.diff(tr.times) > 0)


def test_stationary_point_stays_put(balanced):
    tr = integrate(State(0, 0), balanced, IntegratorConfig(t_max=100))
    assert np.max(np.abs(tr.varsigma)) < 1e-14
    assert np.max(np.abs(tr.theta)) < 1e-14


def test_curve1_self_trapped():
    beta, s0, th0 = FIG2["curve1"]
    tr = integrate(State(s0, th0), make_params(-2, beta), IntegratorConfig(t_max=200))
    assert not tr.boundary_reached
    assert np.all(tr.varsigma < 0)
    assert tr.phase_bounded
    assert np.ptp(tr.varsigma) > 0.01


@pytest.mark.parametrize("name", sorted(FIG2))
def test_energy_conservation(name):
    beta, s0, th0 = FIG2[name]
    tr = integrate(State(s0, th0), make_params(-2, beta), IntegratorConfig(t_max=200, dt=1e-3))
    assert tr.max_drift <= 1e-8
    assert not tr.drift_exceeded


def test_fourth_order_convergence():
    beta, s0, th0 = FIG2["curve1"]
    p = make_params(-2, beta)

    def end(dt):
        tr = integrate(State(s0, th0), p, IntegratorConfig(t_max=10, dt=dt))
        return np.array([tr.varsigma[-1], tr.theta[-1]])

    h = 0.02
    ref = end(h / 8)
    e1 = np.max(np.abs(end(h) - ref))
    e2 = np.max(np.abs(end(h / 2) - ref))
    assert e1 / e2 >= 12


def test_time_reversal():
    beta, s0, th0 = FIG2["curve1"]
    p = make_params(-2, beta)
    fwd = integrate(State(s0, th0), p, IntegratorConfig(t_max=50))
    back = integrate(State(fwd.varsigma[-1], fwd.theta[-1]), p, IntegratorConfig(t_max=50),
                     backward=True)
    assert abs(back.varsigma[-1] - s0) < 1e-6
    assert abs(back.theta[-1] - th0) < 1e-6


def test_deterministic():
    p = make_params(-2, 1)
    a = integrate(State(-0.259, 0), p, IntegratorConfig(t_max=20))
    b = integrate(State(-0.259, 0), p, IntegratorConfig(t_max=20))
    assert np.array_equal(a.varsigma, b.varsigma) and np.array_equal(a.theta, b.theta)


def test_stride_thins_output():
    p = make_params(-2, 1)
    full = integrate(State(0.2, 0), p, IntegratorConfig(t_max=1))
    thin = integrate(State(0.2, 0), p, IntegratorConfig(t_max=1, stride=100))
    assert len(thin) == 11
    np.testing.assert_array_equal(thin.varsigma, full.varsigma[::100])


def test_adaptive_matches_rk4():
    beta, s0, th0 = FIG2["curve2"]
    p = make_params(-2, beta)
    a = integrate(State(s0, th0), p, IntegratorConfig(t_max=20))
    b = integrate(State(s0, th0), p, IntegratorConfig(t_max=20, method="adaptive", rtol=1e-10))
    assert len(a) == len(b)
    assert np.max(np.abs(a.varsigma - b.varsigma)) < 1e-6


def test_boundary_reached_flag():
    # this orbit grazes varsigma = 1 near tau = 3.5; a coarse step overshoots it
    tr = integrate(State(0.2, 0.0), make_params(-2, 1.24), IntegratorConfig(t_max=50, dt=0.02))
    assert tr.boundary_reached
    assert tr.times[-1] < 4
    assert np.all(np.abs(tr.varsigma) <= 1 - 1e-9)


def test_adaptive_reports_boundary_event():
    tr = integrate(State(0.999999, math.pi / 2), make_params(1, 0),
                   IntegratorConfig(t_max=5, method="adaptive"))
    assert tr.boundary_reached
    assert np.all(np.abs(tr.varsigma) < 1)


def test_drift_flag_with_coarse_step():
    tr = integrate(State(-0.97, 0), make_params(-2, 2.08475),
                   IntegratorConfig(t_max=20, dt=0.05, energy_drift_tol=1e-10))
    assert tr.drift_exceeded


def test_rejects_boundary_initial_state():
    with pytest.raises(DomainError):
        integrate(State(1.0, 0.0), make_params(-2, 1))


@pytest.mark.parametrize("kw", [dict(dt=0), dict(t_max=-1), dict(method="euler"),
                                dict(stride=0), dict(rtol=math.nan)])
def test_config_validation(kw):
    with pytest.raises(InvalidParameterError):
        IntegratorConfig(**kw)


def test_time_average_constant():
    tr = integrate(State(0.3, 0.0), make_params(0, 1), IntegratorConfig(t_max=10))
    assert time_average(tr).mean_varsigma == pytest.approx(0.3, abs=1e-15)
    assert time_average(tr).mean_theta is None  # phase runs 14 rad


def test_time_average_josephson(balanced):
    av = time_average(integrate(State(0.2, 0), balanced, IntegratorConfig(t_max=200)))
    assert abs(av.mean_varsigma) < 0.01
    assert av.mean_theta is not None and abs(av.mean_theta) < 0.1


def test_time_average_curve1():
    beta, s0, th0 = FIG2["curve1"]
    av = time_average(integrate(State(s0, th0), make_params(-2, beta)))
    assert av.mean_varsigma < -0.5


def test_frequency_balanced_josephson(balanced):
    tr = integrate(State(1e-3, 0), balanced, IntegratorConfig(t_max=100))
    # sqrt(E_J E_C) with E_J = -(2 - sqrt 2), E_C = -(4 - sqrt 2)
    assert measure_frequency(tr) == pytest.approx(1.2307390567303167, abs=1e-2)


def test_frequency_running_phase_oracle():
    # beta = 0, Lambda = 1 has no fixed point: theta' ~ (1 + L) - L cos(theta)
    # circulates with angular frequency sqrt(1 + 2 L), which drives varsigma
    tr = integrate(State(1e-3, 0), make_params(1, 0), IntegratorConfig(t_max=100))
    assert measure_frequency(tr) == pytest.approx(math.sqrt(3), rel=1e-3)


def test_frequency_requires_oscillation():
    tr = integrate(State(0.3, 0), make_params(0, 1), IntegratorConfig(t_max=10))
    with pytest.raises(NotOscillatoryError):
        measure_frequency(tr)
