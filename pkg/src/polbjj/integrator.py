"""Time integration of the two-mode equations and trajectory diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import _kernels
from .errors import DomainError, InvalidParameterError, NotOscillatoryError
from .model import EDGE, ModelParams, State

#: |theta(end) - theta(0)| at or beyond this means the phase is running
WINDING_LIMIT = 4.0 * math.pi

METHODS = ("rk4", "adaptive")


@dataclass(frozen=True)
class IntegratorConfig:
    t_max: float = 200.0
    dt: float = 1e-3
    method: str = "rk4"
    rtol: float = 1e-9
    energy_drift_tol: float = 1e-6
    stride: int = 1

    def __post_init__(self):
        for name in ("t_max", "dt", "rtol", "energy_drift_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParameterError(f"{name} must be finite and positive, got {v!r}")
        if self.method not in METHODS:
            raise InvalidParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if int(self.stride) != self.stride or self.stride < 1:
            raise InvalidParameterError(f"stride must be a positive integer, got {self.stride!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    varsigma: np.ndarray
    theta: np.ndarray
    energies: np.ndarray
    params: ModelParams
    config: IntegratorConfig
    boundary_reached: bool = False
    drift_exceeded: bool = False
    max_drift: float = field(default=0.0)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[State]:
        return [State(float(a), float(b)) for a, b in zip(self.varsigma, self.theta)]

    @property
    def initial(self) -> State:
        return State(float(self.varsigma[0]), float(self.theta[0]))

    @property
    def phase_bounded(self) -> bool:
        return bool(abs(self.theta[-1] - self.theta[0]) < WINDING_LIMIT)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def _step_count(cfg: IntegratorConfig) -> tuple[int, float]:
    n = max(1, math.ceil(cfg.t_max / cfg.dt - 1e-9))
    return n, cfg.t_max / n


def _run_rk4(s0: State, p: ModelParams, cfg: IntegratorConfig, sign: float):
    n, h = _step_count(cfg)
    out, k, hit = _kernels.rk4_run(s0.varsigma, s0.theta, *p.constants(), h, n,
                                   int(cfg.stride), sign, EDGE)
    out = out[:k]
    return out[:, 0], out[:, 1], out[:, 2], out[:, 3], bool(hit)


def _run_adaptive(s0: State, p: ModelParams, cfg: IntegratorConfig, sign: float):
    consts = p.constants()
    lim = 1.0 - EDGE

    def f(_t, y):
        if abs(y[0]) >= 1.0:
            return [np.nan, np.nan]
        ds, dth = _kernels.velocity(y[0], y[1], *consts)
        return [sign * ds, sign * dth]

    def edge(_t, y):
        return lim - abs(y[0])
    edge.terminal = True

    n, h = _step_count(cfg)
    idx = np.arange(0, n + 1, int(cfg.stride))
    if idx[-1] != n:
        idx = np.append(idx, n)
    t_eval = idx * h
    sol = solve_ivp(f, (0.0, cfg.t_max), [s0.varsigma, s0.theta], method="RK45",
                    t_eval=t_eval, events=edge, rtol=cfg.rtol, atol=cfg.rtol * 1e-3)
    t, s, th = sol.t, sol.y[0], sol.y[1]
    hit = sol.status == 1
    return t, s, th, _kernels.energy(s, th, *consts), hit


def integrate(s0: State, p: ModelParams, cfg: IntegratorConfig = IntegratorConfig(),
              backward: bool = False) -> Trajectory:
    """Integrate from ``s0`` over ``[0, cfg.t_max]``.

    ``backward=True`` negates both velocity components, i.e. runs the flow
    in reverse.  Leaving ``|varsigma| < 1 - EDGE`` stops the run and returns
    the partial trajectory with ``boundary_reached`` set.
    """
    if not abs(s0.varsigma) <= 1.0 - EDGE:
        raise DomainError(f"initial |varsigma| must be below 1 - {EDGE:g}, got {s0.varsigma!r}")
    if not math.isfinite(s0.theta):
        raise InvalidParameterError(f"initial theta must be finite, got {s0.theta!r}")
    sign = -1.0 if backward else 1.0
    run = _run_rk4 if cfg.method == "rk4" else _run_adaptive
    t, s, th, e, hit = run(s0, p, cfg, sign)
    drift = float(np.max(np.abs(e - e[0]))) if len(e) else 0.0
    return Trajectory(_freeze(t), _freeze(s), _freeze(th), _freeze(e), p, cfg,
                      boundary_reached=hit, drift_exceeded=drift > cfg.energy_drift_tol,
                      max_drift=drift)


class TimeAverage(NamedTuple):
    mean_varsigma: float
    mean_theta: Optional[float]


def _trapezoid_mean(t: np.ndarray, y: np.ndarray) -> float:
    span = t[-1] - t[0]
    if span <= 0:
        return float(y[0])
    return float(np.trapezoid(y, t) / span)


def time_average(tr: Trajectory) -> TimeAverage:
    """Trapezoid-rule means over the whole trajectory.

    The phase mean is only reported when the phase stays bounded.
    """
    if len(tr) == 0:
        raise InvalidParameterError("empty trajectory")
    ms = _trapezoid_mean(tr.times, tr.varsigma)
    mt = _trapezoid_mean(tr.times, tr.theta) if tr.phase_bounded else None
    return TimeAverage(ms, mt)


def upward_crossings(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Linearly interpolated times where ``y`` crosses zero going up."""
    i = np.nonzero((y[:-1] < 0) & (y[1:] >= 0))[0]
    return t[i] - y[i] * (t[i + 1] - t[i]) / (y[i + 1] - y[i])


def measure_frequency(tr: Trajectory) -> float:
    """Angular frequency of the imbalance oscillation about its mean."""
    if len(tr) < 3:
        raise NotOscillatoryError("trajectory too short")
    y = tr.varsigma - time_average(tr).mean_varsigma
    changes = np.count_nonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))
    up = upward_crossings(tr.times, y)
    if changes < 5 or len(up) < 2:
        raise NotOscillatoryError(f"only {changes} sign changes of varsigma - <varsigma>")
    period = (up[-1] - up[0]) / (len(up) - 1)
    return 2.0 * math.pi / period
