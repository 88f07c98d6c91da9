"""Parameter sweeps, phase portraits and the reference figure setups."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .equilibria import StationaryPoint, all_stationary
from .errors import InvalidParameterError, PolbjjError
from .integrator import IntegratorConfig, Trajectory, integrate
from .model import ModelParams, State, make_params
from .regimes import Label, RegimeReport, classify, critical_imbalance

VARIABLES = ("varsigma0", "theta0", "beta", "lambda")

#: Lambda shared by every reference figure
REFERENCE_LAMBDA = -2.0
FIG1_BETAS = {"fig1a": 0.15, "fig1b": 1.0, "fig1c": 2.08475}
#: curve name -> (beta, varsigma0, theta0)
FIG2_CURVES = {
    "curve1": (2.08475, -0.97, 0.0),
    "curve2": (0.15, -0.5, math.pi),
    "curve3": (2.08475, 0.9, math.pi),
    "curve4": (1.0, -0.259, 0.0),
}


def default_workers() -> int:
    env = os.environ.get("POLBJJ_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InvalidParameterError(f"POLBJJ_THREADS must be an integer, got {env!r}") from None
        if n >= 1:
            return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepSpec:
    lam: float
    beta: float
    variable: str
    grid: Sequence[float]
    ic: State = State(0.0, 0.0)
    integrator: IntegratorConfig = IntegratorConfig()

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise InvalidParameterError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        g = np.asarray(self.grid, float)
        if g.ndim != 1 or len(g) == 0:
            raise InvalidParameterError("sweep grid must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(g)):
            raise InvalidParameterError("sweep grid must be finite")
        d = np.diff(g)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise InvalidParameterError("sweep grid must be strictly monotone")
        object.__setattr__(self, "grid", tuple(float(x) for x in g))

    def point(self, value: float) -> tuple[ModelParams, State]:
        lam, beta, s0, th0 = self.lam, self.beta, self.ic.varsigma, self.ic.theta
        if self.variable == "varsigma0":
            s0 = value
        elif self.variable == "theta0":
            th0 = value
        elif self.variable == "beta":
            beta = value
        else:
            lam = value
        return make_params(lam, beta), State(s0, th0)


@dataclass(frozen=True)
class SweepRow:
    value: float
    mean_varsigma: float
    label: Optional[Label]
    energy: float
    h_sep: Optional[float]
    flags: tuple[str, ...] = ()
    varsigma0: float = math.nan
    varsigma_c: Optional[float] = None
    report: Optional[RegimeReport] = field(default=None, compare=False)

    @property
    def mqst(self) -> Optional[bool]:
        return None if self.report is None else self.report.mqst

    @property
    def ratio(self) -> Optional[float]:
        """varsigma(0) / varsigma_c, when the critical imbalance exists."""
        if not self.varsigma_c:
            return None
        return self.varsigma0 / self.varsigma_c


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    @property
    def means(self) -> np.ndarray:
        return np.array([r.mean_varsigma for r in self.rows])


def _flags(tr: Trajectory) -> list[str]:
    out = []
    if tr.boundary_reached:
        out.append("boundary_reached")
    if tr.drift_exceeded:
        out.append("drift_exceeded")
    return out


def evaluate(p: ModelParams, s0: State, cfg: IntegratorConfig):
    """Integrate and classify one initial condition, never raising on compute errors.

    A fixed-step run that drifts or reaches the boundary is repeated once
    with the adaptive method, and the row is flagged ``adaptive_retry``.

    Returns ``(trajectory or None, report or None, flags)``.
    """
    try:
        tr = integrate(s0, p, cfg)
        flags = _flags(tr)
        if flags and cfg.method == "rk4":
            # near-boundary passages: retry once with step-size control
            tr = integrate(s0, p, replace(cfg, method="adaptive", rtol=min(cfg.rtol, 1e-10)))
            flags = ["adaptive_retry"] + _flags(tr)
    except PolbjjError as exc:
        return None, None, (f"error:{type(exc).__name__}",)
    report = None
    try:
        report = classify(tr)
    except PolbjjError as exc:
        flags.append(f"unclassified:{type(exc).__name__}")
    return tr, report, tuple(flags)


def _row(spec: SweepSpec, value: float) -> SweepRow:
    try:
        p, s0 = spec.point(value)
    except PolbjjError as exc:
        return SweepRow(value, math.nan, None, math.nan, None, (f"error:{type(exc).__name__}",))
    tr, rep, flags = evaluate(p, s0, spec.integrator)
    sc = critical_imbalance(p, s0.theta)
    if rep is None:
        e = float(tr.energies[0]) if tr is not None else math.nan
        return SweepRow(value, math.nan, None, e, None, flags, s0.varsigma, sc)
    return SweepRow(value, rep.mean_varsigma, rep.label, rep.energy, rep.h_sep, flags,
                    s0.varsigma, sc, rep)


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> SweepResult:
    """Integrate and classify every grid point; rows come back in grid order."""
    n = default_workers() if workers is None else max(1, int(workers))
    if n == 1 or len(spec.grid) == 1:
        rows = [_row(spec, v) for v in spec.grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(lambda v: _row(spec, v), spec.grid))
    return SweepResult(spec, tuple(rows))


def first_mqst(result: SweepResult) -> Optional[SweepRow]:
    for r in result.rows:
        if r.mqst:
            return r
    return None


def jumps(result: SweepResult, threshold: float = 0.1) -> list[tuple[float, float]]:
    """Midpoints and sizes of consecutive-row steps in <varsigma> above ``threshold``."""
    v, m = result.values, result.means
    d = np.diff(m)
    idx = np.nonzero(np.abs(d) > threshold)[0]
    return [(0.5 * (v[i] + v[i + 1]), float(d[i])) for i in idx]


@dataclass(frozen=True)
class PortraitEntry:
    ic: State
    trajectory: Optional[Trajectory]
    report: Optional[RegimeReport]
    flags: tuple[str, ...]


@dataclass(frozen=True)
class PhasePortrait:
    params: ModelParams
    entries: tuple[PortraitEntry, ...]
    stationary: tuple[StationaryPoint, ...]


def phase_portrait(p: ModelParams, ic_grid: Sequence[State], cfg: IntegratorConfig,
                   workers: Optional[int] = None, keep_trajectories: bool = True) -> PhasePortrait:
    n = default_workers() if workers is None else max(1, int(workers))

    def one(s0: State) -> PortraitEntry:
        tr, rep, flags = evaluate(p, s0, cfg)
        return PortraitEntry(s0, tr if keep_trajectories else None, rep, flags)

    if n == 1:
        entries = [one(s) for s in ic_grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            entries = list(ex.map(one, ic_grid))
    return PhasePortrait(p, tuple(entries), tuple(all_stationary(p)))


def portrait_grid(n_varsigma: int = 11, n_theta: int = 9, s_max: float = 0.95) -> list[State]:
    """Rectangular IC grid over [-s_max, s_max] x [-pi, pi]."""
    return [State(float(s), float(t))
            for s in np.linspace(-s_max, s_max, n_varsigma)
            for t in np.linspace(-math.pi, math.pi, n_theta)]


def figure2_suite(cfg: IntegratorConfig = IntegratorConfig()) -> list[tuple[str, Trajectory, RegimeReport]]:
    """The four reference time-series runs, labelled."""
    out = []
    for name, (beta, s0, th0) in FIG2_CURVES.items():
        tr = integrate(State(s0, th0), make_params(REFERENCE_LAMBDA, beta), cfg)
        out.append((name, tr, classify(tr)))
    return out


def figure3a_spec(n: int = 201, s_max: float = 0.5,
                  cfg: IntegratorConfig = IntegratorConfig()) -> SweepSpec:
    """<varsigma> against varsigma(0) at beta = 1."""
    return SweepSpec(REFERENCE_LAMBDA, 1.0, "varsigma0", np.linspace(0.0, s_max, n),
                     State(0.0, 0.0), cfg)


def figure3b_spec(n: int = 221, beta_max: float = 2.2,
                  cfg: IntegratorConfig = IntegratorConfig()) -> SweepSpec:
    """<varsigma> against beta at varsigma(0) = 0.2."""
    return SweepSpec(REFERENCE_LAMBDA, 0.0, "beta", np.linspace(0.0, beta_max, n),
                     State(0.2, 0.0), cfg)


def with_config(spec: SweepSpec, **changes) -> SweepSpec:
    return replace(spec, integrator=replace(spec.integrator, **changes))
