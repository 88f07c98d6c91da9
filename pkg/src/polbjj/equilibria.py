"""Stationary states, their linear stability, and small-amplitude linearisation."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import SingularParameterError, UnsupportedError
from .model import EDGE, ModelParams, State, hamiltonian, rhs, sgn

FD_STEP = 1e-6
#: relative tolerance for the measure-zero existence conditions
CONDITION_RTOL = 1e-9
#: squared-away roots with |f| above this are spurious
ROOT_RESIDUAL_TOL = 1e-8
#: largest move Newton polishing may make from a polynomial root
POLISH_MAX_SHIFT = 1e-6


class Family(str, enum.Enum):
    OUT_OF_PHASE_SADDLE = "OutOfPhaseSaddle"
    BOUNDARY = "Boundary"
    SINE_BRANCH = "SineBranch"
    IN_PHASE_QUARTIC = "InPhaseQuartic"
    PI_PHASE_QUARTIC = "PiPhaseQuartic"


class Stability(str, enum.Enum):
    CENTER = "center"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"
    UNDEFINED = "undefined"  # boundary points


class Branch(str, enum.Enum):
    ZERO = "zero"
    PI = "pi"

    @property
    def cos(self) -> float:
        return 1.0 if self is Branch.ZERO else -1.0

    @property
    def theta(self) -> float:
        return 0.0 if self is Branch.ZERO else math.pi


@dataclass(frozen=True)
class StationaryPoint:
    varsigma: float
    theta: float
    energy: float
    family: Family
    stability: Stability

    @property
    def state(self) -> State:
        return State(self.varsigma, self.theta)


def _rel_close(a: float, b: float, rtol: float = CONDITION_RTOL) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def jacobian(s: State, p: ModelParams, h: float = FD_STEP) -> np.ndarray:
    """Centered finite-difference Jacobian of the velocity field."""
    J = np.empty((2, 2))
    for j, (dx, dy) in enumerate(((h, 0.0), (0.0, h))):
        fp = rhs(State(s.varsigma + dx, s.theta + dy), p)
        fm = rhs(State(s.varsigma - dx, s.theta - dy), p)
        J[:, j] = (np.array(fp) - np.array(fm)) / (2.0 * h)
    return J


def classify_stationary(pt, p: ModelParams) -> Stability:
    """Centre / saddle / degenerate from the numerical Jacobian."""
    if isinstance(pt, StationaryPoint):
        if pt.family is Family.BOUNDARY:
            raise UnsupportedError("stability of boundary points is not defined by linearisation")
        s = pt.state
    else:
        s = pt
    if not abs(s.varsigma) + FD_STEP < 1.0:
        raise UnsupportedError("point too close to |varsigma| = 1 for a Jacobian")
    J = jacobian(s, p)
    det = float(np.linalg.det(J))
    tr = float(np.trace(J))
    if abs(det) < 1e-10:
        return Stability.DEGENERATE
    if det < 0:
        return Stability.SADDLE
    if abs(tr) < 1e-6:
        return Stability.CENTER
    return Stability.DEGENERATE


def _point(s: float, th: float, energy: float, family: Family, p: ModelParams) -> StationaryPoint:
    try:
        stab = classify_stationary(State(s, th), p)
    except UnsupportedError:
        # within one difference step of the boundary
        stab = Stability.UNDEFINED
    return StationaryPoint(s, th, energy, family, stab)


def out_of_phase_saddle(p: ModelParams) -> Optional[tuple[StationaryPoint, StationaryPoint]]:
    """The saddle pair at ``+-theta0`` with sin and cos of the phase both nonzero.

    Returns ``None`` when absent, which happens exactly when
    ``lam >= -(beta**2 + 1)/2``.
    """
    lam, b = p.lam, p.beta
    if lam == 0:
        return None
    rad = lam * lam - 4.0 * b * b * (lam + 1.0)
    if not lam < -0.5 * (b * b + 1.0) or rad <= 0:
        return None
    s0 = -(b / lam) * (lam + 2.0) / math.sqrt(b * b + 1.0)
    c = (lam - b * b + 1.0) / (sgn(lam) * math.sqrt(rad))
    if abs(s0) > 1.0 - EDGE or not abs(c) < 1.0:
        return None
    th0 = math.acos(c)
    h0 = -(b / lam) * (lam + 1.0)
    return (_point(s0, th0, h0, Family.OUT_OF_PHASE_SADDLE, p),
            _point(s0, -th0, h0, Family.OUT_OF_PHASE_SADDLE, p))


def boundary_condition_lambda(beta: float, side: int) -> float:
    """Nonlinearity at which the ``varsigma = side`` boundary state exists."""
    q = math.sqrt(beta * beta + 1.0)
    return q**3 / (side * 2.0 * beta + q)


def boundary_energy(beta: float, side: int) -> float:
    q = math.sqrt(beta * beta + 1.0)
    return side * q + side * (q * q) / (side * 2.0 * beta + q) * (1.0 + side * beta / q)


def boundary_points(p: ModelParams) -> list[StationaryPoint]:
    """States at ``varsigma = +-1`` (phase with ``sin theta = +-1``)."""
    out = []
    for side in (1, -1):
        denom = side * 2.0 * p.beta + p.q
        if denom == 0:
            continue
        if _rel_close(p.lam, boundary_condition_lambda(p.beta, side)):
            out.append(StationaryPoint(float(side), side * math.pi / 2,
                                       boundary_energy(p.beta, side),
                                       Family.BOUNDARY, Stability.UNDEFINED))
    return out


def sine_branch_point(p: ModelParams) -> Optional[StationaryPoint]:
    """Interior state with ``cos theta = 0``; exists only on ``lam = beta**2 - 1``.

    The returned point sits at ``theta = pi/2``; its mirror at ``-pi/2`` is
    stationary as well.
    """
    b = p.beta
    if abs(b) == 1.0:
        raise SingularParameterError("sine-branch state is singular at beta = +-1")
    if not _rel_close(p.lam, b * b - 1.0) or abs(b) > 1.0 / math.sqrt(3.0):
        return None
    s3 = b * p.q / (1.0 - b * b)
    if abs(s3) > 1.0 - EDGE:
        return None
    return _point(s3, math.pi / 2, b**3 / (1.0 - b * b), Family.SINE_BRANCH, p)


def sine_branch_alternative(p: ModelParams) -> float:
    """Second closed form for the sine-branch imbalance, valid on its condition."""
    return -(p.lam + p.beta**2 + 1.0) * p.q / (2.0 * p.lam * p.beta)


def phase_equation(s, p: ModelParams, branch: Branch):
    """d theta / d tau restricted to ``cos theta = +-1`` (vectorised)."""
    le, b, q, a = p.constants()
    c = branch.cos
    s = np.asarray(s, float)
    r = np.sqrt(1.0 - s * s)
    return a + 4.0 * le * b * s + le * c * ((b * b - 1.0) * (1.0 - 2.0 * s * s) - b * q * s) / r


def _phase_equation_ds(s: float, p: ModelParams, branch: Branch) -> float:
    le, b, q, _ = p.constants()
    c = branch.cos
    r2 = 1.0 - s * s
    r = math.sqrt(r2)
    num = (b * b - 1.0) * (1.0 - 2.0 * s * s) - b * q * s
    dnum = -4.0 * (b * b - 1.0) * s - b * q
    return 4.0 * le * b + le * c * (dnum / r + num * s / (r2 * r))


def quartic_coefficients(p: ModelParams) -> np.ndarray:
    """Coefficients ``[A5, A4, A3, A2, A1]`` (ascending powers) of the in-phase quartic.

    From ``f = 0``: multiply by ``sqrt(1 - s^2)``, isolate the radical
    ``sqrt(1 - s^2) (alpha + 4 le beta s) = -le c [(beta^2-1)(1-2 s^2) - beta q s]``
    and square.  The result does not depend on ``c = +-1``, so one quartic
    carries the roots of both branches.
    """
    le, b, q, a = p.constants()
    lin = np.array([a, 4.0 * le * b])
    lhs = P.polymul([1.0, 0.0, -1.0], P.polymul(lin, lin))
    rad = np.array([b * b - 1.0, -b * q, -2.0 * (b * b - 1.0)])
    rhs_ = le * le * P.polymul(rad, rad)
    coef = np.zeros(5)
    coef[:len(lhs)] += lhs
    coef[:len(rhs_)] -= rhs_
    return coef


def _real_candidates(coef: np.ndarray) -> np.ndarray:
    c = np.trim_zeros(coef, "b")
    if len(c) <= 1:
        return np.empty(0)
    roots = P.polyroots(c)
    scale = max(1.0, float(np.max(np.abs(roots))))
    return roots[np.abs(roots.imag) <= 1e-6 * scale].real


def _polish(s: float, p: ModelParams, branch: Branch, iters: int = 30) -> float:
    for _ in range(iters):
        d = _phase_equation_ds(s, p, branch)
        if d == 0 or not math.isfinite(d):
            break
        step = float(phase_equation(s, p, branch)) / d
        s_new = s - step
        if not abs(s_new) < 1.0:
            break
        s = s_new
        if abs(step) <= 1e-15:
            break
    return s


def in_phase_roots(p: ModelParams, branch: Branch) -> list[float]:
    """Real imbalances in (-1, 1) that make the phase stationary on ``branch``."""
    out: list[float] = []
    for s0 in _real_candidates(quartic_coefficients(p)):
        if not abs(s0) < 1.0:
            continue
        s = _polish(float(s0), p, branch)
        # a spurious root of the squared equation makes Newton wander off
        if abs(s - s0) > POLISH_MAX_SHIFT:
            continue
        if not abs(s) <= 1.0 - EDGE:
            continue
        if abs(float(phase_equation(s, p, branch))) > ROOT_RESIDUAL_TOL:
            continue
        if any(abs(s - t) < 1e-9 for t in out):
            continue
        out.append(s)
    return sorted(out)


def in_phase_stationary(p: ModelParams, branch: Branch = Branch.ZERO) -> list[StationaryPoint]:
    fam = Family.IN_PHASE_QUARTIC if branch is Branch.ZERO else Family.PI_PHASE_QUARTIC
    th = branch.theta
    return [_point(s, th, hamiltonian(State(s, th), p), fam, p) for s in in_phase_roots(p, branch)]


def all_stationary(p: ModelParams) -> list[StationaryPoint]:
    """Every stationary point the closed forms and the quartic produce."""
    pts: list[StationaryPoint] = []
    sad = out_of_phase_saddle(p)
    if sad:
        pts.extend(sad)
    pts.extend(boundary_points(p))
    if abs(p.beta) != 1.0:
        sb = sine_branch_point(p)
        if sb is not None:
            pts.append(sb)
            pts.append(_point(sb.varsigma, -math.pi / 2, sb.energy, Family.SINE_BRANCH, p))
    for br in Branch:
        pts.extend(in_phase_stationary(p, br))
    return pts


@dataclass(frozen=True)
class LinearizedMode:
    """Small-amplitude oscillator about the zero or pi phase.

    ``omega_sq``, ``omega_jp_sq`` and ``omega_r_sq`` keep their sign;
    ``omega`` is the principal root of ``omega_sq`` (imaginary when the
    mode is not oscillatory) and ``displacement`` is ``None`` when
    ``omega_sq == 0``.
    """
    branch: Branch
    omega_sq: float
    omega_jp_sq: float
    omega_r_sq: float
    e_j: float
    e_c: float
    force: float
    displacement: Optional[float]

    @property
    def oscillatory(self) -> bool:
        return self.omega_sq > 0

    @property
    def omega(self) -> complex | float:
        if self.omega_sq >= 0:
            return math.sqrt(self.omega_sq)
        return 1j * math.sqrt(-self.omega_sq)

    @property
    def omega_jp(self) -> complex | float:
        v = self.omega_jp_sq
        return math.sqrt(v) if v >= 0 else 1j * math.sqrt(-v)

    @property
    def omega_r(self) -> complex | float:
        v = self.omega_r_sq
        return math.sqrt(v) if v >= 0 else 1j * math.sqrt(-v)


def linearize(p: ModelParams, branch: Branch = Branch.ZERO) -> LinearizedMode:
    le, b, q, a = p.constants()
    pm = 1.0 if branch is Branch.ZERO else -1.0
    e_j = le * b * (2.0 - pm * q)
    e_c = le * b * (4.0 - pm * q)
    drive = a - pm * le + pm * le * b * b
    r_sq = le * (1.0 - b * b) * drive
    jp_sq = e_j * e_c
    w_sq = jp_sq + pm * r_sq
    force = -e_j * drive
    disp = force / w_sq if w_sq != 0 else None
    return LinearizedMode(branch, w_sq, jp_sq, r_sq, e_j, e_c, force, disp)


def small_beta_omega_sq(p: ModelParams) -> float:
    """Zero-phase frequency squared to second order in beta."""
    le, b = p.lambda_eff, p.beta
    return 4.5 * le * le * b * b - 0.5 * le * b * b + le


def large_beta_omega_sq(p: ModelParams) -> float:
    """Zero-phase frequency squared for beta^2 >> 1 and lambda_eff < 0."""
    le, b = p.lambda_eff, p.beta
    return le * le * b**4 + abs(le) * b**3
