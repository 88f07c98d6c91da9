"""Separatrix energy, critical imbalance and dynamical-regime classification.

Classification is behavioural: it looks at the phase winding and at the
time-averaged imbalance of an integrated trajectory.  The energy relative to
the separatrix is reported alongside as a cross-check.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .equilibria import out_of_phase_saddle
from .errors import ClassificationError
from .integrator import WINDING_LIMIT, Trajectory, time_average
from .model import EDGE, ModelParams, State, energy_values, hamiltonian

#: |<varsigma>| above this counts as self-trapped
MQST_THRESHOLD = 0.02
#: |<varsigma> - varsigma(0)| below this is reported as the threshold case
TYPE_BAND = 1e-3
#: relative energy band around H_sep flagged as near-separatrix
SEPARATRIX_BAND = 1e-3


class Label(str, enum.Enum):
    ZERO_PHASE_OSCILLATION = "ZeroPhaseOscillation"
    PI_PHASE_OSCILLATION = "PiPhaseOscillation"
    MQST_ZERO_PHASE = "MQST_ZeroPhase"
    MQST_PI_PHASE = "MQST_PiPhase"
    MQST_RUNNING_PHASE = "MQST_RunningPhase"
    RUNNING_PHASE = "RunningPhase"
    NEAR_SEPARATRIX = "NearSeparatrix"


class MQSTType(str, enum.Enum):
    I = "I"            # <varsigma> < varsigma(0)
    II = "II"          # <varsigma> > varsigma(0)
    THRESHOLD = "threshold"


@dataclass(frozen=True)
class RegimeReport:
    phase_bounded: bool
    mean_varsigma: float
    mqst: bool
    mqst_type: Optional[MQSTType]
    label: Label
    energy: float
    h_sep: Optional[float]
    near_separatrix: bool
    phase_center: Optional[float]
    amplitude: float

    @property
    def above_separatrix(self) -> Optional[bool]:
        if self.h_sep is None:
            return None
        return self.energy > self.h_sep


def separatrix_energy(p: ModelParams) -> Optional[float]:
    """Energy of the out-of-phase saddles, evaluated from the Hamiltonian."""
    sad = out_of_phase_saddle(p)
    if sad is None:
        return None
    return hamiltonian(sad[0].state, p)


def critical_imbalance(p: ModelParams, theta0: float = 0.0, n_scan: int = 10_000) -> Optional[float]:
    """Smallest positive imbalance whose energy at phase ``theta0`` equals H_sep."""
    h_sep = separatrix_energy(p)
    if h_sep is None:
        return None
    grid = np.linspace(0.0, 1.0 - EDGE, n_scan)
    g = np.sign(energy_values(grid, np.full_like(grid, theta0), p) - h_sep)
    hits = np.nonzero((g[:-1] * g[1:] < 0) | (g[1:] == 0))[0]
    if len(hits) == 0:
        return None
    i = hits[0]
    if g[i + 1] == 0:
        return float(grid[i + 1])

    def f(s):
        return hamiltonian(State(s, theta0), p) - h_sep
    return float(brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))


def circular_mean(theta: np.ndarray, t: np.ndarray) -> float:
    """Time-weighted circular mean of the phase in (-pi, pi]."""
    z = np.trapezoid(np.exp(1j * np.asarray(theta)), t)
    return float(np.angle(z))


def classify(tr: Trajectory) -> RegimeReport:
    if tr.drift_exceeded:
        raise ClassificationError(
            f"energy drift {tr.max_drift:.3g} exceeds tolerance {tr.config.energy_drift_tol:.3g}")
    p = tr.params
    s0 = float(tr.varsigma[0])
    energy = float(tr.energies[0])
    h_sep = separatrix_energy(p)
    mean_s = time_average(tr).mean_varsigma
    bounded = bool(abs(tr.theta[-1] - tr.theta[0]) < WINDING_LIMIT)
    mqst = abs(mean_s) > MQST_THRESHOLD
    mtype = None
    if mqst:
        if abs(mean_s - s0) < TYPE_BAND:
            mtype = MQSTType.THRESHOLD
        else:
            mtype = MQSTType.I if mean_s < s0 else MQSTType.II
    near = h_sep is not None and abs(energy - h_sep) < SEPARATRIX_BAND * max(1.0, abs(h_sep))
    center = None
    zero_phase = True
    if bounded:
        center = circular_mean(tr.theta, tr.times)
        zero_phase = abs(center) <= math.pi / 2

    if not bounded:
        label = Label.MQST_RUNNING_PHASE if mqst else Label.RUNNING_PHASE
    elif mqst:
        label = Label.MQST_ZERO_PHASE if zero_phase else Label.MQST_PI_PHASE
    else:
        label = Label.ZERO_PHASE_OSCILLATION if zero_phase else Label.PI_PHASE_OSCILLATION
    if near and not mqst:
        label = Label.NEAR_SEPARATRIX

    amp = 0.5 * float(np.max(tr.varsigma) - np.min(tr.varsigma))
    return RegimeReport(bounded, mean_s, mqst, mtype, label, energy, h_sep, near, center, amp)
