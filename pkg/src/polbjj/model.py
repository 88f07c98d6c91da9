"""Dimensionless two-mode model of coupled upper/lower-branch polaritons.

The canonical pair is the population imbalance ``varsigma`` and the relative
phase ``theta``.  The model is controlled by two numbers: the nonlinearity
``lam`` and the scaled transverse kinetic energy ``beta``.  The energy
difference between the branches depends on the state, and it is substituted
into the Hamiltonian before anything is differentiated, so ``H`` is a closed
function of ``(varsigma, theta)`` with

    d varsigma / d tau = -dH/d theta,    d theta / d tau = +dH/d varsigma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidParameterError

#: states with |varsigma| > 1 - EDGE are rejected
EDGE = 1e-9


def sgn(x: float) -> float:
    """Sign with ``sgn(0) = +1``."""
    return -1.0 if x < 0 else 1.0


@dataclass(frozen=True)
class ModelParams:
    lam: float
    beta: float

    @property
    def lambda_eff(self) -> float:
        return self.lam / (1.0 + self.beta**2)

    @property
    def q(self) -> float:
        """sqrt(1 + beta^2), which appears in nearly every formula."""
        return math.sqrt(1.0 + self.beta**2)

    @property
    def alpha(self) -> float:
        return self.q * (1.0 + self.lambda_eff)

    def constants(self) -> tuple[float, float, float, float]:
        return self.lambda_eff, self.beta, self.q, self.alpha


@dataclass(frozen=True)
class State:
    varsigma: float
    theta: float


@dataclass(frozen=True)
class CurrentDecomposition:
    supercurrent_term: float
    imbalance_term: float
    second_harmonic_term: float

    @property
    def total(self) -> float:
        return self.supercurrent_term + self.imbalance_term + self.second_harmonic_term


@dataclass(frozen=True)
class UnitsContext:
    """Physical scales. Energies share one unit (e.g. meV); ``hbar`` must match it.

    ``k_parallel`` is only needed for the Josephson length.
    """
    g: float
    kappa_Nex: float
    E_tr: float
    hbar: float
    k_parallel: Optional[float] = None

    def __post_init__(self):
        if not self.g > 0:
            raise InvalidParameterError(f"coupling g must be positive, got {self.g!r}")
        if not self.hbar > 0:
            raise InvalidParameterError(f"hbar must be positive, got {self.hbar!r}")

    @property
    def critical_current(self) -> float:
        """I_c = |kappa| N_ex E_tr / (2 |g| hbar), in inverse time units."""
        return abs(self.kappa_Nex) * self.E_tr / (2.0 * abs(self.g) * self.hbar)

    @property
    def cavity_current(self) -> float:
        """J_1 = |kappa| N_ex / (2 hbar)."""
        return abs(self.kappa_Nex) / (2.0 * self.hbar)


def make_params(lam: float, beta: float) -> ModelParams:
    """Build validated model parameters."""
    for name, v in (("lambda", lam), ("beta", beta)):
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name} must be finite, got {v!r}")
    return ModelParams(float(lam), float(beta))


def _check_state(s: State) -> None:
    if not abs(s.varsigma) <= 1.0 - EDGE:
        raise DomainError(f"|varsigma| must be below 1 - {EDGE:g}, got {s.varsigma!r}")


def delta_e_eff(s: State, p: ModelParams) -> float:
    """State-dependent zero-point energy difference between the branches."""
    _check_state(s)
    r = math.sqrt(1.0 - s.varsigma**2)
    return p.alpha - p.lambda_eff * r * (1.0 - p.beta**2) * math.cos(s.theta)


def hamiltonian(s: State, p: ModelParams) -> float:
    _check_state(s)
    return float(_kernels.energy(s.varsigma, s.theta, *p.constants()))


def rhs(s: State, p: ModelParams) -> tuple[float, float]:
    """Return ``(d varsigma/d tau, d theta/d tau)``."""
    _check_state(s)
    ds, dth = _kernels.velocity(s.varsigma, s.theta, *p.constants())
    return float(ds), float(dth)


def energy_values(varsigma, theta, p: ModelParams) -> np.ndarray:
    """Vectorised Hamiltonian; no boundary check."""
    return _kernels.energy(np.asarray(varsigma, float), np.asarray(theta, float), *p.constants())


def rhs_values(varsigma, theta, p: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised equations of motion; no boundary check."""
    return _kernels.velocity(np.asarray(varsigma, float), np.asarray(theta, float), *p.constants())


def current_decomposition_small_beta(s: State, p: ModelParams) -> CurrentDecomposition:
    """First-order-in-beta split of the interbranch current d varsigma/d tau.

    The dimensionless critical current is ``-lambda_eff * beta`` and the cavity
    current ``-lambda_eff``; both are positive for the repulsive case
    ``lambda_eff < 0``.
    """
    _check_state(s)
    ic = -p.lambda_eff * p.beta
    j1 = -p.lambda_eff
    r = math.sqrt(1.0 - s.varsigma**2)
    sn = math.sin(s.theta)
    return CurrentDecomposition(
        supercurrent_term=-ic * r * sn,
        imbalance_term=j1 * s.varsigma * r * sn,
        second_harmonic_term=ic * r * r * math.sin(2.0 * s.theta),
    )


def physical_to_dimensionless(u: UnitsContext) -> tuple[ModelParams, Optional[float], float]:
    """Map physical scales to ``(params, josephson_length, time_scale)``.

    ``josephson_length`` is ``None`` when ``u.k_parallel`` is not given.
    ``time_scale`` is hbar/g: physical time = tau * time_scale.
    """
    beta = u.E_tr / abs(u.g)
    lam = u.kappa_Nex / (2.0 * abs(u.g))
    length = None
    if u.k_parallel is not None:
        if not u.k_parallel > 0:
            raise InvalidParameterError(f"k_parallel must be positive, got {u.k_parallel!r}")
        length = math.sqrt(abs(beta)) / u.k_parallel
    return make_params(lam, beta), length, u.hbar / u.g


def dimensionless_to_physical(p: ModelParams, g: float, hbar: float,
                              k_parallel: Optional[float] = None) -> UnitsContext:
    """Inverse of :func:`physical_to_dimensionless` for a chosen coupling ``g``."""
    if not g > 0:
        raise InvalidParameterError(f"coupling g must be positive, got {g!r}")
    return UnitsContext(g=g, kappa_Nex=2.0 * g * p.lam, E_tr=p.beta * g,
                        hbar=hbar, k_parallel=k_parallel)


def k_parallel_for_length(beta: float, length: float) -> float:
    """Transverse wavenumber giving Josephson length ``length`` at ``beta``."""
    return math.sqrt(abs(beta)) / length
