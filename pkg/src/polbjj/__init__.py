"""Two-mode Josephson dynamics of coupled upper/lower-branch cavity polaritons."""
from .equilibria import (Branch, Family, LinearizedMode, Stability, StationaryPoint,
                         all_stationary, boundary_points, classify_stationary,
                         in_phase_stationary, linearize, out_of_phase_saddle, sine_branch_point)
from .errors import (ClassificationError, DomainError, InvalidParameterError,
                     NotOscillatoryError, PolbjjError, SingularParameterError, UnsupportedError)
from .integrator import IntegratorConfig, Trajectory, integrate, measure_frequency, time_average
from .model import (CurrentDecomposition, ModelParams, State, UnitsContext,
                    current_decomposition_small_beta, delta_e_eff, hamiltonian, make_params,
                    physical_to_dimensionless, rhs)
from .regimes import Label, MQSTType, RegimeReport, classify, critical_imbalance, separatrix_energy
from .sweep import SweepResult, SweepSpec, figure2_suite, phase_portrait, run_sweep

__version__ = "0.1.0"
