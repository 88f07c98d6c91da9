"""Regime map of the phase plane for the three reference beta values."""
import collections

from polbjj import IntegratorConfig, make_params, phase_portrait
from polbjj.sweep import FIG1_BETAS, REFERENCE_LAMBDA, portrait_grid

CODES = {"ZeroPhaseOscillation": "o", "PiPhaseOscillation": "p", "MQST_ZeroPhase": "Z",
         "MQST_PiPhase": "P", "MQST_RunningPhase": "R", "RunningPhase": "r",
         "NearSeparatrix": "s"}

cfg = IntegratorConfig(t_max=100, stride=10)
n_s, n_t = 11, 13
for name, beta in FIG1_BETAS.items():
    pp = phase_portrait(make_params(REFERENCE_LAMBDA, beta), portrait_grid(n_s, n_t), cfg,
                        keep_trajectories=False)
    print(f"{name}: beta = {beta}  (rows: varsigma(0) from +0.95 down; columns: theta(0) from -pi to pi)")
    labels = [CODES[e.report.label.value] if e.report else "?" for e in pp.entries]
    for i in reversed(range(n_s)):
        print("   ", " ".join(labels[i * n_t:(i + 1) * n_t]))
    print("   ", dict(collections.Counter(labels)))
    for pt in pp.stationary:
        print(f"    {pt.family.value:<16} ({pt.varsigma:+.4f}, {pt.theta:+.4f}) {pt.stability.value}")
