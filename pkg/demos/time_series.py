"""The four reference runs at lambda = -2 and their regime labels."""
from polbjj import IntegratorConfig, figure2_suite

for name, tr, rep in figure2_suite(IntegratorConfig(t_max=200, stride=100)):
    print(f"{name}: beta = {tr.params.beta:g}, varsigma(0) = {tr.varsigma[0]:+.3f}, "
          f"theta(0) = {tr.theta[0]:.3f}")
    print(f"    {rep.label.value}, <varsigma> = {rep.mean_varsigma:+.4f}, "
          f"amplitude = {rep.amplitude:.3f}, type {rep.mqst_type.value if rep.mqst_type else '-'}")
    print(f"    H = {rep.energy:+.5f}, H_sep = {rep.h_sep}, max drift = {tr.max_drift:.1e}")

# a coarse text rendering of curve 4 (running phase with trapping)
_, tr, _ = figure2_suite(IntegratorConfig(t_max=40, stride=400))[3]
for t, s in zip(tr.times, tr.varsigma):
    col = int(round((s + 1) * 30))
    print(f"{t:6.1f} |" + " " * col + "*")
