"""Switching of the time-averaged imbalance across the separatrix.

The first sweep raises varsigma(0) through the critical value
varsigma_c = sin(pi/12); the second raises beta at fixed varsigma(0) = 0.2.
"""
import math

from polbjj import critical_imbalance, make_params, run_sweep
from polbjj.sweep import figure3a_spec, figure3b_spec, first_mqst, jumps

sc = critical_imbalance(make_params(-2, 1))
print(f"varsigma_c = {sc:.6f} (sin(pi/12) = {math.sin(math.pi / 12):.6f})")

res = run_sweep(figure3a_spec(n=51))
for r in res.rows[::5]:
    print(f"  varsigma(0)/varsigma_c = {r.ratio:5.2f}  <varsigma> = {r.mean_varsigma:+.4f}  {r.label.value}")
print("first self-trapped row:", round(first_mqst(res).value, 4))

res = run_sweep(figure3b_spec(n=111))
for b, d in jumps(res):
    print(f"jump of {d:+.3f} in <varsigma> near beta = {b:.3f}")
