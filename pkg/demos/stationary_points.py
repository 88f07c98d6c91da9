"""Stationary points and small oscillations of the balanced junction.

At lambda = -2, beta = 1 the effective energy gap vanishes, so the phase
plane is symmetric under varsigma -> -varsigma.
"""
import math

from polbjj import Branch, all_stationary, linearize, make_params

p = make_params(-2.0, 1.0)
print(f"lambda_eff = {p.lambda_eff:g}, alpha = {p.alpha:g}")

for pt in all_stationary(p):
    print(f"  varsigma = {pt.varsigma:+.6f}  theta/pi = {pt.theta / math.pi:+.4f}  "
          f"H = {pt.energy:+.6f}  {pt.stability.value:<8} {pt.family.value}")

# small-amplitude modes about the two phase branches
for br in Branch:
    m = linearize(p, br)
    print(f"{br.value:>4}: Omega^2 = {m.omega_sq:+.6f}  E_J = {m.e_j:+.5f}  E_C = {m.e_c:+.5f}  "
          f"F = {m.force:+.3g}")

# the coupling energy of the zero-phase mode changes sign at sqrt(1 + beta^2) = 2
for beta in (1.6, math.sqrt(3), 1.9):
    print(f"beta = {beta:.4f}: E_J = {linearize(make_params(-2, beta)).e_j:+.5f}")
