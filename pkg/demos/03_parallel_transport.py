"""Parallel transport keeps the Finsler length.

Transport a vector along a curve with the extremal connection, then with the
Levi-Civita connection of alpha. Only the first keeps F(X) constant.
"""

# %%
import numpy as np

from randers_extremal import Curve, parallel_transport
from randers_extremal.instances import random_generalized_berwald, rotating_beta
from randers_extremal.transport import holonomy_defect, unit_square_loop

spec = rotating_beta()
line = Curve.from_strings(["t", "0"])

# %% extremal vs Levi-Civita
ext = parallel_transport(spec, line, [1.0, 0.0], 1000)
lc = parallel_transport(spec, line, [1.0, 0.0], 1000, levi_civita=True)
print(f"extremal:     X(1) = {ext.X[-1]}, F drift {ext.F_drift:.1e}")
print(f"Levi-Civita:  X(1) = {lc.X[-1]}, F drift {lc.F_drift:.1e}, alpha drift {lc.alpha_drift:.1e}")

# %% RK4 convergence on a curved instance
spec3, _ = random_generalized_berwald(3, np.random.default_rng(3))
curve = Curve.from_strings(["0.3*t", "0.2*sin(t)", "-0.1*t^2"])
prev = None
for steps in (5, 10, 20, 40):
    d = parallel_transport(spec3, curve, [1.0, 0.5, -0.2], steps).F_drift
    print(f"steps={steps:3d}  F drift {d:.2e}" + (f"  ratio {prev / d:5.1f}" if prev else ""))
    prev = d

# %% around a square
X, drift = holonomy_defect(spec, unit_square_loop((0.0, 0.0), 1.0), [1.0, 0.0], 400)
print("after the unit square:", X, " F drift", f"{drift:.1e}")
