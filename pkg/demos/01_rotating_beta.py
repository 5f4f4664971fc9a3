"""A flat plane with a rotating 1-form.

beta = 0.3 (cos(0.7 x1), sin(0.7 x1)) has constant length, so F = |y| + beta(y)
admits a connection preserving F. We build the extremal one and look at it.
"""

# %%
import numpy as np

from randers_extremal import extremal_connection, global_solvability
from randers_extremal.instances import rotating_beta

spec = rotating_beta(r=0.3, k=0.7)

# %% solvability on a grid
grid = np.array([[x, y] for x in np.linspace(-3, 3, 7) for y in np.linspace(-1, 1, 3)])
rep = global_solvability(spec, grid)
print("generalized Berwald:", rep.verdict, " |beta|^2 range:", min(rep.norm_beta_sq), max(rep.norm_beta_sq))

# %% the connection at the origin
res = extremal_connection(spec, (0.0, 0.0))
print("adapted frame (columns):\n", res.frame.B)
print("adapted torsion (T_12^1, T_12^2):", res.torsion_adapted.components)
print("chart torsion   (T_12^1, T_12^2):", res.torsion_chart.components)

G = res.coefficients.gamma
for r in range(2):
    for i in range(2):
        for j in range(2):
            if abs(G[r, i, j]) > 1e-14:
                print(f"Gamma^{r + 1}_{i + 1}{j + 1} = {G[r, i, j]:+.4f}")

# %% away from the origin the frame turns with beta, the torsion does not change
for x1 in (0.5, 1.0, 2.0):
    res = extremal_connection(spec, (x1, 0.0))
    print(f"x1={x1}: frame angle {np.degrees(np.arctan2(res.frame.B[1, 1], res.frame.B[0, 1])):6.2f} deg,"
          f" |T| = {res.torsion_adapted.norm():.4f}")
