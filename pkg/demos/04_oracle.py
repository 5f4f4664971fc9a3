"""Brute force against closed form.

The oracle stacks the compatibility equations for many tangent vectors and
solves them by SVD. Its minimum-norm solution must be the closed-form torsion,
and its kernel has dimension n (n-1)(n-2)/2.
"""

# %%
import numpy as np

from randers_extremal import extremal_connection
from randers_extremal.instances import growing_beta, random_generalized_berwald, random_points
from randers_extremal.oracle import cross_validate, solve_point

rng = np.random.default_rng(4)

# %%
for n in (2, 3, 4):
    spec, _ = random_generalized_berwald(n, rng)
    res = extremal_connection(spec, random_points(n, rng, 1)[0])
    for mode, data, T in (("adapted", res.adapted, res.torsion_adapted), ("chart", res.data, res.torsion_chart)):
        space = solve_point(data, rng)
        cv = cross_validate(T, space)
        print(f"n={n} {mode:7s} rows={space.system.rows.shape[0]:3d} dim={space.affine_dimension:2d}"
              f" |closed - oracle|={cv.difference:.1e}")

# %% a point where no compatible connection exists
res = extremal_connection(growing_beta(), (0.3, 0.0), strict=False)
space = solve_point(res.adapted)
cv = cross_validate(res.torsion_adapted, space)
print("growing beta: least-squares residual", f"{space.residual:.3f}", "passed:", cv.passed)
