"""Block structure of the torsion in dimension four.

24 torsion components, 9 of them (three front short blocks) never enter the
Randers compatibility equations. The extremal connection sets them to 0 and
fills the other 15 from closed-form expressions.
"""

# %%
import numpy as np

from randers_extremal import extremal_connection
from randers_extremal.instances import random_generalized_berwald
from randers_extremal.torsion import SlotKind, free_dimension, layout

rng = np.random.default_rng(11)
spec, c = random_generalized_berwald(4, rng)
print(f"random instance with |beta| = {c:.3f} everywhere")

# %%
res = extremal_connection(spec, (0.1, -0.2, 0.3, 0.0))
T = res.torsion_adapted
for s, v in zip(layout(4), T.components):
    print(f"{s.label:8s} {s.kind.value:24s} {v:+.6f}")

# %%
blocks = T.blocks()
print({k.value: len(v) for k, v in blocks.items()})
print("zero slots:", sum(v == 0.0 for v in blocks[SlotKind.FRONT_SHORT]))
print("free parameters of the solution space:", free_dimension(4))
print("torsion norm:", T.norm())
