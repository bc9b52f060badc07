# # Sampling the correlation space
#
# A state and a choice of settings map to a point
# (<D^(1)>, <D^(2)>, <D^(3)>).  Random samples of each state class fill
# regions we can compare with the cube, cuboids, cylinders and sphere.

# %%
import numpy as np

from bisepbell import ALL, BISEPARABLE, FULLY_SEPARABLE, classify, scan_plane
from bisepbell.geometry import curves_document, write_svg

# %%
for cls in (FULLY_SEPARABLE, BISEPARABLE(1), ALL):
    s = scan_plane("GENERAL", (1, 2), 20_000, cls, seed=0)
    print(f"{str(cls):10s} max|d1| {np.abs(s.points[:, 0]).max():.3f}  max|d2| {np.abs(s.points[:, 1]).max():.3f}")

# %% [markdown]
# Biseparable states with qubit 1 split off stretch along d1 only.  Write
# the ALL scan as CSV and SVG next to this script.

# %%
s = scan_plane("GENERAL", (1, 2), 20_000, ALL, seed=0)
s.write_csv("scan_d1_d2.csv")
write_svg("scan_d1_d2.svg", "GENERAL", (1, 2), s.points)
print(curves_document("GENERAL", (1, 2))[:200], "...")

# %% [markdown]
# Region tests on a few hand-picked points.

# %%
for v in ((0, 0, 0), (1.2, 0.5, 0.1), (1.2, 1.2, 0.0)):
    r = classify(v)
    print(v, "region I" if r.in_region_I else "", "cuboids", r.in_cuboid, "feasible", r.feasible)
