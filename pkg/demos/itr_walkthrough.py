"""
From colour clusters to a transmission map
==========================================

Walk one regression scene through the first half of the pipeline: group the
pixels by colour direction, read each pixel's brightness relative to the
brightest member of its group, and refine that ratio with the ADMM solver.
Intermediate maps are saved under ``demos/output`` as PFM files.
"""

from pathlib import Path

import numpy as np

from itre import io
from itre.admm import SolverConfig, solve
from itre.clustering import assign_clusters, build_codebook
from itre.itr import estimate_itr

here = Path(__file__).resolve().parent
out = here / "output"
out.mkdir(exist_ok=True)
img = io.read_image(here.parent / "tests" / "data" / "regression" / "scene00.png")
print("input", img.shape, f"mean {img.mean():.3f}")

# %%
# A Fibonacci sphere gives 1000 nearly evenly spaced colour directions.
codebook = build_codebook(1000)
clusters = assign_clusters(img, codebook)
print(f"{len(clusters.occupied)} of {codebook.size} clusters are used")

# %%
# The ratio of each pixel's radius to its cluster's (smoothed) maximum.
itr = estimate_itr(img, codebook)
print(f"ITR range {itr.min():.3f} .. {itr.max():.3f}, median {np.median(itr):.3f}")

# %%
# Refinement. The history records the objective and the constraint gap.
result = solve(itr, img, SolverConfig())
for row in result.history:
    print("iter {iteration:2d}  objective {objective:10.3f}  residual {residual:.3e}  rho {rho:8.2f}".format(**row))

io.write_pfm(out / "scene00_itr.pfm", itr)
io.write_pfm(out / "scene00_transmission.pfm", np.clip(result.t, 0.01, 1.0))
