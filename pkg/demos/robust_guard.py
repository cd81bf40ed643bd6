"""
When every pixel looks like the brightest one
=============================================

In a dark scene with only a few flat colours, each pixel is nearly as bright
as its cluster's maximum, so the ratio stays close to 1 and the plain
pipeline hardly brightens anything. The guard swaps in the distribution of a
local-maximum illumination estimate.
"""

from pathlib import Path

from itre import config, io
from itre.config import EnhanceConfig
from itre.pipeline import enhance

here = Path(__file__).resolve().parent
out = here / "output"
out.mkdir(exist_ok=True)
data = here.parent / "tests" / "data"
guarded = config.with_overrides(EnhanceConfig(), {"rg_enabled": True})

for name in ("near_uniform_dark", "color_diverse"):
    img = io.read_image(data / f"{name}.png")
    plain = enhance(img)
    rescued = enhance(img, guarded)
    print(f"{name:18s} input {img.mean():.3f}  plain {plain.image.mean():.3f}  "
          f"guarded {rescued.image.mean():.3f}  (ITR mean {plain.itr.mean():.2f} -> {rescued.target.mean():.2f})")
    io.write_png(out / f"{name}_plain.png", plain.image)
    io.write_png(out / f"{name}_guarded.png", rescued.image)
