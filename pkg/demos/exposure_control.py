"""
Trading brightness for highlight protection
===========================================

``alpha_exp`` feeds an over-exposure estimate back into the transmission
update. Larger values give a dimmer but safer result.
"""

from pathlib import Path

from itre import config, io
from itre.config import EnhanceConfig
from itre.pipeline import enhance

here = Path(__file__).resolve().parent
out = here / "output"
out.mkdir(exist_ok=True)
img = io.read_image(here.parent / "tests" / "data" / "regression" / "scene04.png")

for alpha in (0.0, 0.1, 0.25, 0.3, 0.5):
    cfg = config.with_overrides(EnhanceConfig(), {"alpha_exp": alpha})
    out = enhance(img, cfg).image
    print(f"alpha_exp={alpha:<4}  mean {out.mean():.4f}  clamped {100 * (out >= 0.99).mean():.2f}%")
    io.write_png(out / f"scene04_alpha{alpha}.png", out)
