"""
Regenerate the bundled regression images
========================================

The test-suite reads its images from ``tests/data``. They are synthetic and
fully determined by seeds in :mod:`itre.synthetic`, so this script can
rebuild them byte for byte.
"""

from pathlib import Path

from itre import io, synthetic

out = Path(__file__).resolve().parent.parent / "tests" / "data"
(out / "regression").mkdir(parents=True, exist_ok=True)

for name, img in synthetic.regression_corpus().items():
    io.write_png(out / "regression" / f"{name}.png", img)
    print(name, img.shape, f"mean {img.mean() / 255:.3f}")

# the two Robust-Guard scenes
io.write_png(out / "near_uniform_dark.png", synthetic.near_uniform_dark())
io.write_png(out / "color_diverse.png", synthetic.color_diverse())
