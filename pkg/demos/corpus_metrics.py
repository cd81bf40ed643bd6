"""
Contrast and entropy before and after
=====================================

Enhance every regression scene with default settings and compare EME and DE.
"""

from pathlib import Path

from itre import io
from itre.metrics import report
from itre.pipeline import enhance

corpus = Path(__file__).resolve().parent.parent / "tests" / "data" / "regression"

print(f"{'image':10s} {'EME in':>8s} {'EME out':>8s} {'DE in':>6s} {'DE out':>6s}")
for path in sorted(corpus.glob("*.png")):
    img = io.read_image(path)
    before = report(img)
    after = enhance(img).report
    print(f"{path.stem:10s} {before.eme:8.2f} {after.eme:8.2f} {before.de:6.2f} {after.de:6.2f}")
