"""Computable horosphere geometry of Teichmueller space on two concrete
models: the exact torus model (upper half-plane) and square-tiled
translation surfaces.

Modules:
  kernel     exact rationals, 2x2 matrices, hyperbolic metric, brackets
  torus      extremal lengths, Kerckhoff distance, horocycles, Busemann
  origami    square-tiled surfaces, cylinders, traces, flows, re-marking
  horolab    model-agnostic horoball relations over a geometry backend
  curvegraph finite curve graphs from exact intersection data
  cli        batch command-line frontend
"""

__version__ = "0.1.0"

from .kernel import Bracket, Mat2, Rational, UpperHalfPoint
from .torus import TorusCurve, WeightedTorusFoliation, extremal_length
from .origami import Origami, MarkedFlatSurface, build_origami

__all__ = [
    "Bracket",
    "Mat2",
    "Rational",
    "UpperHalfPoint",
    "TorusCurve",
    "WeightedTorusFoliation",
    "extremal_length",
    "Origami",
    "MarkedFlatSurface",
    "build_origami",
    "__version__",
]
