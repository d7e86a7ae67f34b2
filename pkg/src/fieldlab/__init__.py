"""fieldlab: desk-scale experiments with finite fields, elliptic curves,
diagonal forms, Laurent-series anisotropy, and first-order formulas."""

__version__ = "0.1.0"

from ._accel import HAVE_COMPILED, kernel_name

__all__ = ["HAVE_COMPILED", "kernel_name", "__version__"]
