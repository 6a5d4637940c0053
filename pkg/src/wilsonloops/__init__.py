"""Exact large-N Wilson loop polynomials on Z^2."""

__version__ = "0.1.0"

from .engine import compute, wilson_polynomial  # noqa: E402
from .lattice import Loop, parse_loop  # noqa: E402
from .polynomial import BetaPolynomial  # noqa: E402

__all__ = ["BetaPolynomial", "Loop", "compute", "parse_loop", "wilson_polynomial", "__version__"]
