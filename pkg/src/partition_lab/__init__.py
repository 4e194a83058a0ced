"""Exact partition-type counting with verified analytic upper/lower bounds.

Submodules:

* ``series``    exact truncated integer power series and its prefix functional
* ``counting``  named counting families (plain, q-th power, weighted, plane)
* ``weights``   part-size laws h, integer weights g, one-sided envelopes
* ``specials``  extended-precision zeta/Gamma/Wright-Bessel-type evaluation
* ``inversion`` contour quadrature and shifted-atom inversion of bound symbols
* ``lattice``   brute-force lattice-point and volume sandwich oracles
* ``verdicts``  assembly of every inequality into decisive pass/fail rows
* ``cli``       the ``partition-lab`` command-line front end
"""

__version__ = "0.1.0"

from .counting import plain_family, plane_family, qpower_family, weighted_family
from .series import TruncatedSeries, euler_product_series, make_gap_series, prefix_sum_I
from .verdicts import BoundVerdict, SlopeReport, VerificationEngine

__all__ = [
    "TruncatedSeries",
    "euler_product_series",
    "make_gap_series",
    "prefix_sum_I",
    "plain_family",
    "qpower_family",
    "plane_family",
    "weighted_family",
    "BoundVerdict",
    "SlopeReport",
    "VerificationEngine",
    "__version__",
]
