"""Exact scalar and truncated-series arithmetic.

Scalars live in Q(zeta_N)(lambda^(1/m))[l] with l = ln(lambda) formal; series
are z-Laurent polynomials over a truncated Novikov ring with Scalar
coefficients.  Everything is immutable after construction and pure.
"""

from .cyclotomic import Cyc, cyclotomic_poly
from .scalar import (
    SCALAR_ONE,
    SCALAR_ZERO,
    Scalar,
    nonequiv_limit_scalar,
    parse_scalar,
    root_of_unity,
    sc,
)
from .series import TruncSeries, deg_add, deg_total, series_invert, zero_deg

__all__ = [
    "Cyc",
    "cyclotomic_poly",
    "Scalar",
    "SCALAR_ZERO",
    "SCALAR_ONE",
    "sc",
    "root_of_unity",
    "parse_scalar",
    "nonequiv_limit_scalar",
    "TruncSeries",
    "series_invert",
    "deg_total",
    "deg_add",
    "zero_deg",
]
