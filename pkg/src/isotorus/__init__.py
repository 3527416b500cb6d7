"""Exact and certified computation for the Clifford-torus isoperimetric ratio.

Four layers:

- :mod:`isotorus.series`     exact rational truncated power series
- :mod:`isotorus.identities` exact identity / ODE / coefficient checks
- :mod:`isotorus.numerics`   certified floating-point evaluation and scans
- :mod:`isotorus.solver`     monotone inversion of the ratio function
"""

from .series import (
    DifferentialOperator,
    HypergeometricSpec,
    PowerSeries,
    Rational,
    parse_rational,
    rat,
)

__all__ = [
    "DifferentialOperator",
    "HypergeometricSpec",
    "PowerSeries",
    "Rational",
    "parse_rational",
    "rat",
]

__version__ = "0.1.0"
