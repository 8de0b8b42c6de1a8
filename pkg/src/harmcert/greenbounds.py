"""Lower bounds for the Green function of a convex body in R^n, n >= 3.

The chain is Harnack in the rolling ball B(a, R_C), minorisation by the Green
function of B(0, R_I), and a logarithmic-gradient estimate along the segment
from a' = (R_I/2) a/|a| to a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .certificate import certify_spatial, phi, spatial_rhs, sphere_area
from .geometry import RadiiTriple

__all__ = [
    "GreenBoundReport",
    "green_ball",
    "harnack_factor",
    "chain_penalty",
    "density_lower_bound",
    "density_limit",
]


def _dim(n) -> int:
    if int(n) != n or n < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {n!r}")
    return int(n)


def green_ball(x_norm: float, R: float, n: int) -> float:
    """Green function of B(0, R) with pole at 0, at distance x_norm from the pole."""
    n = _dim(n)
    if not 0 < x_norm <= R:
        raise ValueError("need 0 < |x| <= R")
    return (x_norm ** (2 - n) - R ** (2 - n)) / ((n - 2) * sphere_area(n))


def harnack_factor(offset: float, R: float, n: int) -> float:
    """(R - t) R^(n-2) / (R + t)^(n-1): Harnack ratio at distance t from the centre."""
    n = _dim(n)
    if not 0 <= offset < R:
        raise ValueError("need 0 <= offset < R")
    return (R - offset) * R ** (n - 2) / (R + offset) ** (n - 1)


def chain_penalty(radii: RadiiTriple, n: int) -> float:
    """exp(-n (R_O - R_C - R_I/2)^+ phi(R_I/2, R_C)); 1 when the centre is within R_I/2."""
    n = _dim(n)
    R_O, R_I, R_C = radii.astuple()
    gap = max(R_O - R_C - R_I / 2.0, 0.0)
    return math.exp(-n * gap * phi(R_I / 2.0, R_C))


@dataclass(frozen=True)
class GreenBoundReport:
    n: int
    d: float
    harnack_factor: float
    ball_minorant: float
    chain_penalty: float
    density_ratio_bound: float
    limit: float


def density_limit(radii: RadiiTriple, n: int) -> float:
    """Closed-form d -> 0 limit of the density ratio bound."""
    n = _dim(n)
    R_O, R_I, R_C = radii.astuple()
    return spatial_rhs(n) / (R_C * R_I ** (n - 2)) * chain_penalty(radii, n)


def density_lower_bound(radii: RadiiTriple, n: int, d: float) -> GreenBoundReport:
    """Lower bound for sigma_{n-1} g(x) / d at a point x at distance d from the boundary."""
    n = _dim(n)
    R_O, R_I, R_C = radii.astuple()
    if not 0 < d < R_C:
        raise ValueError(f"offset d must lie in (0, R_C) = (0, {R_C})")
    sigma = sphere_area(n)
    hf = harnack_factor(R_C - d, R_C, n)
    minorant = (2.0 ** (n - 2) - 1.0) * R_I ** (2 - n) / ((n - 2) * sigma)
    pen = chain_penalty(radii, n)
    ratio = (hf / d) * sigma * minorant * pen
    return GreenBoundReport(n, d, hf, minorant, pen, ratio, density_limit(radii, n))


def certificate_ratio(radii: RadiiTriple, n: int) -> float:
    """rhs / lhs of the spatial certificate; equals density_limit algebraically."""
    cert = certify_spatial(radii, n)
    return cert.rhs / cert.lhs
