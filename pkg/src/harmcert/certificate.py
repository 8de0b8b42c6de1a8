"""Radius-based certificates for conformal contractions and density bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import RadiiTriple

__all__ = [
    "DimensionContext",
    "PlanarCertificate",
    "SpatialCertificate",
    "ScalingResult",
    "phi",
    "sphere_area",
    "certify_planar",
    "certify_spatial",
    "max_scaling_planar",
    "max_scaling_spatial",
    "spatial_ball_threshold",
]

# relative gap below which phi switches to its Taylor series
PHI_SERIES_CUTOFF = 1e-8


def phi(a: float, b: float) -> float:
    """Logarithmic difference quotient (log a - log b) / (a - b), with phi(a, a) = 1/a.

    Equivalently the integral of dt / (t b + (1 - t) a) over [0, 1].
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"phi needs positive arguments, got ({a!r}, {b!r})")
    delta = a - b
    if abs(delta) > PHI_SERIES_CUTOFF * max(a, b):
        # log1p keeps full precision when a/b is close to 1
        return math.log1p(delta / b) / delta
    return 1.0 / b - delta / (2.0 * b * b) + delta * delta / (3.0 * b**3)


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2)."""
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class DimensionContext:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")

    @property
    def sphere_area(self) -> float:
        return sphere_area(self.n)

    @property
    def density_threshold(self) -> float:
        return 1.0 / sphere_area(self.n)


@dataclass(frozen=True)
class PlanarCertificate:
    lhs: float
    satisfied: bool
    scale_invariant_term: float

    @property
    def margin(self) -> float:
        return -self.lhs


@dataclass(frozen=True)
class SpatialCertificate:
    n: int
    lhs: float
    rhs: float
    satisfied: bool
    exponent: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class ScalingResult:
    lambda_max: float
    residual: float


def _check(radii: RadiiTriple) -> RadiiTriple:
    if not isinstance(radii, RadiiTriple):
        radii = RadiiTriple(*radii)
    return radii


def _ctx(ctx) -> DimensionContext:
    ctx = ctx if isinstance(ctx, DimensionContext) else DimensionContext(int(ctx))
    if ctx.n < 3:
        raise ValueError(f"the spatial certificate needs n >= 3, got {ctx.n}")
    return ctx


def _planar_terms(R_O: float, R_I: float, R_C: float) -> tuple[float, float]:
    term = (R_O - R_C) * phi(R_I, R_C)
    return term, term + 0.5 * math.log(R_C)


def certify_planar(radii: RadiiTriple) -> PlanarCertificate:
    """Check (R_O - R_C) phi(R_I, R_C) + log(R_C) / 2 <= 0."""
    radii = _check(radii)
    term, lhs = _planar_terms(radii.outer, radii.inner, radii.curvature)
    return PlanarCertificate(lhs=lhs, satisfied=lhs <= 0.0, scale_invariant_term=term)


def spatial_rhs(n: int) -> float:
    return (2.0 ** (n - 2) - 1.0) / (2.0 ** (n - 1) * (n - 2))


def _spatial_exponent(R_O: float, R_I: float, R_C: float, n: int) -> float:
    return n * max(R_O - R_C - R_I / 2.0, 0.0) * phi(R_I / 2.0, R_C)


def certify_spatial(radii: RadiiTriple, ctx=3) -> SpatialCertificate:
    """Check R_C R_I^(n-2) exp(n (R_O - R_C - R_I/2)^+ phi(R_I/2, R_C)) <= rhs(n)."""
    radii = _check(radii)
    ctx = _ctx(ctx)
    n = ctx.n
    R_O, R_I, R_C = radii.astuple()
    expo = _spatial_exponent(R_O, R_I, R_C, n)
    lhs = R_C * R_I ** (n - 2) * math.exp(expo)
    rhs = spatial_rhs(n)
    return SpatialCertificate(n=n, lhs=lhs, rhs=rhs, satisfied=lhs <= rhs, exponent=expo)


def max_scaling_planar(radii: RadiiTriple) -> ScalingResult:
    """Largest lambda with lambda * Omega still certified (planar criterion).

    The first term is invariant under scaling, so lambda solves
    T + log(lambda R_C) / 2 = 0 in closed form.
    """
    radii = _check(radii)
    term, _ = _planar_terms(*radii.astuple())
    lam = math.exp(-2.0 * term) / radii.curvature
    _, at_lam = _planar_terms(*radii.scaled(lam).astuple())
    return ScalingResult(lambda_max=lam, residual=abs(at_lam))


def max_scaling_spatial(radii: RadiiTriple, ctx=3) -> ScalingResult:
    """Largest lambda with lambda * Omega still certified (spatial criterion)."""
    radii = _check(radii)
    ctx = _ctx(ctx)
    n = ctx.n
    R_O, R_I, R_C = radii.astuple()
    rhs = spatial_rhs(n)
    base = R_C * R_I ** (n - 2) * math.exp(_spatial_exponent(R_O, R_I, R_C, n))
    lam = (rhs / base) ** (1.0 / (n - 1))
    cert = certify_spatial(radii.scaled(lam), ctx)
    return ScalingResult(lambda_max=lam, residual=abs(cert.lhs - rhs))


def spatial_ball_threshold(n: int) -> float:
    """Largest ball radius R for which (R, R, R) passes the spatial certificate."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return 0.5 * ((2.0 ** (n - 2) - 1.0) / (n - 2)) ** (1.0 / (n - 1))
