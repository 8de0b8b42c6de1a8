"""Hyperbolic and quasihyperbolic distances, and the planar proof-chain trace."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .certificate import phi
from .geometry import RadiiTriple, RoundedConvexBody, signed_distance_batch

__all__ = [
    "MetricValue",
    "ProofTrace",
    "adaptive_simpson",
    "hyperbolic_disk",
    "hyperbolic_disk_distance",
    "hyperbolic_offcenter",
    "quasihyperbolic_segment_bound",
    "quasihyperbolic_cone_bound",
    "planar_proof_trace",
]


class MetricValue(NamedTuple):
    value: float
    kind: str  # "hyperbolic" | "quasihyperbolic-upper"
    endpoints: tuple


def _pt(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=float))


def hyperbolic_disk(z) -> MetricValue:
    """Hyperbolic distance from 0 to z in the unit disk (density 1/(1-|z|^2))."""
    zz = _pt(z)
    t = float(np.linalg.norm(zz))
    if t >= 1.0:
        raise ValueError("point must lie in the open unit disk")
    return MetricValue(math.atanh(t), "hyperbolic", (np.zeros_like(zz), zz))


def hyperbolic_disk_distance(z, w) -> MetricValue:
    """Two-point hyperbolic distance in the unit disk via the pseudo-hyperbolic distance."""
    zc = complex(*_pt(z)) if np.size(z) == 2 else complex(z)
    wc = complex(*_pt(w)) if np.size(w) == 2 else complex(w)
    z, w = [zc.real, zc.imag], [wc.real, wc.imag]
    if abs(zc) >= 1 or abs(wc) >= 1:
        raise ValueError("points must lie in the open unit disk")
    t = abs(zc - wc) / abs(1 - zc.conjugate() * wc)
    return MetricValue(math.atanh(t), "hyperbolic", (_pt(z), _pt(w)))


def hyperbolic_offcenter(a, R: float, z) -> MetricValue:
    """Hyperbolic distance from the centre a of the disk D(a, R) to z."""
    aa, zz = _pt(a), _pt(z)
    rho = float(np.linalg.norm(zz - aa))
    if not R > 0 or rho >= R:
        raise ValueError("z must lie inside D(a, R)")
    return MetricValue(0.5 * math.log((R + rho) / (R - rho)), "hyperbolic", (aa, zz))


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, rtol: float = 1e-8, max_depth: int = 40) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    A 32-panel composite Simpson pass fixes the absolute error target
    ``rtol * |integral|``; panels are then bisected until the Richardson
    error estimate of each meets its share of the target.
    """
    if a == b:
        return 0.0
    xs = np.linspace(a, b, 65)
    fs = [f(x) for x in xs]
    h = (b - a) / 64
    coarse = h / 3.0 * (fs[0] + fs[-1] + 4.0 * sum(fs[1:-1:2]) + 2.0 * sum(fs[2:-1:2]))
    tol = rtol * abs(coarse) / 32

    def simpson(fa, fm, fb, width):
        return width * (fa + 4.0 * fm + fb) / 6.0

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        flm, frm = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        err = left + right - whole
        if depth >= max_depth or abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, tol / 2, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, tol / 2, depth + 1
        )

    total = 0.0
    for i in range(0, 64, 2):
        whole = simpson(fs[i], fs[i + 1], fs[i + 2], 2 * h)
        total += recurse(xs[i], xs[i + 2], fs[i], fs[i + 1], fs[i + 2], whole, tol, 0)
    return total


def quasihyperbolic_segment_bound(body: RoundedConvexBody, x, y, rtol: float = 1e-8, samples: int = 65) -> MetricValue:
    """Length of the segment [x, y] in the quasihyperbolic density 1/dist(., boundary).

    This is an upper bound for the quasihyperbolic distance between x and y.
    """
    xx, yy = _pt(x), _pt(y)
    length = float(np.linalg.norm(yy - xx))
    if length == 0.0:
        return MetricValue(0.0, "quasihyperbolic-upper", (xx, yy))
    ts = np.linspace(0.0, 1.0, samples)
    if np.any(signed_distance_batch(body, xx + ts[:, None] * (yy - xx)) <= 0):
        raise ValueError("segment leaves the domain")

    def integrand(t):
        return 1.0 / signed_distance_batch(body, (xx + t * (yy - xx))[None, :])[0]

    val = length * adaptive_simpson(integrand, 0.0, 1.0, rtol=rtol)
    return MetricValue(val, "quasihyperbolic-upper", (xx, yy))


def quasihyperbolic_cone_bound(radii: RadiiTriple, a_norm: float) -> MetricValue:
    """|a| phi(R_I, R_C): bound for the quasihyperbolic distance from 0 to a centre a."""
    reach = radii.outer - radii.curvature
    if a_norm < 0 or a_norm > reach * (1 + 1e-12) + 1e-15:
        raise ValueError(f"|a| must lie in [0, R_O - R_C] = [0, {reach}]")
    return MetricValue(a_norm * phi(radii.inner, radii.curvature), "quasihyperbolic-upper", (0.0, a_norm))


@dataclass(frozen=True)
class ProofTrace:
    d: float
    pf1_bound: float
    pf4_bound: float
    pf5_lower: float
    con2_rhs: float
    d_star: float

    @property
    def contradiction(self) -> bool:
        """True when the lower bound at d exceeds the upper bound (so |z| < 1 - d)."""
        return self.pf5_lower > self.pf1_bound + self.pf4_bound


def planar_proof_trace(radii: RadiiTriple, d: float) -> ProofTrace:
    """Evaluate the hyperbolic-distance chain at boundary offset d.

    ``d_star`` is the threshold 2(1 - exp(2 con2_rhs)); for d < d_star the
    upper and lower bounds for rho(f(z), 0) are incompatible.
    """
    R_O, R_I, R_C = radii.astuple()
    if not 0 < d < R_C:
        raise ValueError(f"offset d must lie in (0, R_C) = (0, {R_C})")
    pf1 = 0.5 * math.log(2.0 * R_C / d)
    pf4 = (R_O - R_C) * phi(R_I, R_C)
    pf5 = 0.5 * math.log((2.0 - d) / d) if d < 2.0 else -math.inf
    con2 = 0.5 * math.log(R_C) + pf4
    d_star = 2.0 * (1.0 - math.exp(2.0 * con2)) if con2 < 0 else 0.0
    return ProofTrace(d, pf1, pf4, pf5, con2, d_star)
