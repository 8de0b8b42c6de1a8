"""Boundary density of harmonic measure: Monte Carlo probes and the Poisson kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..certificate import sphere_area
from ..geometry import RoundedConvexBody, patch_measure, probe_points, signed_distance_batch
from .wos import OVERFLOW_LIMIT, ExitSample, WosConfig, sample_exits

__all__ = [
    "DensityProbe",
    "VerificationReport",
    "poisson_density",
    "score_probes",
    "density_at",
    "verify_density",
    "BAND_CI95",
]

Z95 = 1.959963984540054
# half-width of the verdict band, in multiples of each probe's ci95
BAND_CI95 = 3.0


def poisson_density(c, R: float, n: int, pole, w) -> float:
    """Poisson kernel of B(c, R) with pole ``pole``, evaluated at the boundary point ``w``."""
    c, pole, w = (np.asarray(v, dtype=float) for v in (c, pole, w))
    rp = float(np.linalg.norm(pole - c))
    if rp >= R:
        raise ValueError("pole must lie inside the ball")
    if abs(float(np.linalg.norm(w - c)) - R) > 1e-9 * max(1.0, R):
        raise ValueError("w must lie on the sphere |w - c| = R")
    return (R * R - rp * rp) / (sphere_area(n) * R * float(np.linalg.norm(w - pole)) ** n)


@dataclass(frozen=True)
class DensityProbe:
    point: np.ndarray
    delta: float
    patch_measure: float
    hits: int
    walkers: int

    @property
    def probability(self) -> float:
        return self.hits / self.walkers

    @property
    def density(self) -> float:
        return self.probability / self.patch_measure

    @property
    def std_error(self) -> float:
        p = self.probability
        return math.sqrt(p * (1.0 - p) / self.walkers) / self.patch_measure

    @property
    def ci95(self) -> float:
        return Z95 * self.std_error

    @property
    def inconclusive(self) -> bool:
        return self.hits == 0


def _check_delta(body: RoundedConvexBody, delta: float) -> float:
    if not 0 < delta <= body.radius / 10 * (1 + 1e-12):
        raise ValueError(f"delta must lie in (0, R_C/10] = (0, {body.radius / 10}]")
    return float(delta)


def score_probes(body: RoundedConvexBody, sample: ExitSample, points, delta: float) -> list[DensityProbe]:
    """Score one shared exit sample against every probe patch B(w, delta)."""
    delta = _check_delta(body, delta)
    P = np.atleast_2d(np.asarray(points, dtype=float))
    sd = signed_distance_batch(body, P)
    if np.any(np.abs(sd) > 1e-9 * max(1.0, body.radius)):
        raise ValueError("probe points must lie on the boundary")
    exits = sample.points[~sample.overflow]
    out = []
    for w in P:
        diff = exits - w
        hits = int(np.count_nonzero(np.einsum("ij,ij->i", diff, diff) < delta * delta))
        out.append(DensityProbe(w.copy(), delta, patch_measure(body, w, delta), hits, sample.walkers))
    return out


def density_at(body: RoundedConvexBody, w, delta: float | None = None, config: WosConfig = WosConfig()) -> DensityProbe:
    """Monte Carlo density of harmonic measure (pole 0) at the boundary point ``w``."""
    delta = body.radius / 20 if delta is None else delta
    _check_delta(body, delta)
    return score_probes(body, sample_exits(body, config), [w], delta)[0]


@dataclass(frozen=True)
class VerificationReport:
    """Probe table and verdict.

    A verdict of ``verified`` means no probe contradicts the threshold; the
    probes are a finite set of boundary points, not a proof over the whole
    boundary.
    """

    probes: list[DensityProbe]
    n: int
    slack: float
    overflow_fraction: float
    band: float = BAND_CI95

    @property
    def threshold(self) -> float:
        return 1.0 / sphere_area(self.n)

    @property
    def normalized(self) -> np.ndarray:
        return np.array([p.density for p in self.probes]) / self.threshold

    @property
    def min_normalized(self) -> float:
        return float(self.normalized.min())

    @property
    def verdict(self) -> str:
        t, k = self.threshold, self.band
        if any(p.density + k * p.ci95 < t for p in self.probes):
            return "refuted"
        if self.overflow_fraction >= OVERFLOW_LIMIT or any(p.inconclusive for p in self.probes):
            return "inconclusive"
        if all(p.density - k * p.ci95 >= t * (1.0 - self.slack) for p in self.probes):
            return "verified"
        return "inconclusive"


def verify_density(
    body: RoundedConvexBody,
    config: WosConfig = WosConfig(),
    delta: float | None = None,
    probe_count: int = 8,
    slack: float = 0.05,
) -> VerificationReport:
    """Compare Monte Carlo densities at probe points with 1/sigma_{n-1}."""
    if not 0 <= slack < 1:
        raise ValueError("slack must lie in [0, 1)")
    delta = body.radius / 20 if delta is None else delta
    _check_delta(body, delta)
    sample = sample_exits(body, config)
    probes = score_probes(body, sample, probe_points(body, probe_count), delta)
    return VerificationReport(probes, body.dim, slack, float(sample.overflow.mean()))
