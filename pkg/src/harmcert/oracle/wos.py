"""Walk-on-spheres sampling of harmonic measure for rounded convex bodies."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ..geometry import (
    GeometryError,
    RoundedConvexBody,
    boundary_param_2d,
    nearest_boundary_batch,
    radii,
    signed_distance_batch,
)
from .rng import uniforms, walker_keys

log = logging.getLogger(__name__)

__all__ = [
    "WosConfig",
    "ExitSample",
    "ExitOutcome",
    "Bins",
    "HarmonicMeasureEstimate",
    "angular_bins",
    "arclength_bins",
    "octant_bins",
    "sample_exits",
    "wos_exit",
    "harmonic_measure",
]

# walkers per batch; results do not depend on it
BATCH = 1 << 15
OVERFLOW_LIMIT = 1e-4


@dataclass(frozen=True)
class WosConfig:
    """Walk-on-spheres settings.  ``epsilon=None`` means 1e-5 * R_I."""

    epsilon: float | None = None
    max_steps: int = 10**6
    walkers: int = 10**6
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.walkers < 1:
            raise ValueError("walkers must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def resolve_epsilon(self, body: RoundedConvexBody) -> float:
        r_in = radii(body).inner
        eps = 1e-5 * r_in if self.epsilon is None else float(self.epsilon)
        if eps > r_in / 100 * (1 + 1e-12):
            raise ValueError(f"epsilon {eps} exceeds R_I/100 = {r_in / 100}")
        return eps


class ExitSample(NamedTuple):
    points: np.ndarray  # (walkers, dim); rows of overflowed walkers are nan
    steps: np.ndarray
    overflow: np.ndarray  # bool mask
    epsilon: float

    @property
    def walkers(self) -> int:
        return len(self.steps)


class ExitOutcome(NamedTuple):
    point: np.ndarray | None
    steps: int
    overflow: bool


def _directions(keys: np.ndarray, step: int, dim: int) -> np.ndarray:
    if dim == 2:
        theta = 2.0 * math.pi * uniforms(keys, 2 * step)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    z = 1.0 - 2.0 * uniforms(keys, 2 * step)
    ang = 2.0 * math.pi * uniforms(keys, 2 * step + 1)
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([rho * np.cos(ang), rho * np.sin(ang), z])


def _walk(body, start, eps, max_steps, seed, index) -> ExitSample:
    n = len(index)
    dim = body.dim
    keys = walker_keys(seed, index)
    X = np.tile(start, (n, 1))
    steps = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    for step in range(max_steps):
        if active.size == 0:
            break
        Xa = X[active]
        d = signed_distance_batch(body, Xa)
        live = d >= eps
        if not np.all(live):
            active, Xa, d = active[live], Xa[live], d[live]
            if active.size == 0:
                break
        X[active] = Xa + d[:, None] * _directions(keys[active], step, dim)
        steps[active] += 1
    overflow = np.zeros(n, dtype=bool)
    overflow[active] = True
    points = np.full((n, dim), np.nan)
    done = ~overflow
    if np.any(done):
        _, nearest, _ = nearest_boundary_batch(body, X[done])
        points[done] = nearest
    return ExitSample(points, steps, overflow, eps)


def _check_start(body, start, eps) -> np.ndarray:
    start = np.zeros(body.dim) if start is None else np.asarray(start, dtype=float)
    if start.shape != (body.dim,):
        raise GeometryError(f"start must have {body.dim} coordinates")
    if signed_distance_batch(body, start[None, :])[0] <= eps:
        raise GeometryError("start point must be farther than epsilon from the boundary")
    return start


def sample_exits(body: RoundedConvexBody, config: WosConfig = WosConfig(), start=None) -> ExitSample:
    """Exit points of ``config.walkers`` independent walks started at ``start`` (default 0).

    Walker i always uses stream (seed, i), so the sample is bit-identical for
    any number of workers.
    """
    eps = config.resolve_epsilon(body)
    start = _check_start(body, start, eps)
    bounds = [(lo, min(lo + BATCH, config.walkers)) for lo in range(0, config.walkers, BATCH)]

    def run(b):
        return _walk(body, start, eps, config.max_steps, config.seed, np.arange(b[0], b[1], dtype=np.uint64))

    if config.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    sample = ExitSample(
        np.concatenate([p.points for p in parts]),
        np.concatenate([p.steps for p in parts]),
        np.concatenate([p.overflow for p in parts]),
        eps,
    )
    log.debug("walk-on-spheres: %d walkers, mean steps %.2f", sample.walkers, sample.steps.mean())
    return sample


def wos_exit(body: RoundedConvexBody, start, config: WosConfig, walker_index: int) -> ExitOutcome:
    """Exit point of one walker; identical to row ``walker_index`` of :func:`sample_exits`."""
    eps = config.resolve_epsilon(body)
    start = _check_start(body, start, eps)
    s = _walk(body, start, eps, config.max_steps, config.seed, np.array([walker_index], dtype=np.uint64))
    if s.overflow[0]:
        return ExitOutcome(None, int(s.steps[0]), True)
    return ExitOutcome(s.points[0], int(s.steps[0]), False)


# ---------------------------------------------------------------------------
# binned harmonic measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bins:
    """A partition of the boundary: ``label`` maps exit points to 0..count-1."""

    count: int
    label: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    description: str = ""


def angular_bins(k: int, center=(0.0, 0.0)) -> Bins:
    """k equal angular sectors about ``center`` (planar bodies), starting at angle 0."""
    c = np.asarray(center, dtype=float)

    def label(P):
        ang = np.mod(np.arctan2(P[:, 1] - c[1], P[:, 0] - c[0]), 2 * math.pi)
        return np.minimum((ang * k / (2 * math.pi)).astype(int), k - 1)

    return Bins(k, label, f"{k} angular sectors about {c.tolist()}")


def arclength_bins(body: RoundedConvexBody, k: int) -> Bins:
    """k boundary arcs of equal length."""
    param = boundary_param_2d(body)

    def label(P):
        s = param.arclength_of(P)
        return np.minimum((s * k / param.length).astype(int), k - 1)

    return Bins(k, label, f"{k} equal-arclength arcs")


def octant_bins(center=(0.0, 0.0, 0.0)) -> Bins:
    c = np.asarray(center, dtype=float)

    def label(P):
        bits = (P - c) >= 0
        return bits[:, 0] * 4 + bits[:, 1] * 2 + bits[:, 2] * 1

    return Bins(8, label, "8 coordinate octants")


@dataclass(frozen=True)
class HarmonicMeasureEstimate:
    bins: Bins
    hits: np.ndarray
    walkers: int
    overflow: int

    @property
    def probability(self) -> np.ndarray:
        return self.hits / self.walkers

    @property
    def std_error(self) -> np.ndarray:
        p = self.probability
        return np.sqrt(p * (1.0 - p) / self.walkers)

    @property
    def overflow_fraction(self) -> float:
        return self.overflow / self.walkers

    @property
    def flagged(self) -> bool:
        return self.overflow_fraction >= OVERFLOW_LIMIT


def bin_exits(sample: ExitSample, bins: Bins) -> HarmonicMeasureEstimate:
    ok = ~sample.overflow
    labels = np.asarray(bins.label(sample.points[ok]), dtype=int)
    hits = np.bincount(labels, minlength=bins.count)[: bins.count]
    return HarmonicMeasureEstimate(bins, hits, sample.walkers, int(sample.overflow.sum()))


def harmonic_measure(body: RoundedConvexBody, start, bins: Bins, config: WosConfig = WosConfig()) -> HarmonicMeasureEstimate:
    """Monte Carlo harmonic measure of each bin with respect to ``start``."""
    est = bin_exits(sample_exits(body, config, start), bins)
    if est.flagged:
        log.warning("overflow fraction %.2e exceeds %.0e", est.overflow_fraction, OVERFLOW_LIMIT)
    return est
