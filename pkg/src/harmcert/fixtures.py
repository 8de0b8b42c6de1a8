"""Named bodies: the disk and ball, the rounded triangle, and the standard counterexamples."""

from __future__ import annotations

import math

import numpy as np

from .geometry import RoundedConvexBody


def unit_disk() -> RoundedConvexBody:
    return RoundedConvexBody.from_points([[0.0, 0.0]], 1.0)


def unit_ball() -> RoundedConvexBody:
    return RoundedConvexBody.from_points([[0.0, 0.0, 0.0]], 1.0)


def ball(radius: float, dim: int = 3) -> RoundedConvexBody:
    return RoundedConvexBody.from_points([[0.0] * dim], radius)


def off_center_disk(eps: float = 0.1) -> RoundedConvexBody:
    """Unit disk centred at 1 - eps; the origin sits eps inside its boundary."""
    return RoundedConvexBody.from_points([[1.0 - eps, 0.0]], 1.0)


def rounded_triangle(circumradius: float = 0.2, radius: float = 0.4) -> RoundedConvexBody:
    """Equilateral triangle centred at 0, rounded by ``radius``; defaults give radii (0.6, 0.5, 0.4)."""
    angles = math.pi / 2 + 2 * math.pi * np.arange(3) / 3
    pts = circumradius * np.column_stack([np.cos(angles), np.sin(angles)])
    return RoundedConvexBody.from_points(pts, radius)


def stadium(length: float = 3.0, radius: float = 1.0, dim: int = 2) -> RoundedConvexBody:
    """Convex hull of two balls of the given radius whose centres are ``length`` apart, centred at 0."""
    a = np.zeros(dim)
    a[0] = length / 2
    return RoundedConvexBody.from_points([-a, a], radius)


def spatial_capsule() -> RoundedConvexBody:
    """Capsule in R^3 with radii (0.75, 0.5, 0.5)."""
    return RoundedConvexBody.from_points([[0.0, 0.0, 0.0], [0.25, 0.0, 0.0]], 0.5)


def rounded_cube(half_side: float = 0.5, radius: float = 0.25) -> RoundedConvexBody:
    s = half_side
    pts = [[x, y, z] for x in (-s, s) for y in (-s, s) for z in (-s, s)]
    return RoundedConvexBody.from_points(pts, radius)


FIXTURES = {
    "unit_disk": unit_disk,
    "unit_ball": unit_ball,
    "ball_half": lambda: ball(0.5),
    "off_center_disk": off_center_disk,
    "rounded_triangle": rounded_triangle,
    "stadium": stadium,
    "stadium_3d": lambda: stadium(dim=3),
    "spatial_capsule": spatial_capsule,
    "rounded_cube": rounded_cube,
}
