"""Domain files: JSON objects with keys ``dim``, ``points`` and ``radius``."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .geometry import GeometryError, RoundedConvexBody

ALLOWED_KEYS = ("dim", "points", "radius")


class DomainFileError(ValueError):
    pass


def parse_domain(text: str) -> RoundedConvexBody:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainFileError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DomainFileError("domain file must hold a JSON object")
    for key in data:
        if key not in ALLOWED_KEYS:
            raise DomainFileError(f"unknown key {key!r} (allowed: {', '.join(ALLOWED_KEYS)})")
    for key in ALLOWED_KEYS:
        if key not in data:
            raise DomainFileError(f"missing key {key!r}")
    dim, points, radius = data["dim"], data["points"], data["radius"]
    if isinstance(dim, bool) or dim not in (2, 3):
        raise DomainFileError(f"dim must be 2 or 3, got {dim!r}")
    if not isinstance(points, list) or not points:
        raise DomainFileError("points must be a nonempty array")
    for p in points:
        if not isinstance(p, list) or len(p) != dim or not all(_is_number(c) for c in p):
            raise DomainFileError(f"each point must be an array of {dim} numbers, got {p!r}")
    if not _is_number(radius) or not radius > 0:
        raise DomainFileError(f"radius must be a positive number, got {radius!r}")
    try:
        return RoundedConvexBody(np.array(points, dtype=float), float(radius))
    except GeometryError as exc:
        raise DomainFileError(str(exc)) from None


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def load_domain(path) -> RoundedConvexBody:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainFileError(f"cannot read {path}: {exc}") from None
    return parse_domain(text)


def dump_domain(body: RoundedConvexBody) -> str:
    """Serialise with shortest round-trip float reprs and a fixed key order."""
    data = {"dim": body.dim, "points": body.generators.tolist(), "radius": body.radius}
    return json.dumps(data, indent=None) + "\n"
