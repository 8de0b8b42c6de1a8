"""SVG drawing of a planar domain with its radii and probe densities."""

from __future__ import annotations

import math

import numpy as np

from .geometry import RadiiTriple, RoundedConvexBody, boundary_param_2d


def _f(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _color(normalized: float) -> str:
    # red below the threshold, green above; saturation grows with distance from 1
    t = max(0.0, min(1.0, abs(normalized - 1.0)))
    if normalized < 1.0:
        rgb = (214, int(140 * (1 - t)), int(60 * (1 - t)))
    else:
        rgb = (int(140 * (1 - t)), 160, int(60 * (1 - t)))
    return "#%02x%02x%02x" % rgb


def boundary_path(body: RoundedConvexBody) -> str:
    param = boundary_param_2d(body)
    r = body.radius
    if len(param.pieces) == 1:
        c = param.pieces[0].center
        return (
            f"M {_f(c[0] + r)} {_f(c[1])} A {_f(r)} {_f(r)} 0 1 1 {_f(c[0] - r)} {_f(c[1])} "
            f"A {_f(r)} {_f(r)} 0 1 1 {_f(c[0] + r)} {_f(c[1])} Z"
        )
    first = param.pieces[0].p0
    parts = [f"M {_f(first[0])} {_f(first[1])}"]
    for p in param.pieces:
        if p.kind == "segment":
            end = p.p0 + p.length * p.tangent
            parts.append(f"L {_f(end[0])} {_f(end[1])}")
        else:
            a = p.angle0 + p.sweep
            end = p.center + r * np.array([math.cos(a), math.sin(a)])
            large = 1 if p.sweep > math.pi else 0
            parts.append(f"A {_f(r)} {_f(r)} 0 {large} 1 {_f(end[0])} {_f(end[1])}")
    parts.append("Z")
    return " ".join(parts)


def render_svg(body: RoundedConvexBody, rad: RadiiTriple, probes=(), normalized=(), size: int = 480) -> str:
    """Boundary, R_O and R_I circles about 0, one rolling circle of radius R_C, and probes."""
    if body.dim != 2:
        raise ValueError("SVG output is only available for planar bodies")
    half = 1.1 * max(rad.outer, float(np.max(np.abs(body.generators))) + body.radius)
    stroke = half / 200
    g = body.generators
    j = int(np.argmax(np.linalg.norm(g, axis=1)))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_f(-half)} {_f(-half)} {_f(2 * half)} {_f(2 * half)}">',
        f'<g transform="scale(1,-1)" fill="none" stroke-width="{_f(stroke)}">',
        f'<path d="{boundary_path(body)}" stroke="#000000" fill="#eef3fb"/>',
        f'<circle cx="0" cy="0" r="{_f(rad.outer)}" stroke="#1f77b4" stroke-dasharray="{_f(4 * stroke)}"/>',
        f'<circle cx="0" cy="0" r="{_f(rad.inner)}" stroke="#9467bd" stroke-dasharray="{_f(stroke)} {_f(2 * stroke)}"/>',
        f'<circle cx="{_f(g[j][0])}" cy="{_f(g[j][1])}" r="{_f(rad.curvature)}" stroke="#ff7f0e"/>',
        f'<circle cx="0" cy="0" r="{_f(2 * stroke)}" fill="#000000" stroke="none"/>',
    ]
    for w, v in zip(probes, normalized):
        lines.append(
            f'<circle cx="{_f(w[0])}" cy="{_f(w[1])}" r="{_f(5 * stroke)}" fill="{_color(v)}" stroke="none">'
            f"<title>{v:.4f}</title></circle>"
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
