"""Ball-rounded convex hulls ``conv(P) + r*B`` in the plane and in space.

Every body handled by the package is a Minkowski sum of the convex hull of a
finite point set with a closed ball of radius ``r``.  Such a body is convex,
has a C^{1,1} boundary, and its minimal radius of curvature is exactly ``r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.spatial import ConvexHull

__all__ = [
    "GeometryError",
    "RoundedConvexBody",
    "RadiiTriple",
    "SignedDistanceResult",
    "BoundaryPoint2D",
    "BoundaryParam2D",
    "hull_reduce",
    "radii",
    "signed_distance",
    "signed_distance_batch",
    "support_function",
    "boundary_param_2d",
    "probe_points",
    "patch_measure",
]

# rows per chunk in the point-versus-simplex kernels
_CHUNK_ELEMS = 1 << 21


class GeometryError(ValueError):
    """Raised for malformed bodies or queries outside an operation's domain."""


# ---------------------------------------------------------------------------
# convex hulls
# ---------------------------------------------------------------------------


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: np.ndarray, tol: float) -> list[int]:
    """Indices of the extreme points of ``pts`` (already lexsorted), CCW.

    Starts at the lexicographically smallest point.  Collinear points are
    dropped.
    """
    m = len(pts)
    if m <= 2:
        return list(range(m))

    def half(order):
        chain: list[int] = []
        for i in order:
            while len(chain) >= 2 and _cross2(pts[chain[-2]], pts[chain[-1]], pts[i]) <= tol:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(range(m))
    upper = half(range(m - 1, -1, -1))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 0:
        return [0]
    return hull


def _lexsorted_unique(points: np.ndarray) -> np.ndarray:
    return np.unique(points, axis=0)


def _scale_of(points: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(points))))


def _affine_frame(points: np.ndarray, tol: float):
    """Rank of the affine hull plus an orthonormal basis (rows) of its span."""
    center = points.mean(axis=0)
    if len(points) == 1:
        return 0, center, np.zeros((0, points.shape[1]))
    _, s, vt = np.linalg.svd(points - center)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return rank, center, vt[:rank]


def hull_reduce(points) -> np.ndarray:
    """Extreme points of the convex hull of ``points``.

    Planar output is counterclockwise starting from the lexicographically
    smallest vertex; spatial output is in lexicographic order.  Degenerate
    inputs (a point, a segment, a planar polygon in space) are supported.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise GeometryError("hull_reduce needs a nonempty (m, dim) array of points")
    if pts.shape[1] not in (2, 3):
        raise GeometryError(f"dimension must be 2 or 3, got {pts.shape[1]}")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("points must be finite")
    pts = _lexsorted_unique(pts)
    scale = _scale_of(pts)
    tol = 1e-12 * scale * scale

    if pts.shape[1] == 2:
        return pts[_monotone_chain(pts, tol)]

    rank, center, basis = _affine_frame(pts, 1e-10)
    if rank == 0:
        return pts[:1]
    if rank == 1:
        t = (pts - center) @ basis[0]
        ends = sorted({int(np.argmin(t)), int(np.argmax(t))})
        return pts[ends]
    if rank == 2:
        local = (pts - center) @ basis.T
        order = np.lexsort((local[:, 1], local[:, 0]))
        chain = _monotone_chain(local[order], tol)
        return pts[np.sort(order[chain])]
    hull = ConvexHull(pts)
    return pts[np.sort(hull.vertices)]


# ---------------------------------------------------------------------------
# closest-point kernels
# ---------------------------------------------------------------------------


def _closest_on_segments(X, A, B):
    """Closest points from every row of X to every segment [A_j, B_j].

    Returns squared distances (N, S) and closest points (N, S, d).
    """
    AB = B - A
    L2 = np.einsum("ij,ij->i", AB, AB)
    safe = np.where(L2 > 0, L2, 1.0)
    XA = X[:, None, :] - A[None, :, :]
    t = np.clip(np.einsum("nsd,sd->ns", XA, AB) / safe, 0.0, 1.0)
    P = A[None, :, :] + t[..., None] * AB[None, :, :]
    diff = X[:, None, :] - P
    return np.einsum("nsd,nsd->ns", diff, diff), P


def _closest_on_triangles(X, A, B, C, normals):
    """Closest points from rows of X to triangles (A_j, B_j, C_j).

    ``normals`` must be the unit normals cross(B - A, C - A) normalised.
    """
    XA = X[:, None, :] - A[None, :, :]
    h = np.einsum("ntd,td->nt", XA, normals)
    P0 = X[:, None, :] - h[..., None] * normals[None, :, :]
    inside = np.ones(h.shape, dtype=bool)
    for U, V in ((A, B), (B, C), (C, A)):
        e = np.cross(V - U, P0 - U[None, :, :])
        inside &= np.einsum("ntd,td->nt", e, normals) >= 0.0
    best_d2 = np.where(inside, h * h, np.inf)
    best_P = np.where(inside[..., None], P0, 0.0)
    for U, V in ((A, B), (B, C), (C, A)):
        UV = V - U
        L2 = np.einsum("ij,ij->i", UV, UV)
        XU = X[:, None, :] - U[None, :, :]
        t = np.clip(np.einsum("ntd,td->nt", XU, UV) / L2, 0.0, 1.0)
        P = U[None, :, :] + t[..., None] * UV[None, :, :]
        diff = X[:, None, :] - P
        d2 = np.einsum("ntd,ntd->nt", diff, diff)
        better = d2 < best_d2
        best_d2 = np.where(better, d2, best_d2)
        best_P = np.where(better[..., None], P, best_P)
    return best_d2, best_P


class _HullData:
    """Precomputed combinatorics of conv(generators)."""

    def __init__(self, gens: np.ndarray):
        self.gens = gens
        dim = gens.shape[1]
        self.dim = dim
        self.scale = _scale_of(gens)
        self.tol = 1e-9 * self.scale
        m = len(gens)
        # facet planes  n . x <= b  (only when K is full dimensional)
        self.normals = np.zeros((0, dim))
        self.offsets = np.zeros(0)
        # facets of a 3D hull: (normal, offset, vertex indices)
        self.facets: list[tuple[np.ndarray, float, tuple[int, ...]]] = []
        # hull edges (i, j) of a 3D hull with adjacent merged facet ids
        self.edges: list[tuple[int, int, tuple[int, ...]]] = []
        self.plane_normal = None
        self.perp = None

        if dim == 2:
            self.rank = 0 if m == 1 else (1 if m == 2 else 2)
            if m == 1:
                self.seg_a = gens.copy()
                self.seg_b = gens.copy()
                self.seg_normals = np.array([[1.0, 0.0]])
            else:
                nxt = np.roll(gens, -1, axis=0)
                tang = nxt - gens
                tang /= np.linalg.norm(tang, axis=1)[:, None]
                self.seg_a = gens.copy()
                self.seg_b = nxt
                self.seg_normals = np.column_stack([tang[:, 1], -tang[:, 0]])
                if m >= 3:
                    self.normals = self.seg_normals.copy()
                    self.offsets = np.einsum("ij,ij->i", self.normals, gens)
            if m == 2:
                self.perp = self.seg_normals[0]
            self.kind = "segments"
            return

        rank, center, basis = _affine_frame(gens, 1e-10)
        self.rank = rank
        if rank == 0:
            self.kind = "segments"
            self.seg_a = gens.copy()
            self.seg_b = gens.copy()
            self.seg_normals = np.array([[0.0, 0.0, 1.0]])
            return
        if rank == 1:
            self.kind = "segments"
            self.seg_a = gens[:1].copy()
            self.seg_b = gens[1:2].copy()
            d = basis[0]
            trial = np.eye(3)[int(np.argmin(np.abs(d)))]
            perp = trial - (trial @ d) * d
            self.perp = perp / np.linalg.norm(perp)
            self.seg_normals = self.perp[None, :]
            return
        self.kind = "triangles"
        if rank == 2:
            n = np.cross(basis[0], basis[1])
            n /= np.linalg.norm(n)
            local = (gens - center) @ basis.T
            ang = np.arctan2(local[:, 1] - local[:, 1].mean(), local[:, 0] - local[:, 0].mean())
            order = np.argsort(ang, kind="stable")
            self.polygon = order
            tris = [(order[0], order[i], order[i + 1]) for i in range(1, m - 1)]
            self.tris = np.array(tris, dtype=int)
            self.plane_normal = n
            self.perp = n
            # in-plane outward normals of polygon edges
            P = gens[order]
            Q = np.roll(P, -1, axis=0)
            t = Q - P
            t /= np.linalg.norm(t, axis=1)[:, None]
            inplane = np.cross(t, n)
            # orient outward
            mid = 0.5 * (P + Q) - gens.mean(axis=0)
            sgn = np.sign(np.einsum("ij,ij->i", inplane, mid))
            sgn[sgn == 0] = 1.0
            self.poly_edge_normals = inplane * sgn[:, None]
            self._set_triangles()
            return

        hull = ConvexHull(gens)
        tris = hull.simplices.copy()
        eq = hull.equations
        # orient every triangle so its geometric normal is the outward normal
        A, B, C = gens[tris[:, 0]], gens[tris[:, 1]], gens[tris[:, 2]]
        geo = np.cross(B - A, C - A)
        flip = np.einsum("ij,ij->i", geo, eq[:, :3]) < 0
        tris[flip] = tris[flip][:, [0, 2, 1]]
        self.tris = tris
        self._set_triangles()
        # merge coplanar triangles into facets
        key = np.round(eq / self.scale * np.array([1, 1, 1, 1.0]), 9)
        facet_of = np.empty(len(tris), dtype=int)
        seen: dict[tuple, int] = {}
        for i, row in enumerate(map(tuple, key)):
            if row not in seen:
                seen[row] = len(seen)
            facet_of[i] = seen[row]
        self.facet_of_tri = facet_of
        for f in range(len(seen)):
            members = np.nonzero(facet_of == f)[0]
            nrm = eq[members[0], :3] / np.linalg.norm(eq[members[0], :3])
            off = float(nrm @ gens[tris[members[0], 0]])
            verts = tuple(sorted(set(tris[members].ravel().tolist())))
            self.facets.append((nrm, off, verts))
        self.normals = np.array([f[0] for f in self.facets])
        self.offsets = np.array([f[1] for f in self.facets])
        edge_faces: dict[tuple[int, int], set[int]] = {}
        for i, tri in enumerate(tris):
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                e = (int(min(a, b)), int(max(a, b)))
                edge_faces.setdefault(e, set()).add(int(facet_of[i]))
        for e in sorted(edge_faces):
            fs = edge_faces[e]
            if len(fs) >= 2:
                self.edges.append((e[0], e[1], tuple(sorted(fs))))

    def _set_triangles(self):
        g = self.gens
        self.tri_a = g[self.tris[:, 0]]
        self.tri_b = g[self.tris[:, 1]]
        self.tri_c = g[self.tris[:, 2]]
        n = np.cross(self.tri_b - self.tri_a, self.tri_c - self.tri_a)
        self.tri_normals = n / np.linalg.norm(n, axis=1)[:, None]

    @property
    def full_dimensional(self) -> bool:
        return len(self.offsets) > 0

    def _n_simplices(self) -> int:
        return len(self.seg_a) if self.kind == "segments" else len(self.tris)

    def nearest_on_boundary(self, X: np.ndarray, need_points: bool = True):
        """Distance from X to the boundary of K (or to K when K is thin).

        Returns (dist, q, inside, simplex index); ``q`` is None unless
        ``need_points``.
        """
        N = len(X)
        S = self._n_simplices()
        chunk = max(256, _CHUNK_ELEMS // max(S, 1))
        dist = np.empty(N)
        idx = np.empty(N, dtype=int)
        q = np.empty_like(X) if need_points else None
        for lo in range(0, N, chunk):
            Xc = X[lo : lo + chunk]
            if self.kind == "segments":
                d2, P = _closest_on_segments(Xc, self.seg_a, self.seg_b)
            else:
                d2, P = _closest_on_triangles(Xc, self.tri_a, self.tri_b, self.tri_c, self.tri_normals)
            j = np.argmin(d2, axis=1)
            rows = np.arange(len(Xc))
            dist[lo : lo + chunk] = np.sqrt(d2[rows, j])
            idx[lo : lo + chunk] = j
            if need_points:
                q[lo : lo + chunk] = P[rows, j]
        if self.full_dimensional:
            inside = np.max(X @ self.normals.T - self.offsets, axis=1) <= 0.0
        else:
            inside = np.zeros(N, dtype=bool)
        return dist, q, inside, idx

    def fallback_normals(self, idx: np.ndarray) -> np.ndarray:
        if self.kind == "segments":
            if self.rank == 0:
                return np.tile(self.seg_normals[0], (len(idx), 1))
            return self.seg_normals[idx]
        return self.tri_normals[idx]


# ---------------------------------------------------------------------------
# body, radii
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiiTriple:
    """Outer, inner and curvature radius of a body containing the origin."""

    outer: float
    inner: float
    curvature: float

    def __post_init__(self):
        for name in ("outer", "inner", "curvature"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} radius must be a positive finite number, got {v!r}")
        slack = 1e-12 * self.outer
        if self.inner > self.outer + slack or self.curvature > self.outer + slack:
            raise ValueError(
                f"radii violate R_O >= R_I and R_O >= R_C: {self.outer}, {self.inner}, {self.curvature}"
            )

    def scaled(self, lam: float) -> "RadiiTriple":
        return RadiiTriple(lam * self.outer, lam * self.inner, lam * self.curvature)

    def astuple(self) -> tuple[float, float, float]:
        return (self.outer, self.inner, self.curvature)


class SignedDistanceResult(NamedTuple):
    distance: float
    nearest: np.ndarray
    region: str
    normal: np.ndarray


class BoundaryPoint2D(NamedTuple):
    arclength: float
    position: np.ndarray
    outward_normal: np.ndarray
    curvature: float


@dataclass(frozen=True, eq=False)
class RoundedConvexBody:
    """The body ``conv(generators) + radius * B`` with the origin inside.

    ``generators`` is reduced to the extreme points of its hull on
    construction, so two bodies built from different point sets with the same
    hull compare equal.
    """

    generators: np.ndarray
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise GeometryError(f"rounding radius must be positive, got {self.radius!r}")
        gens = hull_reduce(self.generators)
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "radius", r)
        if signed_distance_batch(self, np.zeros((1, self.dim)))[0] <= 0:
            raise GeometryError("the origin must lie in the interior of the body")

    @classmethod
    def from_points(cls, points, radius: float) -> "RoundedConvexBody":
        return cls(np.asarray(points, dtype=float), radius)

    @property
    def dim(self) -> int:
        return int(self.generators.shape[1])

    @cached_property
    def _hull(self) -> _HullData:
        return _HullData(self.generators)

    def scaled(self, lam: float) -> "RoundedConvexBody":
        if not lam > 0:
            raise GeometryError("scale factor must be positive")
        return RoundedConvexBody(lam * self.generators, lam * self.radius)

    def __eq__(self, other):
        if not isinstance(other, RoundedConvexBody):
            return NotImplemented
        return (
            self.radius == other.radius
            and self.generators.shape == other.generators.shape
            and bool(np.all(self.generators == other.generators))
        )

    def __hash__(self):
        return hash((self.radius, self.generators.tobytes()))

    def __repr__(self):
        return f"RoundedConvexBody(dim={self.dim}, generators={self.generators.tolist()}, radius={self.radius})"


def support_function(body: RoundedConvexBody, u) -> np.ndarray:
    """h(u) = max_i <p_i, u> + r |u| for one direction or an array of them."""
    U = np.atleast_2d(np.asarray(u, dtype=float))
    h = np.max(U @ body.generators.T, axis=1) + body.radius * np.linalg.norm(U, axis=1)
    return h if np.ndim(u) > 1 else h[0]


def _signed_core(body: RoundedConvexBody, X: np.ndarray, need_points: bool):
    hull = body._hull
    dist, q, inside, idx = hull.nearest_on_boundary(X, need_points)
    r = body.radius
    sd = np.where(inside, r + dist, r - dist)
    if not need_points:
        return sd, None, None, None, None
    diff = X - q
    with np.errstate(invalid="ignore", divide="ignore"):
        normal = diff / dist[:, None]
    normal = np.where(inside[:, None], -normal, normal)
    tiny = dist <= 1e-14 * hull.scale
    if np.any(tiny):
        normal[tiny] = hull.fallback_normals(idx[tiny])
    nearest = q + r * normal
    return sd, nearest, normal, q, idx


def signed_distance_batch(body: RoundedConvexBody, X) -> np.ndarray:
    """Signed distance to the boundary (positive inside) for an array of points."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != body.generators.shape[1]:
        raise GeometryError(f"expected an (N, {body.generators.shape[1]}) array")
    return _signed_core(body, X, need_points=False)[0]


def nearest_boundary_batch(body: RoundedConvexBody, X):
    """Signed distance, nearest boundary point and outward normal there."""
    X = np.asarray(X, dtype=float)
    sd, nearest, normal, _, _ = _signed_core(body, X, need_points=True)
    return sd, nearest, normal


def _classify(body: RoundedConvexBody, q: np.ndarray, normal: np.ndarray) -> list[tuple[str, tuple]]:
    """Boundary piece of each point whose projection onto K is ``q``."""
    hull = body._hull
    g = body.generators
    tol = hull.tol
    dv = np.linalg.norm(q[:, None, :] - g[None, :, :], axis=2)
    out: list[tuple[str, tuple]] = []
    for k in range(len(q)):
        j = int(np.argmin(dv[k]))
        if dv[k, j] <= tol:
            out.append(("vertex-sphere", (j,)))
            continue
        if hull.dim == 2:
            d2, _ = _closest_on_segments(q[k : k + 1], hull.seg_a, hull.seg_b)
            out.append(("facet", (int(np.argmin(d2[0])),)))
        elif hull.rank == 1:
            out.append(("edge", (0,)))
        elif hull.rank == 2:
            P = g[hull.polygon]
            d2, _ = _closest_on_segments(q[k : k + 1], P, np.roll(P, -1, axis=0))
            e = int(np.argmin(d2[0]))
            if d2[0, e] <= tol * tol:
                out.append(("edge", (e,)))
            else:
                side = 0 if normal[k] @ hull.plane_normal > 0 else 1
                out.append(("facet", (side,)))
        else:
            active = np.nonzero(np.abs(hull.normals @ q[k] - hull.offsets) <= tol)[0]
            if len(active) >= 2:
                out.append(("edge", tuple(int(a) for a in active)))
            elif len(active) == 1:
                out.append(("facet", (int(active[0]),)))
            else:
                # q strictly inside K cannot happen for a boundary projection
                out.append(("facet", (int(np.argmax(hull.normals @ normal[k])),)))
    return out


def signed_distance(body: RoundedConvexBody, x) -> SignedDistanceResult:
    """Signed distance from ``x`` to the boundary, nearest point and piece type."""
    X = np.asarray(x, dtype=float).reshape(1, -1)
    if X.shape[1] != body.dim:
        raise GeometryError(f"point must have {body.dim} coordinates")
    sd, nearest, normal, q, _ = _signed_core(body, X, need_points=True)
    region, _ = _classify(body, q, normal)[0]
    return SignedDistanceResult(float(sd[0]), nearest[0], region, normal[0])


def radii(body: RoundedConvexBody) -> RadiiTriple:
    """(R_O, R_I, R_C) for a rounded hull.

    R_O is the farthest generator pushed out by r, R_I the distance from the
    origin to the boundary (the minimum of the support function over unit
    directions) and R_C the rounding radius.
    """
    r = body.radius
    outer = float(np.max(np.linalg.norm(body.generators, axis=1))) + r
    inner = float(signed_distance_batch(body, np.zeros((1, body.dim)))[0])
    if inner <= 0:
        raise GeometryError("the origin is not an interior point")
    return RadiiTriple(outer, min(inner, outer), r)


# ---------------------------------------------------------------------------
# planar boundary parametrisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Piece:
    kind: str  # "segment" | "arc"
    s0: float
    length: float
    # segment: start point, unit tangent, outward normal
    # arc: centre, start angle, sweep
    p0: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    center: np.ndarray
    angle0: float
    sweep: float
    vertex: int


class BoundaryParam2D:
    """Arclength parametrisation of a planar rounded-hull boundary.

    The boundary alternates straight pieces (translated hull edges) and
    circular arcs of radius r around the hull vertices, counterclockwise,
    starting at the beginning of the first straight piece (or at angle 0 for
    a disk).
    """

    def __init__(self, body: RoundedConvexBody):
        if body.dim != 2:
            raise GeometryError("boundary_param_2d needs a planar body")
        self.body = body
        r = body.radius
        g = body.generators
        m = len(g)
        pieces: list[_Piece] = []
        zero = np.zeros(2)
        s = 0.0
        if m == 1:
            pieces.append(_Piece("arc", 0.0, 2 * math.pi * r, zero, zero, zero, g[0].copy(), 0.0, 2 * math.pi, 0))
        else:
            hull = body._hull
            nrm = hull.seg_normals
            for i in range(m):
                j = (i + 1) % m
                a, b = g[i], g[j]
                length = float(np.linalg.norm(b - a))
                t = (b - a) / length
                pieces.append(_Piece("segment", s, length, a + r * nrm[i], t, nrm[i], zero, 0.0, 0.0, -1))
                s += length
                a0 = math.atan2(nrm[i][1], nrm[i][0])
                a1 = math.atan2(nrm[j][1], nrm[j][0])
                sweep = (a1 - a0) % (2 * math.pi)
                if m == 2:
                    sweep = math.pi
                pieces.append(_Piece("arc", s, r * sweep, zero, zero, zero, b.copy(), a0, sweep, j))
                s += r * sweep
        self.pieces = pieces
        self.length = float(sum(p.length for p in pieces))
        self._starts = np.array([p.s0 for p in pieces])

    def evaluate(self, s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Positions, outward normals and curvatures at arclengths ``s``."""
        s = np.mod(np.atleast_1d(np.asarray(s, dtype=float)), self.length)
        k = np.clip(np.searchsorted(self._starts, s, side="right") - 1, 0, len(self.pieces) - 1)
        pos = np.empty((len(s), 2))
        nrm = np.empty((len(s), 2))
        curv = np.empty(len(s))
        r = self.body.radius
        for i, p in enumerate(self.pieces):
            sel = k == i
            if not np.any(sel):
                continue
            u = s[sel] - p.s0
            if p.kind == "segment":
                pos[sel] = p.p0 + u[:, None] * p.tangent
                nrm[sel] = p.normal
                curv[sel] = 0.0
            else:
                ang = p.angle0 + u / r
                n = np.column_stack([np.cos(ang), np.sin(ang)])
                pos[sel] = p.center + r * n
                nrm[sel] = n
                curv[sel] = 1.0 / r
        return pos, nrm, curv

    def eval(self, s: float) -> BoundaryPoint2D:
        pos, nrm, curv = self.evaluate([s])
        return BoundaryPoint2D(float(np.mod(s, self.length)), pos[0], nrm[0], float(curv[0]))

    def arclength_of(self, points) -> np.ndarray:
        """Arclength coordinate of the boundary piece point nearest each input."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        best = np.full(len(P), np.inf)
        s_out = np.zeros(len(P))
        r = self.body.radius
        for p in self.pieces:
            if p.kind == "segment":
                t = np.clip((P - p.p0) @ p.tangent, 0.0, p.length)
                d = np.linalg.norm(P - (p.p0 + t[:, None] * p.tangent), axis=1)
                s_local = t
            else:
                rel = P - p.center
                off = np.mod(np.arctan2(rel[:, 1], rel[:, 0]) - p.angle0, 2 * math.pi)
                off = np.where(off <= p.sweep, off, np.where(off - p.sweep < 2 * math.pi - off, p.sweep, 0.0))
                q = p.center + r * np.column_stack([np.cos(p.angle0 + off), np.sin(p.angle0 + off)])
                d = np.linalg.norm(P - q, axis=1)
                s_local = r * off
            better = d < best
            best = np.where(better, d, best)
            s_out = np.where(better, p.s0 + s_local, s_out)
        return np.mod(s_out, self.length)

    def patch_length(self, w, delta: float) -> float:
        """Exact arclength of the boundary inside the open disk B(w, delta)."""
        w = np.asarray(w, dtype=float)
        r = self.body.radius
        total = 0.0
        for p in self.pieces:
            if p.kind == "segment":
                a = p.p0 - w
                b = float(a @ p.tangent)
                disc = b * b - float(a @ a) + delta * delta
                if disc <= 0:
                    continue
                root = math.sqrt(disc)
                lo, hi = max(0.0, -b - root), min(p.length, -b + root)
                total += max(0.0, hi - lo)
            else:
                rel = w - p.center
                D = float(np.hypot(rel[0], rel[1]))
                if D == 0.0:
                    total += r * p.sweep if r < delta else 0.0
                    continue
                c = (r * r + D * D - delta * delta) / (2 * r * D)
                if c >= 1.0:
                    continue
                beta = math.pi if c <= -1.0 else math.acos(c)
                alpha = math.atan2(rel[1], rel[0])
                lo0, hi0 = p.angle0, p.angle0 + p.sweep
                acc = 0.0
                for k in range(-2, 3):
                    lo = max(lo0, alpha - beta + 2 * math.pi * k)
                    hi = min(hi0, alpha + beta + 2 * math.pi * k)
                    acc += max(0.0, hi - lo)
                total += r * min(acc, p.sweep)
        return total


def boundary_param_2d(body: RoundedConvexBody) -> BoundaryParam2D:
    return BoundaryParam2D(body)


# ---------------------------------------------------------------------------
# probe points and patch measure
# ---------------------------------------------------------------------------


def _fibonacci_sphere(k: int) -> np.ndarray:
    i = np.arange(k) + 0.5
    z = 1.0 - 2.0 * i / k
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _unit(v):
    n = np.linalg.norm(v)
    return v / n


def _farthest_point(body: RoundedConvexBody) -> np.ndarray:
    g = body.generators
    norms = np.linalg.norm(g, axis=1)
    j = int(np.argmax(norms))
    if norms[j] == 0.0:
        u = np.zeros(body.dim)
        u[0] = 1.0
    else:
        u = g[j] / norms[j]
    return g[j] + body.radius * u


def _dedupe(points: list[np.ndarray], tol: float) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    return np.array(kept)


def probe_points(body: RoundedConvexBody, k: int = 0) -> np.ndarray:
    """Deterministic boundary points used to probe harmonic-measure density.

    Contains one representative per boundary piece (flat-piece centroids,
    arc or edge midpoints, vertex radial points), the boundary point farthest
    from the origin, and ``k`` extra points: equally spaced in arclength for
    planar bodies, along a Fibonacci lattice of outward normals in space.
    """
    if k < 0:
        raise GeometryError("probe count must be nonnegative")
    r = body.radius
    g = body.generators
    hull = body._hull
    cands: list[np.ndarray] = []
    if body.dim == 2:
        param = boundary_param_2d(body)
        for p in param.pieces:
            if p.kind == "segment":
                cands.append(p.p0 + 0.5 * p.length * p.tangent)
        for p in param.pieces:
            if p.kind == "arc" and len(g) > 1:
                a = p.angle0 + 0.5 * p.sweep
                cands.append(p.center + r * np.array([math.cos(a), math.sin(a)]))
        cands.append(_farthest_point(body))
        if k:
            pos, _, _ = param.evaluate(np.arange(k) * param.length / k)
            cands.extend(pos)
    else:
        if hull.rank == 3:
            for nrm, _, verts in hull.facets:
                cands.append(g[list(verts)].mean(axis=0) + r * nrm)
            for i, j, fs in hull.edges:
                n = _unit(sum(hull.normals[f] for f in fs))
                cands.append(0.5 * (g[i] + g[j]) + r * n)
            for v in range(len(g)):
                fs = [f for f, (_, _, verts) in enumerate(hull.facets) if v in verts]
                n = _unit(sum(hull.normals[f] for f in fs))
                cands.append(g[v] + r * n)
        elif hull.rank == 2:
            n = hull.plane_normal
            c = g.mean(axis=0)
            cands.extend([c + r * n, c - r * n])
            P = g[hull.polygon]
            Q = np.roll(P, -1, axis=0)
            for e in range(len(P)):
                cands.append(0.5 * (P[e] + Q[e]) + r * hull.poly_edge_normals[e])
            for v in range(len(P)):
                en = hull.poly_edge_normals[v] + hull.poly_edge_normals[v - 1]
                cands.append(P[v] + r * _unit(en))
        elif hull.rank == 1:
            d = _unit(g[1] - g[0])
            cands.append(0.5 * (g[0] + g[1]) + r * hull.perp)
            cands.extend([g[0] - r * d, g[1] + r * d])
        cands.append(_farthest_point(body))
        if k:
            U = _fibonacci_sphere(k)
            sup = g[np.argmax(U @ g.T, axis=1)]
            cands.extend(sup + r * U)
    pts = _dedupe(cands, 1e-10 * hull.scale)
    # snap onto the boundary to remove rounding residue
    _, nearest, _ = nearest_boundary_batch(body, pts)
    return nearest


def _patch_area_3d(body: RoundedConvexBody, w: np.ndarray, delta: float, n_angle: int = 128, n_radial: int = 12):
    """Area of the boundary inside B(w, delta) by quadrature over the tangent plane.

    The surface is written as a graph over the tangent plane at ``w``; the
    area element is d(xi) / <nu_w, nu(y)>.
    """
    _, _, nu = nearest_boundary_batch(body, w[None, :])
    nu = nu[0]
    e1 = _unit(np.cross(nu, np.eye(3)[int(np.argmin(np.abs(nu)))]))
    e2 = np.cross(nu, e1)

    def lift(xi):
        # boundary point on the line w + xi + t*nu; Newton in t, the gradient
        # of the signed distance being minus the outward normal
        base = w + xi
        t = np.zeros(len(xi))
        for _ in range(12):
            sd, _, n = nearest_boundary_batch(body, base + t[:, None] * nu)
            t = t + sd / (n @ nu)
        return base + t[:, None] * nu

    phi = 2 * math.pi * np.arange(n_angle) / n_angle
    dirs = np.outer(np.cos(phi), e1) + np.outer(np.sin(phi), e2)
    # |y(rho) - w| = rho * (1 + O(rho / r)); fixed-point iteration for the rim
    rho_max = np.full(n_angle, delta)
    for _ in range(30):
        chord = np.linalg.norm(lift(rho_max[:, None] * dirs) - w, axis=1)
        step = rho_max * delta / chord
        done = np.max(np.abs(step - rho_max)) <= 1e-15 * delta
        rho_max = step
        if done:
            break
    rim = lift(rho_max[:, None] * dirs)

    x, wts = np.polynomial.legendre.leggauss(n_radial)
    rho = 0.5 * (x[None, :] + 1.0) * rho_max[:, None]
    xi = (rho[..., None] * dirs[:, None, :]).reshape(-1, 3)
    y = lift(xi)
    _, _, nu_y = nearest_boundary_batch(body, y)
    jac = 1.0 / (nu_y @ nu)
    inner = (0.5 * wts[None, :] * rho_max[:, None] * rho * jac.reshape(n_angle, n_radial)).sum(axis=1)
    return float(inner.sum() * 2 * math.pi / n_angle), rim


def patch_measure(body: RoundedConvexBody, w, delta: float) -> float:
    """Boundary measure (arclength or area) of the part of the boundary in B(w, delta)."""
    w = np.asarray(w, dtype=float)
    if not delta > 0:
        raise GeometryError("patch radius must be positive")
    if body.dim == 2:
        return boundary_param_2d(body).patch_length(w, delta)
    if len(body.generators) == 1:
        # spherical cap of chord radius delta has area pi delta^2
        return math.pi * delta * delta
    area, rim = _patch_area_3d(body, w, delta)
    _, _, normal, q, _ = _signed_core(body, np.vstack([w[None, :], rim]), need_points=True)
    pieces = _classify(body, q, normal)
    if pieces[0][0] != "edge" and all(p == pieces[0] for p in pieces):
        # planar disk or spherical cap inside one piece
        return math.pi * delta * delta
    return area
