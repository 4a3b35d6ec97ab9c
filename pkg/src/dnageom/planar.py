"""Planar closed polylines: lengths, full rotation, hulls, circuit detection.

The central quantity is the full rotation V, the sum of exterior-angle
magnitudes over all vertices, and the mean absolute curvature T = V / L.
Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .config import EPS_AREA, EPS_COLLINEAR, EPS_POINT
from .errors import DegenerateInputError

TWO_PI = 2.0 * math.pi


class Point2(NamedTuple):
    """Plane point. Kept a bare tuple so vertex surgery stays cheap."""

    x: float
    y: float


@dataclass(frozen=True)
class Direction:
    """Angle of a unit tangent, canonicalized to [0, 2*pi)."""

    theta: float

    def __post_init__(self) -> None:
        t = math.fmod(float(self.theta), TWO_PI)
        if t < 0.0:
            t += TWO_PI
        object.__setattr__(self, "theta", t)


def direction_of(a: Point2, b: Point2) -> Direction:
    """Direction of the segment from a to b."""
    if a[0] == b[0] and a[1] == b[1]:
        raise DegenerateInputError("direction of a zero-length segment")
    return Direction(math.atan2(b[1] - a[1], b[0] - a[0]))


def rho(u: Direction, v: Direction) -> float:
    """Intrinsic circle distance between two directions, in [0, pi]."""
    d = abs(u.theta - v.theta)
    return d if d <= math.pi else TWO_PI - d


def orient(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of twice the signed area of pqr; 0 when collinear within tolerance.

    The zero band is relative to the squared span of the three points, so the
    predicate is scale invariant.
    """
    cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    span2 = max(
        (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2,
        (r[0] - q[0]) ** 2 + (r[1] - q[1]) ** 2,
        (r[0] - p[0]) ** 2 + (r[1] - p[1]) ** 2,
    )
    if abs(cross) <= EPS_AREA * span2:
        return 0
    return 1 if cross > 0.0 else -1


def turn_angle(a: Point2, b: Point2, c: Point2) -> float:
    """Exterior angle at b (pi minus the interior angle), in [0, pi].

    Exactly rho(direction_of(a, b), direction_of(b, c)).
    """
    return rho(direction_of(a, b), direction_of(b, c))


def _dist(a: Point2, b: Point2) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


@dataclass(frozen=True)
class ClosedPolyline2:
    """Closed polygonal line; the edge from the last vertex to the first is implicit."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        vs = tuple(Point2(float(p[0]), float(p[1])) for p in self.vertices)
        if len(vs) < 3:
            raise DegenerateInputError("closed polyline needs at least 3 vertices")
        for p in vs:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise DegenerateInputError("non-finite vertex coordinate")
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def span(self) -> float:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return max(max(xs) - min(xs), max(ys) - min(ys))

    def point_tolerance(self) -> float:
        """Absolute coincidence tolerance for this instance."""
        return EPS_POINT * self.span

    def rotated(self, shift: int) -> "ClosedPolyline2":
        """Same cycle, vertex list rotated so index ``shift`` comes first."""
        n = len(self.vertices)
        shift %= n
        return ClosedPolyline2(self.vertices[shift:] + self.vertices[:shift])


def length(p: ClosedPolyline2) -> float:
    """Total edge length, including the closing edge."""
    vs = p.vertices
    n = len(vs)
    return sum(_dist(vs[i], vs[(i + 1) % n]) for i in range(n))


def full_rotation(p: ClosedPolyline2) -> float:
    """Sum of exterior-angle magnitudes over all vertices; >= 2*pi when closed."""
    vs = p.vertices
    n = len(vs)
    return sum(turn_angle(vs[i - 1], vs[i], vs[(i + 1) % n]) for i in range(n))


def mean_abs_curvature(p: ClosedPolyline2) -> float:
    """Full rotation divided by length, T = V / L."""
    ell = length(p)
    if ell <= 0.0:
        raise DegenerateInputError("zero-length polyline")
    return full_rotation(p) / ell


def normalize(p: ClosedPolyline2) -> ClosedPolyline2:
    """Remove coincident consecutive vertices and sub-tolerance turns.

    Idempotent; L and V are preserved to 1e-12 relative because only turns
    below EPS_COLLINEAR are dropped.
    """
    if p.span <= 0.0:
        raise DegenerateInputError("all vertices coincide")
    tol = p.point_tolerance()
    vs = list(p.vertices)
    changed = True
    while changed:
        changed = False
        merged: list[Point2] = []
        for v in vs:
            if merged and _dist(merged[-1], v) <= tol:
                changed = True
                continue
            merged.append(v)
        while len(merged) >= 2 and _dist(merged[0], merged[-1]) <= tol:
            merged.pop()
            changed = True
        if len(merged) < 3:
            raise DegenerateInputError("fewer than 3 vertices after normalization")
        kept: list[Point2] = []
        n = len(merged)
        for i in range(n):
            ang = turn_angle(merged[i - 1], merged[i], merged[(i + 1) % n])
            if ang < EPS_COLLINEAR:
                changed = True
                continue
            kept.append(merged[i])
        if len(kept) < 3:
            raise DegenerateInputError("fewer than 3 vertices after normalization")
        vs = kept
    return ClosedPolyline2(tuple(vs))


@dataclass(frozen=True)
class ConvexPolygon2:
    """Strictly convex polygon, vertices in counterclockwise order."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        vs = tuple(Point2(float(p[0]), float(p[1])) for p in self.vertices)
        if len(vs) < 3:
            raise DegenerateInputError("convex polygon needs at least 3 vertices")
        n = len(vs)
        for i in range(n):
            if orient(vs[i - 1], vs[i], vs[(i + 1) % n]) != 1:
                raise DegenerateInputError("vertices are not strictly convex CCW")
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def perimeter(self) -> float:
        vs = self.vertices
        n = len(vs)
        return sum(_dist(vs[i], vs[(i + 1) % n]) for i in range(n))

    @cached_property
    def span(self) -> float:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return max(max(xs) - min(xs), max(ys) - min(ys))

    def point_tolerance(self) -> float:
        return EPS_POINT * self.span

    def edges(self) -> list[tuple[Point2, Point2]]:
        vs = self.vertices
        n = len(vs)
        return [(vs[i], vs[(i + 1) % n]) for i in range(n)]

    def signed_clearance(self, p: Point2) -> float:
        """Distance from p to the nearest edge line; positive strictly inside."""
        best = math.inf
        for a, b in self.edges():
            ex, ey = b.x - a.x, b.y - a.y
            elen = math.hypot(ex, ey)
            d = (ex * (p.y - a.y) - ey * (p.x - a.x)) / elen
            best = min(best, d)
        return best

    def contains(self, p: Point2, tol: Optional[float] = None) -> bool:
        if tol is None:
            tol = self.point_tolerance()
        return self.signed_clearance(p) >= -tol

    def strictly_contains(self, p: Point2, tol: Optional[float] = None) -> bool:
        if tol is None:
            tol = self.point_tolerance()
        return self.signed_clearance(p) > tol


PointSource = Union[ClosedPolyline2, Sequence[Point2], Iterable[Point2]]


def convex_hull(source: PointSource) -> ConvexPolygon2:
    """Strictly convex hull of the input points, counterclockwise.

    Collinear boundary points are dropped so every hull vertex has a genuine
    turn; raises if the input is entirely collinear.
    """
    if isinstance(source, ClosedPolyline2):
        pts = source.vertices
    else:
        pts = tuple(Point2(float(p[0]), float(p[1])) for p in source)
    uniq = sorted(set((p.x, p.y) for p in pts))
    if len(uniq) < 3:
        raise DegenerateInputError("hull needs at least 3 distinct points")

    def build(seq):
        chain: list[tuple[float, float]] = []
        for q in seq:
            while len(chain) >= 2 and orient(
                Point2(*chain[-2]), Point2(*chain[-1]), Point2(*q)
            ) <= 0:
                chain.pop()
            chain.append(q)
        return chain

    lower = build(uniq)
    upper = build(reversed(uniq))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInputError("all points are collinear")
    return ConvexPolygon2(tuple(Point2(*q) for q in hull))


def boundary_circuit(h: ConvexPolygon2, k: int) -> ClosedPolyline2:
    """Polyline traversing the boundary of h exactly k times."""
    if k < 1:
        raise DegenerateInputError("circuit count must be positive")
    return ClosedPolyline2(h.vertices * k)


def is_multiple_circuit(p: ClosedPolyline2, h: ConvexPolygon2) -> Optional[int]:
    """Return k when p's normalized vertices traverse h exactly k times in a row.

    Either traversal orientation counts, as long as every lap goes the same
    way. Returns None otherwise.
    """
    q = normalize(p)
    vs = q.vertices
    corners = h.vertices
    n, m = len(vs), len(corners)
    if n % m != 0:
        return None
    k = n // m
    tol = max(h.point_tolerance(), q.point_tolerance())
    for sign in (1, -1):
        for offset in range(m):
            ok = True
            for j in range(n):
                c = corners[(offset + sign * j) % m]
                if _dist(vs[j], c) > tol:
                    ok = False
                    break
            if ok:
                return k
    return None


@dataclass(frozen=True)
class PolylineMetrics:
    """Length, full rotation, mean absolute curvature and hull perimeter."""

    L: float
    V: float
    T: float
    P: float

    def as_dict(self) -> dict:
        return {"L": self.L, "V": self.V, "T": self.T, "P": self.P}


def polyline_metrics(p: ClosedPolyline2) -> PolylineMetrics:
    ell = length(p)
    if ell <= 0.0:
        raise DegenerateInputError("zero-length polyline")
    v = full_rotation(p)
    hp = convex_hull(p).perimeter
    return PolylineMetrics(L=ell, V=v, T=v / ell, P=hp)
