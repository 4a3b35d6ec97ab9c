"""Spherical trigonometry kernel and the hemisphere curvature comparison.

Triangles are handled through quarter-perimeter quantities: with sides
a, b, c put S = (a+b+c)/4 and X = S - a/2, Y = S - b/2, Z = S - c/2.
The surface area (spherical excess) comes from the quarter-angle product
formula, spherical angles from the half-angle formula, and the straight-side
comparison triangle from the planar half-angle formula. Polyline rotation is
the same exterior-angle sum as on the plane, with geodesic edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import HEMISPHERE_MARGIN
from .errors import DegenerateInputError, DomainError, InvalidInputError
from .inequalities import InequalityMargin
from .planar import Point2, convex_hull

TWO_PI = 2.0 * math.pi


def _unit(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise DegenerateInputError("zero vector has no direction")
    return v / n


@dataclass(frozen=True, eq=False)
class SphPoint:
    """Point on the unit sphere, stored as a unit 3-vector."""

    v: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.v, dtype=float)
        if arr.shape != (3,):
            raise InvalidInputError("spherical point needs exactly 3 coordinates")
        n = float(np.linalg.norm(arr))
        if abs(n - 1.0) > 1e-12:
            raise InvalidInputError("spherical point is not a unit vector")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "v", arr)

    @classmethod
    def normalized(cls, x: float, y: float, z: float, tol: float = 1e-6) -> "SphPoint":
        arr = np.array([x, y, z], dtype=float)
        n = float(np.linalg.norm(arr))
        if abs(n - 1.0) > tol:
            raise InvalidInputError(f"vector norm {n} deviates from 1 by more than {tol}")
        return cls(arr / n)


def sph_distance(u: SphPoint, v: SphPoint) -> float:
    """Geodesic distance on the unit sphere, in [0, pi]."""
    cr = np.cross(u.v, v.v)
    return math.atan2(float(np.linalg.norm(cr)), float(np.dot(u.v, v.v)))


def sph_angle(u: SphPoint, v: SphPoint, w: SphPoint) -> float:
    """Angle at v between the geodesics toward u and toward w, in [0, pi]."""
    p = u.v - float(np.dot(u.v, v.v)) * v.v
    q = w.v - float(np.dot(w.v, v.v)) * v.v
    np_, nq = float(np.linalg.norm(p)), float(np.linalg.norm(q))
    if np_ < 1e-14 or nq < 1e-14:
        raise DegenerateInputError("angle at a coincident or antipodal point")
    return math.atan2(float(np.linalg.norm(np.cross(p, q))), float(np.dot(p, q)))


def _quarters(a: float, b: float, c: float) -> tuple[float, float, float, float]:
    s = 0.25 * (a + b + c)
    return s, s - 0.5 * a, s - 0.5 * b, s - 0.5 * c


def _validate_sides(a: float, b: float, c: float, slack: float = 1e-12) -> None:
    for side in (a, b, c):
        if not (0.0 < side < math.pi):
            raise InvalidInputError("sides must lie in (0, pi)")
    s, x, y, z = _quarters(a, b, c)
    if min(x, y, z) < -slack:
        raise InvalidInputError("sides violate the triangle inequality")
    if s > math.pi / 2 + slack:
        raise InvalidInputError("perimeter exceeds a great circle")


def sph_triangle_excess(a: float, b: float, c: float) -> float:
    """Spherical excess (area) from the quarter-angle product formula."""
    _validate_sides(a, b, c)
    s, x, y, z = _quarters(a, b, c)
    prod = math.tan(s) * math.tan(max(x, 0.0)) * math.tan(max(y, 0.0)) * math.tan(max(z, 0.0))
    if prod <= 0.0:
        return 0.0
    return 4.0 * math.atan(math.sqrt(prod))


def sph_half_angle(a: float, b: float, c: float) -> float:
    """Spherical angle opposite side a, via the half-angle formula."""
    _validate_sides(a, b, c)
    s, x, y, z = _quarters(a, b, c)
    denom = math.sin(2.0 * x) * math.sin(2.0 * s)
    num = math.sin(2.0 * y) * math.sin(2.0 * z)
    if denom <= 0.0 or num < 0.0:
        raise DegenerateInputError("degenerate triangle in the half-angle formula")
    return 2.0 * math.atan(math.sqrt(num / denom))


def planar_angles(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Angles of the straight-side triangle with the same side lengths."""
    _validate_sides(a, b, c)
    s, x, y, z = _quarters(a, b, c)
    if min(x, y, z) <= 0.0:
        raise DegenerateInputError("degenerate comparison triangle")
    alpha = 2.0 * math.atan(math.sqrt(y * z / (x * s)))
    beta = 2.0 * math.atan(math.sqrt(x * z / (y * s)))
    gamma = 2.0 * math.atan(math.sqrt(x * y / (z * s)))
    return alpha, beta, gamma


@dataclass(frozen=True)
class SphTriangle:
    """Spherical triangle described by its side lengths.

    Sides a, b, c are opposite the angles alpha, beta, gamma. The planar
    comparison angles belong to the straight-side triangle with the same
    side lengths.
    """

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _validate_sides(self.a, self.b, self.c)

    @classmethod
    def from_points(cls, A: SphPoint, B: SphPoint, C: SphPoint) -> "SphTriangle":
        return cls(sph_distance(B, C), sph_distance(C, A), sph_distance(A, B))

    @cached_property
    def excess(self) -> float:
        return sph_triangle_excess(self.a, self.b, self.c)

    @cached_property
    def angles(self) -> tuple[float, float, float]:
        return (
            sph_half_angle(self.a, self.b, self.c),
            sph_half_angle(self.b, self.c, self.a),
            sph_half_angle(self.c, self.a, self.b),
        )

    @cached_property
    def planar(self) -> tuple[float, float, float]:
        return planar_angles(self.a, self.b, self.c)


def lemma1s_margin(a: float, b: float, c: float) -> InequalityMargin:
    """Angle-comparison bound: the excess split at one vertex is outweighed.

    lhs = alpha - alpha', rhs = (beta - beta') + (gamma - gamma'), where the
    primed angles belong to the straight-side comparison triangle.
    """
    t = SphTriangle(a, b, c)
    alpha, beta, gamma = t.angles
    ap, bp, cp = t.planar
    return InequalityMargin.of(alpha - ap, (beta - bp) + (gamma - cp))


def lemma2s_margin(a: float, b: float, c: float) -> InequalityMargin:
    """Spherical path-vs-perimeter bound with the apex angle at B.

    Side b is opposite the apex: lhs = (a + c) / (2*pi - beta),
    rhs = (a + b + c) / (2*pi - excess).
    """
    t = SphTriangle(a, b, c)
    beta = t.angles[1]
    lhs = (a + c) / (TWO_PI - beta)
    rhs = (a + b + c) / (TWO_PI - t.excess)
    return InequalityMargin.of(lhs, rhs)


def _triple(u: SphPoint, v: SphPoint, w: SphPoint) -> float:
    return float(np.dot(u.v, np.cross(v.v, w.v)))


@dataclass(frozen=True, eq=False)
class SphQuad:
    """Convex spherical quadrilateral with its diagonal crossing point.

    Vertices are canonicalized to counterclockwise order (seen from outside
    the sphere); the diagonal crossing O, the crossing angle phi and the
    four sub-triangle areas are derived.
    """

    A: SphPoint
    B: SphPoint
    C: SphPoint
    D: SphPoint

    def __post_init__(self) -> None:
        vs = [self.A, self.B, self.C, self.D]
        signs = []
        for i in range(4):
            signs.append(_triple(vs[i], vs[(i + 1) % 4], vs[(i + 2) % 4]))
        if any(s == 0.0 for s in signs) or len({s > 0 for s in signs}) != 1:
            raise InvalidInputError("vertices are not in strictly convex order")
        if signs[0] < 0:
            vs = [vs[0], vs[3], vs[2], vs[1]]
        for name, v in zip("ABCD", vs):
            object.__setattr__(self, name, v)

    @cached_property
    def O(self) -> SphPoint:
        n1 = np.cross(self.A.v, self.C.v)
        n2 = np.cross(self.B.v, self.D.v)
        d = np.cross(n1, n2)
        if float(np.linalg.norm(d)) < 1e-14:
            raise InvalidInputError("diagonals lie on one great circle")
        o = _unit(d)
        centroid = self.A.v + self.B.v + self.C.v + self.D.v
        if float(np.dot(o, centroid)) < 0.0:
            o = -o
        O = SphPoint(o)
        for p, q in ((self.A, self.C), (self.B, self.D)):
            if abs(sph_distance(p, O) + sph_distance(O, q) - sph_distance(p, q)) > 1e-9:
                raise InvalidInputError("diagonals do not intersect inside the quad")
        return O

    @cached_property
    def phi(self) -> float:
        """Crossing angle between the diagonals at O, toward A and B."""
        return sph_angle(self.A, self.O, self.B)

    @cached_property
    def sides(self) -> tuple[float, float, float, float]:
        return (
            sph_distance(self.A, self.B),
            sph_distance(self.B, self.C),
            sph_distance(self.C, self.D),
            sph_distance(self.D, self.A),
        )

    @cached_property
    def diagonals(self) -> tuple[float, float]:
        """(m, n) = (BD, AC)."""
        return sph_distance(self.B, self.D), sph_distance(self.A, self.C)

    @cached_property
    def sub_areas(self) -> tuple[float, float, float, float]:
        """Areas of OAB, OBC, OCD, ODA via the quarter-angle formula."""
        O = self.O
        quads = []
        ring = [self.A, self.B, self.C, self.D]
        for i in range(4):
            p, q = ring[i], ring[(i + 1) % 4]
            quads.append(
                sph_triangle_excess(
                    sph_distance(p, q), sph_distance(O, q), sph_distance(O, p)
                )
            )
        return tuple(quads)

    @cached_property
    def excess(self) -> float:
        return sum(self.sub_areas)

    @cached_property
    def ratios(self) -> tuple[float, float, float]:
        """(x, y, z) with x=(a+c)/(m+n), y=(b+d)/(m+n), z=(a+c+m+n)/perimeter."""
        a, b, c, d = self.sides
        m, n = self.diagonals
        return (
            (a + c) / (m + n),
            (b + d) / (m + n),
            (a + c + m + n) / (a + b + c + d),
        )


def lemma3s_margin(q: SphQuad) -> InequalityMargin:
    """Diagonal-path bound for a convex spherical quadrilateral.

    lhs = (a + c + m + n) / (2*pi - (E1 + E3) + 2*phi),
    rhs = perimeter / (2*pi - E).
    """
    a, b, c, d = q.sides
    m, n = q.diagonals
    e1, _, e3, _ = q.sub_areas
    lhs = (a + c + m + n) / (TWO_PI - (e1 + e3) + 2.0 * q.phi)
    rhs = (a + b + c + d) / (TWO_PI - q.excess)
    return InequalityMargin.of(lhs, rhs)


# ---------------------------------------------------------------------------
# polylines and hulls on the sphere


def hemisphere_witness(
    points: Sequence[SphPoint], margin: float = HEMISPHERE_MARGIN
) -> Optional[np.ndarray]:
    """Unit direction c with c . v >= margin for all points, or None.

    Tries the normalized vertex sum first, then a subgradient sweep toward
    the worst point (an approximate spherical 1-center).
    """
    arr = np.array([p.v for p in points])
    total = arr.sum(axis=0)
    if float(np.linalg.norm(total)) > 1e-12:
        c = total / np.linalg.norm(total)
        if float(np.min(arr @ c)) >= margin:
            return c
    c = arr[0].copy()
    for step in range(1, 501):
        dots = arr @ c
        worst = int(np.argmin(dots))
        c = c + (1.0 / step) * arr[worst]
        c = c / np.linalg.norm(c)
    if float(np.min(arr @ c)) >= margin:
        return c
    return None


@dataclass(frozen=True, eq=False)
class SphPolyline:
    """Closed polyline on the unit sphere with minor-arc geodesic edges.

    Construction checks that all vertices fit in one open hemisphere and
    caches the witness direction.
    """

    vertices: tuple[SphPoint, ...]

    def __post_init__(self) -> None:
        vs = tuple(self.vertices)
        if len(vs) < 3:
            raise DegenerateInputError("spherical polyline needs at least 3 vertices")
        n = len(vs)
        for i in range(n):
            d = sph_distance(vs[i], vs[(i + 1) % n])
            if d <= 0.0:
                raise DegenerateInputError("consecutive vertices coincide")
            if d >= math.pi - 1e-12:
                raise DegenerateInputError("antipodal consecutive vertices")
        object.__setattr__(self, "vertices", vs)
        w = hemisphere_witness(vs)
        if w is None:
            raise InvalidInputError("vertices do not fit in an open hemisphere")
        w.setflags(write=False)
        object.__setattr__(self, "_witness", w)

    @property
    def witness(self) -> np.ndarray:
        return self._witness

    def __len__(self) -> int:
        return len(self.vertices)


def sph_length(p: SphPolyline) -> float:
    vs = p.vertices
    n = len(vs)
    return sum(sph_distance(vs[i], vs[(i + 1) % n]) for i in range(n))


def sph_full_rotation(p: SphPolyline) -> float:
    """Sum of exterior angles, pi minus the interior angle at each vertex."""
    vs = p.vertices
    n = len(vs)
    return sum(
        math.pi - sph_angle(vs[i - 1], vs[i], vs[(i + 1) % n]) for i in range(n)
    )


def sph_mean_curvature(p: SphPolyline) -> float:
    return sph_full_rotation(p) / sph_length(p)


@dataclass(frozen=True, eq=False)
class SphConvexPolygon:
    """Convex spherical polygon with its angle-sum area and perimeter."""

    vertices: tuple[SphPoint, ...]
    area: float
    perimeter: float


def sph_hull(p: SphPolyline) -> SphConvexPolygon:
    """Convex hull boundary of the polyline's vertices on the sphere.

    Central projection about the hemisphere witness maps geodesics to
    straight lines, so the planar hull machinery applies; the area is the
    exact angle-sum value for geodesic polygons.
    """
    c = p.witness
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(c)))] = 1.0
    e1 = _unit(np.cross(c, ref))
    e2 = np.cross(c, e1)
    planar_pts = []
    index: dict[tuple[float, float], SphPoint] = {}
    for v in p.vertices:
        depth = float(np.dot(v.v, c))
        if depth < HEMISPHERE_MARGIN:
            raise InvalidInputError("vertex outside the witness hemisphere")
        x = float(np.dot(v.v, e1)) / depth
        y = float(np.dot(v.v, e2)) / depth
        planar_pts.append(Point2(x, y))
        index.setdefault((x, y), v)
    hull = convex_hull(planar_pts)
    corners = tuple(index[(q.x, q.y)] for q in hull.vertices)
    m = len(corners)
    interior_sum = sum(
        sph_angle(corners[i - 1], corners[i], corners[(i + 1) % m]) for i in range(m)
    )
    area = interior_sum - (m - 2) * math.pi
    perim = sum(sph_distance(corners[i], corners[(i + 1) % m]) for i in range(m))
    return SphConvexPolygon(vertices=corners, area=area, perimeter=perim)


@dataclass(frozen=True)
class SphVerdict:
    """Outcome of the hemisphere curvature comparison."""

    T: float
    T1: float
    margin: float
    S: float
    L: float
    L1: float
    V: float

    def to_json_dict(self) -> dict:
        return {
            "T": self.T,
            "T1": self.T1,
            "margin": self.margin,
            "S": self.S,
            "L": self.L,
            "L1": self.L1,
            "V": self.V,
        }


def theorem_s_check(p: SphPolyline) -> SphVerdict:
    """Compare T = V/L against T1 = (2*pi - S) / L1 for the hull boundary."""
    v = sph_full_rotation(p)
    ell = sph_length(p)
    hull = sph_hull(p)
    t = v / ell
    t1 = (TWO_PI - hull.area) / hull.perimeter
    return SphVerdict(
        T=t,
        T1=t1,
        margin=t - t1,
        S=hull.area,
        L=ell,
        L1=hull.perimeter,
        V=v,
    )


# ---------------------------------------------------------------------------
# analytic probes used by the angle-comparison argument


def f_xcotx(x: float) -> float:
    """f(x) = x * cot(x) on [0, pi/2), with f(0) = 1 by continuity."""
    if x < 0.0 or x >= math.pi / 2:
        raise DomainError("argument outside [0, pi/2)")
    if x == 0.0:
        return 1.0
    return x / math.tan(x)


def probe_product_inequality(x: float, y: float, z: float) -> float:
    """Signed margin of f(Y) f(Z) > f(X) f(X+Y+Z); positive when it holds."""
    return f_xcotx(y) * f_xcotx(z) - f_xcotx(x) * f_xcotx(x + y + z)


def probe_boundary_inequality(y: float, z: float) -> float:
    """Signed margin of f(Y) f(Z) > f(Y+Z), the x = 0 extreme of the above."""
    return f_xcotx(y) * f_xcotx(z) - f_xcotx(y + z)


def probe_cos_sinc(t: float) -> float:
    """Signed margin of cos(t) < (sin(t)/t)^2 on (0, pi)."""
    if not (0.0 < t < math.pi):
        raise DomainError("argument outside (0, pi)")
    s = math.sin(t) / t
    return s * s - math.cos(t)
