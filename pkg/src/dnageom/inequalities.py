"""Closed-form planar inequalities with signed margins, plus the DNA verdict.

Margins are reported signed (rhs - lhs) rather than as booleans so fuzzing
can shrink counterexamples and calibrate tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import DegenerateInputError, InvalidInputError
from .planar import (
    ClosedPolyline2,
    Direction,
    Point2,
    convex_hull,
    full_rotation,
    is_multiple_circuit,
    length,
    normalize,
    orient,
    rho,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InequalityMargin:
    """Signed evaluation of one inequality: margin = rhs - lhs."""

    lhs: float
    rhs: float
    margin: float
    strict: bool

    @classmethod
    def of(cls, lhs: float, rhs: float, strict: bool = True) -> "InequalityMargin":
        return cls(lhs=lhs, rhs=rhs, margin=rhs - lhs, strict=strict)


def _angle_at(c: Point2, p: Point2, q: Point2) -> float:
    """Angle between rays c->p and c->q, in [0, pi]."""
    ux, uy = p.x - c.x, p.y - c.y
    vx, vy = q.x - c.x, q.y - c.y
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise DegenerateInputError("angle at coincident points")
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


@dataclass(frozen=True)
class Triangle2:
    """Triangle with derived side lengths and the apex angle at B."""

    A: Point2
    B: Point2
    C: Point2

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", Point2(*self.A))
        object.__setattr__(self, "B", Point2(*self.B))
        object.__setattr__(self, "C", Point2(*self.C))
        if self.ab == 0.0 or self.bc == 0.0:
            raise DegenerateInputError("triangle has a zero-length side at B")

    @cached_property
    def ab(self) -> float:
        return math.dist(self.A, self.B)

    @cached_property
    def bc(self) -> float:
        return math.dist(self.B, self.C)

    @cached_property
    def ca(self) -> float:
        return math.dist(self.C, self.A)

    @cached_property
    def beta(self) -> float:
        """Interior angle at B, in (0, pi]."""
        return _angle_at(self.B, self.A, self.C)

    @cached_property
    def degenerate(self) -> bool:
        return orient(self.A, self.B, self.C) == 0


def lemma1_bound(dir_a: Direction, dir_b: Direction, chord: Direction) -> float:
    """Lower bound on the rotation of an arc from its endpoint tangents.

    The tangent at each endpoint is compared against the chord direction; the
    arc between the endpoints must rotate by at least the sum.
    """
    return rho(dir_a, chord) + rho(dir_b, chord)


def lemma4_margin(t: Triangle2) -> InequalityMargin:
    """Path-vs-perimeter bound for a triangle.

    lhs = (AB + BC) / (2*pi - beta), rhs = perimeter / (2*pi). Strictly
    positive for non-degenerate triangles; zero is attained in the collinear
    limit, which is accepted and flagged strict=False.
    """
    lhs = (t.ab + t.bc) / (TWO_PI - t.beta)
    rhs = (t.ab + t.bc + t.ca) / TWO_PI
    return InequalityMargin.of(lhs, rhs, strict=not t.degenerate)


def _segment_intersection(a: Point2, c: Point2, b: Point2, d: Point2) -> Point2:
    """Intersection point of segments a-c and b-d; raises if parallel."""
    r = (c.x - a.x, c.y - a.y)
    s = (d.x - b.x, d.y - b.y)
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0.0:
        raise InvalidInputError("diagonals are parallel")
    t = ((b.x - a.x) * s[1] - (b.y - a.y) * s[0]) / denom
    return Point2(a.x + t * r[0], a.y + t * r[1])


@dataclass(frozen=True)
class ConvexQuad2:
    """Convex quadrilateral ABCD with its diagonal crossing point.

    Vertex order is canonicalized to counterclockwise by reversing the whole
    cycle if needed; that keeps the side pairs {AB, CD} and the crossing
    angle phi = angle AOB unchanged.
    """

    A: Point2
    B: Point2
    C: Point2
    D: Point2

    def __post_init__(self) -> None:
        vs = [Point2(*p) for p in (self.A, self.B, self.C, self.D)]
        signs = [orient(vs[i - 1], vs[i], vs[(i + 1) % 4]) for i in range(4)]
        if 0 in signs or len(set(signs)) != 1:
            raise InvalidInputError("vertices are not in strictly convex order")
        if signs[0] < 0:
            vs = [vs[0], vs[3], vs[2], vs[1]]
        for name, v in zip("ABCD", vs):
            object.__setattr__(self, name, v)

    @cached_property
    def O(self) -> Point2:
        return _segment_intersection(self.A, self.C, self.B, self.D)

    @cached_property
    def phi(self) -> float:
        """Diagonal crossing angle, angle AOB, in (0, pi)."""
        return _angle_at(self.O, self.A, self.B)

    def side(self, p: str, q: str) -> float:
        return math.dist(getattr(self, p), getattr(self, q))


def lemma5_margin(q: ConvexQuad2) -> InequalityMargin:
    """Diagonal-path bound for a convex quadrilateral.

    lhs = (AB + BD + DC + CA) / (2*(pi + phi)), rhs = perimeter / (2*pi).
    Near-degenerate quads may touch zero; the margin stays signed.
    """
    lhs_num = q.side("A", "B") + q.side("B", "D") + q.side("D", "C") + q.side("C", "A")
    lhs = lhs_num / (2.0 * (math.pi + q.phi))
    per = (
        q.side("A", "B") + q.side("B", "C") + q.side("C", "D") + q.side("D", "A")
    )
    rhs = per / TWO_PI
    return InequalityMargin.of(lhs, rhs)


@dataclass(frozen=True)
class DnaVerdict:
    """Outcome of the curvature comparison T >= 2*pi / P."""

    L: float
    V: float
    T: float
    P: float
    T1: float
    margin: float
    k: Optional[int]

    def to_json_dict(self) -> dict:
        return {
            "L": self.L,
            "V": self.V,
            "T": self.T,
            "P": self.P,
            "T1": self.T1,
            "margin": self.margin,
            "k": self.k,
        }


def dna_check(p: ClosedPolyline2) -> DnaVerdict:
    """Compare T = V/L against T1 = 2*pi/P for the hull of p.

    margin = T - T1 is non-negative for every closed polyline, and vanishes
    exactly when the polyline is a multiple circuit of its hull boundary.
    """
    q = normalize(p)
    ell = length(q)
    v = full_rotation(q)
    hull = convex_hull(q)
    t = v / ell
    t1 = TWO_PI / hull.perimeter
    return DnaVerdict(
        L=ell,
        V=v,
        T=t,
        P=hull.perimeter,
        T1=t1,
        margin=t - t1,
        k=is_multiple_circuit(q, hull),
    )
