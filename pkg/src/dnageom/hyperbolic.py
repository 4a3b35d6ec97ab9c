"""Hyperboloid-model kernel and the curvature-comparison counterexample.

Points live on the upper sheet of x0^2 - x1^2 - x2^2 = 1 with the Minkowski
form of signature (-, +, +); distances and angles are closed-form in
Minkowski products. The counterexample walks a triangle twice minus an inner
notch: far enough out, the doubled path has smaller mean absolute curvature
than the triangle itself, so the planar comparison fails at curvature -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, InvalidInputError

TWO_PI = 2.0 * math.pi


def minkowski_dot(u: np.ndarray, v: np.ndarray) -> float:
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


@dataclass(frozen=True, eq=False)
class HypPoint:
    """Point on the upper hyperboloid sheet."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coords, dtype=float)
        if arr.shape != (3,):
            raise InvalidInputError("hyperbolic point needs exactly 3 coordinates")
        # tolerance relative to x0^2: the difference of squares cancels badly
        # for far-out points
        tol = 1e-10 * max(1.0, arr[0] * arr[0])
        if arr[0] <= 0.0 or abs(minkowski_dot(arr, arr) + 1.0) > tol:
            raise InvalidInputError("coordinates are not on the upper sheet")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)


def hyp_polar(r: float, theta: float) -> HypPoint:
    """Point at distance r from the sheet origin along planar direction theta."""
    if r < 0.0:
        raise InvalidInputError("radius must be non-negative")
    return HypPoint(
        np.array([math.cosh(r), math.sinh(r) * math.cos(theta), math.sinh(r) * math.sin(theta)])
    )


def hyp_distance(u: HypPoint, v: HypPoint) -> float:
    return math.acosh(max(1.0, -minkowski_dot(u.coords, v.coords)))


def _tangent_toward(v: HypPoint, target: HypPoint) -> np.ndarray:
    """Minkowski-unit tangent at v pointing toward target."""
    t = target.coords + minkowski_dot(target.coords, v.coords) * v.coords
    norm2 = minkowski_dot(t, t)
    if norm2 <= 1e-24:
        raise DegenerateInputError("tangent toward a coincident point")
    return t / math.sqrt(norm2)


def hyp_angle(u: HypPoint, v: HypPoint, w: HypPoint) -> float:
    """Angle at v between the geodesics toward u and toward w, in [0, pi]."""
    t1 = _tangent_toward(v, u)
    t2 = _tangent_toward(v, w)
    c = minkowski_dot(t1, t2)
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True, eq=False)
class HypPolyline:
    """Closed polyline on the hyperbolic plane."""

    vertices: tuple[HypPoint, ...]

    def __post_init__(self) -> None:
        vs = tuple(self.vertices)
        if len(vs) < 3:
            raise DegenerateInputError("closed polyline needs at least 3 vertices")
        n = len(vs)
        for i in range(n):
            if hyp_distance(vs[i], vs[(i + 1) % n]) <= 0.0:
                raise DegenerateInputError("consecutive vertices coincide")
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)


def hyp_length(p: HypPolyline) -> float:
    vs = p.vertices
    n = len(vs)
    return sum(hyp_distance(vs[i], vs[(i + 1) % n]) for i in range(n))


def hyp_full_rotation(p: HypPolyline) -> float:
    """Sum of exterior angles; a return point (zero interior angle) adds pi."""
    vs = p.vertices
    n = len(vs)
    return sum(
        math.pi - hyp_angle(vs[i - 1], vs[i], vs[(i + 1) % n]) for i in range(n)
    )


def hyp_mean_curvature(p: HypPolyline) -> float:
    return hyp_full_rotation(p) / hyp_length(p)


def triangle_area_from_sides(a: float, b: float, c: float) -> float:
    """Angle defect pi - (alpha + beta + gamma) via the law of cosines."""

    def angle(opp: float, s1: float, s2: float) -> float:
        num = math.cosh(s1) * math.cosh(s2) - math.cosh(opp)
        den = math.sinh(s1) * math.sinh(s2)
        return math.acos(min(1.0, max(-1.0, num / den)))

    return math.pi - (angle(a, b, c) + angle(b, c, a) + angle(c, a, b))


# Counterexample geometry: apex angle at A, distance of the fixed vertex C,
# and the leg at which the notch points sit on both triangle sides. The leg
# must be large enough that the notch triangle carries substantial area
# (that drives the violation) yet small enough that just-valid t still sits
# in the near-flat regime where the comparison holds. With these values the
# margin is about +0.02 near t = 1.65 and about -0.019 around t = 6.
APEX_ANGLE = 1.3
C_DISTANCE = 1.65
NOTCH_LEG = 1.6


@dataclass(frozen=True)
class CounterexampleResult:
    t: float
    T_gamma: float
    T_gamma1: float
    ratio_V: float
    ratio_L: float
    margin: float

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "T_gamma": self.T_gamma,
            "T_gamma1": self.T_gamma1,
            "margin": self.margin,
            "ratio_V": self.ratio_V,
            "ratio_L": self.ratio_L,
        }


def _opposite_side(r1: float, r2: float, apex: float) -> float:
    """Side opposite the apex for legs r1, r2 with that included angle."""
    ch = math.cosh(r1) * math.cosh(r2) - math.sinh(r1) * math.sinh(r2) * math.cos(apex)
    return math.acosh(max(1.0, ch))


def _angles_from_legs(r1: float, r2: float, apex: float) -> tuple[float, float, float]:
    """(opposite side, angle at the r1 end, angle at the r2 end).

    Sine and cosine are combined through atan2 so tiny far-field angles stay
    accurate; hyperboloid tangents would cancel catastrophically out there.
    """
    opp = _opposite_side(r1, r2, apex)
    sin_apex = math.sin(apex)
    sh_opp = math.sinh(opp)
    # angle at the end of leg r1 (opposite leg r2), law of sines + cosines
    sin1 = math.sinh(r2) * sin_apex / sh_opp
    cos1 = (math.cosh(r1) * math.cosh(opp) - math.cosh(r2)) / (
        math.sinh(r1) * sh_opp
    )
    sin2 = math.sinh(r1) * sin_apex / sh_opp
    cos2 = (math.cosh(r2) * math.cosh(opp) - math.cosh(r1)) / (
        math.sinh(r2) * sh_opp
    )
    return opp, math.atan2(sin1, cos1), math.atan2(sin2, cos2)


def counterexample(t: float) -> CounterexampleResult:
    """Doubled-triangle-with-notch construction at vertex parameter t.

    The triangle has apex A at the origin, B at distance t along one ray and
    C fixed at distance C_DISTANCE along the other; the notch points sit at
    distance NOTCH_LEG from A on both sides. The closed path is
    A B C C1 B1 B C (back to A). margin = T_gamma - T_gamma1 turns negative
    once t is large: the comparison against the hull boundary fails.

    Lengths and angles come from the polar construction in closed form,
    which stays accurate for far-out B where hyperboloid coordinates lose
    precision.
    """
    if t <= NOTCH_LEG:
        raise InvalidInputError(
            f"t must exceed the notch leg {NOTCH_LEG} so the notch sits inside AB"
        )
    apex, c0, leg = APEX_ANGLE, C_DISTANCE, NOTCH_LEG
    bc, beta, gamma = _angles_from_legs(t, c0, apex)
    m, beta1, gamma1 = _angles_from_legs(leg, leg, apex)
    # path A B C C1 B1 B C: apex turn, two triangle turns at B and C each,
    # and the notch turns contribute their interior angles
    v = (math.pi - apex) + 2.0 * (math.pi - beta) + 2.0 * (math.pi - gamma)
    v += beta1 + gamma1
    ell = t + bc + (c0 - leg) + m + (t - leg) + bc + c0
    v1 = (math.pi - apex) + (math.pi - beta) + (math.pi - gamma)
    ell1 = t + bc + c0
    t_g, t_g1 = v / ell, v1 / ell1
    return CounterexampleResult(
        t=t,
        T_gamma=t_g,
        T_gamma1=t_g1,
        ratio_V=v / v1,
        ratio_L=ell / ell1,
        margin=t_g - t_g1,
    )
