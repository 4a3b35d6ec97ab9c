"""Curve discretization and seeded random instance generation.

Every random generator here is deterministic per seed and uses the Philox
counter-based bit generator, so fuzz reports reproduce across machines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import RNG_ALGORITHM
from .errors import DegenerateInputError, InvalidInputError
from .planar import ClosedPolyline2, ConvexPolygon2, Point2, full_rotation, normalize
from .spherical import SphPoint, SphPolyline, SphQuad, SphTriangle, sph_distance

assert RNG_ALGORITHM == "philox"


def make_rng(seed: int) -> np.random.Generator:
    """Seeded Philox stream; the single entry point for all randomness."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class SampledCurve:
    """Ordered samples of a closed parametric curve."""

    points: tuple[Point2, ...]
    closed: bool = True

    def __post_init__(self) -> None:
        pts = tuple(Point2(float(p[0]), float(p[1])) for p in self.points)
        if len(pts) < 16:
            raise InvalidInputError("sampled curve needs at least 16 samples")
        n = len(pts)
        for i in range(n if self.closed else n - 1):
            if pts[i] == pts[(i + 1) % n]:
                raise DegenerateInputError("consecutive samples coincide")
        object.__setattr__(self, "points", pts)

    def polygonal_length(self) -> float:
        pts = self.points
        n = len(pts)
        return sum(math.dist(pts[i], pts[(i + 1) % n]) for i in range(n))

    def rotation_estimate(self) -> float:
        """Full rotation of the densest sampling; inscribed sub-polylines stay below it."""
        return full_rotation(ClosedPolyline2(self.points))


def sample_closed_curve(fn: Callable[[float], tuple[float, float]], n: int) -> SampledCurve:
    """Sample fn over [0, 2*pi) at n uniform parameter values."""
    pts = tuple(Point2(*fn(2.0 * math.pi * i / n)) for i in range(n))
    return SampledCurve(pts)


def circle_curve(n: int, radius: float = 1.0) -> SampledCurve:
    return sample_closed_curve(lambda t: (radius * math.cos(t), radius * math.sin(t)), n)


def ellipse_curve(n: int, a: float = 2.0, b: float = 1.0) -> SampledCurve:
    return sample_closed_curve(lambda t: (a * math.cos(t), b * math.sin(t)), n)


def limacon_curve(n: int, a: float = 1.0, b: float = 2.0) -> SampledCurve:
    """Limacon r = a + b*cos(theta); self-intersecting when b > a."""

    def fn(t: float) -> tuple[float, float]:
        r = a + b * math.cos(t)
        return (r * math.cos(t), r * math.sin(t))

    return sample_closed_curve(fn, n)


def inscribe(curve: SampledCurve, target_length_ratio: float) -> ClosedPolyline2:
    """Inscribed polyline on curve samples reaching the requested length share.

    Uses the coarsest uniform stride whose polyline length is at least
    target_length_ratio times the polygonal length of the sampling; stride 1
    reproduces the sampling itself. The inscribed rotation never exceeds the
    rotation estimate of the parent sampling.
    """
    if not (0.0 < target_length_ratio < 1.0):
        raise InvalidInputError(
            "target length ratio must lie in (0, 1); use denser samples for more"
        )
    pts = curve.points
    n = len(pts)
    target = target_length_ratio * curve.polygonal_length()
    stride = max(1, n // 3)
    while stride >= 1:
        idx = list(range(0, n, stride))
        if len(idx) >= 3:
            sub = [pts[i] for i in idx]
            ell = sum(math.dist(sub[i], sub[(i + 1) % len(sub)]) for i in range(len(sub)))
            if ell >= target:
                return ClosedPolyline2(tuple(sub))
        stride //= 2
    raise InvalidInputError("ratio unreachable at this sampling; use denser samples")


def random_polyline(
    seed: int, n: int, region: ConvexPolygon2, max_tries: int = 64
) -> ClosedPolyline2:
    """Deterministic random closed polyline with n i.i.d. vertices in region."""
    if n < 3:
        raise InvalidInputError("polyline needs at least 3 vertices")
    rng = make_rng(seed)
    xs = [p.x for p in region.vertices]
    ys = [p.y for p in region.vertices]
    lo = np.array([min(xs), min(ys)])
    hi = np.array([max(xs), max(ys)])
    for _ in range(max_tries):
        pts: list[Point2] = []
        while len(pts) < n:
            cand = lo + rng.random(2) * (hi - lo)
            p = Point2(float(cand[0]), float(cand[1]))
            if region.contains(p):
                pts.append(p)
        try:
            cand_poly = ClosedPolyline2(tuple(pts))
            normalize(cand_poly)
            return cand_poly
        except DegenerateInputError:
            continue
    raise InvalidInputError("could not draw a valid polyline in the region")


def random_disk_polyline(rng: np.random.Generator, n: int) -> ClosedPolyline2:
    """Closed polyline with n vertices uniform in the unit disk."""
    pts: list[Point2] = []
    while len(pts) < n:
        cand = rng.random(2) * 2.0 - 1.0
        if cand[0] ** 2 + cand[1] ** 2 <= 1.0:
            pts.append(Point2(float(cand[0]), float(cand[1])))
    return ClosedPolyline2(tuple(pts))


def _cap_point(rng: np.random.Generator, cap_radius: float) -> SphPoint:
    """Uniform point in the polar cap of the given angular radius."""
    z = 1.0 - rng.random() * (1.0 - math.cos(cap_radius))
    phi = rng.random() * 2.0 * math.pi
    s = math.sqrt(max(0.0, 1.0 - z * z))
    return SphPoint(np.array([s * math.cos(phi), s * math.sin(phi), z]))


def random_sph_points(
    rng: np.random.Generator, count: int, cap_radius: float
) -> list[SphPoint]:
    return [_cap_point(rng, cap_radius) for _ in range(count)]


def random_sph_triangle(
    seed_or_rng, cap_radius: float = 1.0, min_angle: float = 1e-3, max_tries: int = 256
) -> SphTriangle:
    """Non-degenerate spherical triangle with vertices in a polar cap."""
    rng = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) else make_rng(seed_or_rng)
    if cap_radius >= math.pi / 2:
        raise InvalidInputError("cap radius must stay inside the open hemisphere")
    for _ in range(max_tries):
        a, b, c = random_sph_points(rng, 3, cap_radius)
        try:
            tri = SphTriangle.from_points(a, b, c)
        except InvalidInputError:
            continue
        if min(tri.angles) >= min_angle and min(tri.a, tri.b, tri.c) >= 1e-6:
            return tri
    raise InvalidInputError("rejection budget exceeded for triangle sampling")


def random_sph_quad(
    seed_or_rng, cap_radius: float = 1.0, min_angle: float = 1e-3, max_tries: int = 512
) -> SphQuad:
    """Convex spherical quadrilateral with vertices in a polar cap."""
    rng = seed_or_rng if isinstance(seed_or_rng, np.random.Generator) else make_rng(seed_or_rng)
    if cap_radius >= math.pi / 2:
        raise InvalidInputError("cap radius must stay inside the open hemisphere")
    for _ in range(max_tries):
        pts = random_sph_points(rng, 4, cap_radius)
        # order around the centroid so convex position reads off directly
        center = sum((p.v for p in pts), np.zeros(3))
        nc = np.linalg.norm(center)
        if nc < 1e-9:
            continue
        center /= nc
        ref = np.zeros(3)
        ref[int(np.argmin(np.abs(center)))] = 1.0
        e1 = np.cross(center, ref)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(center, e1)
        angles = [
            math.atan2(float(np.dot(p.v, e2)), float(np.dot(p.v, e1))) for p in pts
        ]
        ordered = [p for _, p in sorted(zip(angles, pts), key=lambda t: t[0])]
        try:
            quad = SphQuad(*ordered)
            _ = quad.O
        except InvalidInputError:
            continue
        if quad.phi >= min_angle and min(quad.sides) >= 1e-6:
            return quad
    raise InvalidInputError("rejection budget exceeded for quadrilateral sampling")


def random_sph_polyline(
    rng: np.random.Generator, n: int, cap_radius: float = 1.3, max_tries: int = 64
) -> SphPolyline:
    """Random closed spherical polyline with n vertices in a polar cap."""
    for _ in range(max_tries):
        pts = random_sph_points(rng, n, cap_radius)
        ok = all(
            sph_distance(pts[i], pts[(i + 1) % n]) > 1e-9 for i in range(n)
        )
        if not ok:
            continue
        try:
            return SphPolyline(tuple(pts))
        except (InvalidInputError, DegenerateInputError):
            continue
    raise InvalidInputError("rejection budget exceeded for spherical polyline")
