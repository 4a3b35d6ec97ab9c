"""Seeded fuzz campaigns over the inequality properties.

Each campaign draws instances from one Philox stream, evaluates the
property's signed margin per instance, and reports the minimum together
with the worst instance. A violation is a margin below the (overridable)
tolerance. Campaign summaries are byte-deterministic per (property, seed,
count); wall-clock time is kept out of the canonical serialization.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import margin_tolerance
from .errors import BudgetExceededError, GeometryError
from .improve import improve_to_circuit
from .inequalities import ConvexQuad2, Triangle2, dna_check, lemma4_margin, lemma5_margin
from .planar import (
    ClosedPolyline2,
    Point2,
    convex_hull,
    is_multiple_circuit,
    orient,
    polyline_metrics,
)
from .sampling import (
    make_rng,
    random_disk_polyline,
    random_sph_polyline,
    random_sph_quad,
    random_sph_triangle,
)
from .spherical import lemma1s_margin, lemma2s_margin, lemma3s_margin, theorem_s_check

TWO_PI = 2.0 * math.pi

PROPERTY_NAMES = (
    "lemma4",
    "lemma5",
    "dna",
    "improve",
    "lemma1s",
    "lemma2s",
    "lemma3s",
    "theorem_s",
)


@dataclass
class FuzzReport:
    """Summary of one campaign."""

    property_name: str
    seed: int
    count: int
    min_margin: float
    violations: int
    worst: dict
    extra: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def to_json_dict(self, include_elapsed: bool = False) -> dict:
        out = {
            "property": self.property_name,
            "seed": self.seed,
            "count": self.count,
            "min_margin": self.min_margin,
            "violations": self.violations,
            "worst": self.worst,
            "extra": self.extra,
        }
        if include_elapsed:
            out["elapsed_s"] = self.elapsed_s
        return out


def _triangle_instances(rng: np.random.Generator, count: int):
    pts = rng.random((count, 3, 2))
    for row in pts:
        a = Point2(float(row[0][0]), float(row[0][1]))
        b = Point2(float(row[1][0]), float(row[1][1]))
        c = Point2(float(row[2][0]), float(row[2][1]))
        if orient(a, b, c) == 0:
            continue
        yield a, b, c


def _run_lemma4(rng, count, tol, report):
    produced = 0
    while produced < count:
        batch = min(count - produced, 200_000)
        for a, b, c in _triangle_instances(rng, batch):
            m = lemma4_margin(Triangle2(a, b, c))
            produced += 1
            if m.margin < report["min"]:
                report["min"] = m.margin
                report["worst"] = {"A": list(a), "B": list(b), "C": list(c)}
            if m.margin < -tol:
                report["violations"] += 1
            if produced >= count:
                break


def _run_lemma5(rng, count, tol, report):
    produced = 0
    while produced < count:
        pts = rng.random((4, 2))
        quad_pts = [Point2(float(p[0]), float(p[1])) for p in pts]
        try:
            hull = convex_hull(quad_pts)
        except GeometryError:
            continue
        if len(hull.vertices) != 4:
            continue
        q = ConvexQuad2(*hull.vertices)
        m = lemma5_margin(q)
        produced += 1
        if m.margin < report["min"]:
            report["min"] = m.margin
            report["worst"] = {"ABCD": [list(v) for v in hull.vertices]}
        if m.margin < -tol:
            report["violations"] += 1


def _run_dna(rng, count, tol, report, max_vertices):
    min_noncircuit = math.inf
    max_abs_circuit = 0.0
    circuit_count = 0
    min_rotation = math.inf
    for _ in range(count):
        n = int(rng.integers(3, max_vertices + 1))
        poly = random_disk_polyline(rng, n)
        try:
            verdict = dna_check(poly)
        except GeometryError:
            continue
        min_rotation = min(min_rotation, verdict.V)
        if verdict.margin < report["min"]:
            report["min"] = verdict.margin
            report["worst"] = {"vertices": [list(v) for v in poly.vertices]}
        if verdict.margin < -tol:
            report["violations"] += 1
        if verdict.k is not None:
            circuit_count += 1
            max_abs_circuit = max(max_abs_circuit, abs(verdict.margin))
        else:
            min_noncircuit = min(min_noncircuit, verdict.margin)
    report["extra"] = {
        "min_margin_noncircuit": min_noncircuit,
        "max_abs_margin_circuit": max_abs_circuit,
        "circuit_count": circuit_count,
        "min_full_rotation": min_rotation,
    }


def _hull_contains_all(outer, poly, tol) -> bool:
    return all(outer.contains(v, tol) for v in poly.vertices)


def _run_improve(rng, count, tol, report, max_vertices):
    failures = {
        "not_circuit": 0,
        "budget": 0,
        "hull_growth": 0,
        "t_mismatch": 0,
        "t_increase": 0,
    }
    max_moves_ratio = 0.0
    for _ in range(count):
        n = int(rng.integers(3, max_vertices + 1))
        poly = random_disk_polyline(rng, n)
        try:
            metrics0 = polyline_metrics(poly)
            hull0 = convex_hull(poly)
        except GeometryError:
            continue
        try:
            final, trace = improve_to_circuit(poly)
        except BudgetExceededError:
            failures["budget"] += 1
            report["violations"] += 1
            continue
        t_final = polyline_metrics(final).T
        margin = metrics0.T - t_final
        if margin < report["min"]:
            report["min"] = margin
            report["worst"] = {"vertices": [list(v) for v in poly.vertices]}
        if margin < -tol:
            report["violations"] += 1
            failures["t_increase"] += 1
        k = is_multiple_circuit(final, hull0)
        if k is None:
            failures["not_circuit"] += 1
            report["violations"] += 1
        if abs(t_final - TWO_PI / metrics0.P) > 1e-9:
            failures["t_mismatch"] += 1
            report["violations"] += 1
        snaps = trace.polylines()
        htol = hull0.point_tolerance()
        for prev, cur in zip(snaps, snaps[1:]):
            if not _hull_contains_all(convex_hull(prev), cur, htol):
                failures["hull_growth"] += 1
                report["violations"] += 1
                break
        max_moves_ratio = max(max_moves_ratio, len(trace) / (10.0 * n * n))
    report["extra"] = {"failures": failures, "max_moves_ratio": max_moves_ratio}


def _run_sph_triangle(rng, count, tol, report, margin_fn, cap_radius):
    for _ in range(count):
        tri = random_sph_triangle(rng, cap_radius=cap_radius)
        m = margin_fn(tri.a, tri.b, tri.c)
        if m.margin < report["min"]:
            report["min"] = m.margin
            report["worst"] = {"sides": [tri.a, tri.b, tri.c]}
        if m.margin < -tol:
            report["violations"] += 1


def _run_lemma3s(rng, count, tol, report, cap_radius):
    for _ in range(count):
        quad = random_sph_quad(rng, cap_radius=cap_radius)
        m = lemma3s_margin(quad)
        if m.margin < report["min"]:
            report["min"] = m.margin
            report["worst"] = {
                "ABCD_xyz": [list(map(float, p.v)) for p in (quad.A, quad.B, quad.C, quad.D)]
            }
        if m.margin < -tol:
            report["violations"] += 1


def _run_theorem_s(rng, count, tol, report, max_vertices, cap_radius):
    for _ in range(count):
        n = int(rng.integers(3, max_vertices + 1))
        poly = random_sph_polyline(rng, n, cap_radius=cap_radius)
        verdict = theorem_s_check(poly)
        if verdict.margin < report["min"]:
            report["min"] = verdict.margin
            report["worst"] = {
                "vertices_xyz": [list(map(float, p.v)) for p in poly.vertices]
            }
        if verdict.margin < -tol:
            report["violations"] += 1


def run_fuzz(
    property_name: str,
    count: int,
    seed: int,
    max_vertices: int = 12,
    cap_radius: Optional[float] = None,
) -> FuzzReport:
    """Evaluate one property's margin on ``count`` seeded instances."""
    if property_name not in PROPERTY_NAMES:
        raise ValueError(f"unknown property {property_name!r}")
    tol = margin_tolerance()
    rng = make_rng(seed)
    state = {"min": math.inf, "violations": 0, "worst": {}, "extra": {}}
    start = time.perf_counter()
    if property_name == "lemma4":
        _run_lemma4(rng, count, tol, state)
    elif property_name == "lemma5":
        _run_lemma5(rng, count, tol, state)
    elif property_name == "dna":
        _run_dna(rng, count, tol, state, max_vertices)
    elif property_name == "improve":
        _run_improve(rng, count, tol, state, max_vertices)
    elif property_name == "lemma1s":
        _run_sph_triangle(rng, count, tol, state, lemma1s_margin, cap_radius or 1.0)
    elif property_name == "lemma2s":
        _run_sph_triangle(rng, count, tol, state, lemma2s_margin, cap_radius or 1.0)
    elif property_name == "lemma3s":
        _run_lemma3s(rng, count, tol, state, cap_radius or 1.0)
    elif property_name == "theorem_s":
        _run_theorem_s(rng, count, tol, state, min(max_vertices, 8), cap_radius or 1.3)
    elapsed = time.perf_counter() - start
    return FuzzReport(
        property_name=property_name,
        seed=seed,
        count=count,
        min_margin=state["min"],
        violations=state["violations"],
        worst=state["worst"],
        extra=state["extra"],
        elapsed_s=elapsed,
    )
