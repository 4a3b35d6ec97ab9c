"""Local-search engine that reduces a closed polyline to a hull circuit.

The pipeline works in phases. First every vertex strictly inside the convex
hull is dealt with by one of three local moves:

  case_a       slide the vertex outward along its incoming (or outgoing)
               edge line until it touches the hull boundary or the extension
               of the second-next edge; rotation is unchanged, length grows.
  case_b       the vertex sits in an alternating-turn pocket whose deletion
               is safe; drop it.
  case_c_shift neither move applies at this index; re-target to the
               neighbour of the minimal-angle offending index.

Once all vertices are on the boundary the engine repeats three sweeps until
every turn has one direction and every edge runs along the boundary:
full-circuit removal, stretching of edges between same-direction turns, and
flips of maximal same-direction blocks onto the opposite boundary arc.
Every move is recorded with a metrics snapshot for monotonicity audits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .config import EPS_POINT
from .errors import BudgetExceededError, DegenerateInputError, InvalidInputError
from .planar import (
    ClosedPolyline2,
    ConvexPolygon2,
    Point2,
    PolylineMetrics,
    convex_hull,
    normalize,
    orient,
    polyline_metrics,
)

TWO_PI = 2.0 * math.pi


class Turn(Enum):
    """Turn direction at a vertex; collinear bases count as left."""

    LEFT = "left"
    RIGHT = "right"


class MoveKind(Enum):
    CASE_A = "case_a"
    CASE_B = "case_b"
    CASE_C_SHIFT = "case_c_shift"
    STRETCH = "stretch"
    CIRCUIT_REMOVAL = "circuit_removal"
    BLOCK_FLIP = "block_flip"


@dataclass(frozen=True)
class Move:
    """One applied (or directive) move with the vertex range it touched."""

    kind: MoveKind
    indices: tuple[int, ...]
    case_tag: Optional[int] = None
    note: str = ""


@dataclass(frozen=True)
class TraceStep:
    move: Move
    metrics: PolylineMetrics
    polyline: ClosedPolyline2


@dataclass
class ImprovementTrace:
    """Ordered move log with metric snapshots."""

    initial: ClosedPolyline2
    initial_metrics: PolylineMetrics
    steps: list[TraceStep] = field(default_factory=list)

    def record(self, move: Move, polyline: ClosedPolyline2) -> None:
        self.steps.append(TraceStep(move, polyline_metrics(polyline), polyline))

    def polylines(self) -> list[ClosedPolyline2]:
        return [self.initial] + [s.polyline for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def to_csv(self) -> str:
        rows = ["step_index,move_kind,case_tag,L,V,T,P"]
        m = self.initial_metrics
        rows.append(f"0,start,,{m.L:.12g},{m.V:.12g},{m.T:.12g},{m.P:.12g}")
        for i, s in enumerate(self.steps, start=1):
            tag = "" if s.move.case_tag is None else str(s.move.case_tag)
            m = s.metrics
            rows.append(
                f"{i},{s.move.kind.value},{tag},"
                f"{m.L:.12g},{m.V:.12g},{m.T:.12g},{m.P:.12g}"
            )
        return "\n".join(rows) + "\n"


def classify_turns(p: ClosedPolyline2) -> list[Turn]:
    """Turn direction at every vertex via the orientation predicate."""
    vs = p.vertices
    n = len(vs)
    return [
        Turn.LEFT if orient(vs[i - 1], vs[i], vs[(i + 1) % n]) >= 0 else Turn.RIGHT
        for i in range(n)
    ]


def _turn_signs(p: ClosedPolyline2) -> list[int]:
    vs = p.vertices
    n = len(vs)
    return [orient(vs[i - 1], vs[i], vs[(i + 1) % n]) for i in range(n)]


def _angle_at(c: Point2, p: Point2, q: Point2) -> float:
    ux, uy = p.x - c.x, p.y - c.y
    vx, vy = q.x - c.x, q.y - c.y
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


def _cyclic_slice(vs: tuple[Point2, ...], a: int, b: int) -> list[Point2]:
    """Vertices a..b inclusive, walking forward and wrapping."""
    n = len(vs)
    out = [vs[a % n]]
    j = a % n
    while j != b % n:
        j = (j + 1) % n
        out.append(vs[j])
    return out


# ---------------------------------------------------------------------------
# hull boundary bookkeeping


def _hull_tolerance(h: ConvexPolygon2) -> float:
    return EPS_POINT * h.span


def _locate_on_boundary(h: ConvexPolygon2, p: Point2, tol: float) -> Optional[float]:
    """Cyclic boundary position of p in [0, m); corners sit at integers."""
    corners = h.vertices
    m = len(corners)
    for j, c in enumerate(corners):
        if math.dist(p, c) <= tol:
            return float(j)
    best = None
    best_dist = tol
    for j in range(m):
        a, b = corners[j], corners[(j + 1) % m]
        ex, ey = b.x - a.x, b.y - a.y
        len2 = ex * ex + ey * ey
        t = ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2
        if t < 0.0 or t > 1.0:
            continue
        qx, qy = a.x + t * ex, a.y + t * ey
        d = math.hypot(p.x - qx, p.y - qy)
        if d <= best_dist:
            best_dist = d
            best = (j + t) % m
    return best


def _corners_between(
    h: ConvexPolygon2, s_from: float, s_to: float, direction: int
) -> list[Point2]:
    """Corners strictly between two boundary positions, walking ``direction``.

    direction +1 walks counterclockwise, -1 clockwise. Endpoint corners are
    excluded.
    """
    m = len(h.vertices)
    out: list[Point2] = []
    if direction > 0:
        gap = (s_to - s_from) % m
        j = math.floor(s_from) + 1
        for _ in range(m):
            rel = (j - s_from) % m
            if rel <= 0.0 or rel >= gap:
                break
            out.append(h.vertices[j % m])
            j += 1
    else:
        gap = (s_from - s_to) % m
        j = math.ceil(s_from) - 1
        for _ in range(m):
            rel = (s_from - j) % m
            if rel <= 0.0 or rel >= gap:
                break
            out.append(h.vertices[j % m])
            j -= 1
    return out


def _edge_on_boundary(
    h: ConvexPolygon2, p: Point2, q: Point2, tol: float
) -> Optional[int]:
    """Hull edge index containing segment p-q, or None.

    Walking direction along that hull edge: +1 when p->q agrees with the
    counterclockwise boundary, -1 otherwise; encoded in the sign of the
    returned value offset by one (see _edge_direction).
    """
    corners = h.vertices
    m = len(corners)
    for j in range(m):
        a, b = corners[j], corners[(j + 1) % m]
        ex, ey = b.x - a.x, b.y - a.y
        elen = math.hypot(ex, ey)
        tp = ((p.x - a.x) * ex + (p.y - a.y) * ey) / (elen * elen)
        tq = ((q.x - a.x) * ex + (q.y - a.y) * ey) / (elen * elen)
        lo, hi = -tol / elen, 1.0 + tol / elen
        if not (lo <= tp <= hi and lo <= tq <= hi):
            continue
        dp = abs(ex * (p.y - a.y) - ey * (p.x - a.x)) / elen
        dq = abs(ex * (q.y - a.y) - ey * (q.x - a.x)) / elen
        if dp <= tol and dq <= tol:
            return j
    return None


def _edge_direction(h: ConvexPolygon2, j: int, p: Point2, q: Point2) -> int:
    """+1 if p->q runs with the counterclockwise boundary on hull edge j."""
    a, b = h.vertices[j], h.vertices[(j + 1) % len(h.vertices)]
    ex, ey = b.x - a.x, b.y - a.y
    dot = (q.x - p.x) * ex + (q.y - p.y) * ey
    return 1 if dot >= 0 else -1


# ---------------------------------------------------------------------------
# interior-vertex elimination


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _ray_hull_exit(h: ConvexPolygon2, origin: Point2, ux: float, uy: float) -> float:
    """Smallest positive parameter where origin + t*(u) meets the boundary."""
    best = math.inf
    for a, b in h.edges():
        ex, ey = b.x - a.x, b.y - a.y
        denom = _cross(ux, uy, ex, ey)
        if denom == 0.0:
            continue
        wx, wy = a.x - origin.x, a.y - origin.y
        t = _cross(wx, wy, ex, ey) / denom
        s = _cross(wx, wy, ux, uy) / denom
        if t > 1e-15 and -1e-9 <= s <= 1.0 + 1e-9:
            best = min(best, t)
    if not math.isfinite(best):
        raise DegenerateInputError("ray from interior point never exits the hull")
    return best


def _ray_ray(
    origin: Point2, ux: float, uy: float, o2: Point2, wx: float, wy: float, tol: float
) -> Optional[float]:
    """Parameter t > 0 where origin + t*u crosses {o2 + s*w : s > 0}, if any."""
    denom = _cross(ux, uy, wx, wy)
    if denom == 0.0:
        return None
    dx, dy = o2.x - origin.x, o2.y - origin.y
    t = _cross(dx, dy, wx, wy) / denom
    s = _cross(dx, dy, ux, uy) / denom
    if t > tol and s > tol:
        return t
    return None


def _slide_vertex(
    p: ClosedPolyline2, i: int, h: ConvexPolygon2, forward: bool
) -> tuple[ClosedPolyline2, Move]:
    """case_a move: extend the edge arriving at vertex i until a contact."""
    vs = p.vertices
    n = len(vs)
    anchor = vs[(i - 1) % n] if forward else vs[(i + 1) % n]
    a_i = vs[i]
    ux, uy = a_i.x - anchor.x, a_i.y - anchor.y
    ulen = math.hypot(ux, uy)
    ux, uy = ux / ulen, uy / ulen
    j1 = (i + 1) % n if forward else (i - 1) % n
    j2 = (i + 2) % n if forward else (i - 2) % n
    o2 = vs[j1]
    wx, wy = o2.x - vs[j2].x, o2.y - vs[j2].y
    wlen = math.hypot(wx, wy)
    tol = p.point_tolerance()
    t_exit = _ray_hull_exit(h, a_i, ux, uy)
    t_ray = _ray_ray(a_i, ux, uy, o2, wx / wlen, wy / wlen, tol)
    drop_j1 = t_ray is not None and t_ray <= t_exit * (1.0 + 1e-9)
    t_star = t_ray if drop_j1 else t_exit
    new_pt = Point2(a_i.x + t_star * ux, a_i.y + t_star * uy)
    new_vs = list(vs)
    new_vs[i] = new_pt
    if drop_j1:
        del new_vs[j1]
    out = normalize(ClosedPolyline2(tuple(new_vs)))
    return out, Move(MoveKind.CASE_A, (i,), note="forward" if forward else "backward")


def _case_c_candidates(
    p: ClosedPolyline2, h: ConvexPolygon2, tol: float
) -> list[tuple[float, int, int]]:
    """All (angle, index, +-1) for indices in the re-targeting configuration."""
    vs = p.vertices
    n = len(vs)
    signs = _turn_signs(p)
    out: list[tuple[float, int, int]] = []
    for j in range(n):
        if not h.strictly_contains(vs[j], tol):
            continue
        if signs[j] * signs[(j + 1) % n] >= 0 or signs[j] * signs[(j - 1) % n] >= 0:
            continue
        prev_v, next_v = vs[(j - 1) % n], vs[(j + 1) % n]
        side_self = orient(prev_v, next_v, vs[j])
        if side_self == 0:
            continue
        if orient(prev_v, next_v, vs[(j + 2) % n]) * side_self < 0:
            out.append((_angle_at(next_v, prev_v, vs[j]), j, 1))
        if orient(prev_v, next_v, vs[(j - 2) % n]) * side_self < 0:
            out.append((_angle_at(prev_v, next_v, vs[j]), j, -1))
    return out


def push_interior_vertex(
    p: ClosedPolyline2, i: int, hull: Optional[ConvexPolygon2] = None
) -> tuple[ClosedPolyline2, Move]:
    """Resolve one vertex strictly inside the hull.

    Returns the improved polyline and the move applied. When neither the
    slide nor the deletion applies at index i, the polyline is returned
    unchanged together with a case_c_shift directive whose indices are
    (selected_index, next_index_to_try); the selected index minimizes the
    offending angle, ties broken by lowest index.
    """
    q = p
    h = hull if hull is not None else convex_hull(q)
    vs = q.vertices
    n = len(vs)
    i %= n
    tol = _hull_tolerance(h)
    if not h.strictly_contains(vs[i], tol):
        raise InvalidInputError("vertex already lies on the hull boundary")
    signs = _turn_signs(q)
    s_i, s_prev, s_next = signs[i], signs[(i - 1) % n], signs[(i + 1) % n]
    if s_i * s_next >= 0:
        return _slide_vertex(q, i, h, forward=True)
    if s_i * s_prev >= 0:
        return _slide_vertex(q, i, h, forward=False)
    # both neighbour lines separate; test the deletion pocket
    prev_v, next_v = vs[(i - 1) % n], vs[(i + 1) % n]
    side_self = orient(prev_v, next_v, vs[i])
    side_fwd = orient(prev_v, next_v, vs[(i + 2) % n])
    side_bwd = orient(prev_v, next_v, vs[(i - 2) % n])
    if side_self != 0 and side_fwd * side_self >= 0 and side_bwd * side_self >= 0:
        new_vs = list(vs)
        del new_vs[i]
        out = normalize(ClosedPolyline2(tuple(new_vs)))
        return out, Move(MoveKind.CASE_B, (i,))
    candidates = _case_c_candidates(q, h, tol)
    if not candidates:
        # numeric corner: treat like the deletion case rather than stall
        new_vs = list(vs)
        del new_vs[i]
        out = normalize(ClosedPolyline2(tuple(new_vs)))
        return out, Move(MoveKind.CASE_B, (i,), note="fallback")
    ang, j, direction = min(candidates, key=lambda c: (c[0], c[1], -c[2]))
    target = (j + direction) % n
    return q, Move(
        MoveKind.CASE_C_SHIFT,
        (j, target),
        note="forward" if direction > 0 else "backward",
    )


# ---------------------------------------------------------------------------
# boundary-phase moves


def stretch(
    p: ClosedPolyline2, i: int, hull: Optional[ConvexPolygon2] = None
) -> tuple[ClosedPolyline2, Move]:
    """Replace edge i with the boundary path taken in the turns' direction.

    Requires the turns at both edge endpoints to share a direction and both
    endpoints to lie on the hull boundary. An edge already running along the
    boundary in that direction is an identity move.
    """
    h = hull if hull is not None else convex_hull(p)
    vs = p.vertices
    n = len(vs)
    i %= n
    turns = classify_turns(p)
    if turns[i] != turns[(i + 1) % n]:
        raise InvalidInputError("edge endpoints turn in different directions")
    d = 1 if turns[i] is Turn.LEFT else -1
    tol = _hull_tolerance(h)
    x, y = vs[i], vs[(i + 1) % n]
    s_x = _locate_on_boundary(h, x, tol)
    s_y = _locate_on_boundary(h, y, tol)
    if s_x is None or s_y is None:
        raise InvalidInputError("edge endpoints must lie on the hull boundary")
    j = _edge_on_boundary(h, x, y, tol)
    if j is not None and _edge_direction(h, j, x, y) == d:
        return p, Move(MoveKind.STRETCH, (i,), note="identity")
    corners = _corners_between(h, s_x, s_y, d)
    new_vs = list(vs[: i + 1]) + corners + list(vs[i + 1 :])
    out = normalize(ClosedPolyline2(tuple(new_vs)))
    return out, Move(MoveKind.STRETCH, (i,))


def remove_full_circuit(
    p: ClosedPolyline2,
) -> Optional[tuple[ClosedPolyline2, Move]]:
    """Collapse one embedded full boundary circuit, if present.

    Looks for consecutive vertices C1 C2 ... Cm C1 C2 (a full lap whose first
    and last edges coincide) and removes one lap. Length drops by the hull
    perimeter and rotation by 2*pi.
    """
    q = normalize(p)
    h = convex_hull(q)
    corners = h.vertices
    m = len(corners)
    vs = q.vertices
    n = len(vs)
    if n < m + 3:
        return None
    tol = max(_hull_tolerance(h), q.point_tolerance())
    ids: list[Optional[int]] = []
    for v in vs:
        cid = None
        for j, c in enumerate(corners):
            if math.dist(v, c) <= tol:
                cid = j
                break
        ids.append(cid)
    for start in range(n):
        c0 = ids[start]
        if c0 is None:
            continue
        for sign in (1, -1):
            ok = True
            for r in range(m + 2):
                if ids[(start + r) % n] != (c0 + sign * r) % m:
                    ok = False
                    break
            if not ok:
                continue
            drop = {(start + r) % n for r in range(2, m + 2)}
            new_vs = tuple(v for idx, v in enumerate(vs) if idx not in drop)
            out = normalize(ClosedPolyline2(new_vs))
            move = Move(
                MoveKind.CIRCUIT_REMOVAL,
                (start, (start + m + 1) % n),
                note=f"lap at corner {c0}, direction {sign:+d}",
            )
            return out, move
    return None


_CASE_ORDERS = {
    ("b", "c", "d"): 1,
    ("d", "b", "c"): 2,
    ("b", "d", "c"): 3,
    ("c", "d", "b"): 4,
    ("c", "b", "d"): 5,
    ("d", "c", "b"): 6,
}


def _classify_block_case(
    h: ConvexPolygon2,
    s_i: float,
    s_i1: float,
    s_k1: float,
    s_k: float,
) -> tuple[int, str]:
    """Boundary cyclic order of (start, first inner, last inner, end).

    Orders are taken counterclockwise from the block start. Tag 6 marks the
    one cyclic order the case list leaves unnamed; coincident positions give
    tag 0.
    """
    m = len(h.vertices)
    rel = [
        ((s_i1 - s_i) % m, "b"),
        ((s_k1 - s_i) % m, "c"),
        ((s_k - s_i) % m, "d"),
    ]
    if any(r[0] == 0.0 for r in rel) or len({r[0] for r in rel}) != 3:
        return 0, "degenerate boundary order"
    order = tuple(name for _, name in sorted(rel))
    tag = _CASE_ORDERS[order]
    note = "order absent from the named cases" if tag == 6 else ""
    return tag, note


def flip_monotone_block(
    p: ClosedPolyline2,
    block: tuple[int, int],
    hull: Optional[ConvexPolygon2] = None,
) -> tuple[ClosedPolyline2, Move]:
    """Replace a maximal same-direction block by the opposite boundary arc.

    ``block`` is (i, k): the vertices strictly between turn one way, the
    endpoints turn the other way, and the inner edges run along the hull
    boundary. The inner path is replaced by the arc from vertex i to vertex
    k walked against the block's turn direction, which removes two direction
    changes.
    """
    h = hull if hull is not None else convex_hull(p)
    vs = p.vertices
    n = len(vs)
    i, k = block[0] % n, block[1] % n
    inner = []
    j = (i + 1) % n
    while j != k:
        inner.append(j)
        j = (j + 1) % n
    if not inner:
        raise InvalidInputError("block has no inner vertices")
    turns = classify_turns(p)
    inner_dirs = {turns[j] for j in inner}
    if len(inner_dirs) != 1:
        raise InvalidInputError("inner turns are not uniform")
    d_inner = inner_dirs.pop()
    if turns[i] == d_inner or turns[k] == d_inner:
        raise InvalidInputError("block is not maximal")
    tol = _hull_tolerance(h)
    for a, b in zip(inner, inner[1:]):
        if _edge_on_boundary(h, vs[a], vs[b], tol) is None:
            raise InvalidInputError("inner edges must run along the hull boundary")
    a_i, a_k = vs[i], vs[k]
    outside = _cyclic_slice(vs, k, i)  # path k .. i through the untouched part
    if math.dist(a_i, a_k) <= max(tol, p.point_tolerance()):
        new_vs = tuple(outside[:-1])  # drop the duplicate endpoint
        out = normalize(ClosedPolyline2(new_vs))
        return out, Move(
            MoveKind.BLOCK_FLIP, (i, k), case_tag=0, note="degenerate excision"
        )
    arc_dir = -1 if d_inner is Turn.LEFT else 1
    s_i = _locate_on_boundary(h, a_i, tol)
    s_k = _locate_on_boundary(h, a_k, tol)
    if s_i is None or s_k is None:
        raise InvalidInputError("block endpoints must lie on the hull boundary")
    s_i1 = _locate_on_boundary(h, vs[inner[0]], tol)
    s_k1 = _locate_on_boundary(h, vs[inner[-1]], tol)
    if s_i1 is None or s_k1 is None:
        raise InvalidInputError("inner vertices must lie on the hull boundary")
    tag, note = _classify_block_case(h, s_i, s_i1, s_k1, s_k)
    corners = _corners_between(h, s_i, s_k, arc_dir)
    new_vs = tuple([a_i] + corners + outside[:-1])
    out = normalize(ClosedPolyline2(new_vs))
    return out, Move(MoveKind.BLOCK_FLIP, (i, k), case_tag=tag, note=note)


# ---------------------------------------------------------------------------
# the full pipeline


def _interior_indices(
    p: ClosedPolyline2, h: ConvexPolygon2, tol: float
) -> list[int]:
    return [i for i, v in enumerate(p.vertices) if h.strictly_contains(v, tol)]


def _fallback_push_index(
    p: ClosedPolyline2, h: ConvexPolygon2, tol: float
) -> Optional[int]:
    """Any interior index where the slide or the delete move applies."""
    signs = _turn_signs(p)
    n = len(p.vertices)
    for i in _interior_indices(p, h, tol):
        if signs[i] * signs[(i + 1) % n] >= 0 or signs[i] * signs[(i - 1) % n] >= 0:
            return i
        prev_v, next_v = p.vertices[(i - 1) % n], p.vertices[(i + 1) % n]
        side_self = orient(prev_v, next_v, p.vertices[i])
        if (
            side_self != 0
            and orient(prev_v, next_v, p.vertices[(i + 2) % n]) * side_self >= 0
            and orient(prev_v, next_v, p.vertices[(i - 2) % n]) * side_self >= 0
        ):
            return i
    return None


def _next_stretch_index(
    p: ClosedPolyline2, h: ConvexPolygon2, turns: list[Turn], tol: float
) -> Optional[int]:
    vs = p.vertices
    n = len(vs)
    for i in range(n):
        if turns[i] != turns[(i + 1) % n]:
            continue
        d = 1 if turns[i] is Turn.LEFT else -1
        j = _edge_on_boundary(h, vs[i], vs[(i + 1) % n], tol)
        if j is not None and _edge_direction(h, j, vs[i], vs[(i + 1) % n]) == d:
            continue
        return i
    return None


def _maximal_blocks(turns: list[Turn]) -> list[tuple[int, int, Turn]]:
    """All maximal same-direction runs as (i, k, inner_direction) blocks."""
    n = len(turns)
    blocks = []
    for start in range(n):
        d = turns[start]
        if turns[(start - 1) % n] == d:
            continue
        end = start
        while turns[(end + 1) % n] == d:
            end = (end + 1) % n
            if end == start:
                break
        if turns[(end + 1) % n] != d:
            blocks.append(((start - 1) % n, (end + 1) % n, d))
    return blocks


def _corner_visit_counts(
    p: ClosedPolyline2, h: ConvexPolygon2, tol: float
) -> dict[int, list[int]]:
    """corner id -> polyline vertex indices sitting at that corner."""
    out: dict[int, list[int]] = {j: [] for j in range(len(h.vertices))}
    for idx, v in enumerate(p.vertices):
        for j, c in enumerate(h.vertices):
            if math.dist(v, c) <= tol:
                out[j].append(idx)
                break
    return out


def _block_loss_score(
    p: ClosedPolyline2,
    h: ConvexPolygon2,
    block: tuple[int, int, Turn],
    tol: float,
    visits: dict[int, list[int]],
) -> Optional[int]:
    """Hull corners whose only visits sit inside the block's inner path.

    Returns None when the block's inner edges are not boundary edges yet
    (not flip ready).
    """
    i, k, d = block
    vs = p.vertices
    n = len(vs)
    inner = []
    j = (i + 1) % n
    while j != k:
        inner.append(j)
        j = (j + 1) % n
    if not inner:
        return None
    for a, b in zip(inner, inner[1:]):
        if _edge_on_boundary(h, vs[a], vs[b], tol) is None:
            return None
    s_i = _locate_on_boundary(h, vs[i], tol)
    s_k = _locate_on_boundary(h, vs[k], tol)
    if s_i is None or s_k is None:
        return None
    arc_dir = -1 if d is Turn.LEFT else 1
    arc_corner_ids = set()
    m = len(h.vertices)
    for c in _corners_between(h, s_i, s_k, arc_dir):
        for j2 in range(m):
            if math.dist(c, h.vertices[j2]) <= tol:
                arc_corner_ids.add(j2)
                break
    inner_set = set(inner)
    lost = 0
    for cid, vertex_ids in visits.items():
        if not vertex_ids:
            continue
        if cid in arc_corner_ids:
            continue
        if all(idx in inner_set for idx in vertex_ids):
            lost += 1
    return lost


def _select_block(
    p: ClosedPolyline2, h: ConvexPolygon2, turns: list[Turn], tol: float
) -> Optional[tuple[int, int]]:
    """Flip candidate preferring blocks that keep every hull corner covered."""
    blocks = _maximal_blocks(turns)
    if len({t for t in turns}) == 1:
        return None
    visits = _corner_visit_counts(p, h, tol)
    scored = []
    for b in blocks:
        score = _block_loss_score(p, h, b, tol, visits)
        if score is None:
            continue
        scored.append((score, b[0], b[1]))
        if score == 0:
            return (b[0], b[1])
    if not scored:
        return None
    scored.sort()
    return (scored[0][1], scored[0][2])


def _all_edges_on_matching_boundary(
    p: ClosedPolyline2, h: ConvexPolygon2, turns: list[Turn], tol: float
) -> bool:
    vs = p.vertices
    n = len(vs)
    d = 1 if turns[0] is Turn.LEFT else -1
    for i in range(n):
        j = _edge_on_boundary(h, vs[i], vs[(i + 1) % n], tol)
        if j is None or _edge_direction(h, j, vs[i], vs[(i + 1) % n]) != d:
            return False
    return True


def improve_to_circuit(
    p: ClosedPolyline2, move_budget: Optional[int] = None
) -> tuple[ClosedPolyline2, ImprovementTrace]:
    """Run the full pipeline until the polyline is a multiple hull circuit.

    Phase order: normalize, eliminate interior vertices, then repeat
    {circuit removal, stretching, block flips} until every turn has one
    direction and every edge lies on the boundary. The move budget defaults
    to 10 * n^2 and exists purely as a non-termination trap.
    """
    q = normalize(p)
    n0 = len(p.vertices)
    budget = move_budget if move_budget is not None else 10 * n0 * n0
    trace = ImprovementTrace(initial=q, initial_metrics=polyline_metrics(q))
    spent = 0

    def spend() -> None:
        nonlocal spent
        spent += 1
        if spent > budget:
            raise BudgetExceededError(
                f"move budget {budget} exceeded after {spent - 1} moves", trace
            )

    # interior-vertex phase
    while True:
        h = convex_hull(q)
        tol = _hull_tolerance(h)
        interior = _interior_indices(q, h, tol)
        if not interior:
            break
        i = interior[0]
        visited: set[int] = set()
        while True:
            spend()
            q2, move = push_interior_vertex(q, i, hull=h)
            trace.record(move, q2)
            if move.kind is MoveKind.CASE_C_SHIFT:
                i = move.indices[1]
                if i in visited:
                    alt = _fallback_push_index(q, h, tol)
                    if alt is None:
                        raise BudgetExceededError("interior phase stalled", trace)
                    i = alt
                visited.add(i)
                continue
            q = q2
            break

    # boundary phase
    while True:
        h = convex_hull(q)
        tol = _hull_tolerance(h)
        turns = classify_turns(q)
        uniform = all(t == turns[0] for t in turns)
        if uniform and _all_edges_on_matching_boundary(q, h, turns, tol):
            break
        progressed = False
        while True:
            res = remove_full_circuit(q)
            if res is None:
                break
            spend()
            q, move = res
            trace.record(move, q)
            progressed = True
        while True:
            h = convex_hull(q)
            tol = _hull_tolerance(h)
            turns = classify_turns(q)
            idx = _next_stretch_index(q, h, turns, tol)
            if idx is None:
                break
            spend()
            q, move = stretch(q, idx, hull=h)
            trace.record(move, q)
            progressed = True
        while True:
            h = convex_hull(q)
            tol = _hull_tolerance(h)
            turns = classify_turns(q)
            if all(t == turns[0] for t in turns):
                break
            blk = _select_block(q, h, turns, tol)
            if blk is None:
                break
            spend()
            q, move = flip_monotone_block(q, blk, hull=h)
            trace.record(move, q)
            progressed = True
        if not progressed:
            raise BudgetExceededError("no applicable move before completion", trace)

    return normalize(q), trace
