"""Curvature metrics for closed polylines, the hull-circuit improvement
engine, and the spherical and hyperbolic extensions."""

from .errors import (
    BudgetExceededError,
    DegenerateInputError,
    DomainError,
    GeometryError,
    InvalidInputError,
)
from .improve import (
    ImprovementTrace,
    Move,
    MoveKind,
    Turn,
    classify_turns,
    flip_monotone_block,
    improve_to_circuit,
    push_interior_vertex,
    remove_full_circuit,
    stretch,
)
from .inequalities import (
    ConvexQuad2,
    DnaVerdict,
    InequalityMargin,
    Triangle2,
    dna_check,
    lemma1_bound,
    lemma4_margin,
    lemma5_margin,
)
from .planar import (
    ClosedPolyline2,
    ConvexPolygon2,
    Direction,
    Point2,
    PolylineMetrics,
    boundary_circuit,
    convex_hull,
    direction_of,
    full_rotation,
    is_multiple_circuit,
    length,
    mean_abs_curvature,
    normalize,
    orient,
    polyline_metrics,
    rho,
    turn_angle,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
