"""Command-line surface.

Exit codes: 0 success, 1 a property violation was found, 2 invalid input.
Fuzz report JSON on stdout is byte-deterministic per (seed, flags); timing
goes to stderr.
"""

from __future__ import annotations

import json
import sys

import click

from .config import margin_tolerance
from .errors import BudgetExceededError, GeometryError
from .fuzz import PROPERTY_NAMES, run_fuzz
from .hyperbolic import counterexample
from .improve import improve_to_circuit
from .inequalities import dna_check
from .jsonio import load_geometry
from .planar import ClosedPolyline2, convex_hull, is_multiple_circuit, polyline_metrics
from .spherical import SphPolyline, theorem_s_check
from .svg import emit_svg


def _echo_json(data: dict) -> None:
    click.echo(json.dumps(data, sort_keys=True))


def _fail_input(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_planar(path: str) -> ClosedPolyline2:
    try:
        geom = load_geometry(path)
    except (GeometryError, OSError) as exc:
        _fail_input(str(exc))
    if not isinstance(geom, ClosedPolyline2):
        _fail_input("expected planar geometry")
    return geom


@click.group()
def main() -> None:
    """Curvature metrics, inequality checks and the improvement engine."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def metrics(file: str) -> None:
    """Metrics and inequality verdict for a planar polyline file."""
    poly = _load_planar(file)
    try:
        verdict = dna_check(poly)
    except GeometryError as exc:
        _fail_input(str(exc))
    _echo_json(verdict.to_json_dict())
    if verdict.margin < -margin_tolerance():
        sys.exit(1)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None)
@click.option("--svg", "svg_dir", type=click.Path(file_okay=False), default=None)
def improve(file: str, trace_path: str, svg_dir: str) -> None:
    """Reduce a planar polyline to a multiple circuit of its hull."""
    poly = _load_planar(file)
    try:
        before = polyline_metrics(poly)
        hull = convex_hull(poly)
        final, trace = improve_to_circuit(poly)
    except BudgetExceededError as exc:
        _fail_input(f"improvement did not terminate: {exc}")
    except GeometryError as exc:
        _fail_input(str(exc))
    after = polyline_metrics(final)
    if trace_path:
        with open(trace_path, "w", encoding="utf-8") as fh:
            fh.write(trace.to_csv())
    if svg_dir:
        emit_svg(trace, svg_dir)
    _echo_json(
        {
            "k": is_multiple_circuit(final, hull),
            "moves": len(trace),
            "T_initial": before.T,
            "T_final": after.T,
            "L_final": after.L,
            "V_final": after.V,
        }
    )


@main.command()
@click.option("--property", "property_name", required=True, type=click.Choice(PROPERTY_NAMES))
@click.option("--count", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--max-vertices", type=int, default=12, show_default=True)
def fuzz(property_name: str, count: int, seed: int, max_vertices: int) -> None:
    """Run a seeded fuzz campaign for one property."""
    if count <= 0:
        _fail_input("count must be positive")
    report = run_fuzz(property_name, count, seed, max_vertices=max_vertices)
    _echo_json(report.to_json_dict())
    click.echo(f"elapsed: {report.elapsed_s:.3f}s", err=True)
    if report.violations > 0:
        sys.exit(1)


@main.group()
def sphere() -> None:
    """Spherical checks."""


@sphere.command("check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def sphere_check(file: str) -> None:
    """Hemisphere curvature comparison for a spherical polyline file."""
    try:
        geom = load_geometry(file)
    except (GeometryError, OSError) as exc:
        _fail_input(str(exc))
    if not isinstance(geom, SphPolyline):
        _fail_input("expected spherical geometry")
    try:
        verdict = theorem_s_check(geom)
    except GeometryError as exc:
        _fail_input(str(exc))
    _echo_json(verdict.to_json_dict())
    if verdict.margin < -margin_tolerance():
        sys.exit(1)


@main.group()
def hyperbolic() -> None:
    """Constant negative curvature demos."""


@hyperbolic.command("demo")
@click.option("--t", "t", required=True, type=float)
def hyperbolic_demo(t: float) -> None:
    """Doubled-triangle construction showing the comparison can fail."""
    try:
        result = counterexample(t)
    except GeometryError as exc:
        _fail_input(str(exc))
    _echo_json(result.to_json_dict())


if __name__ == "__main__":
    main()
