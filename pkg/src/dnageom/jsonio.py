"""JSON formats for planar and spherical polylines.

Planar:    {"geometry": "planar", "vertices": [[x, y], ...]}
Spherical: {"geometry": "spherical", "vertices_xyz": [[x, y, z], ...]}

Vertices are listed in traversal order; the closing edge is implicit.
Spherical vectors are normalized on load and rejected when their norm
deviates from 1 by more than 1e-6.
"""

from __future__ import annotations

import json
from typing import Union

from .errors import InvalidInputError
from .planar import ClosedPolyline2, Point2
from .spherical import SphPoint, SphPolyline

Geometry = Union[ClosedPolyline2, SphPolyline]


def geometry_from_dict(data: dict) -> Geometry:
    kind = data.get("geometry")
    if kind == "planar":
        verts = data.get("vertices")
        if not isinstance(verts, list):
            raise InvalidInputError("planar payload needs a 'vertices' list")
        return ClosedPolyline2(tuple(Point2(float(x), float(y)) for x, y in verts))
    if kind == "spherical":
        verts = data.get("vertices_xyz")
        if not isinstance(verts, list):
            raise InvalidInputError("spherical payload needs a 'vertices_xyz' list")
        pts = tuple(SphPoint.normalized(float(x), float(y), float(z)) for x, y, z in verts)
        return SphPolyline(pts)
    raise InvalidInputError(f"unknown geometry kind {kind!r}")


def load_geometry(path: str) -> Geometry:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInputError("geometry file must hold a JSON object")
    return geometry_from_dict(data)


def planar_to_dict(p: ClosedPolyline2) -> dict:
    return {"geometry": "planar", "vertices": [[v.x, v.y] for v in p.vertices]}


def spherical_to_dict(p: SphPolyline) -> dict:
    return {
        "geometry": "spherical",
        "vertices_xyz": [[float(c) for c in v.v] for v in p.vertices],
    }


def dump_geometry(geom: Geometry, path: str) -> None:
    data = planar_to_dict(geom) if isinstance(geom, ClosedPolyline2) else spherical_to_dict(geom)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
