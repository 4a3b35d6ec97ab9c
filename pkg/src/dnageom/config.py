"""Tolerance and reproducibility knobs shared across the package.

All geometric tolerances are relative to the instance scale unless noted.
``DNA_EPS`` (environment variable, testing only) overrides the margin
tolerance used when classifying inequality verdicts.
"""

from __future__ import annotations

import os

# Vertex coincidence / boundary contact, relative to instance span.
EPS_POINT = 1e-9

# Turn angles below this (radians) count as collinear and are removed.
EPS_COLLINEAR = 1e-12

# Orientation predicate: |twice area| below EPS_AREA * span^2 counts as zero.
EPS_AREA = 1e-12

# Minimum witness clearance for "lies in an open hemisphere".
HEMISPHERE_MARGIN = 1e-6

# Counter-based generator used for every seeded stream; pinned so reports
# are reproducible across machines.
RNG_ALGORITHM = "philox"

_DEFAULT_MARGIN_TOL = 1e-9


def margin_tolerance() -> float:
    """Signed-margin tolerance for verdicts; DNA_EPS overrides (testing only)."""
    raw = os.environ.get("DNA_EPS")
    if raw is None:
        return _DEFAULT_MARGIN_TOL
    return float(raw)
