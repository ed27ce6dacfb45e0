"""Least gradient problems with inhomogeneous anisotropic norms.

Fields are numpy arrays of shape (ny, nx) with row 0 at the bottom of the
grid; vector fields have shape (ny, nx, 2). Functions that produce reports
return them as dictionaries.
"""

import json

from . import _leastgrad as _core
from ._leastgrad import (
    DomainError,
    DomainMask,
    NumericalError,
    build_mask,
    dual_norm,
    gallery_ids,
    green_identity_residual,
    level_sets,
    phi,
    phi_perimeter,
    project_dual_ball,
    signed_distance,
)

__all__ = [
    "DomainError",
    "DomainMask",
    "NumericalError",
    "alignment_report",
    "barrier",
    "boundary_jump_report",
    "build_mask",
    "dual_norm",
    "duality_gap",
    "gallery_ids",
    "gallery_run",
    "green_identity_residual",
    "imaging",
    "level_sets",
    "phi",
    "phi_perimeter",
    "project_dual_ball",
    "signed_distance",
    "solve",
]


def solve(f, mask, **kwargs):
    """Returns (u, T, report)."""
    u, t, report = _core.solve(f, mask, **kwargs)
    return u, t, json.loads(report)


def duality_gap(u, f, T, mask, **kwargs):
    return json.loads(_core.duality_gap(u, f, T, mask, **kwargs))


def alignment_report(u, T, mask, **kwargs):
    """Returns (residual field, summary)."""
    residual, summary = _core.alignment_report(u, T, mask, **kwargs)
    return residual, json.loads(summary)


def boundary_jump_report(u, f, T, mask, **kwargs):
    return json.loads(_core.boundary_jump_report(u, f, T, mask, **kwargs))


def barrier(shape, n, **kwargs):
    return json.loads(_core.barrier(shape, n, **kwargs))


def imaging(phantom, n, **kwargs):
    """Returns (c_recovered, c_true, report)."""
    c_rec, c_true, report = _core.imaging(phantom, n, **kwargs)
    return c_rec, c_true, json.loads(report)


def gallery_run(entry_id):
    return json.loads(_core.gallery_run(entry_id))
