"""Shared precomputation for the cell-stiffness kernels.

Within one sub-cell of the natural grid, exactly the twelve shapes of the
four cell corners are nonzero, and in cell-local coordinates they are the
same polynomials for every cell.  Both kernel backends therefore consume one
table of local values/derivatives at the quadrature points, and only the
mapping Jacobian varies from point to point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..geometry import QuadGeometry
from ..shapes import ResolutionLevel, coeff_tables, shape_coeff_tensor


def gauss01(order: int):
    """Gauss-Legendre rule mapped onto [0, 1]."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    pts, wts = np.polynomial.legendre.leggauss(order)
    return 0.5 * (pts + 1.0), 0.5 * wts


@dataclass(frozen=True)
class CellTables:
    """Quadrature grid and local shape tables shared by all cells."""

    rl: ResolutionLevel
    quad_order: int
    u: np.ndarray  # (nq,) local coordinates, flattened 2-D grid
    v: np.ndarray
    w: np.ndarray  # (nq,) weights
    shp: np.ndarray  # (6, 12, nq): value, du, dv, duu, dvv, duv


def cell_tables(geom: QuadGeometry, rl: ResolutionLevel, quad_order: int) -> CellTables:
    pts, wts = gauss01(quad_order)
    u, v = np.meshgrid(pts, pts, indexing="ij")
    w = np.outer(wts, wts)
    u, v, w = u.ravel(), v.ravel(), w.ravel()
    tables = coeff_tables(shape_coeff_tensor(geom, rl))  # (6, 12, 4, 4)
    shp = np.empty((6, 12, u.size))
    for i in range(6):
        for j in range(12):
            shp[i, j] = npoly.polyval2d(u, v, tables[i, j])
    return CellTables(rl, quad_order, u, v, w, shp)


def cell_dof_indices(rl: ResolutionLevel, cr: int, cs: int) -> np.ndarray:
    """Global element DOF indices of one cell's 12 local shapes."""
    nodes = (
        rl.node_ordinal(cr, cs),
        rl.node_ordinal(cr + 1, cs),
        rl.node_ordinal(cr + 1, cs + 1),
        rl.node_ordinal(cr, cs + 1),
    )
    return np.concatenate([np.arange(3 * g, 3 * g + 3) for g in nodes])
