"""Pure-numpy cell-stiffness kernel, vectorized over cells and quadrature points."""

from __future__ import annotations

import numpy as np

from ..geometry import DegenerateGeometryError, QuadGeometry
from .prep import CellTables, cell_dof_indices


def _mapping_arrays(geom: QuadGeometry, xi: np.ndarray, eta: np.ndarray):
    xs = geom.xd(2, 1) + geom.alpha * eta
    ys = geom.yd(2, 1) + geom.beta * eta
    xe = geom.xd(4, 1) + geom.alpha * xi
    ye = geom.yd(4, 1) + geom.beta * xi
    det = xs * ye - ys * xe
    if np.any(det <= geom.det_tolerance):
        raise DegenerateGeometryError(
            "non-positive Jacobian determinant inside the element"
        )
    return xs, ys, xe, ye, det


def element_stiffness_matrix(geom: QuadGeometry, tables: CellTables, db: np.ndarray) -> np.ndarray:
    """Assemble the dense element stiffness by per-cell Gauss quadrature."""
    rl = tables.rl
    m, n = rl.m, rl.n
    nq = tables.w.size

    # Parent natural coordinates of every (cell, quadrature point) pair.
    cr = np.repeat(np.arange(m), n)
    cs = np.tile(np.arange(n), m)
    xi = (cr[:, None] + tables.u[None, :]) / m  # (C, nq)
    eta = (cs[:, None] + tables.v[None, :]) / n

    xs, ys, xe, ye, det = _mapping_arrays(geom, xi, eta)
    ap = (geom.alpha * ye - geom.beta * xe) / det
    bp = (geom.alpha * ys - geom.beta * xs) / det

    j2 = np.empty((m * n, nq, 3, 3))
    j2[..., 0, 0] = xs * xs
    j2[..., 0, 1] = ys * ys
    j2[..., 0, 2] = 2.0 * xs * ys
    j2[..., 1, 0] = xe * xe
    j2[..., 1, 1] = ye * ye
    j2[..., 1, 2] = 2.0 * xe * ye
    j2[..., 2, 0] = xs * xe
    j2[..., 2, 1] = ys * ye
    j2[..., 2, 2] = xs * ye + ys * xe

    # Natural derivatives in parent coordinates: chain factors m, n.
    du = m * tables.shp[1]  # (12, nq)
    dv = n * tables.shp[2]
    duu = m * m * tables.shp[3]
    dvv = n * n * tables.shp[4]
    duv = m * n * tables.shp[5]

    rhs = np.empty((m * n, nq, 3, 12))
    rhs[..., 0, :] = duu.T
    rhs[..., 1, :] = dvv.T
    rhs[..., 2, :] = duv.T[None] - ap[..., None] * du.T[None] + bp[..., None] * dv.T[None]

    second = np.linalg.solve(j2, rhs)  # (C, nq, 3, 12): w_xx, w_yy, w_xy
    bmat = -second
    bmat[..., 2, :] *= 2.0

    weight = tables.w[None, :] * det / (m * n)
    kcells = np.einsum("cqai,ab,cqbj,cq->cij", bmat, db, bmat, weight, optimize=True)

    kmat = np.zeros((rl.num_dofs, rl.num_dofs))
    for c in range(m * n):
        idx = cell_dof_indices(rl, int(cr[c]), int(cs[c]))
        kmat[np.ix_(idx, idx)] += kcells[c]
    return kmat


def cell_determinants(geom: QuadGeometry, tables: CellTables) -> np.ndarray:
    """(C, nq) Jacobian determinants on the quadrature grid of every cell."""
    rl = tables.rl
    m, n = rl.m, rl.n
    cr = np.repeat(np.arange(m), n)
    cs = np.tile(np.arange(n), m)
    xi = (cr[:, None] + tables.u[None, :]) / m
    eta = (cs[:, None] + tables.v[None, :]) / n
    return _mapping_arrays(geom, xi, eta)[4]
