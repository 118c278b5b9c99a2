"""Element-level mechanics: stiffness, loads, and the cell-quadrature rules.

Quadrature is always performed cell by cell on the m x n sub-grid; the shape
functions have derivative kinks across cell seams, so one rule spanning
several cells would lose the polynomial exactness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import QuadGeometry, cartesian_second, jacobian_first
from .shapes import NodeIndex, ResolutionLevel, mra_basis_row, mra_node_shapes

__all__ = [
    "DEFAULT_QUAD_ORDER",
    "Material",
    "ElementStiffness",
    "bending_rigidity",
    "strain_block",
    "node_coupling_stiffness",
    "element_stiffness",
    "distributed_load",
    "lump_load",
    "appendix_cell_loads",
]

DEFAULT_QUAD_ORDER = 4


@dataclass(frozen=True)
class Material:
    """Isotropic plate material: Young modulus, thickness, Poisson ratio."""

    E: float
    h: float
    mu: float

    def __post_init__(self):
        if self.E <= 0.0:
            raise ValueError("Young modulus must be positive")
        if self.h <= 0.0:
            raise ValueError("thickness must be positive")
        if not 0.0 <= self.mu < 0.5:
            raise ValueError("Poisson ratio must lie in [0, 0.5)")

    @property
    def rigidity(self) -> float:
        """Flexural rigidity E h^3 / (12 (1 - mu^2))."""
        return self.E * self.h**3 / (12.0 * (1.0 - self.mu**2))


def bending_rigidity(mat: Material):
    """Bending rigidity matrix D_b and its scalar factor C_b."""
    cb = mat.rigidity
    db = cb * np.array(
        [[1.0, mat.mu, 0.0], [mat.mu, 1.0, 0.0], [0.0, 0.0, 0.5 * (1.0 - mat.mu)]]
    )
    return db, cb


@dataclass(frozen=True)
class ElementStiffness:
    """Dense symmetric element stiffness with addressable 3x3 node blocks."""

    matrix: np.ndarray
    rl: ResolutionLevel

    def block(self, cd: NodeIndex, rs: NodeIndex) -> np.ndarray:
        i = 3 * self.rl.node_ordinal(cd.r, cd.s)
        j = 3 * self.rl.node_ordinal(rs.r, rs.s)
        return self.matrix[i : i + 3, j : j + 3]


def strain_block(
    geom: QuadGeometry, rl: ResolutionLevel, node: NodeIndex, p
) -> np.ndarray:
    """3x3 curvature-displacement block of one node's triple at (xi, eta).

    Columns hold -(w_xx, w_yy, 2 w_xy) of the node's (w, tx, ty) shapes.
    """
    triple = mra_node_shapes(geom, rl, node, p)
    if all(se.value == 0.0 and se.d_xixi == 0.0 and se.d_etaeta == 0.0 for se in triple):
        xi, eta = p
        if abs(rl.m * xi - node.r) > 1.0 or abs(rl.n * eta - node.s) > 1.0:
            return np.zeros((3, 3))
    d1 = np.array([[se.d_xi for se in triple], [se.d_eta for se in triple]])
    d2 = np.array(
        [
            [se.d_xixi for se in triple],
            [se.d_etaeta for se in triple],
            [se.d_xieta for se in triple],
        ]
    )
    second = cartesian_second(geom, p, d1, d2)
    b = -second
    b[2] *= 2.0
    return b


def _support_cells(rl: ResolutionLevel, node: NodeIndex):
    for cr in (node.r - 1, node.r):
        if 0 <= cr < rl.m:
            for cs in (node.s - 1, node.s):
                if 0 <= cs < rl.n:
                    yield cr, cs


def node_coupling_stiffness(
    geom: QuadGeometry,
    rl: ResolutionLevel,
    mat: Material,
    cd: NodeIndex,
    rs: NodeIndex,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> np.ndarray:
    """3x3 stiffness coupling two node triples.

    Integrates B_cd^T D_b B_rs over the intersection of the two supports,
    cell by cell.  Blocks beyond adjacent nodes are exact zeros and no
    quadrature is performed for them.
    """
    if abs(cd.r - rs.r) > 1 or abs(cd.s - rs.s) > 1:
        return np.zeros((3, 3))
    db, _ = bending_rigidity(mat)
    pts, wts = _kernels.gauss01(quad_order)
    shared = set(_support_cells(rl, cd)) & set(_support_cells(rl, rs))
    out = np.zeros((3, 3))
    for cr, cs in sorted(shared):
        for u, wu in zip(pts, wts):
            for v, wv in zip(pts, wts):
                p = ((cr + u) / rl.m, (cs + v) / rl.n)
                _, det = jacobian_first(geom, p)
                bc = strain_block(geom, rl, cd, p)
                br = strain_block(geom, rl, rs, p)
                out += (wu * wv * det / (rl.m * rl.n)) * (bc.T @ db @ br)
    return out


def element_stiffness(
    geom: QuadGeometry,
    rl: ResolutionLevel,
    mat: Material,
    quad_order: int = DEFAULT_QUAD_ORDER,
    backend: str | None = None,
) -> ElementStiffness:
    """Element stiffness at the requested resolution level."""
    db, _ = bending_rigidity(mat)
    tables = _kernels.cell_tables(geom, rl, quad_order)
    kmat = _kernels.element_stiffness_matrix(geom, tables, db, backend=backend)
    return ElementStiffness(kmat, rl)


def distributed_load(
    geom: QuadGeometry,
    rl: ResolutionLevel,
    q,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> np.ndarray:
    """Consistent load vector of a transverse pressure.

    ``q`` is a scalar or an (m, n) array of per-cell values.
    """
    q = np.broadcast_to(np.asarray(q, dtype=float), (rl.m, rl.n))
    tables = _kernels.cell_tables(geom, rl, quad_order)
    dets = _kernels.python_kernel.cell_determinants(geom, tables)  # (C, nq)
    values = tables.shp[0]  # (12, nq)
    f = np.zeros(rl.num_dofs)
    c = 0
    for cr in range(rl.m):
        for cs in range(rl.n):
            weight = tables.w * dets[c] / (rl.m * rl.n)
            fcell = q[cr, cs] * values @ weight
            f[_kernels.cell_dof_indices(rl, cr, cs)] += fcell
            c += 1
    return f


def lump_load(geom: QuadGeometry, rl: ResolutionLevel, p_force: float, p) -> np.ndarray:
    """Load vector of a point force at natural coordinates (xi, eta)."""
    return p_force * mra_basis_row(geom, rl, p).value


# Entries of the printed closed-form cell load vectors, kept verbatim for
# cross-checking against quadrature; see tests for the misprint list.


def appendix_cell_loads(cell: QuadGeometry, q0: float | None = None, p_force: float | None = None):
    """Closed-form equivalent node loads of one 4-node cell, as printed.

    Exactly one of ``q0`` (uniform pressure) or ``p_force`` (centre point
    force) must be given.  These formulas are a cross-check only; quadrature
    is the production path.
    """
    if (q0 is None) == (p_force is None):
        raise ValueError("give exactly one of q0 or p_force")
    xd, yd = cell.xd, cell.yd
    if p_force is not None:
        return p_force * np.array(
            [
                0.25, (yd(2, 1) + yd(4, 1)) / 16.0, (-xd(2, 1) - xd(4, 1)) / 16.0,
                0.25, (-yd(2, 1) + yd(3, 2)) / 16.0, (xd(2, 1) - xd(3, 2)) / 16.0,
                0.25, (yd(3, 4) - yd(4, 1)) / 16.0, (-xd(3, 4) + xd(4, 1)) / 16.0,
                0.25, (-yd(3, 4) - yd(3, 2)) / 16.0, (xd(3, 4) + xd(3, 2)) / 16.0,
            ]
        )
    a = (xd(3, 4) * yd(2, 1) - xd(2, 1) * yd(3, 4)) / 4.0
    b = (xd(3, 2) * yd(4, 1) - xd(4, 1) * yd(3, 2)) / 4.0
    c = (xd(3, 1) * yd(4, 2) - xd(4, 2) * yd(3, 1)) / 4.0
    z1 = 36 * a - 36 * b + 180 * c
    tx1 = yd(2, 1) * (3 * a - 5 * b - 30 * c) + yd(4, 1) * (5 * a - 3 * b - 30 * c)
    ty1 = -xd(2, 1) * (3 * a - 5 * b - 30 * c) - xd(4, 1) * (5 * a - 3 * b - 30 * c)
    z2 = -36 * a - 36 * b + 180 * c
    tx2 = yd(2, 1) * (3 * a + 5 * b - 30 * c) - yd(3, 2) * (5 * a + 3 * b - 30 * c)
    ty2 = -xd(2, 1) * (3 * a + 5 * b - 30 * c) - xd(3, 2) * (5 * a + 3 * b - 30 * c)
    z3 = -36 * a + 36 * b + 180 * c
    tx3 = -yd(3, 4) * (3 * a - 5 * b - 30 * c) + yd(3, 2) * (5 * a - 3 * b - 30 * c)
    ty3 = -xd(3, 4) * (3 * a - 5 * b - 30 * c) - xd(3, 2) * (5 * a - 3 * b - 30 * c)
    z4 = -36 * a + 36 * b + 180 * c
    tx4 = -yd(3, 4) * (3 * a + 5 * b + 30 * c) - yd(4, 1) * (5 * a + 3 * b + 30 * c)
    ty4 = yd(3, 4) * (3 * a - 5 * b - 30 * c) + yd(3, 2) * (5 * a - 3 * b - 30 * c)
    return (q0 / 180.0) * np.array(
        [z1, tx1, ty1, z2, tx2, ty2, z3, tx3, ty3, z4, tx4, ty4]
    )
