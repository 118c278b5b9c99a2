"""Shape functions of the adjustable-resolution quadrilateral bending element.

Three layers build on each other:

* the twelve classical bending shapes of the 4-node element (values and
  natural derivatives to second order, exact polynomials);
* the basic node shape triple (phi1, phi2, phi3) obtained by extending the
  node-1 shapes to [-1, 1]^2 quadrant by quadrant;
* the scaled/shifted triples that populate an element at resolution level
  (m+1) x (n+1), with the 1/n and 1/m rotation scalings and the m, n chain
  factors on natural derivatives.

All polynomials are held as 2-D coefficient arrays (degree <= 3 per
variable) so derivatives are exact coefficient shifts, never finite
differences.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import reduce

import numpy as np
from numpy.polynomial import polynomial as npoly

from .geometry import QuadGeometry

__all__ = [
    "ShapeEval",
    "ResolutionLevel",
    "NodeIndex",
    "BasisRows",
    "bilinear_shapes",
    "classical_shapes",
    "basic_node_shapes",
    "mra_node_shapes",
    "mra_basis_row",
    "shape_coeff_tensor",
    "write_basic_shape_samples",
]

DOF_NAMES = ("w", "theta_x", "theta_y")


@dataclass(frozen=True)
class ShapeEval:
    """Value and natural-coordinate partials up to second order."""

    value: float
    d_xi: float
    d_eta: float
    d_xixi: float
    d_etaeta: float
    d_xieta: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.value, self.d_xi, self.d_eta, self.d_xixi, self.d_etaeta, self.d_xieta]
        )


@dataclass(frozen=True)
class ResolutionLevel:
    """Scaling parameters (m, n); the node grid is (m+1) x (n+1)."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("scaling parameters m, n must be >= 1")

    @classmethod
    def from_node_counts(cls, nodes_xi: int, nodes_eta: int) -> "ResolutionLevel":
        """Build from node counts, e.g. (9, 9) -> m = n = 8."""
        return cls(nodes_xi - 1, nodes_eta - 1)

    @classmethod
    def parse(cls, text: str) -> "ResolutionLevel":
        """Parse a node-count spec such as '9x9'."""
        try:
            a, b = (int(t) for t in text.lower().split("x"))
        except ValueError as exc:
            raise ValueError(f"cannot parse resolution level {text!r}") from exc
        if a < 2 or b < 2:
            raise ValueError("resolution level needs at least 2 nodes per direction")
        return cls.from_node_counts(a, b)

    @property
    def node_counts(self) -> tuple[int, int]:
        return (self.m + 1, self.n + 1)

    @property
    def num_nodes(self) -> int:
        return (self.m + 1) * (self.n + 1)

    @property
    def num_dofs(self) -> int:
        return 3 * self.num_nodes

    def node_ordinal(self, r: int, s: int) -> int:
        """Canonical node numbering: s fastest, r slower."""
        if not (0 <= r <= self.m and 0 <= s <= self.n):
            raise ValueError(f"node ({r}, {s}) outside grid of {self}")
        return r * (self.n + 1) + s

    def node_position(self, r: int, s: int) -> tuple[float, float]:
        return (r / self.m, s / self.n)

    def nodes(self):
        for r in range(self.m + 1):
            for s in range(self.n + 1):
                yield NodeIndex(r, s)

    def __str__(self):
        return f"{self.m + 1}x{self.n + 1}"


@dataclass(frozen=True)
class NodeIndex:
    """Grid position parameters (r, s) of a node at (r/m, s/n)."""

    r: int
    s: int


# --- polynomial tables -----------------------------------------------------
#
# All twelve classical shapes are sums of separable terms built from the
# linear factors X1 = 1 - xi, X2 = xi (and the same in eta).

_L1 = np.array([1.0, -1.0])  # X1
_L2 = np.array([0.0, 1.0])  # X2


def _sep(ufactors, vfactors) -> np.ndarray:
    cu = reduce(npoly.polymul, ufactors)
    cv = reduce(npoly.polymul, vfactors)
    out = np.zeros((4, 4))
    out[: len(cu), : len(cv)] = np.outer(cu, cv)
    return out


# Transverse shapes N_i, Eq.-(5) pattern: X_a Y_b (X_a Y_b - X_c Y_d + 2 X1X2 + 2 Y1Y2)
_N_POLY = (
    _sep([_L1, _L1], [_L1, _L1]) - _sep([_L1, _L2], [_L1, _L2])
    + 2 * _sep([_L1, _L1, _L2], [_L1]) + 2 * _sep([_L1], [_L1, _L1, _L2]),
    _sep([_L2, _L2], [_L1, _L1]) - _sep([_L1, _L2], [_L1, _L2])
    + 2 * _sep([_L1, _L2, _L2], [_L1]) + 2 * _sep([_L2], [_L1, _L1, _L2]),
    _sep([_L2, _L2], [_L2, _L2]) - _sep([_L1, _L2], [_L1, _L2])
    + 2 * _sep([_L1, _L2, _L2], [_L2]) + 2 * _sep([_L2], [_L1, _L2, _L2]),
    _sep([_L1, _L1], [_L2, _L2]) - _sep([_L1, _L2], [_L1, _L2])
    + 2 * _sep([_L1, _L1, _L2], [_L2]) + 2 * _sep([_L1], [_L1, _L2, _L2]),
)

# Geometry-weighted pieces of the rotational shapes.
_A_POLY = (
    _sep([_L1, _L1, _L2], [_L1]),  # X1^2 X2 Y1
    _sep([_L1, _L2, _L2], [_L1]),  # X1 X2^2 Y1
    _sep([_L1, _L2, _L2], [_L2]),  # X1 X2^2 Y2
    _sep([_L1, _L1, _L2], [_L2]),  # X1^2 X2 Y2
)
_B_POLY = (
    _sep([_L1], [_L1, _L1, _L2]),  # X1 Y1^2 Y2
    _sep([_L2], [_L1, _L1, _L2]),  # X2 Y1^2 Y2
    _sep([_L2], [_L1, _L2, _L2]),  # X2 Y1 Y2^2
    _sep([_L1], [_L1, _L2, _L2]),  # X1 Y1 Y2^2
)

# Per family: corner-difference labels and signs of the A/B pieces in the
# theta_x shape; the theta_y shape uses the x-differences with flipped signs.
_ROT_TABLE = (
    ((2, 1), (4, 1), +1.0, +1.0),
    ((2, 1), (3, 2), -1.0, +1.0),
    ((3, 4), (3, 2), -1.0, -1.0),
    ((3, 4), (4, 1), +1.0, -1.0),
)


def family_coeffs(geom: QuadGeometry, family: int, theta_scale=(1.0, 1.0)) -> np.ndarray:
    """(3, 4, 4) polynomial coefficients of one node family's (w, tx, ty) triple."""
    (ia, ib, sa, sb) = _ROT_TABLE[family]
    a_poly, b_poly = _A_POLY[family], _B_POLY[family]
    nx = sa * geom.yd(*ia) * a_poly + sb * geom.yd(*ib) * b_poly
    ny = -(sa * geom.xd(*ia) * a_poly + sb * geom.xd(*ib) * b_poly)
    return np.stack([_N_POLY[family], nx * theta_scale[0], ny * theta_scale[1]])


def shape_coeff_tensor(geom: QuadGeometry, rl: ResolutionLevel) -> np.ndarray:
    """(12, 4, 4) cell-local shape coefficients for one sub-cell of an element.

    Families 1..4 sit at the cell corners (lower-left, lower-right,
    upper-right, upper-left); each contributes its (w, tx, ty) triple with
    the parent geometry's corner differences and the 1/n, 1/m scalings.
    """
    scale = (1.0 / rl.n, 1.0 / rl.m)
    return np.concatenate([family_coeffs(geom, fam, scale) for fam in range(4)])


def _polyder2(c: np.ndarray, du: int, dv: int) -> np.ndarray:
    out = c
    if du:
        out = npoly.polyder(out, m=du, axis=0)
    if dv:
        out = npoly.polyder(out, m=dv, axis=1)
    return out


_DERIV_ORDERS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1))


def eval_shape(c: np.ndarray, u, v) -> ShapeEval:
    """Evaluate one coefficient array and its five partials at (u, v)."""
    vals = [float(npoly.polyval2d(u, v, _polyder2(c, du, dv))) for du, dv in _DERIV_ORDERS]
    return ShapeEval(*vals)


def coeff_tables(coeffs: np.ndarray) -> np.ndarray:
    """Stack (6, k, 4, 4): value plus derivative coefficients for k shapes."""
    return np.stack(
        [np.stack([_pad4(_polyder2(c, du, dv)) for c in coeffs]) for du, dv in _DERIV_ORDERS]
    )


def _pad4(c: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4))
    out[: c.shape[0], : c.shape[1]] = c
    return out


# --- spec operations -------------------------------------------------------


def bilinear_shapes(p) -> np.ndarray:
    """The four bilinear mapping shapes on [0,1]^2; they sum to one."""
    xi, eta = p
    return np.array(
        [
            (1.0 - xi) * (1.0 - eta),
            xi * (1.0 - eta),
            xi * eta,
            (1.0 - xi) * eta,
        ]
    )


def classical_shapes(geom: QuadGeometry, p) -> list[ShapeEval]:
    """The twelve classical bending shapes, node-major (w, tx, ty) triples."""
    xi, eta = p
    out = []
    for fam in range(4):
        for c in family_coeffs(geom, fam):
            out.append(eval_shape(c, xi, eta))
    return out


_ZERO = ShapeEval(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def basic_node_shapes(geom: QuadGeometry, p) -> tuple[ShapeEval, ShapeEval, ShapeEval]:
    """The basic node triple (phi1, phi2, phi3) on [-1, 1]^2, zero outside.

    Each quadrant hosts the shifted shapes of the classical node facing the
    basic node, so the triple has compact support over the node's 2x2 cell
    neighbourhood and is continuous across the quadrant seams.
    """
    t1, t2 = p
    if not (-1.0 <= t1 <= 1.0 and -1.0 <= t2 <= 1.0):
        return (_ZERO, _ZERO, _ZERO)
    if t1 >= 0.0 and t2 >= 0.0:
        fam, u, v = 0, t1, t2
    elif t1 < 0.0 and t2 >= 0.0:
        fam, u, v = 1, 1.0 + t1, t2
    elif t1 < 0.0 and t2 < 0.0:
        fam, u, v = 2, 1.0 + t1, 1.0 + t2
    else:
        fam, u, v = 3, t1, 1.0 + t2
    # The unit shifts leave derivatives unchanged.
    return tuple(eval_shape(c, u, v) for c in family_coeffs(geom, fam))


def _scaled(se: ShapeEval, amp: float, m: int, n: int) -> ShapeEval:
    return ShapeEval(
        amp * se.value,
        amp * m * se.d_xi,
        amp * n * se.d_eta,
        amp * m * m * se.d_xixi,
        amp * n * n * se.d_etaeta,
        amp * m * n * se.d_xieta,
    )


def mra_node_shapes(
    geom: QuadGeometry, rl: ResolutionLevel, node: NodeIndex, p
) -> tuple[ShapeEval, ShapeEval, ShapeEval]:
    """Scaled/shifted triple of one node at (r/m, s/n), natural derivatives.

    Evaluates the basic triple at (m xi - r, n eta - s), scales the rotation
    components by 1/n and 1/m, and applies the m, n chain factors to the
    derivatives so they are taken with respect to the element coordinates.
    """
    xi, eta = p
    m, n = rl.m, rl.n
    t = (m * xi - node.r, n * eta - node.s)
    if not (-1.0 <= t[0] <= 1.0 and -1.0 <= t[1] <= 1.0):
        return (_ZERO, _ZERO, _ZERO)
    base = basic_node_shapes(geom, t)
    amps = (1.0, 1.0 / n, 1.0 / m)
    return tuple(_scaled(se, amp, m, n) for se, amp in zip(base, amps))


@dataclass(frozen=True)
class BasisRows:
    """Rows of the element basis evaluated at one point, canonical DOF order."""

    value: np.ndarray
    d_xi: np.ndarray
    d_eta: np.ndarray
    d_xixi: np.ndarray
    d_etaeta: np.ndarray
    d_xieta: np.ndarray


def mra_basis_row(geom: QuadGeometry, rl: ResolutionLevel, p) -> BasisRows:
    """All node triples concatenated: 3 (m+1)(n+1) entries per row."""
    rows = np.zeros((6, rl.num_dofs))
    for node in rl.nodes():
        triple = mra_node_shapes(geom, rl, node, p)
        base = 3 * rl.node_ordinal(node.r, node.s)
        for k, se in enumerate(triple):
            rows[:, base + k] = se.as_array()
    return BasisRows(*rows)


def write_basic_shape_samples(geom: QuadGeometry, k: int, path) -> None:
    """Sample (phi1, phi2, phi3) on a k x k lattice over [-1, 1]^2 to CSV."""
    grid = np.linspace(-1.0, 1.0, k)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["xi", "eta", "phi1", "phi2", "phi3"])
        for t2 in grid:
            for t1 in grid:
                triple = basic_node_shapes(geom, (t1, t2))
                writer.writerow(
                    [f"{t1:.12g}", f"{t2:.12g}"] + [f"{se.value:.12g}" for se in triple]
                )
