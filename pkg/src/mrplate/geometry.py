"""Bilinear isoparametric mapping between the unit square and a quadrilateral.

The natural domain is [0, 1]^2.  The mapping is bilinear, so its only
nonzero second derivative is the mixed one, equal to the corner-sum
constants (alpha, beta).  That makes the chain rule for second derivatives
exact and cheap; :func:`cartesian_second` implements it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateGeometryError",
    "QuadGeometry",
    "map_to_physical",
    "jacobian_first",
    "jacobian_second",
    "cartesian_first",
    "cartesian_second",
]


class DegenerateGeometryError(ValueError):
    """Quadrilateral is collapsed, folded or numbered clockwise."""


@dataclass(frozen=True)
class QuadGeometry:
    """Straight-sided quadrilateral given by its four corners, counterclockwise.

    Corner-difference constants ``x_ij = x_i - x_j`` (one-based labels) enter
    the rotational shape functions; ``alpha``/``beta`` are the twist constants
    of the bilinear mapping.
    """

    corners: np.ndarray

    def __post_init__(self):
        c = np.array(self.corners, dtype=float)
        if c.shape != (4, 2):
            raise ValueError("expected an array of 4 planar corner points")
        for i in range(4):
            for j in range(i + 1, 4):
                if np.array_equal(c[i], c[j]):
                    raise DegenerateGeometryError(
                        f"corners {i + 1} and {j + 1} coincide"
                    )
        c.setflags(write=False)
        object.__setattr__(self, "corners", c)

    @property
    def x(self) -> np.ndarray:
        return self.corners[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.corners[:, 1]

    def xd(self, i: int, j: int) -> float:
        """x_i - x_j with one-based corner labels."""
        return float(self.corners[i - 1, 0] - self.corners[j - 1, 0])

    def yd(self, i: int, j: int) -> float:
        """y_i - y_j with one-based corner labels."""
        return float(self.corners[i - 1, 1] - self.corners[j - 1, 1])

    @property
    def alpha(self) -> float:
        x = self.x
        return float(x[0] - x[1] + x[2] - x[3])

    @property
    def beta(self) -> float:
        y = self.y
        return float(y[0] - y[1] + y[2] - y[3])

    @property
    def scale(self) -> float:
        """Bounding-box diagonal; the reference length for tolerances."""
        span = self.corners.max(axis=0) - self.corners.min(axis=0)
        return float(np.hypot(*span))

    @property
    def det_tolerance(self) -> float:
        # 1e-12 x squared model scale keeps the degeneracy guard unit-free.
        return 1e-12 * self.scale**2

    def is_parallelogram(self, rtol: float = 1e-12) -> bool:
        return abs(self.alpha) <= rtol * self.scale and abs(self.beta) <= rtol * self.scale

    def translated(self, dx: float, dy: float) -> "QuadGeometry":
        return QuadGeometry(self.corners + np.array([dx, dy]))


def map_to_physical(geom: QuadGeometry, p) -> np.ndarray:
    """Map natural coordinates (xi, eta) in [0,1]^2 to the physical plane."""
    xi, eta = p
    x = geom.x
    y = geom.y
    px = x[0] + geom.xd(2, 1) * xi + geom.xd(4, 1) * eta + geom.alpha * xi * eta
    py = y[0] + geom.yd(2, 1) * xi + geom.yd(4, 1) * eta + geom.beta * xi * eta
    return np.array([px, py])


def jacobian_first(geom: QuadGeometry, p, check: bool = True):
    """First-order Jacobian of the bilinear mapping and its determinant.

    Rows are (d/dxi, d/deta) of (x, y).  Raises
    :class:`DegenerateGeometryError` when the determinant drops below the
    scale-invariant tolerance (set ``check=False`` to skip the guard).
    """
    xi, eta = p
    j = np.array(
        [
            [geom.xd(2, 1) + geom.alpha * eta, geom.yd(2, 1) + geom.beta * eta],
            [geom.xd(4, 1) + geom.alpha * xi, geom.yd(4, 1) + geom.beta * xi],
        ]
    )
    det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
    if check and det <= geom.det_tolerance:
        raise DegenerateGeometryError(
            f"Jacobian determinant {det:.3e} at (xi, eta)=({xi}, {eta}) is not "
            "positive; quadrilateral is degenerate or numbered clockwise"
        )
    return j, float(det)


def jacobian_second(geom: QuadGeometry, p):
    """Second-order Jacobian (3x3) plus the first-derivative correction scalars.

    Returns ``(J2, alpha_p, beta_p)``.  The natural second derivatives of a
    field relate to Cartesian ones through ``J2`` and a correction
    ``-alpha_p * w_xi + beta_p * w_eta`` on the mixed component.
    """
    j1, det = jacobian_first(geom, p)
    xs, ys = j1[0]
    xe, ye = j1[1]
    j2 = np.array(
        [
            [xs * xs, ys * ys, 2.0 * xs * ys],
            [xe * xe, ye * ye, 2.0 * xe * ye],
            [xs * xe, ys * ye, xs * ye + ys * xe],
        ]
    )
    alpha_p = (geom.alpha * ye - geom.beta * xe) / det
    beta_p = (geom.alpha * ys - geom.beta * xs) / det
    return j2, float(alpha_p), float(beta_p)


def cartesian_first(geom: QuadGeometry, p, d_xi, d_eta):
    """Convert natural first derivatives to Cartesian (w_x, w_y).

    ``d_xi``/``d_eta`` may be scalars or equally shaped arrays.
    """
    j1, det = jacobian_first(geom, p)
    w_x = (j1[1, 1] * np.asarray(d_xi) - j1[0, 1] * np.asarray(d_eta)) / det
    w_y = (-j1[1, 0] * np.asarray(d_xi) + j1[0, 0] * np.asarray(d_eta)) / det
    return w_x, w_y


def cartesian_second(geom: QuadGeometry, p, d1, d2):
    """Convert natural derivatives to Cartesian second derivatives.

    ``d1`` stacks (w_xi, w_eta) and ``d2`` stacks (w_xixi, w_etaeta, w_xieta)
    along their first axis; trailing axes are carried through.  Returns the
    stack (w_xx, w_yy, w_xy).
    """
    j2, alpha_p, beta_p = jacobian_second(geom, p)
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    rhs = np.array(
        [d2[0], d2[1], d2[2] - alpha_p * d1[0] + beta_p * d1[1]]
    )
    flat = rhs.reshape(3, -1)
    sol = np.linalg.solve(j2, flat)
    return sol.reshape(d2.shape)
