"""Classical 12-DOF quadrilateral bending element, kept as a self-contained path.

This module re-derives everything it needs (shape derivatives, Jacobians,
curvature transform) from scratch so it can serve as an independent check on
the adjustable-resolution element, and as the element behind monoresolution
comparison meshes.  It deliberately shares no code with the scaled/shifted
basis machinery.

DOF order per element: (w, theta_x, theta_y) at corners 1..4, with
theta_x = dw/dy and theta_y = -dw/dx at the corner.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "classical_shape_table",
    "classical_element_stiffness",
    "classical_distributed_load",
    "classical_lump_load",
]


def _blocks(t: float):
    """1-D cubic building blocks (value, first, second derivative)."""
    a = (t - 2.0 * t * t + t**3, 1.0 - 4.0 * t + 3.0 * t * t, -4.0 + 6.0 * t)  # X1^2 X2
    b = (t * t - t**3, 2.0 * t - 3.0 * t * t, 2.0 - 6.0 * t)  # X1 X2^2
    c = ((1.0 - t) ** 2, -2.0 * (1.0 - t), 2.0)  # X1^2
    d = (t * t, 2.0 * t, 2.0)  # X2^2
    e = (t - t * t, 1.0 - 2.0 * t, -2.0)  # X1 X2
    l1 = (1.0 - t, -1.0, 0.0)  # X1
    l2 = (t, 1.0, 0.0)  # X2
    return a, b, c, d, e, l1, l2


def _term(fu, gv):
    """Six-vector (value, du, dv, duu, dvv, duv) of a separable product."""
    return np.array(
        [
            fu[0] * gv[0],
            fu[1] * gv[0],
            fu[0] * gv[1],
            fu[2] * gv[0],
            fu[0] * gv[2],
            fu[1] * gv[1],
        ]
    )


def _corner_diffs(corners: np.ndarray):
    x = corners[:, 0]
    y = corners[:, 1]

    def xd(i, j):
        return x[i - 1] - x[j - 1]

    def yd(i, j):
        return y[i - 1] - y[j - 1]

    return xd, yd


def classical_shape_table(corners: np.ndarray, xi: float, eta: float) -> np.ndarray:
    """(12, 6) array of shape values and natural derivatives at (xi, eta).

    Row order is node-major triples; columns are
    (value, d_xi, d_eta, d_xixi, d_etaeta, d_xieta).
    """
    au, bu, cu, du_, eu, x1u, x2u = _blocks(xi)
    av, bv, cv, dv_, ev, y1v, y2v = _blocks(eta)
    xd, yd = _corner_diffs(corners)

    n = (
        _term(cu, cv) - _term(eu, ev) + 2.0 * _term(au, y1v) + 2.0 * _term(x1u, av),
        _term(du_, cv) - _term(eu, ev) + 2.0 * _term(bu, y1v) + 2.0 * _term(x2u, av),
        _term(du_, dv_) - _term(eu, ev) + 2.0 * _term(bu, y2v) + 2.0 * _term(x2u, bv),
        _term(cu, dv_) - _term(eu, ev) + 2.0 * _term(au, y2v) + 2.0 * _term(x1u, bv),
    )
    # Geometry-weighted pieces A_i (xi-cubic) and B_i (eta-cubic).
    piece_a = (_term(au, y1v), _term(bu, y1v), _term(bu, y2v), _term(au, y2v))
    piece_b = (_term(x1u, av), _term(x2u, av), _term(x2u, bv), _term(x1u, bv))
    nx = (
        yd(2, 1) * piece_a[0] + yd(4, 1) * piece_b[0],
        -yd(2, 1) * piece_a[1] + yd(3, 2) * piece_b[1],
        -yd(3, 4) * piece_a[2] - yd(3, 2) * piece_b[2],
        yd(3, 4) * piece_a[3] - yd(4, 1) * piece_b[3],
    )
    ny = (
        -xd(2, 1) * piece_a[0] - xd(4, 1) * piece_b[0],
        xd(2, 1) * piece_a[1] - xd(3, 2) * piece_b[1],
        xd(3, 4) * piece_a[2] + xd(3, 2) * piece_b[2],
        -xd(3, 4) * piece_a[3] + xd(4, 1) * piece_b[3],
    )
    rows = []
    for i in range(4):
        rows += [n[i], nx[i], ny[i]]
    return np.array(rows)


def _gauss01(order: int):
    pts, wts = np.polynomial.legendre.leggauss(order)
    return 0.5 * (pts + 1.0), 0.5 * wts


def _mapping_derivs(corners: np.ndarray, xi: float, eta: float):
    xd, yd = _corner_diffs(corners)
    alpha = corners[0, 0] - corners[1, 0] + corners[2, 0] - corners[3, 0]
    beta = corners[0, 1] - corners[1, 1] + corners[2, 1] - corners[3, 1]
    xs = xd(2, 1) + alpha * eta
    ys = yd(2, 1) + beta * eta
    xe = xd(4, 1) + alpha * xi
    ye = yd(4, 1) + beta * xi
    det = xs * ye - ys * xe
    return xs, ys, xe, ye, det, alpha, beta


def _curvature_matrix(corners: np.ndarray, xi: float, eta: float) -> np.ndarray:
    """(3, 12) matrix of -(w_xx, w_yy, 2 w_xy) per shape column."""
    table = classical_shape_table(corners, xi, eta)
    xs, ys, xe, ye, det, alpha, beta = _mapping_derivs(corners, xi, eta)
    j2 = np.array(
        [
            [xs * xs, ys * ys, 2.0 * xs * ys],
            [xe * xe, ye * ye, 2.0 * xe * ye],
            [xs * xe, ys * ye, xs * ye + ys * xe],
        ]
    )
    ap = (alpha * ye - beta * xe) / det
    bp = (alpha * ys - beta * xs) / det
    rhs = np.vstack(
        [
            table[:, 3],
            table[:, 4],
            table[:, 5] - ap * table[:, 1] + bp * table[:, 2],
        ]
    )
    second = np.linalg.solve(j2, rhs)  # rows: w_xx, w_yy, w_xy
    bmat = -second
    bmat[2] *= 2.0
    return bmat


def classical_element_stiffness(
    corners, e_modulus: float, thickness: float, poisson: float, quad_order: int = 4
) -> np.ndarray:
    """12x12 bending stiffness of the classical 4-node element."""
    corners = np.asarray(corners, dtype=float)
    cb = e_modulus * thickness**3 / (12.0 * (1.0 - poisson**2))
    db = cb * np.array(
        [[1.0, poisson, 0.0], [poisson, 1.0, 0.0], [0.0, 0.0, 0.5 * (1.0 - poisson)]]
    )
    pts, wts = _gauss01(quad_order)
    kmat = np.zeros((12, 12))
    for xi, wx in zip(pts, wts):
        for eta, wy in zip(pts, wts):
            det = _mapping_derivs(corners, xi, eta)[4]
            bmat = _curvature_matrix(corners, xi, eta)
            kmat += (wx * wy * det) * (bmat.T @ db @ bmat)
    return kmat


def classical_distributed_load(corners, q: float, quad_order: int = 4) -> np.ndarray:
    """Consistent nodal loads of a uniform pressure on one classical element."""
    corners = np.asarray(corners, dtype=float)
    pts, wts = _gauss01(quad_order)
    f = np.zeros(12)
    for xi, wx in zip(pts, wts):
        for eta, wy in zip(pts, wts):
            det = _mapping_derivs(corners, xi, eta)[4]
            f += (wx * wy * det * q) * classical_shape_table(corners, xi, eta)[:, 0]
    return f


def classical_lump_load(corners, p_force: float, point) -> np.ndarray:
    """Nodal loads of a point force applied at natural coordinates (xi, eta)."""
    corners = np.asarray(corners, dtype=float)
    xi, eta = point
    return p_force * classical_shape_table(corners, xi, eta)[:, 0]
