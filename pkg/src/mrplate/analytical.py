"""Independent analytical references; no finite element code is used here.

These back the validation suite: a Navier double series for the simply
supported square plate, and the closed-form axisymmetric solution of an
annular plate clamped outside and free inside.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["navier_series_deflection", "annular_clamped_free_deflection"]


def navier_series_deflection(length: float, q: float, rigidity: float, terms: int = 60) -> float:
    """Centre deflection of a simply supported square plate, uniform load.

    ``terms`` counts the odd harmonics per direction; 25 or more converges
    the sum well below 1e-8 relative.
    """
    if terms < 1:
        raise ValueError("need at least one series term")
    total = 0.0
    for i in range(terms):
        m = 2 * i + 1
        sm = math.sin(0.5 * math.pi * m)
        for j in range(terms):
            n = 2 * j + 1
            total += sm * math.sin(0.5 * math.pi * n) / (m * n * (m * m + n * n) ** 2)
    return 16.0 * q * length**4 / (math.pi**6 * rigidity) * total


def annular_clamped_free_deflection(
    outer: float, inner: float, q: float, rigidity: float, poisson: float
) -> float:
    """Inner-edge deflection of an annular plate, outer edge clamped, inner free.

    Uses the general axisymmetric solution
    ``w = q r^4 / 64 D + c1 + c2 r^2 + c3 ln r + c4 r^2 ln r`` with the
    radial shear fixed by overall equilibrium and the remaining constants by
    the clamped edge and the moment-free inner edge.
    """
    if not 0.0 < inner < outer:
        raise ValueError("need 0 < inner radius < outer radius")
    a, b, d = outer, inner, rigidity
    # Zero shear at the free inner edge.
    c4 = -q * b * b / (8.0 * d)

    def w_parts(r):
        return np.array([1.0, r * r, math.log(r), r * r * math.log(r)])

    def dw_parts(r):
        return np.array([0.0, 2.0 * r, 1.0 / r, 2.0 * r * math.log(r) + r])

    def ddw_parts(r):
        return np.array([0.0, 2.0, -1.0 / (r * r), 2.0 * math.log(r) + 3.0])

    rows = np.array(
        [
            w_parts(a)[:3],
            dw_parts(a)[:3],
            ddw_parts(b)[:3] + (poisson / b) * dw_parts(b)[:3],
        ]
    )
    rhs = -np.array(
        [
            q * a**4 / (64.0 * d) + c4 * w_parts(a)[3],
            q * a**3 / (16.0 * d) + c4 * dw_parts(a)[3],
            (3.0 + poisson) * q * b * b / (16.0 * d)
            + c4 * (ddw_parts(b)[3] + (poisson / b) * dw_parts(b)[3]),
        ]
    )
    c1, c2, c3 = np.linalg.solve(rows, rhs)
    coeffs = np.array([c1, c2, c3, c4])
    return q * b**4 / (64.0 * d) + float(coeffs @ w_parts(b))
