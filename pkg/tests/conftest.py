"""Shared fixtures and helpers for the validation suite."""

from __future__ import annotations

import numpy as np
import pytest

from mrplate import QuadGeometry


def random_convex_quad(rng: np.random.Generator, scale: float = 1.0) -> QuadGeometry:
    """Convex counterclockwise quadrilateral: a perturbed unit square."""
    base = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    while True:
        pts = scale * (base + rng.uniform(-0.2, 0.2, size=(4, 2)))
        ok = True
        for i in range(4):
            a, b, c = pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cross <= 1e-3 * scale * scale:
                ok = False
                break
        if ok:
            return QuadGeometry(pts)


def random_parallelogram(rng: np.random.Generator, scale: float = 1.0) -> QuadGeometry:
    origin = rng.uniform(-1.0, 1.0, size=2)
    while True:
        u = rng.uniform(-1.0, 1.0, size=2)
        v = rng.uniform(-1.0, 1.0, size=2)
        if u[0] * v[1] - u[1] * v[0] > 0.2:
            break
    pts = scale * np.array([origin, origin + u, origin + u + v, origin + v])
    return QuadGeometry(pts)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)


def fd_gradient(f, x: float, y: float, step: float = 1e-6):
    """Central finite differences of a scalar function of two variables."""
    fx = (f(x + step, y) - f(x - step, y)) / (2.0 * step)
    fy = (f(x, y + step) - f(x, y - step)) / (2.0 * step)
    return fx, fy


def fd_second(f, x: float, y: float, step: float = 1e-4):
    """Central finite-difference second derivatives (fxx, fyy, fxy)."""
    fxx = (f(x + step, y) - 2.0 * f(x, y) + f(x - step, y)) / step**2
    fyy = (f(x, y + step) - 2.0 * f(x, y) + f(x, y - step)) / step**2
    fxy = (
        f(x + step, y + step)
        - f(x + step, y - step)
        - f(x - step, y + step)
        + f(x - step, y - step)
    ) / (4.0 * step**2)
    return fxx, fyy, fxy
