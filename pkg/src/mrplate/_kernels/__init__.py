"""Kernel backend selection: compiled extension when available, numpy otherwise.

Set ``MRPLATE_FORCE_BACKEND=python`` (or ``compiled``) to pin a backend;
``backend_name()`` reports which one is active.
"""

from __future__ import annotations

import os

import numpy as np

from ..geometry import QuadGeometry
from . import python_kernel
from .prep import CellTables, cell_dof_indices, cell_tables, gauss01

__all__ = [
    "CellTables",
    "cell_tables",
    "cell_dof_indices",
    "gauss01",
    "backend_name",
    "element_stiffness_matrix",
]

try:
    from . import _cell_cy
except ImportError:  # pure-Python install
    _cell_cy = None

_force = os.environ.get("MRPLATE_FORCE_BACKEND", "").lower()
if _force == "python":
    _cell_cy = None
elif _force == "compiled" and _cell_cy is None:
    raise ImportError(
        "MRPLATE_FORCE_BACKEND=compiled but the extension module is not built"
    )


def backend_name() -> str:
    return "compiled" if _cell_cy is not None else "python"


def element_stiffness_matrix(
    geom: QuadGeometry, tables: CellTables, db: np.ndarray, backend: str | None = None
) -> np.ndarray:
    """Dense element stiffness via the selected cell-quadrature kernel."""
    use = backend or backend_name()
    if use == "compiled":
        if _cell_cy is None:
            raise ValueError("compiled kernel requested but not available")
        rl = tables.rl
        kmat = np.zeros((rl.num_dofs, rl.num_dofs))
        scatter = np.empty((rl.m * rl.n, 12), dtype=np.intp)
        c = 0
        for cr in range(rl.m):
            for cs in range(rl.n):
                scatter[c] = cell_dof_indices(rl, cr, cs)
                c += 1
        x = np.ascontiguousarray(geom.corners[:, 0])
        y = np.ascontiguousarray(geom.corners[:, 1])
        _cell_cy.element_stiffness(
            x,
            y,
            rl.m,
            rl.n,
            np.ascontiguousarray(db),
            np.ascontiguousarray(tables.u),
            np.ascontiguousarray(tables.v),
            np.ascontiguousarray(tables.w),
            np.ascontiguousarray(tables.shp),
            geom.det_tolerance,
            scatter,
            kmat,
        )
        return kmat
    if use == "python":
        return python_kernel.element_stiffness_matrix(geom, tables, db)
    raise ValueError(f"unknown kernel backend {use!r}")
