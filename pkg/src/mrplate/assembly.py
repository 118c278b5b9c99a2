"""Multi-element models: splicing, transformation, constraints, solve.

Models stay dense: the benchmark problems sit well below ~1500 DOFs, so a
symmetric direct factorization beats any sparse machinery here.  Coplanar
models are built directly in global in-plane coordinates; per-element
rotations exercise the local-to-global transformation path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from scipy.spatial import cKDTree

from . import classical as cls
from .element import DEFAULT_QUAD_ORDER, Material, bending_rigidity, distributed_load, element_stiffness, lump_load
from .geometry import QuadGeometry, map_to_physical
from .shapes import DOF_NAMES, ResolutionLevel, mra_basis_row

__all__ = [
    "SpliceError",
    "SingularSystemError",
    "ConstraintError",
    "ElementDef",
    "Constraint",
    "LumpLoad",
    "PlateModel",
    "GlobalSystem",
    "ReducedSystem",
    "rotation_lambda",
    "transformation_matrix",
    "splice",
    "apply_constraints",
    "solve",
    "deflection_at",
    "strain_energy",
]


class SpliceError(ValueError):
    """Element grids cannot be merged into a consistent global model."""


class SingularSystemError(ValueError):
    """Constrained system is singular: rigid-body modes remain unconstrained."""


class ConstraintError(ValueError):
    """Constraint refers to no node, several nodes, or conflicts with another."""


@dataclass(frozen=True)
class ElementDef:
    """One element: geometry, resolution level, material, optional rotation.

    ``rotation_deg`` is the in-plane angle of the element's local axes
    relative to the global frame; corner coordinates are then understood in
    the local frame.  ``formulation`` selects the adjustable-resolution
    element ("mra") or the classical 4-node element ("classical", which
    requires a 2x2 node grid).
    """

    geometry: QuadGeometry
    rl: ResolutionLevel
    material: Material
    rotation_deg: float = 0.0
    formulation: str = "mra"

    def __post_init__(self):
        if self.formulation not in ("mra", "classical"):
            raise ValueError(f"unknown formulation {self.formulation!r}")
        if self.formulation == "classical" and (self.rl.m, self.rl.n) != (1, 1):
            raise ValueError("the classical formulation is a 2x2-node element")


@dataclass(frozen=True)
class Constraint:
    """Fix DOF components of one node, selected by global id or coordinates."""

    dofs: tuple[str, ...]
    values: tuple[float, ...]
    node: int | None = None
    at: tuple[float, float] | None = None

    def __post_init__(self):
        if (self.node is None) == (self.at is None):
            raise ValueError("give exactly one of node id or coordinates")
        if len(self.dofs) != len(self.values):
            raise ValueError("dofs and values differ in length")
        for d in self.dofs:
            if d not in DOF_NAMES:
                raise ValueError(f"unknown dof {d!r}")


@dataclass(frozen=True)
class LumpLoad:
    element: int
    point: tuple[float, float]
    p: float


@dataclass
class PlateModel:
    elements: list[ElementDef]
    constraints: list[Constraint] = field(default_factory=list)
    uniform_loads: dict[int, float] = field(default_factory=dict)
    lump_loads: list[LumpLoad] = field(default_factory=list)
    quad_order: int = DEFAULT_QUAD_ORDER


@dataclass
class GlobalSystem:
    """Assembled stiffness/load with the node map and resolved constraints."""

    model: PlateModel
    stiffness: np.ndarray
    load: np.ndarray
    node_coords: np.ndarray  # (G, 2) global frame
    element_dofs: list[np.ndarray]
    fixed_dofs: np.ndarray
    fixed_values: np.ndarray

    @property
    def num_dofs(self) -> int:
        return self.stiffness.shape[0]

    @property
    def num_nodes(self) -> int:
        return self.node_coords.shape[0]


@dataclass
class ReducedSystem:
    stiffness: np.ndarray
    rhs: np.ndarray
    free: np.ndarray
    fixed: np.ndarray
    fixed_values: np.ndarray
    full_size: int


def rotation_lambda(local_x, local_y, local_z=(0.0, 0.0, 1.0)) -> np.ndarray:
    """3x3 node block of the local-to-global transformation.

    ``local_x``/``local_y`` are the in-plane local axes expressed in global
    coordinates (2- or 3-vectors); the block maps global (w, tx, ty) to
    local ones via direction cosines.
    """
    ax = np.zeros(3)
    ay = np.zeros(3)
    az = np.asarray(local_z, dtype=float)
    ax[: len(local_x)] = local_x
    ay[: len(local_y)] = local_y
    frame = np.vstack([ax, ay, az])
    if not np.allclose(frame @ frame.T, np.eye(3), atol=1e-10):
        raise ValueError("local axes are not orthonormal")
    return np.array(
        [
            [az[2], 0.0, 0.0],
            [0.0, ax[0], ax[1]],
            [0.0, ay[0], ay[1]],
        ]
    )


def transformation_matrix(n_nodes: int, angle_deg: float) -> np.ndarray:
    """Block-diagonal T for an in-plane rotation of the local frame."""
    phi = math.radians(angle_deg)
    lam = rotation_lambda((math.cos(phi), math.sin(phi)), (-math.sin(phi), math.cos(phi)))
    return np.kron(np.eye(n_nodes), lam)


def _element_grid_coords(elem: ElementDef) -> np.ndarray:
    """(num_nodes, 2) global coordinates of the element's node grid."""
    rl = elem.rl
    pts = np.empty((rl.num_nodes, 2))
    for node in rl.nodes():
        p = rl.node_position(node.r, node.s)
        pts[rl.node_ordinal(node.r, node.s)] = map_to_physical(elem.geometry, p)
    if elem.rotation_deg:
        phi = math.radians(elem.rotation_deg)
        rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        pts = pts @ rot.T
    return pts


_EDGE_NODE_COUNT = {
    frozenset((0, 1)): lambda rl: rl.m + 1,  # eta = 0
    frozenset((1, 2)): lambda rl: rl.n + 1,  # xi = 1
    frozenset((2, 3)): lambda rl: rl.m + 1,  # eta = 1
    frozenset((3, 0)): lambda rl: rl.n + 1,  # xi = 0
}


def _check_edge_resolution(model: PlateModel, corner_coords: list[np.ndarray], tol: float):
    for i in range(len(model.elements)):
        for j in range(i + 1, len(model.elements)):
            shared_i, shared_j = [], []
            for a in range(4):
                for b in range(4):
                    if np.linalg.norm(corner_coords[i][a] - corner_coords[j][b]) <= tol:
                        shared_i.append(a)
                        shared_j.append(b)
            if len(shared_i) != 2:
                continue
            key_i = frozenset(shared_i)
            key_j = frozenset(shared_j)
            if key_i not in _EDGE_NODE_COUNT or key_j not in _EDGE_NODE_COUNT:
                continue
            ni = _EDGE_NODE_COUNT[key_i](model.elements[i].rl)
            nj = _EDGE_NODE_COUNT[key_j](model.elements[j].rl)
            if ni != nj:
                raise SpliceError(
                    f"elements {i} and {j} share an edge with {ni} vs {nj} nodes; "
                    "the resolution level along a shared edge must match"
                )


def _merge_nodes(all_coords: np.ndarray, counts: list[int], tol: float):
    tree = cKDTree(all_coords)
    parent = np.arange(len(all_coords))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    offsets = np.cumsum([0] + counts)
    owner = np.searchsorted(offsets, np.arange(len(all_coords)), side="right") - 1
    for a, b in tree.query_pairs(tol):
        if owner[a] == owner[b]:
            raise SpliceError(
                f"two distinct nodes of element {owner[a]} coincide within the "
                "splice tolerance; node coincidence is ambiguous"
            )
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(len(all_coords))])
    uniq = np.unique(roots)
    coords = np.array([all_coords[roots == r].mean(axis=0) for r in uniq])
    # Deterministic global order, independent of element input order.
    digits = max(1, int(round(-math.log10(max(tol, 1e-300)))))
    key_x = np.round(coords[:, 0], digits)
    key_y = np.round(coords[:, 1], digits)
    order = np.lexsort((key_y, key_x))
    rank = np.empty(len(uniq), dtype=int)
    rank[order] = np.arange(len(uniq))
    root_to_global = dict(zip(uniq[order].tolist(), np.arange(len(uniq)).tolist()))
    global_of = np.array([root_to_global[r] for r in roots])
    return coords[order], global_of


def _element_stiffness_local(elem: ElementDef, quad_order: int) -> np.ndarray:
    if elem.formulation == "classical":
        k = cls.classical_element_stiffness(
            elem.geometry.corners, elem.material.E, elem.material.h, elem.material.mu, quad_order
        )
        # classical corner order -> canonical grid order
        perm = _classical_perm()
        out = np.zeros_like(k)
        out[np.ix_(perm, perm)] = k
        return out
    return element_stiffness(elem.geometry, elem.rl, elem.material, quad_order).matrix


def _classical_perm() -> np.ndarray:
    # corners 1..4 sit at grid nodes (0,0), (1,0), (1,1), (0,1)
    nodes = (0, 2, 3, 1)
    return np.concatenate([np.arange(3 * g, 3 * g + 3) for g in nodes])


def _element_loads_local(model: PlateModel, index: int) -> np.ndarray:
    elem = model.elements[index]
    f = np.zeros(elem.rl.num_dofs)
    q = model.uniform_loads.get(index)
    if q is not None:
        if elem.formulation == "classical":
            perm = _classical_perm()
            fl = cls.classical_distributed_load(elem.geometry.corners, q, model.quad_order)
            f[perm] += fl
        else:
            f += distributed_load(elem.geometry, elem.rl, q, model.quad_order)
    for load in model.lump_loads:
        if load.element != index:
            continue
        if elem.formulation == "classical":
            perm = _classical_perm()
            f[perm] += cls.classical_lump_load(elem.geometry.corners, load.p, load.point)
        else:
            f += lump_load(elem.geometry, elem.rl, load.p, load.point)
    return f


def splice(model: PlateModel) -> GlobalSystem:
    """Merge coincident element nodes into shared DOFs and assemble K, f."""
    if not model.elements:
        raise SpliceError("model has no elements")
    grids = [_element_grid_coords(e) for e in model.elements]
    all_coords = np.vstack(grids)
    span = all_coords.max(axis=0) - all_coords.min(axis=0)
    tol = 1e-9 * float(np.hypot(*span))
    corner_ids = []
    for elem, grid in zip(model.elements, grids):
        rl = elem.rl
        corner_ids.append(
            grid[
                [
                    rl.node_ordinal(0, 0),
                    rl.node_ordinal(rl.m, 0),
                    rl.node_ordinal(rl.m, rl.n),
                    rl.node_ordinal(0, rl.n),
                ]
            ]
        )
    _check_edge_resolution(model, corner_ids, tol)
    coords, global_of = _merge_nodes(all_coords, [g.shape[0] for g in grids], tol)

    ndof = 3 * coords.shape[0]
    kmat = np.zeros((ndof, ndof))
    fvec = np.zeros(ndof)
    element_dofs = []
    offset = 0
    for i, elem in enumerate(model.elements):
        n_nodes = elem.rl.num_nodes
        gnodes = global_of[offset : offset + n_nodes]
        offset += n_nodes
        dofs = np.concatenate([np.arange(3 * g, 3 * g + 3) for g in gnodes])
        element_dofs.append(dofs)
        ke = _element_stiffness_local(elem, model.quad_order)
        fe = _element_loads_local(model, i)
        if elem.rotation_deg:
            t = transformation_matrix(n_nodes, elem.rotation_deg)
            ke = t.T @ ke @ t
            fe = t.T @ fe
        kmat[np.ix_(dofs, dofs)] += ke
        fvec[dofs] += fe

    fixed_dofs, fixed_values = _resolve_constraints(model, coords, tol)
    return GlobalSystem(model, kmat, fvec, coords, element_dofs, fixed_dofs, fixed_values)


def _resolve_constraints(model: PlateModel, coords: np.ndarray, tol: float):
    tree = cKDTree(coords) if len(coords) else None
    seen: dict[int, float] = {}
    for con in model.constraints:
        if con.node is not None:
            if not 0 <= con.node < len(coords):
                raise ConstraintError(f"node id {con.node} out of range")
            gid = con.node
        else:
            hits = tree.query_ball_point(con.at, tol)
            if len(hits) != 1:
                raise ConstraintError(
                    f"constraint point {con.at} matches {len(hits)} nodes"
                )
            gid = hits[0]
        for dof_name, value in zip(con.dofs, con.values):
            dof = 3 * gid + DOF_NAMES.index(dof_name)
            if dof in seen and seen[dof] != value:
                raise ConstraintError(
                    f"conflicting constraints on node {gid} dof {dof_name}"
                )
            seen[dof] = float(value)
    fixed = np.array(sorted(seen), dtype=int)
    values = np.array([seen[d] for d in fixed])
    return fixed, values


def apply_constraints(system: GlobalSystem) -> ReducedSystem:
    """Eliminate constrained DOFs, moving prescribed values to the RHS."""
    all_dofs = np.arange(system.num_dofs)
    free = np.setdiff1d(all_dofs, system.fixed_dofs)
    k_ff = system.stiffness[np.ix_(free, free)]
    rhs = system.load[free]
    if system.fixed_dofs.size and np.any(system.fixed_values):
        rhs = rhs - system.stiffness[np.ix_(free, system.fixed_dofs)] @ system.fixed_values
    return ReducedSystem(
        k_ff, rhs, free, system.fixed_dofs, system.fixed_values, system.num_dofs
    )


def solve(system: GlobalSystem) -> np.ndarray:
    """Solve for nodal displacements; returns the full DOF vector."""
    red = apply_constraints(system)
    a = np.zeros(red.full_size)
    if red.fixed.size:
        a[red.fixed] = red.fixed_values
    if red.free.size:
        try:
            factor = sla.cho_factor(red.stiffness, lower=True)
        except sla.LinAlgError as exc:
            raise SingularSystemError(
                "constrained system is not positive definite; rigid-body modes "
                "are likely unconstrained"
            ) from exc
        a[red.free] = sla.cho_solve(factor, red.rhs)
        residual = np.linalg.norm(red.stiffness @ a[red.free] - red.rhs)
        fnorm = np.linalg.norm(red.rhs)
        if fnorm > 0.0 and residual > 1e-10 * fnorm:
            raise SingularSystemError(
                f"solver residual {residual:.3e} exceeds 1e-10 of the load norm; "
                "the system is ill-conditioned"
            )
    return a


def deflection_at(system: GlobalSystem, solution: np.ndarray, element: int, p) -> float:
    """Transverse deflection of one element at natural coordinates (xi, eta)."""
    elem = system.model.elements[element]
    a_local = solution[system.element_dofs[element]]
    if elem.rotation_deg:
        t = transformation_matrix(elem.rl.num_nodes, elem.rotation_deg)
        a_local = t @ a_local
    if elem.formulation == "classical":
        row = np.zeros(12)
        row[_classical_perm()] = cls.classical_shape_table(elem.geometry.corners, *p)[:, 0]
    else:
        row = mra_basis_row(elem.geometry, elem.rl, p).value
    return float(row @ a_local)


def strain_energy(system: GlobalSystem, solution: np.ndarray) -> float:
    """Half the stiffness-weighted square of the solution."""
    return 0.5 * float(solution @ system.stiffness @ solution)
