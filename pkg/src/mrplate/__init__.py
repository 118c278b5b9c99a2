"""Multiresolution quadrilateral plate-bending finite element engine."""

from ._kernels import backend_name
from .analytical import annular_clamped_free_deflection, navier_series_deflection
from .assembly import (
    Constraint,
    ConstraintError,
    ElementDef,
    GlobalSystem,
    LumpLoad,
    PlateModel,
    SingularSystemError,
    SpliceError,
    deflection_at,
    solve,
    splice,
    strain_energy,
)
from .cases import (
    CALIBRATED_RING_RADIUS_RATIO,
    DEFAULT_RING_RADIUS_RATIO,
    Case,
    CaseResult,
    case_ring_slab,
    case_skew_plate,
    case_square_ss,
    convergence_study,
    default_material,
    run_case,
)
from .element import (
    DEFAULT_QUAD_ORDER,
    ElementStiffness,
    Material,
    bending_rigidity,
    distributed_load,
    element_stiffness,
    lump_load,
    node_coupling_stiffness,
    strain_block,
)
from .geometry import DegenerateGeometryError, QuadGeometry
from .modelio import ModelFormatError, load_model, parse_model
from .shapes import NodeIndex, ResolutionLevel

__version__ = "0.1.0"

__all__ = [
    "CALIBRATED_RING_RADIUS_RATIO",
    "Case",
    "CaseResult",
    "Constraint",
    "ConstraintError",
    "DEFAULT_QUAD_ORDER",
    "DEFAULT_RING_RADIUS_RATIO",
    "DegenerateGeometryError",
    "ElementDef",
    "ElementStiffness",
    "GlobalSystem",
    "LumpLoad",
    "Material",
    "ModelFormatError",
    "NodeIndex",
    "PlateModel",
    "QuadGeometry",
    "ResolutionLevel",
    "SingularSystemError",
    "SpliceError",
    "annular_clamped_free_deflection",
    "backend_name",
    "bending_rigidity",
    "case_ring_slab",
    "case_skew_plate",
    "case_square_ss",
    "convergence_study",
    "default_material",
    "deflection_at",
    "distributed_load",
    "element_stiffness",
    "load_model",
    "lump_load",
    "navier_series_deflection",
    "node_coupling_stiffness",
    "parse_model",
    "run_case",
    "solve",
    "splice",
    "strain_block",
    "strain_energy",
]
