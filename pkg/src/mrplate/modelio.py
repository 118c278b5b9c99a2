"""JSON model files: load, validate strictly, and build a PlateModel.

The document layout is

.. code-block:: json

    {
      "materials": [{"id": "slab", "E": 1e4, "h": 0.1, "mu": 0.3}],
      "elements": [
        {"corners": [[0, 0], [1, 0], [1, 1], [0, 1]],
         "rl": {"m": 4, "n": 2},
         "material": "slab",
         "rotation_deg": 0.0,
         "formulation": "mra"}
      ],
      "constraints": [
        {"at": [0.0, 0.0], "dofs": ["w", "theta_x"], "values": [0.0, 0.0]},
        {"node": 3, "dofs": ["w"]}
      ],
      "loads": {
        "uniform": [{"element": 0, "q": 1.0}],
        "lump": [{"element": 0, "point": [0.5, 0.5], "p": 2.0}]
      },
      "quad_order": 4
    }

``rotation_deg``, ``formulation``, ``values``, ``loads`` and ``quad_order``
are optional.  Unknown keys anywhere in the document are rejected so that a
typo cannot silently drop a support or a load.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .assembly import Constraint, ElementDef, LumpLoad, PlateModel
from .element import DEFAULT_QUAD_ORDER, Material
from .geometry import QuadGeometry
from .shapes import DOF_NAMES, ResolutionLevel

__all__ = ["ModelFormatError", "load_model", "parse_model"]


class ModelFormatError(ValueError):
    """A model document violates the schema."""


def _require_mapping(obj: Any, where: str, allowed: tuple[str, ...], required: tuple[str, ...]) -> dict:
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ModelFormatError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise ModelFormatError(f"{where}: missing key(s) {', '.join(missing)}")
    return obj


def _require_list(obj: Any, where: str) -> list:
    if not isinstance(obj, list):
        raise ModelFormatError(f"{where}: expected an array, got {type(obj).__name__}")
    return obj


def _number(obj: Any, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ModelFormatError(f"{where}: expected a number, got {type(obj).__name__}")
    return float(obj)


def _point(obj: Any, where: str) -> tuple[float, float]:
    pts = _require_list(obj, where)
    if len(pts) != 2:
        raise ModelFormatError(f"{where}: expected [x, y]")
    return (_number(pts[0], where), _number(pts[1], where))


def _parse_materials(doc: list) -> dict[str, Material]:
    out: dict[str, Material] = {}
    for k, entry in enumerate(_require_list(doc, "materials")):
        where = f"materials[{k}]"
        rec = _require_mapping(entry, where, ("id", "E", "h", "mu"), ("id", "E", "h", "mu"))
        mid = rec["id"]
        if not isinstance(mid, str):
            raise ModelFormatError(f"{where}.id: expected a string")
        if mid in out:
            raise ModelFormatError(f"{where}: duplicate material id {mid!r}")
        try:
            out[mid] = Material(
                E=_number(rec["E"], f"{where}.E"),
                h=_number(rec["h"], f"{where}.h"),
                mu=_number(rec["mu"], f"{where}.mu"),
            )
        except ValueError as exc:
            raise ModelFormatError(f"{where}: {exc}") from exc
    if not out:
        raise ModelFormatError("materials: at least one material is required")
    return out


def _parse_elements(doc: list, materials: dict[str, Material]) -> list[ElementDef]:
    out = []
    for k, entry in enumerate(_require_list(doc, "elements")):
        where = f"elements[{k}]"
        rec = _require_mapping(
            entry,
            where,
            ("corners", "rl", "material", "rotation_deg", "formulation"),
            ("corners", "rl", "material"),
        )
        corners = _require_list(rec["corners"], f"{where}.corners")
        if len(corners) != 4:
            raise ModelFormatError(f"{where}.corners: expected 4 points")
        pts = np.array([_point(p, f"{where}.corners[{i}]") for i, p in enumerate(corners)])
        rl_rec = _require_mapping(rec["rl"], f"{where}.rl", ("m", "n"), ("m", "n"))
        m, n = rl_rec["m"], rl_rec["n"]
        if not isinstance(m, int) or not isinstance(n, int) or isinstance(m, bool) or isinstance(n, bool):
            raise ModelFormatError(f"{where}.rl: m and n must be integers")
        mid = rec["material"]
        if mid not in materials:
            raise ModelFormatError(f"{where}.material: unknown material id {mid!r}")
        try:
            out.append(
                ElementDef(
                    geometry=QuadGeometry(pts),
                    rl=ResolutionLevel(m, n),
                    material=materials[mid],
                    rotation_deg=_number(rec.get("rotation_deg", 0.0), f"{where}.rotation_deg"),
                    formulation=rec.get("formulation", "mra"),
                )
            )
        except ValueError as exc:
            raise ModelFormatError(f"{where}: {exc}") from exc
    if not out:
        raise ModelFormatError("elements: at least one element is required")
    return out


def _parse_constraints(doc: list) -> list[Constraint]:
    out = []
    for k, entry in enumerate(_require_list(doc, "constraints")):
        where = f"constraints[{k}]"
        rec = _require_mapping(entry, where, ("at", "node", "dofs", "values"), ("dofs",))
        if ("at" in rec) == ("node" in rec):
            raise ModelFormatError(f"{where}: give exactly one of 'at' or 'node'")
        dofs = tuple(_require_list(rec["dofs"], f"{where}.dofs"))
        bad = [d for d in dofs if d not in DOF_NAMES]
        if bad or not dofs:
            raise ModelFormatError(f"{where}.dofs: expected names from {DOF_NAMES}")
        values = rec.get("values", [0.0] * len(dofs))
        values = tuple(_number(v, f"{where}.values") for v in _require_list(values, f"{where}.values"))
        if len(values) != len(dofs):
            raise ModelFormatError(f"{where}: dofs and values lengths differ")
        node = rec.get("node")
        if node is not None and (not isinstance(node, int) or isinstance(node, bool)):
            raise ModelFormatError(f"{where}.node: expected an integer")
        at = _point(rec["at"], f"{where}.at") if "at" in rec else None
        out.append(Constraint(dofs=dofs, values=values, node=node, at=at))
    return out


def _parse_loads(doc: Any, n_elements: int) -> tuple[dict[int, float], list[LumpLoad]]:
    rec = _require_mapping(doc, "loads", ("uniform", "lump"), ())
    uniform: dict[int, float] = {}
    for k, entry in enumerate(_require_list(rec.get("uniform", []), "loads.uniform")):
        where = f"loads.uniform[{k}]"
        item = _require_mapping(entry, where, ("element", "q"), ("element", "q"))
        idx = item["element"]
        if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < n_elements:
            raise ModelFormatError(f"{where}.element: index out of range")
        if idx in uniform:
            raise ModelFormatError(f"{where}: duplicate uniform load on element {idx}")
        uniform[idx] = _number(item["q"], f"{where}.q")
    lumps = []
    for k, entry in enumerate(_require_list(rec.get("lump", []), "loads.lump")):
        where = f"loads.lump[{k}]"
        item = _require_mapping(entry, where, ("element", "point", "p"), ("element", "point", "p"))
        idx = item["element"]
        if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < n_elements:
            raise ModelFormatError(f"{where}.element: index out of range")
        lumps.append(
            LumpLoad(
                element=idx,
                point=_point(item["point"], f"{where}.point"),
                p=_number(item["p"], f"{where}.p"),
            )
        )
    return uniform, lumps


def parse_model(doc: Any) -> PlateModel:
    """Build a :class:`PlateModel` from a decoded JSON document."""
    rec = _require_mapping(
        doc,
        "model",
        ("materials", "elements", "constraints", "loads", "quad_order"),
        ("materials", "elements"),
    )
    materials = _parse_materials(rec["materials"])
    elements = _parse_elements(rec["elements"], materials)
    constraints = _parse_constraints(rec.get("constraints", []))
    uniform, lumps = _parse_loads(rec.get("loads", {}), len(elements))
    quad_order = rec.get("quad_order", DEFAULT_QUAD_ORDER)
    if not isinstance(quad_order, int) or isinstance(quad_order, bool) or quad_order < 1:
        raise ModelFormatError("quad_order: expected a positive integer")
    return PlateModel(
        elements=elements,
        constraints=constraints,
        uniform_loads=uniform,
        lump_loads=lumps,
        quad_order=quad_order,
    )


def load_model(path: str | Path) -> PlateModel:
    """Read and validate a JSON model file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    return parse_model(doc)
