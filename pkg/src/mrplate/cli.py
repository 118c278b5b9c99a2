"""Command line front end: benchmark runs, convergence studies, model files.

Exit codes: 0 on success, 1 for usage or input-file errors, 2 when the
numerical solve fails.  File outputs are deterministic; wall times appear
only on stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .assembly import (
    ConstraintError,
    GlobalSystem,
    SingularSystemError,
    SpliceError,
    solve,
    splice,
)
from .cases import (
    Case,
    CaseResult,
    DEFAULT_RING_RADIUS_RATIO,
    case_ring_slab,
    case_skew_plate,
    case_square_ss,
    convergence_study,
    run_case,
)
from .element import DEFAULT_QUAD_ORDER
from .geometry import DegenerateGeometryError
from .modelio import ModelFormatError, load_model
from .shapes import ResolutionLevel

__all__ = ["main", "write_field_csv", "write_results_csv"]

_NUMERIC_ERRORS = (
    SingularSystemError,
    SpliceError,
    ConstraintError,
    DegenerateGeometryError,
    np.linalg.LinAlgError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that signals usage problems instead of exiting."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_field_csv(system: GlobalSystem, solution: np.ndarray, out, coefficient: float | None = None):
    """Write the nodal solution as CSV rows node_id, x, y, w, theta_x, theta_y.

    Node order follows the global numbering, so reruns of the same model are
    byte identical.  A footer comment records the normalized coefficient when
    one is supplied.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node_id", "x", "y", "w", "theta_x", "theta_y"])
    for gid, (x, y) in enumerate(system.node_coords):
        w, tx, ty = solution[3 * gid : 3 * gid + 3]
        writer.writerow([gid, _fmt(x), _fmt(y), _fmt(w), _fmt(tx), _fmt(ty)])
    if coefficient is not None:
        out.write(f"# coefficient,{_fmt(coefficient)}\n")


def write_results_csv(results: list[CaseResult], out):
    """Write case results as CSV; wall times are omitted for determinism."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["case", "label", "dofs", "free_dofs", "deflection", "coefficient"])
    for r in results:
        writer.writerow([r.case_id, r.label, r.dofs, r.free_dofs, _fmt(r.deflection), _fmt(r.coefficient)])


def _results_json(results: list[CaseResult]) -> str:
    rows = [
        {
            "case": r.case_id,
            "label": r.label,
            "dofs": r.dofs,
            "free_dofs": r.free_dofs,
            "deflection": r.deflection,
            "coefficient": r.coefficient,
        }
        for r in results
    ]
    return json.dumps(rows, indent=2) + "\n"


def _write_out(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_rl(text: str) -> ResolutionLevel:
    try:
        return ResolutionLevel.parse(text)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _parse_mesh(text: str) -> tuple[int, int]:
    try:
        kx, ky = (int(part) for part in text.lower().split("x"))
    except ValueError as exc:
        raise _UsageError(f"expected a mesh like 8x8, got {text!r}") from exc
    if kx < 1 or ky < 1:
        raise _UsageError("mesh counts must be positive")
    return kx, ky


def _build_case(args, rl_text: str | None, mesh_text: str | None) -> Case:
    if args.mono:
        if mesh_text is None:
            raise _UsageError("--mono needs --mesh MxN")
        mono_mesh: tuple[int, int] | None = _parse_mesh(mesh_text)
        rl = None
    else:
        if mesh_text is not None:
            raise _UsageError("--mesh only applies with --mono")
        mono_mesh = None
        rl = _parse_rl(rl_text) if rl_text is not None else None
    common = dict(quad_order=args.quad_order, mono_mesh=mono_mesh)
    try:
        if args.case == "skew":
            return case_skew_plate(
                rl=rl, skew_angle_deg=args.skew_angle, ss_pair=args.ss_pair, **common
            )
        if args.case == "ring":
            return case_ring_slab(rl=rl, radius_ratio=args.ba_ratio, **common)
        return case_square_ss(rl=rl, **common)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _cmd_run(args) -> int:
    case = _build_case(args, args.rl, args.mesh)
    system = splice(case.model)
    solution = solve(system)
    deflection, coefficient = case.extract(system, solution)
    free = system.num_dofs - system.fixed_dofs.size
    print(
        f"case={case.case_id} {case.label} dofs={system.num_dofs} free={free} "
        f"deflection={deflection:.6e} coefficient={coefficient:.4f}"
    )
    if args.out is not None:
        if args.format == "csv":
            buf = io.StringIO()
            write_field_csv(system, solution, buf, coefficient)
            _write_out(args.out, buf.getvalue())
        else:
            doc = {
                "case": case.case_id,
                "label": case.label,
                "dofs": system.num_dofs,
                "free_dofs": free,
                "deflection": deflection,
                "coefficient": coefficient,
            }
            _write_out(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_converge(args) -> int:
    if args.mono:
        if args.mesh_list is None:
            raise _UsageError("--mono needs --mesh-list")
        cases = [_build_case(args, None, part) for part in args.mesh_list.split(",")]
    else:
        if args.rl_list is None:
            raise _UsageError("converge needs --rl-list (or --mono --mesh-list)")
        cases = [_build_case(args, part, None) for part in args.rl_list.split(",")]
    results = convergence_study(cases)
    for r in results:
        print(
            f"case={r.case_id} {r.label} dofs={r.dofs} coefficient={r.coefficient:.4f} "
            f"t={r.wall_time:.2f}s"
        )
    if args.format == "csv":
        buf = io.StringIO()
        write_results_csv(results, buf)
        text = buf.getvalue()
    else:
        text = _results_json(results)
    if args.out is not None:
        _write_out(args.out, text)
    return 0


def _cmd_model(args) -> int:
    model = load_model(args.path)
    model.quad_order = args.quad_order if args.quad_order is not None else model.quad_order
    system = splice(model)
    solution = solve(system)
    w = solution[0::3]
    print(
        f"model={args.path} elements={len(model.elements)} dofs={system.num_dofs} "
        f"max|w|={np.abs(w).max():.6e}"
    )
    if args.out is not None:
        if args.format == "csv":
            buf = io.StringIO()
            write_field_csv(system, solution, buf)
            _write_out(args.out, buf.getvalue())
        else:
            doc = {
                "elements": len(model.elements),
                "dofs": system.num_dofs,
                "nodes": [
                    {
                        "node_id": gid,
                        "x": float(x),
                        "y": float(y),
                        "w": float(solution[3 * gid]),
                        "theta_x": float(solution[3 * gid + 1]),
                        "theta_y": float(solution[3 * gid + 2]),
                    }
                    for gid, (x, y) in enumerate(system.node_coords)
                ],
            }
            _write_out(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _add_common(p: _Parser, with_case=True):
    if with_case:
        p.add_argument("--case", choices=("skew", "ring", "square-ss"), required=True)
        p.add_argument("--mono", action="store_true", help="classical-element mesh instead of one multiresolution element per region")
        p.add_argument("--ba-ratio", type=float, default=DEFAULT_RING_RADIUS_RATIO, help="inner/outer radius ratio of the ring case")
        p.add_argument("--skew-angle", type=float, default=60.0, help="skew angle in degrees")
        p.add_argument("--ss-pair", choices=("oblique", "straight"), default="oblique", help="which opposite edge pair of the skew plate is simply supported")
    p.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER, help="Gauss points per direction per cell")
    p.add_argument("--out", help="output file path, or - for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mrplate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve one benchmark configuration")
    p_run.add_argument("--rl", help="node grid of the multiresolution element, e.g. 9x9")
    p_run.add_argument("--mesh", help="element counts of a --mono mesh, e.g. 8x8")
    _add_common(p_run)

    p_conv = sub.add_parser("converge", help="run a refinement sequence")
    p_conv.add_argument("--rl-list", help="comma-separated node grids, e.g. 5x5,9x9,17x17")
    p_conv.add_argument("--mesh-list", help="comma-separated --mono element counts")
    _add_common(p_conv)

    p_model = sub.add_parser("model", help="solve a JSON model file")
    p_model.add_argument("path")
    p_model.add_argument("--quad-order", type=int, default=None, help="override the file's quadrature order")
    p_model.add_argument("--out", help="output file path, or - for stdout")
    p_model.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "converge":
            return _cmd_converge(args)
        return _cmd_model(args)
    except (_UsageError, ModelFormatError, FileNotFoundError) as exc:
        print(exc, file=sys.stderr)
        return 1
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
