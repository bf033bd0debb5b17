"""Command-line interface: inspect, solve, and serve polyhedral models."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import DEFAULT_CONFIG
from .dual import (build_dual, face_signed_areas, rebuild_dual,
                   update_member_forces)
from .errors import (DocumentError, NoSolutionForArea, OverConstrainedError,
                     PipelineStepError, PolystaticsError)
from .face_area import build_area_matrix, derivation_trace, signed_area
from .face_solver import InconsistentConstraintsError, analyze_constraints, solve_face
from .model import load_complex, load_document
from .poly_solver import parse_constraints, run_pipeline

EXIT_OK = 0
EXIT_CONSTRAINT = 1
EXIT_INPUT = 2


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol-planar", type=float, default=None)
    parser.add_argument("--tol-pivot", type=float, default=None)
    parser.add_argument("--rcond", type=float, default=None)
    parser.add_argument("--tol-solve", type=float, default=None)
    parser.add_argument("--tol-area", type=float, default=None)
    parser.add_argument("--tol-zero", type=float, default=None)
    parser.add_argument("--tol-closure", type=float, default=None)
    parser.add_argument("--nu", choices=["current", "ones"], default=None)
    parser.add_argument("--xi-scale", type=float, default=None)
    parser.add_argument("--root", choices=["near", "low", "high"], default=None)


def _config_from(args: argparse.Namespace):
    overrides = {}
    for flag, name in [
        ("tol_planar", "tau_planar"), ("tol_pivot", "tau_pivot"),
        ("rcond", "rcond"), ("tol_solve", "tau_solve"),
        ("tol_area", "tau_area"), ("tol_zero", "tau_zero"),
        ("tol_closure", "tau_closure"), ("nu", "nu_policy"),
        ("xi_scale", "xi_scale"), ("root", "root_policy"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            overrides[name] = value
    return DEFAULT_CONFIG.replace(**overrides) if overrides else DEFAULT_CONFIG


def _parse_fixes(pairs: list[str]) -> dict[int, float]:
    fixed = {}
    for pair in pairs or []:
        try:
            edge, length = pair.split("=", 1)
            fixed[int(edge)] = float(length)
        except ValueError:
            raise DocumentError(f"bad --fix value {pair!r}, expected EDGE=LENGTH")
    return fixed


def _print_classification(classification) -> None:
    cgdof = classification.cgdof
    print(f"CGDoF: {int(cgdof) if cgdof != float('-inf') else '-inf'}")
    if not classification.consistent:
        print("constraints are contradictory; release or change fixed edges")
        return
    print(f"ci edge:  {list(classification.global_of((classification.ci,)))[0]}"
          if classification.ci is not None else "ci edge:  none")
    print(f"nci edges: {sorted(classification.global_of(classification.nci))}")
    print(f"fixed edges: {sorted(classification.global_of(classification.fix))}")
    print(f"nfd edges: {sorted(classification.global_of(classification.nfd))}")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="polystatics",
        description="Constrained face areas and edge lengths on polyhedral "
                    "force diagrams, with reciprocal form output.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a model document")
    p_check.add_argument("model")
    _add_common(p_check)

    p_area = sub.add_parser("area", help="signed area and area matrix of a face")
    p_area.add_argument("model")
    p_area.add_argument("--face", type=int, required=True)
    p_area.add_argument("--trace", action="store_true",
                        help="also print the height diagnostics")
    _add_common(p_area)

    p_gdof = sub.add_parser("gdof", help="constrained degrees of freedom of a face")
    p_gdof.add_argument("model")
    p_gdof.add_argument("--face", type=int, required=True)
    p_gdof.add_argument("--fix", action="append", metavar="EDGE=LENGTH")
    _add_common(p_gdof)

    p_sf = sub.add_parser("solve-face", help="solve one face for a target area")
    p_sf.add_argument("model")
    p_sf.add_argument("--face", type=int, required=True)
    p_sf.add_argument("--target-area", type=float, required=True)
    p_sf.add_argument("--fix", action="append", metavar="EDGE=LENGTH")
    _add_common(p_sf)

    p_solve = sub.add_parser("solve", help="run a full constraint script")
    p_solve.add_argument("model")
    p_solve.add_argument("constraints")
    p_solve.add_argument("-o", "--output", default="out",
                         help="output directory (default: out)")
    p_solve.add_argument("--rebuild-dual", action="store_true",
                         help="rebuild the dual from the solved primal "
                              "instead of keeping the initial geometry")
    _add_common(p_solve)

    p_dual = sub.add_parser("dual", help="build the reciprocal form diagram")
    p_dual.add_argument("model")
    p_dual.add_argument("-o", "--output", default=None,
                        help="write dual JSON here instead of stdout")
    _add_common(p_dual)

    p_serve = sub.add_parser("serve", help="run the interactive HTTP service")
    p_serve.add_argument("--port", type=int, default=8750)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--state-dir", default=None)
    _add_common(p_serve)

    args = parser.parse_args(argv)
    config = _config_from(args)

    try:
        return _dispatch(args, config)
    except (InconsistentConstraintsError, NoSolutionForArea,
            OverConstrainedError, PipelineStepError) as exc:
        print(f"constraint failure: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (DocumentError, PolystaticsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _dispatch(args: argparse.Namespace, config) -> int:
    if args.command == "serve":
        import uvicorn

        from .service import create_app
        app = create_app(state_dir=args.state_dir, config=config)
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return EXIT_OK

    complex_ = load_complex(load_document(args.model), config)

    if args.command == "check":
        areas = face_signed_areas(complex_)
        print(f"vertices: {complex_.num_vertices}  edges: {complex_.num_edges}  "
              f"faces: {complex_.num_faces}  cells: {complex_.num_cells}")
        for fi, area in enumerate(areas):
            print(f"face {fi}: {len(complex_.faces[fi])} edges, "
                  f"area {_fmt(area)}")
        print("ok")
        return EXIT_OK

    if args.command == "area":
        M = build_area_matrix(complex_.faces[args.face], complex_.geometry,
                              args.face)
        q = complex_.face_lengths(args.face)
        print(f"signed area: {_fmt(signed_area(M, q))}")
        print("area matrix (symmetric):")
        for row in M.M:
            print("  " + "  ".join(_fmt(x) for x in row))
        if args.trace:
            dirs = complex_.face_traversal_directions(args.face)
            trace = derivation_trace(dirs, q, complex_.faces[args.face].normal)
            print("average heights: "
                  + "  ".join(_fmt(h) for h in trace.H))
        return EXIT_OK

    if args.command == "gdof":
        fixed = _parse_fixes(args.fix)
        _, _, classification = analyze_constraints(complex_, args.face, fixed,
                                                   config)
        _print_classification(classification)
        return EXIT_OK if classification.consistent else EXIT_CONSTRAINT

    if args.command == "solve-face":
        fixed = _parse_fixes(args.fix)
        result = solve_face(complex_, args.face, fixed, args.target_area,
                            config, root_policy=args.root)
        _print_classification(result.classification)
        quad = result.quadratic
        print(f"a: {_fmt(quad.a)}  b: {_fmt(quad.b)}  c: {_fmt(quad.c)}")
        print("roots: " + ", ".join(_fmt(r) for r in result.roots))
        print(f"chosen root: {_fmt(result.chosen_root)}")
        print(f"achieved area: {_fmt(result.achieved_area)}")
        print("updated lengths: "
              + ", ".join(f"{e}={_fmt(q)}"
                          for e, q in sorted(result.updated_global().items())))
        return EXIT_OK

    if args.command == "solve":
        script = parse_constraints(load_document(args.constraints))
        state = run_pipeline(complex_, script, config)
        out = Path(args.output)
        _write_json(out / "primal.json", state.complex.to_document())
        dual = build_dual(state.initial_complex, config)
        dual = update_member_forces(state.complex, dual, config)
        if args.rebuild_dual:
            dual = rebuild_dual(state.complex, dual, config)
        _write_json(out / "dual.json", dual.to_document())
        _write_json(out / "members.json", dual.members_document())
        _write_json(out / "step_log.json", state.step_log_document())
        print(f"wrote {out}/primal.json, {out}/dual.json, {out}/members.json, "
              f"{out}/step_log.json")
        for step in state.step_log:
            print(f"step face {step.face_index}: area "
                  f"{_fmt(step.achieved_area)} (target {_fmt(step.target_area)}), "
                  f"residual {step.residual:.3e}")
        return EXIT_OK

    if args.command == "dual":
        dual = build_dual(complex_, config)
        payload = dual.to_document()
        if args.output:
            _write_json(Path(args.output), payload)
            print(f"wrote {args.output}")
        else:
            print(json.dumps(payload, indent=2))
        return EXIT_OK

    raise DocumentError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
