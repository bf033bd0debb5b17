"""Sequential polyhedron update: solve one face, freeze its edges, re-solve
the whole edge-length vector by least-change pseudo-inverse, repeat."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .equilibrium import global_equilibrium
from .errors import (DocumentError, NoSolutionForArea, OverConstrainedError,
                     PipelineStepError)
from .face_solver import FaceSolveResult, InconsistentConstraintsError, solve_face
from .model import PolyhedralComplex

logger = logging.getLogger("polystatics")


@dataclass(frozen=True)
class FaceTarget:
    face: int
    area: float
    root: str | None = None         # per-face override of the root policy


@dataclass(frozen=True)
class ConstraintScript:
    fixed_edges: dict[int, float]
    face_targets: tuple[FaceTarget, ...]
    order: tuple[int, ...] | None = None

    def ordered_targets(self) -> tuple[FaceTarget, ...]:
        if self.order is None:
            return self.face_targets
        by_face = {t.face: t for t in self.face_targets}
        if sorted(by_face) != sorted(self.order):
            raise DocumentError(
                "constraint script 'order' must list exactly the target faces")
        return tuple(by_face[f] for f in self.order)


def parse_constraints(document: dict) -> ConstraintScript:
    """Parse the constraints JSON document."""
    try:
        fixed = {int(e): float(v)
                 for e, v in document.get("fixed_edges", {}).items()}
        targets = tuple(
            FaceTarget(face=int(t["face"]), area=float(t["area"]),
                       root=t.get("root"))
            for t in document.get("face_targets", []))
        order = document.get("order")
        if order is not None:
            order = tuple(int(f) for f in order)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed constraints document: {exc}") from exc
    for t in targets:
        if t.root not in (None, "near", "low", "high"):
            raise DocumentError(f"face {t.face}: unknown root policy {t.root!r}")
    return ConstraintScript(fixed_edges=fixed, face_targets=targets, order=order)


@dataclass(frozen=True)
class StepRecord:
    face_index: int
    target_area: float
    roots: tuple[float, ...]
    chosen_root: float
    pre_lengths: np.ndarray
    post_lengths: np.ndarray
    residual: float
    achieved_area: float

    def to_dict(self) -> dict:
        return {
            "face": self.face_index,
            "target_area": self.target_area,
            "roots": [float(r) for r in self.roots],
            "chosen_root": self.chosen_root,
            "pre_lengths": [float(q) for q in self.pre_lengths],
            "post_lengths": [float(q) for q in self.post_lengths],
            "residual": self.residual,
            "achieved_area": self.achieved_area,
        }


@dataclass
class PolySolveState:
    complex: PolyhedralComplex
    initial_complex: PolyhedralComplex
    fixed_edges: dict[int, float] = field(default_factory=dict)
    step_log: list[StepRecord] = field(default_factory=list)

    def copy(self) -> "PolySolveState":
        return PolySolveState(
            complex=self.complex,
            initial_complex=self.initial_complex,
            fixed_edges=dict(self.fixed_edges),
            step_log=list(self.step_log),
        )

    def step_log_document(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.step_log],
            "fixed_edges": {str(e): float(v)
                            for e, v in sorted(self.fixed_edges.items())},
        }


def update_polyhedron(complex_: PolyhedralComplex,
                      fixed_edges: Mapping[int, float],
                      config: SolverConfig = DEFAULT_CONFIG,
                      nu_policy: str | None = None,
                      recent_edges=None) -> tuple[np.ndarray, float]:
    """Least-change edge lengths satisfying closure plus the fixed lengths.

    Solves (E_p over L_p) q = (0 over l_p) with the pseudo-inverse family,
    seeding with the current lengths (default) or all ones. Fixed entries
    are then pinned exactly. Raises OverConstrainedError when the stacked
    system is unsolvable.
    """
    from .numerics import pseudo_solve

    policy = nu_policy or config.nu_policy
    e = complex_.num_edges
    E = global_equilibrium(complex_).matrix
    fixed_sorted = sorted(fixed_edges.items())
    for edge, _ in fixed_sorted:
        if not 0 <= edge < e:
            raise DocumentError(f"fixed edge {edge} does not exist")
    L = np.zeros((len(fixed_sorted), e))
    lvec = np.zeros(len(fixed_sorted))
    for i, (edge, length) in enumerate(fixed_sorted):
        L[i, edge] = 1.0
        lvec[i] = length
    B = np.vstack([E, L]) if len(fixed_sorted) else E
    b = np.concatenate([np.zeros(3 * complex_.num_faces), lvec])

    nu = complex_.geometry.lengths.copy() if policy == "current" else np.ones(e)
    solution, info = pseudo_solve(B, b, nu, config)
    if not info.solvable:
        raise OverConstrainedError(
            f"polyhedron update is over-constrained (residual {info.residual:.3e}); "
            f"most recently added constraints: {sorted(recent_edges or fixed_edges)}",
            recent_edges=recent_edges or [])

    for edge, length in fixed_sorted:
        solution[edge] = length
    residual = float(np.linalg.norm(B @ solution - b))
    return solution, residual


def run_pipeline(complex_: PolyhedralComplex, script: ConstraintScript,
                 config: SolverConfig = DEFAULT_CONFIG) -> PolySolveState:
    """Run the sequential face-by-face solve described by the script.

    Each step solves one target face against the fixed edges that lie on
    it, freezes every edge of the solved face, and re-solves the whole
    polyhedron. Stops at the first failure, raising PipelineStepError with
    the partial state attached.
    """
    for edge in script.fixed_edges:
        if not 0 <= edge < complex_.num_edges:
            raise DocumentError(f"fixed edge {edge} does not exist")
    for target in script.face_targets:
        if not 0 <= target.face < complex_.num_faces:
            raise DocumentError(f"target face {target.face} does not exist")

    state = PolySolveState(complex=complex_, initial_complex=complex_,
                           fixed_edges=dict(script.fixed_edges))

    for step_index, target in enumerate(script.ordered_targets()):
        face = complex_.faces[target.face]
        on_face = {e: v for e, v in state.fixed_edges.items()
                   if e in face.edge_indices}
        pre_lengths = state.complex.geometry.lengths.copy()
        try:
            result: FaceSolveResult = solve_face(
                state.complex, target.face, on_face, target.area,
                config, root_policy=target.root)
            new_fixed = result.updated_global()
            state.fixed_edges.update(new_fixed)
            new_lengths, residual = update_polyhedron(
                state.complex, state.fixed_edges, config,
                recent_edges=new_fixed)
            state.complex = state.complex.with_lengths(new_lengths, config)
        except InconsistentConstraintsError as exc:
            raise PipelineStepError(step_index, target.face, "cgdof", exc, state)
        except NoSolutionForArea as exc:
            raise PipelineStepError(step_index, target.face, "no_solution",
                                    exc, state)
        except OverConstrainedError as exc:
            raise PipelineStepError(step_index, target.face,
                                    "over_constrained", exc, state)

        logger.info("step %d: face %d -> area %.9g (root %.9g, residual %.3e)",
                    step_index, target.face, result.achieved_area,
                    result.chosen_root, residual)
        state.step_log.append(StepRecord(
            face_index=target.face,
            target_area=target.area,
            roots=result.roots,
            chosen_root=result.chosen_root,
            pre_lengths=pre_lengths,
            post_lengths=state.complex.geometry.lengths.copy(),
            residual=residual,
            achieved_area=result.achieved_area,
        ))
    return state
