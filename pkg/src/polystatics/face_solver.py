"""Per-face solve: classify edges through the RREF of the constraint system,
reduce the area equation to one unknown, and solve the quadratic.

All vectors here live in the face-local frame: entry t corresponds to the
t-th edge of the face loop. Local lengths equal the global signed lengths of
those edges (the loop sign only flips the direction, not the length), so
fixed-length constraints and results transfer between frames verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .equilibrium import face_equilibrium
from .errors import DegenerateFaceError, NoSolutionForArea, PolystaticsError
from .face_area import AreaMatrix, build_area_matrix, signed_area
from .model import PolyhedralComplex
from .numerics import RrefResult, rref

_NEG_INF = float("-inf")


class InconsistentConstraintsError(PolystaticsError):
    """Raised when a solve is attempted on a face with CGDoF of -inf or 0."""


@dataclass(frozen=True)
class ConstraintSystem:
    """Stacked closure + fixed-length equations of one face: B q = b."""

    B: np.ndarray                    # (2 + m, k)
    b: np.ndarray                    # (2 + m,)
    fixed_edges: dict[int, float]    # global edge index -> prescribed length
    face_index: int
    edge_order: tuple[int, ...]      # global edge index per loop position


@dataclass(frozen=True)
class EdgeClassification:
    """Partition of a face's loop positions after constraint analysis.

    ``cgdof`` is -inf when the constraints contradict each other. Positions
    are face-local; ``edges`` maps them back to global edge indices.
    """

    face_index: int
    edges: tuple[int, ...]
    cgdof: float                     # nonnegative int, or -inf
    ci: int | None                   # critical independent position
    nci: tuple[int, ...]             # non-critical independent positions
    fix: tuple[int, ...]             # user-fixed positions
    nfd: tuple[int, ...]             # non-fixed dependent positions

    @property
    def consistent(self) -> bool:
        return self.cgdof != _NEG_INF

    def global_of(self, positions) -> tuple[int, ...]:
        return tuple(self.edges[t] for t in positions)


@dataclass(frozen=True)
class Dependence:
    """Linear dependence of the nfd lengths read off the RREF:
    q_nfd = D q_nci + d q_ci + g, and the assembled full-vector forms
    D' = D + Id_nci, d' = d + unit(ci)."""

    D: np.ndarray
    d: np.ndarray
    g: np.ndarray
    D_prime: np.ndarray
    d_prime: np.ndarray


@dataclass(frozen=True)
class QuadraticProblem:
    a: float
    b: float
    c: float
    D_prime: np.ndarray
    d_prime: np.ndarray
    g: np.ndarray
    target_area: float
    s: np.ndarray        # D' q_nci + q_fix + g, the length vector at q_ci = 0

    def lengths_at(self, q_ci: float) -> np.ndarray:
        return self.s + self.d_prime * q_ci


@dataclass(frozen=True)
class FaceSolveResult:
    face_index: int
    classification: EdgeClassification
    quadratic: QuadraticProblem
    roots: tuple[float, ...]         # ascending; may be a single root
    chosen_root: float
    updated_lengths: np.ndarray      # (k,) face-local = global signed lengths
    achieved_area: float

    def updated_global(self) -> dict[int, float]:
        return {edge: float(q) for edge, q in
                zip(self.classification.edges, self.updated_lengths)}


def analyze_constraints(complex_: PolyhedralComplex, face_index: int,
                        fixed_edges: Mapping[int, float],
                        config: SolverConfig = DEFAULT_CONFIG,
                        ci_override: int | None = None,
                        ) -> tuple[ConstraintSystem, RrefResult, EdgeClassification]:
    """Build B_f q = b_f, reduce it, and classify the face's edges.

    An inconsistent system yields cgdof = -inf rather than an error; the
    caller decides how to surface that to the user.
    """
    face = complex_.faces[face_index]
    k = len(face)
    edge_order = face.edge_indices
    if len(set(edge_order)) != k:
        raise DegenerateFaceError(
            f"face {face_index} repeats an edge in its loop; cannot solve")

    position_of = {e: t for t, e in enumerate(edge_order)}
    for e in fixed_edges:
        if e not in position_of:
            raise ValueError(
                f"fixed edge {e} does not belong to face {face_index}")

    E = face_equilibrium(face, complex_.geometry).matrix
    fixed_sorted = sorted(fixed_edges.items())
    L = np.zeros((len(fixed_sorted), k))
    lvec = np.zeros(len(fixed_sorted))
    for i, (e, length) in enumerate(fixed_sorted):
        L[i, position_of[e]] = 1.0
        lvec[i] = length

    B = np.vstack([E, L]) if len(fixed_sorted) else E
    b = np.concatenate([np.zeros(2), lvec])
    system = ConstraintSystem(B=B, b=b, fixed_edges=dict(fixed_sorted),
                              face_index=face_index, edge_order=edge_order)

    result = rref(B, b, config)

    if result.inconsistent:
        classification = EdgeClassification(
            face_index=face_index, edges=edge_order, cgdof=_NEG_INF,
            ci=None, nci=(), fix=(), nfd=())
        return system, result, classification

    pivots = result.pivot_columns
    fixed_positions = {position_of[e] for e in fixed_edges}
    # a fixed edge's unit row always makes its column pivotal
    assert fixed_positions.issubset(set(pivots)), "fixed edge not pivotal"

    free = [t for t in range(k) if t not in pivots]
    if ci_override is not None:
        if ci_override not in free:
            raise ValueError(
                f"ci override position {ci_override} is not independent")
        ci = ci_override
    else:
        ci = max(free) if free else None
    nci = tuple(t for t in free if t != ci)
    fix = tuple(t for t in pivots if t in fixed_positions)
    nfd = tuple(t for t in pivots if t not in fixed_positions)

    classification = EdgeClassification(
        face_index=face_index, edges=edge_order, cgdof=k - result.rank,
        ci=ci, nci=nci, fix=fix, nfd=nfd)
    return system, result, classification


def extract_dependence(rref_result: RrefResult,
                       classification: EdgeClassification) -> Dependence:
    """Read D, d, g off the RREF rows of the non-fixed dependent edges."""
    if not classification.consistent or classification.cgdof < 1:
        raise InconsistentConstraintsError(
            f"face {classification.face_index}: cgdof = {classification.cgdof}, "
            "no critical edge to solve with")

    k = len(classification.edges)
    A = rref_result.rref_matrix
    D = np.zeros((k, k))
    d = np.zeros(k)
    g = np.zeros(k)
    ci = classification.ci
    for t in classification.nfd:
        row = rref_result.pivot_row_of(t)
        for j in classification.nci:
            D[t, j] = -A[row, j]
        d[t] = -A[row, ci]
        g[t] = A[row, -1]

    D_prime = D.copy()
    for j in classification.nci:
        D_prime[j, j] += 1.0
    d_prime = d.copy()
    d_prime[ci] += 1.0
    return Dependence(D=D, d=d, g=g, D_prime=D_prime, d_prime=d_prime)


def solve_target_area(system: ConstraintSystem, M: AreaMatrix,
                      classification: EdgeClassification,
                      dependence: Dependence, target_area: float,
                      current_lengths: np.ndarray,
                      config: SolverConfig = DEFAULT_CONFIG,
                      root_policy: str | None = None,
                      nci_values: Mapping[int, float] | None = None,
                      ) -> FaceSolveResult:
    """Solve a q_ci^2 + b q_ci + c = 0 for the target area and update lengths.

    nci edges are pinned to their current lengths unless overridden; fixed
    edges keep their prescribed values bit-exactly. Raises NoSolutionForArea
    when no real root exists.
    """
    policy = root_policy or config.root_policy
    k = M.k
    current = np.asarray(current_lengths, dtype=float).reshape(k)
    ci = classification.ci
    if ci is None:
        raise InconsistentConstraintsError(
            f"face {classification.face_index}: no critical edge")

    q_nci = np.zeros(k)
    for t in classification.nci:
        q_nci[t] = current[t]
    if nci_values:
        for t, value in nci_values.items():
            if t not in classification.nci:
                raise ValueError(f"position {t} is not a non-critical "
                                 "independent edge")
            q_nci[t] = value

    position_of = {e: t for t, e in enumerate(classification.edges)}
    q_fix = np.zeros(k)
    for e, length in system.fixed_edges.items():
        q_fix[position_of[e]] = length

    s = dependence.D_prime @ q_nci + q_fix + dependence.g
    dp = dependence.d_prime
    Msym = M.M
    a = float(dp @ Msym @ dp)
    b = float(2.0 * dp @ Msym @ s)
    c = float(s @ Msym @ s) - 2.0 * k * target_area
    quadratic = QuadraticProblem(a=a, b=b, c=c, D_prime=dependence.D_prime,
                                 d_prime=dependence.d_prime, g=dependence.g,
                                 target_area=target_area, s=s)

    m_scale = max(float(np.abs(Msym).max()), 1.0)
    s_scale = 1.0 + float(np.linalg.norm(s))
    if abs(a) < 1e-12 * m_scale:
        # degenerate quadratic: fall back to the linear equation b q + c = 0
        if abs(b) < 1e-12 * m_scale * s_scale:
            if abs(c) < 1e-12 * m_scale * s_scale ** 2:
                roots = (float(current[ci]),)
            else:
                raise NoSolutionForArea(classification.face_index, a, b, c)
        else:
            roots = (-c / b,)
    else:
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            if disc > -1e-12 * max(b * b, abs(4.0 * a * c), 1.0):
                disc = 0.0
            else:
                raise NoSolutionForArea(classification.face_index, a, b, c)
        sq = math.sqrt(disc)
        roots = tuple(sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a))))

    if policy == "low":
        chosen = roots[0]
    elif policy == "high":
        chosen = roots[-1]
    else:
        chosen = min(roots, key=lambda r: (abs(r - current[ci]), r))

    updated = s + dp * chosen
    achieved = signed_area(M, updated)
    return FaceSolveResult(
        face_index=classification.face_index,
        classification=classification,
        quadratic=quadratic,
        roots=roots,
        chosen_root=float(chosen),
        updated_lengths=updated,
        achieved_area=achieved,
    )


def solve_face(complex_: PolyhedralComplex, face_index: int,
               fixed_edges: Mapping[int, float], target_area: float,
               config: SolverConfig = DEFAULT_CONFIG,
               root_policy: str | None = None,
               nci_values: Mapping[int, float] | None = None,
               ci_override: int | None = None) -> FaceSolveResult:
    """Full per-face pass: analyze, extract the dependence, solve the area."""
    system, rref_result, classification = analyze_constraints(
        complex_, face_index, fixed_edges, config, ci_override)
    if not classification.consistent:
        raise InconsistentConstraintsError(
            f"face {face_index}: constraints are contradictory (cgdof = -inf)")
    dependence = extract_dependence(rref_result, classification)
    M = build_area_matrix(complex_.faces[face_index], complex_.geometry,
                          face_index)
    return solve_target_area(system, M, classification, dependence,
                             target_area, complex_.face_lengths(face_index),
                             config, root_policy, nci_values)
