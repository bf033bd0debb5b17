"""Reciprocal form diagram: one vertex per cell, one member per face,
member forces from signed face areas.

The member directions are the primal face normals, so reciprocity
(member perpendicular to its face plane) holds by construction; the dual
edge lengths come from the kernel of the dual equilibrium system.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .equilibrium import dual_equilibrium
from .errors import ClosureError, DegenerateDualError
from .face_area import build_area_matrix, signed_area
from .model import PolyhedralComplex
from .numerics import pseudo_solve

COMPRESSION = "c"
TENSION = "t"
ZERO = "0"


@dataclass(frozen=True)
class MemberForce:
    face_index: int
    magnitude: float
    sign: str                      # "c" | "t" | "0"


@dataclass(frozen=True)
class DualEdgeGeom:
    face_index: int
    start: int                     # dual vertex index
    end: int
    direction: np.ndarray          # primal face normal
    length: float                  # signed dual edge length q_dagger
    boundary: bool                 # dangles into a boundary region


@dataclass(frozen=True)
class DualDiagram:
    vertices: np.ndarray                   # cell vertices then boundary endpoints
    cell_vertex: dict[int, int]            # primal cell -> dual vertex index
    edges: tuple[DualEdgeGeom, ...]        # one per primal face
    member_forces: tuple[MemberForce, ...]
    initial_areas: np.ndarray              # signed areas at build time
    initial_signs: tuple[str, ...]
    boundary_edges: tuple[int, ...]        # primal edges with open face fans
    closure_error: float

    def members_document(self) -> dict:
        return {"members": [
            {"face": m.face_index, "magnitude": float(m.magnitude),
             "sign": m.sign}
            for m in self.member_forces]}

    def to_document(self) -> dict:
        doc = {
            "vertices": [[float(x) for x in p] for p in self.vertices],
            "edges": [[int(e.start), int(e.end)] for e in self.edges],
            "faces": [],
            "cells": [],
        }
        doc.update(self.members_document())
        return doc


def face_signed_areas(complex_: PolyhedralComplex) -> np.ndarray:
    """Signed area of every face against its stored normal."""
    areas = np.zeros(complex_.num_faces)
    for fi, face in enumerate(complex_.faces):
        M = build_area_matrix(face, complex_.geometry, fi)
        areas[fi] = signed_area(M, complex_.face_lengths(fi))
    return areas


def build_dual(complex_: PolyhedralComplex,
               config: SolverConfig = DEFAULT_CONFIG,
               initial_signs: dict[int, str] | None = None) -> DualDiagram:
    """Construct the reciprocal diagram from the primal.

    Dual edge lengths are the kernel solution (Id - E+ E) xi with an
    all-ones seed; cell vertices are placed by traversal across internal
    faces, each offset by length times the face normal.
    """
    if not complex_.cells:
        raise DegenerateDualError("complex has no cells; nothing to dualize")

    dual_eq = dual_equilibrium(complex_)
    xi = config.xi_scale * np.ones(complex_.num_faces)
    q_dual, _ = pseudo_solve(dual_eq.matrix, np.zeros(3 * complex_.num_edges),
                             xi, config)
    if float(np.abs(q_dual).max()) < 1e-12 * max(1.0, float(np.abs(xi).max())):
        raise DegenerateDualError(
            "dual equilibrium admits only the zero solution for this seed")

    # cells adjacency through internal faces
    face_cells = {fi: complex_.cells_of_face(fi)
                  for fi in range(complex_.num_faces)}
    internal = {fi: dict(pairs) for fi, pairs in face_cells.items()
                if len(pairs) == 2}

    nc = complex_.num_cells
    positions = np.zeros((nc, 3))
    placed = np.zeros(nc, dtype=bool)
    closure_error = 0.0
    for root in range(nc):
        if placed[root]:
            continue
        placed[root] = True
        queue = [root]
        while queue:
            cell = queue.pop(0)
            for fi, sides in internal.items():
                if cell not in {c for c, _ in face_cells[fi]}:
                    continue
                sides_by_cell = {c: s for c, s in face_cells[fi]}
                c_plus = next(c for c, s in face_cells[fi] if s == +1)
                c_minus = next(c for c, s in face_cells[fi] if s == -1)
                offset = q_dual[fi] * complex_.faces[fi].normal
                if placed[c_plus] and placed[c_minus]:
                    err = float(np.linalg.norm(
                        positions[c_minus] - positions[c_plus] - offset))
                    closure_error = max(closure_error, err)
                    continue
                if placed[c_plus] and not placed[c_minus]:
                    positions[c_minus] = positions[c_plus] + offset
                    placed[c_minus] = True
                    queue.append(c_minus)
                elif placed[c_minus] and not placed[c_plus]:
                    positions[c_plus] = positions[c_minus] - offset
                    placed[c_plus] = True
                    queue.append(c_plus)

    span = positions.max(axis=0) - positions.min(axis=0) if nc else np.zeros(3)
    scale = 1.0 + float(np.linalg.norm(span))
    if closure_error > config.tau_closure * scale:
        raise ClosureError(closure_error, config.tau_closure * scale,
                           where="dual cell traversal")

    cell_vertex = {ci: ci for ci in range(nc)}
    vertices = [positions[ci] for ci in range(nc)]
    edges: list[DualEdgeGeom] = []
    for fi in range(complex_.num_faces):
        pairs = face_cells[fi]
        normal = complex_.faces[fi].normal
        if len(pairs) == 2:
            c_plus = next(c for c, s in pairs if s == +1)
            c_minus = next(c for c, s in pairs if s == -1)
            edges.append(DualEdgeGeom(
                face_index=fi, start=cell_vertex[c_plus],
                end=cell_vertex[c_minus], direction=normal,
                length=float(q_dual[fi]), boundary=False))
        elif len(pairs) == 1:
            cell, side = pairs[0]
            endpoint = positions[cell] + q_dual[fi] * side * normal
            vertices.append(endpoint)
            edges.append(DualEdgeGeom(
                face_index=fi, start=cell_vertex[cell],
                end=len(vertices) - 1, direction=normal,
                length=float(q_dual[fi]), boundary=True))
        else:
            raise DegenerateDualError(
                f"face {fi} belongs to {len(pairs)} cells; expected 1 or 2")

    areas = face_signed_areas(complex_)
    signs = tuple((initial_signs or {}).get(fi, COMPRESSION)
                  for fi in range(complex_.num_faces))
    members = _assign_forces(complex_, areas, areas, signs, config)
    return DualDiagram(
        vertices=np.array(vertices),
        cell_vertex=cell_vertex,
        edges=tuple(edges),
        member_forces=members,
        initial_areas=areas,
        initial_signs=signs,
        boundary_edges=tuple(dual_eq.boundary_edges),
        closure_error=closure_error,
    )


def _assign_forces(complex_: PolyhedralComplex, areas: np.ndarray,
                   initial_areas: np.ndarray, initial_signs: tuple[str, ...],
                   config: SolverConfig) -> tuple[MemberForce, ...]:
    members = []
    for fi in range(complex_.num_faces):
        area = float(areas[fi])
        perimeter = complex_.face_perimeter(fi)
        if abs(area) <= config.tau_zero * perimeter ** 2:
            sign = ZERO
        else:
            baseline = initial_signs[fi]
            flipped = area * float(initial_areas[fi]) < 0.0
            if flipped:
                sign = TENSION if baseline == COMPRESSION else COMPRESSION
            else:
                sign = baseline
        members.append(MemberForce(face_index=fi, magnitude=abs(area),
                                   sign=sign))
    return tuple(members)


def update_member_forces(complex_: PolyhedralComplex, dual: DualDiagram,
                         config: SolverConfig = DEFAULT_CONFIG) -> DualDiagram:
    """Re-derive member magnitudes and signs from the current face areas.

    The dual geometry is kept; a member flips between compression and
    tension when its face's signed area changed sign since the dual was
    built, and drops to zero force when the net area vanishes.
    """
    areas = face_signed_areas(complex_)
    members = _assign_forces(complex_, areas, dual.initial_areas,
                             dual.initial_signs, config)
    return replace(dual, member_forces=members)


def rebuild_dual(complex_: PolyhedralComplex, baseline: DualDiagram,
                 config: SolverConfig = DEFAULT_CONFIG) -> DualDiagram:
    """Rebuild the dual geometry from the current primal while keeping the
    baseline's sign bookkeeping."""
    rebuilt = build_dual(complex_, config)
    areas = face_signed_areas(complex_)
    members = _assign_forces(complex_, areas, baseline.initial_areas,
                             baseline.initial_signs, config)
    return replace(rebuilt, member_forces=members,
                   initial_areas=baseline.initial_areas,
                   initial_signs=baseline.initial_signs)
