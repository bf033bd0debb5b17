"""Homogeneous closure systems: per-face (in-plane), global, and dual.

Face closure is expressed in an orthonormal in-plane basis, giving the two
independent rows the per-face solver works with. The global system keeps
all three coordinates per face. The dual system has one 3-row block per
primal edge whose fan of attached faces closes through cells; edges whose
fan reaches the outside are boundary edges and stay unconstrained.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFaceError, DocumentError
from .model import EdgeGeometry, Face, PolyhedralComplex

_AXES = np.eye(3)


@dataclass(frozen=True)
class FaceEquilibrium:
    matrix: np.ndarray   # (2, k): in-plane components of the traversal directions
    basis: np.ndarray    # (2, 3): the orthonormal in-plane basis rows


@dataclass(frozen=True)
class GlobalEquilibrium:
    matrix: np.ndarray   # (3f, e): signed direction components per face block


@dataclass(frozen=True)
class DualEquilibrium:
    matrix: np.ndarray            # (3e, f): signed face normals per edge block
    interior_edges: list[int]     # edges whose face fan closes through cells
    boundary_edges: list[int]     # edges whose fan reaches the outside
    fan_faces: dict = field(default_factory=dict)  # edge -> cyclic (face, sign) list


def in_plane_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the plane orthogonal to ``normal``.

    The first vector is the coordinate axis after the dominant normal
    coordinate, projected into the plane; the second completes it with
    ``n x b1``. For a +z normal this yields the x/y axes, matching the
    planar convention used in worked equilibrium examples.
    """
    normal = np.asarray(normal, dtype=float).reshape(3)
    dominant = int(np.argmax(np.abs(normal)))
    if abs(normal[dominant]) < 1e-12:
        raise DegenerateFaceError(f"cannot build a basis for normal {normal}")
    axis = _AXES[(dominant + 1) % 3]
    b1 = axis - (axis @ normal) * normal
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(normal, b1)
    return np.vstack([b1, b2])


def face_equilibrium(face: Face, geometry: EdgeGeometry) -> FaceEquilibrium:
    """2 x k closure matrix of one face in its in-plane basis.

    Columns follow the face loop; entries are basis components of the
    traversal directions, so E_f q = 0 states that the loop closes.
    """
    dirs = geometry.directions[list(face.edge_indices)]
    traversal = dirs * np.array(face.signs, dtype=float)[:, None]
    basis = in_plane_basis(face.normal)
    return FaceEquilibrium(matrix=basis @ traversal.T, basis=basis)


def global_equilibrium(complex_: PolyhedralComplex) -> GlobalEquilibrium:
    """3f x e closure matrix over all faces in global coordinates."""
    e = complex_.num_edges
    f = complex_.num_faces
    E = np.zeros((3 * f, e))
    for fi, face in enumerate(complex_.faces):
        for edge, sign in face.edge_loop:
            E[3 * fi:3 * fi + 3, edge] += sign * complex_.geometry.directions[edge]
    return GlobalEquilibrium(matrix=E)


# ---------------------------------------------------------------------------
# dual equilibrium: closure of the face fan around each edge


def _fan_walk(complex_: PolyhedralComplex, edge: int,
              attached: list[int]) -> tuple[bool, list[tuple[int, int]]]:
    """Walk the faces around an edge through shared cells.

    Returns (closed, crossings) where crossings are (face, sign) pairs: the
    sign is +1 when the walk crosses the face from its side=+1 cell to its
    side=-1 cell, i.e. along the face normal. A walk that cannot continue
    through a cell has reached the outside and the fan is open.
    """
    # cells touching this edge, each contributing exactly two member faces
    cell_pair: dict[int, list[int]] = {}
    for ci, cell in enumerate(complex_.cells):
        members = [f for f in cell.face_indices
                   if edge in complex_.faces[f].edge_indices]
        if not members:
            continue
        if len(members) != 2:
            raise DocumentError(
                f"cell {ci} has {len(members)} faces on edge {edge}, expected 2")
        cell_pair[ci] = members

    face_cells: dict[int, list[int]] = {f: [] for f in attached}
    for ci, pair in cell_pair.items():
        for f in pair:
            face_cells[f].append(ci)

    start = min(attached)
    crossings: list[tuple[int, int]] = []
    visited_cells: set[int] = set()
    face = start
    prev_cell: int | None = None
    for _ in range(len(attached) + 1):
        candidates = [c for c in face_cells[face]
                      if c != prev_cell and c not in visited_cells]
        if not candidates:
            return False, crossings      # reached the outside: open fan
        cell = min(candidates)
        visited_cells.add(cell)
        fa, fb = cell_pair[cell]
        nxt = fb if fa == face else fa
        side = dict(complex_.cells[cell].face_loop)[nxt]
        # leaving `cell` through `nxt`: along the normal when the normal
        # points out of this cell
        crossings.append((nxt, +1 if side == +1 else -1))
        if nxt == start:
            return len(crossings) == len(attached), crossings
        prev_cell = cell
        face = nxt
    return False, crossings


def dual_equilibrium(complex_: PolyhedralComplex) -> DualEquilibrium:
    """3e x f closure matrix of the reciprocal diagram.

    Each interior edge contributes the closure of its dual face: the signed
    sum of attached face normals weighted by the dual edge lengths.
    """
    e = complex_.num_edges
    f = complex_.num_faces
    E = np.zeros((3 * e, f))
    interior: list[int] = []
    boundary: list[int] = []
    fans: dict[int, list[tuple[int, int]]] = {}

    edge_faces: dict[int, list[int]] = {j: [] for j in range(e)}
    for fi, face in enumerate(complex_.faces):
        for edge in set(face.edge_indices):
            edge_faces[edge].append(fi)

    for edge in range(e):
        attached = edge_faces[edge]
        if len(attached) < 2 or not complex_.cells:
            boundary.append(edge)
            continue
        closed, crossings = _fan_walk(complex_, edge, attached)
        fans[edge] = crossings
        if not closed:
            boundary.append(edge)
            continue
        interior.append(edge)
        for face_index, sign in crossings:
            normal = complex_.faces[face_index].normal
            E[3 * edge:3 * edge + 3, face_index] += sign * normal
    return DualEquilibrium(matrix=E, interior_edges=interior,
                           boundary_edges=boundary, fan_faces=fans)
