"""Polyhedral cell-complex model: vertices, oriented edges, face loops, cells.

The complex is immutable after load. Edge directions are canonical: they are
derived from the stored vertex order once, and every later solve manipulates
signed lengths against those directions. A negative length means the realized
edge runs opposite to its reference direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ClosureError, DegenerateFaceError, DocumentError, PlanarityError

_COLLINEAR_EPS = 1e-9


@dataclass(frozen=True)
class Face:
    """Closed loop of (edge_index, sign) pairs plus the chosen unit normal."""

    edge_loop: tuple[tuple[int, int], ...]
    normal: np.ndarray

    @property
    def edge_indices(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.edge_loop)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.edge_loop)

    def __len__(self) -> int:
        return len(self.edge_loop)


@dataclass(frozen=True)
class Cell:
    """List of (face_index, side); side +1 means the face normal points out."""

    face_loop: tuple[tuple[int, int], ...]

    @property
    def face_indices(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.face_loop)


@dataclass(frozen=True)
class EdgeGeometry:
    """Canonical unit direction and signed length per edge."""

    directions: np.ndarray   # (e, 3)
    lengths: np.ndarray      # (e,), signed

    def edge_vector(self, j: int) -> np.ndarray:
        return self.lengths[j] * self.directions[j]


@dataclass(frozen=True)
class PolyhedralComplex:
    vertices: np.ndarray            # (v, 3)
    edges: np.ndarray               # (e, 2) vertex indices, stored order = reference direction
    faces: tuple[Face, ...]
    cells: tuple[Cell, ...]
    geometry: EdgeGeometry

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    def bbox_diagonal(self) -> float:
        if len(self.vertices) == 0:
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(span))

    # face-local views -----------------------------------------------------

    def face_traversal_directions(self, face_index: int) -> np.ndarray:
        """Directions the loop actually walks: sign * canonical direction, (k, 3)."""
        face = self.faces[face_index]
        dirs = self.geometry.directions[list(face.edge_indices)]
        return dirs * np.array(face.signs, dtype=float)[:, None]

    def face_lengths(self, face_index: int) -> np.ndarray:
        """Signed lengths of the face's edges, in loop order."""
        face = self.faces[face_index]
        return self.geometry.lengths[list(face.edge_indices)].copy()

    def face_vertex_loop(self, face_index: int) -> list[int]:
        """Ordered vertex indices around the face (tail of each traversed edge)."""
        loop = []
        for e, s in self.faces[face_index].edge_loop:
            va, vb = self.edges[e]
            loop.append(int(va if s > 0 else vb))
        return loop

    def face_perimeter(self, face_index: int) -> float:
        return float(np.abs(self.face_lengths(face_index)).sum())

    def faces_of_edge(self, edge_index: int) -> list[int]:
        return [i for i, f in enumerate(self.faces)
                if edge_index in f.edge_indices]

    def cells_of_face(self, face_index: int) -> list[tuple[int, int]]:
        """(cell_index, side) pairs for every cell that uses the face."""
        out = []
        for ci, cell in enumerate(self.cells):
            for f, side in cell.face_loop:
                if f == face_index:
                    out.append((ci, side))
        return out

    # mutation-by-copy -----------------------------------------------------

    def with_lengths(self, new_lengths: np.ndarray,
                     config: SolverConfig = DEFAULT_CONFIG) -> "PolyhedralComplex":
        """New complex realizing the given signed lengths.

        Directions stay canonical; vertices are re-derived by traversal so
        the geometry matches the lengths. Raises ClosureError if the lengths
        do not close every loop.
        """
        new_lengths = np.asarray(new_lengths, dtype=float).reshape(self.num_edges)
        positions, max_err = reconstruct_vertices(self, new_lengths, config)
        return replace(
            self,
            vertices=positions,
            geometry=EdgeGeometry(self.geometry.directions, new_lengths.copy()),
        )

    def to_document(self) -> dict:
        return {
            "vertices": [[float(x) for x in p] for p in self.vertices],
            "edges": [[int(a), int(b)] for a, b in self.edges],
            "faces": [
                {"edges": [[int(e), int(s)] for e, s in f.edge_loop]}
                for f in self.faces
            ],
            "cells": [
                {"faces": [[int(f), int(s)] for f, s in c.face_loop]}
                for c in self.cells
            ],
        }


# ---------------------------------------------------------------------------
# loading / validation


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DocumentError(message)


def _face_normal(traversal_dirs: np.ndarray, face_index: int) -> np.ndarray:
    """Unit cross product of the first non-collinear pair of loop directions."""
    k = len(traversal_dirs)
    for t in range(k):
        cross = np.cross(traversal_dirs[t], traversal_dirs[(t + 1) % k])
        norm = np.linalg.norm(cross)
        if norm > _COLLINEAR_EPS:
            return cross / norm
    raise DegenerateFaceError(
        f"face {face_index}: all consecutive edge directions are collinear"
    )


def load_complex(document: dict,
                 config: SolverConfig = DEFAULT_CONFIG) -> PolyhedralComplex:
    """Parse and validate a mesh document into a PolyhedralComplex.

    Validates index ranges, loop closure, planarity and cell boundary
    closure; assigns face normals by the right-hand rule and caches the
    canonical edge geometry.
    """
    try:
        vertices = np.asarray(document["vertices"], dtype=float).reshape(-1, 3)
        raw_edges = document["edges"]
        raw_faces = document["faces"]
        raw_cells = document.get("cells", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed mesh document: {exc}") from exc

    nv = len(vertices)
    edges = np.zeros((len(raw_edges), 2), dtype=int)
    for j, pair in enumerate(raw_edges):
        va, vb = int(pair[0]), int(pair[1])
        _require(0 <= va < nv and 0 <= vb < nv,
                 f"edge {j} references missing vertex ({va}, {vb})")
        _require(va != vb, f"edge {j} is degenerate (vertex {va} twice)")
        edges[j] = (va, vb)

    vectors = vertices[edges[:, 1]] - vertices[edges[:, 0]]
    lengths = np.linalg.norm(vectors, axis=1)
    for j, ln in enumerate(lengths):
        _require(ln > 0.0, f"edge {j} has zero length")
    directions = vectors / lengths[:, None]
    geometry = EdgeGeometry(directions=directions, lengths=lengths)

    bbox = float(np.linalg.norm(vertices.max(axis=0) - vertices.min(axis=0))) if nv else 0.0
    planar_scale = bbox if bbox > 0 else 1.0

    faces = []
    for fi, rf in enumerate(raw_faces):
        try:
            loop = tuple((int(e), int(s)) for e, s in rf["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"face {fi}: malformed edge loop: {exc}") from exc
        _require(len(loop) >= 3, f"face {fi} has fewer than 3 edges")
        for e, s in loop:
            _require(0 <= e < len(edges), f"face {fi} references missing edge {e}")
            _require(s in (1, -1), f"face {fi}: edge {e} has sign {s}, expected +/-1")

        # loop closure: head of each traversed edge is the tail of the next
        k = len(loop)
        for t in range(k):
            e, s = loop[t]
            head = edges[e][1] if s > 0 else edges[e][0]
            e2, s2 = loop[(t + 1) % k]
            tail_next = edges[e2][0] if s2 > 0 else edges[e2][1]
            _require(head == tail_next,
                     f"face {fi}: loop breaks between edge {e} and edge {e2}")

        traversal = directions[[e for e, _ in loop]] * \
            np.array([s for _, s in loop], dtype=float)[:, None]
        normal = _face_normal(traversal, fi)

        # planarity against the best-fit plane of the loop vertices
        vloop = []
        for e, s in loop:
            va, vb = edges[e]
            vloop.append(va if s > 0 else vb)
        pts = vertices[vloop]
        centered = pts - pts.mean(axis=0)
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        deviation = float(np.abs(centered @ vt[-1]).max())
        if deviation > config.tau_planar * planar_scale:
            raise PlanarityError(fi, deviation / planar_scale, config.tau_planar)

        faces.append(Face(edge_loop=loop, normal=normal))

    cells = []
    for ci, rc in enumerate(raw_cells):
        try:
            floop = tuple((int(f), int(s)) for f, s in rc["faces"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"cell {ci}: malformed face loop: {exc}") from exc
        for f, s in floop:
            _require(0 <= f < len(faces), f"cell {ci} references missing face {f}")
            _require(s in (1, -1), f"cell {ci}: face {f} has side {s}, expected +/-1")

        # boundary closure: each edge of the cell is shared by exactly two faces
        edge_use: dict[int, int] = {}
        for f, _ in floop:
            for e in faces[f].edge_indices:
                edge_use[e] = edge_use.get(e, 0) + 1
        bad = [e for e, n in edge_use.items() if n != 2]
        _require(not bad,
                 f"cell {ci} boundary is not closed at edges {sorted(bad)}")
        cells.append(Cell(face_loop=floop))

    # a face may separate at most two cells, seen from opposite sides
    seen_sides: dict[int, set[int]] = {}
    for ci, cell in enumerate(cells):
        for f, s in cell.face_loop:
            sides = seen_sides.setdefault(f, set())
            _require(s not in sides,
                     f"face {f} is used with side {s} by two cells")
            sides.add(s)

    return PolyhedralComplex(
        vertices=vertices,
        edges=edges,
        faces=tuple(faces),
        cells=tuple(cells),
        geometry=geometry,
    )


def load_document(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# realizing edge lengths as vertex positions


def reconstruct_vertices(complex_: PolyhedralComplex, new_lengths: np.ndarray,
                         config: SolverConfig = DEFAULT_CONFIG,
                         ) -> tuple[np.ndarray, float]:
    """Assign positions by walking edges from the lowest-index root vertex.

    Each connected component is anchored at its lowest-index vertex, kept at
    its original position. Returns the positions and the maximum closure
    error over all edges; raises ClosureError when that error exceeds
    ``tau_closure`` relative to the reconstructed bounding box.
    """
    q = np.asarray(new_lengths, dtype=float).reshape(complex_.num_edges)
    dirs = complex_.geometry.directions
    nv = complex_.num_vertices

    adjacency: list[list[tuple[int, int, int]]] = [[] for _ in range(nv)]
    for j, (va, vb) in enumerate(complex_.edges):
        adjacency[va].append((int(vb), j, +1))
        adjacency[vb].append((int(va), j, -1))
    for neighbors in adjacency:
        neighbors.sort()

    positions = np.zeros((nv, 3))
    visited = np.zeros(nv, dtype=bool)
    for root in range(nv):
        if visited[root]:
            continue
        positions[root] = complex_.vertices[root]
        visited[root] = True
        queue = [root]
        while queue:
            a = queue.pop(0)
            for b, j, orient in adjacency[a]:
                if visited[b]:
                    continue
                positions[b] = positions[a] + orient * q[j] * dirs[j]
                visited[b] = True
                queue.append(b)

    errors = np.linalg.norm(
        positions[complex_.edges[:, 1]] - positions[complex_.edges[:, 0]]
        - q[:, None] * dirs, axis=1)
    max_err = float(errors.max()) if len(errors) else 0.0

    span = positions.max(axis=0) - positions.min(axis=0) if nv else np.zeros(3)
    scale = 1.0 + float(np.linalg.norm(span))
    if max_err > config.tau_closure * scale:
        worst = int(np.argmax(errors))
        raise ClosureError(max_err, config.tau_closure * scale,
                           where=f"edge {worst}")
    return positions, max_err
