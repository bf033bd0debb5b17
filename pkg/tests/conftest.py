from __future__ import annotations

import numpy as np
import pytest

from polystatics import load_complex

# Unit directions of the irregular pentagon used across the solver tests,
# listed edge by edge around the loop (x, y components; the face lies in
# the z = 0 plane).
PENTAGON_DIRECTIONS_2D = np.array([
    [0.289, -0.957],
    [1.0, 0.0],
    [0.776, 0.631],
    [-0.734, 0.679],
    [-0.925, -0.38],
])

PENTAGON_FIXED_EDGE = 4
PENTAGON_FIXED_LENGTH = 41.78


def pentagon_directions() -> np.ndarray:
    """Unit-normalized 3D directions of the pentagon loop."""
    dirs = np.zeros((5, 3))
    dirs[:, :2] = PENTAGON_DIRECTIONS_2D
    return dirs / np.linalg.norm(dirs, axis=1)[:, None]


def pentagon_document(q2: float = 25.0, q3: float = 8.0,
                      q4: float = PENTAGON_FIXED_LENGTH) -> dict:
    """Single pentagon face closed exactly for the chosen free lengths."""
    U = pentagon_directions()
    A = np.column_stack([U[0, :2], U[1, :2]])
    rhs = -(q2 * U[2, :2] + q3 * U[3, :2] + q4 * U[4, :2])
    q0, q1 = np.linalg.solve(A, rhs)
    lengths = np.array([q0, q1, q2, q3, q4])
    assert (lengths > 0).all(), "fixture lengths must realize a loaded polygon"

    vertices = np.zeros((5, 3))
    for i in range(4):
        vertices[i + 1] = vertices[i] + lengths[i] * U[i]
    return {
        "vertices": vertices.tolist(),
        "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 0]],
        "faces": [{"edges": [[j, 1] for j in range(5)]}],
        "cells": [],
    }


def prism_document(base_xy: np.ndarray, height: float = 10.0) -> dict:
    """Extrude a counter-clockwise simple polygon into a one-cell prism.

    Edge order: k bottom loop edges, k top loop edges, k verticals.
    Face order: bottom (normal down), top (normal up), then the k sides.
    """
    base_xy = np.asarray(base_xy, dtype=float)
    k = len(base_xy)
    bottom = np.column_stack([base_xy, np.zeros(k)])
    top = np.column_stack([base_xy, np.full(k, height)])
    vertices = np.vstack([bottom, top])

    edges = []
    edges += [[i, (i + 1) % k] for i in range(k)]               # bottom
    edges += [[k + i, k + (i + 1) % k] for i in range(k)]       # top
    edges += [[i, k + i] for i in range(k)]                     # verticals

    faces = [
        {"edges": [[k - 1 - t, -1] for t in range(k)]},         # bottom, down
        {"edges": [[k + t, 1] for t in range(k)]},              # top, up
    ]
    for i in range(k):
        faces.append({"edges": [
            [i, 1],                      # bottom edge i
            [2 * k + (i + 1) % k, 1],    # up the far vertical
            [k + i, -1],                 # top edge i, reversed
            [2 * k + i, -1],             # down the near vertical
        ]})
    cells = [{"faces": [[f, 1] for f in range(len(faces))]}]
    return {"vertices": vertices.tolist(), "edges": edges, "faces": faces,
            "cells": cells}


def pentagon_prism_document(height: float = 10.0) -> dict:
    doc = pentagon_document()
    base = np.array(doc["vertices"])[:, :2]
    return prism_document(base, height)


def tetra_document() -> dict:
    return {
        "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
        "faces": [
            {"edges": [[1, 1], [3, -1], [0, -1]]},   # z=0, normal -z
            {"edges": [[2, 1], [5, -1], [1, -1]]},   # x=0, normal -x
            {"edges": [[0, 1], [4, 1], [2, -1]]},    # y=0, normal -y
            {"edges": [[3, 1], [5, 1], [4, -1]]},    # slant, normal (1,1,1)
        ],
        "cells": [{"faces": [[0, 1], [1, 1], [2, 1], [3, 1]]}],
    }


def box_grid_document(xs, ys, zs) -> dict:
    """Axis-aligned grid of brick cells with planes at xs, ys, zs."""
    xs, ys, zs = list(xs), list(ys), list(zs)
    nx, ny, nz = len(xs) - 1, len(ys) - 1, len(zs) - 1

    def vid(i, j, k):
        return (i * (ny + 1) + j) * (nz + 1) + k

    vertices = [[xs[i], ys[j], zs[k]]
                for i in range(nx + 1) for j in range(ny + 1)
                for k in range(nz + 1)]

    edges = []
    edge_id: dict[tuple[int, int], int] = {}

    def add_edge(a, b):
        key = (a, b)
        if key not in edge_id:
            edge_id[key] = len(edges)
            edges.append([a, b])
        return edge_id[key]

    for i in range(nx + 1):
        for j in range(ny + 1):
            for k in range(nz + 1):
                if i < nx:
                    add_edge(vid(i, j, k), vid(i + 1, j, k))
                if j < ny:
                    add_edge(vid(i, j, k), vid(i, j + 1, k))
                if k < nz:
                    add_edge(vid(i, j, k), vid(i, j, k + 1))

    faces = []
    face_id: dict[tuple[str, int, int, int], int] = {}

    def add_face(kind, i, j, k, loop):
        face_id[(kind, i, j, k)] = len(faces)
        faces.append({"edges": loop})

    # z-normal faces: traversal +x then +y gives a +z normal
    for k in range(nz + 1):
        for i in range(nx):
            for j in range(ny):
                loop = [
                    [add_edge(vid(i, j, k), vid(i + 1, j, k)), 1],
                    [add_edge(vid(i + 1, j, k), vid(i + 1, j + 1, k)), 1],
                    [add_edge(vid(i, j + 1, k), vid(i + 1, j + 1, k)), -1],
                    [add_edge(vid(i, j, k), vid(i, j + 1, k)), -1],
                ]
                add_face("z", i, j, k, loop)
    # x-normal faces: +y then +z
    for i in range(nx + 1):
        for j in range(ny):
            for k in range(nz):
                loop = [
                    [add_edge(vid(i, j, k), vid(i, j + 1, k)), 1],
                    [add_edge(vid(i, j + 1, k), vid(i, j + 1, k + 1)), 1],
                    [add_edge(vid(i, j, k + 1), vid(i, j + 1, k + 1)), -1],
                    [add_edge(vid(i, j, k), vid(i, j, k + 1)), -1],
                ]
                add_face("x", i, j, k, loop)
    # y-normal faces: +z then +x
    for j in range(ny + 1):
        for i in range(nx):
            for k in range(nz):
                loop = [
                    [add_edge(vid(i, j, k), vid(i, j, k + 1)), 1],
                    [add_edge(vid(i, j, k + 1), vid(i + 1, j, k + 1)), 1],
                    [add_edge(vid(i + 1, j, k), vid(i + 1, j, k + 1)), -1],
                    [add_edge(vid(i, j, k), vid(i + 1, j, k)), -1],
                ]
                add_face("y", i, j, k, loop)

    cells = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                cells.append({"faces": [
                    [face_id[("x", i, j, k)], -1],
                    [face_id[("x", i + 1, j, k)], 1],
                    [face_id[("y", i, j, k)], -1],
                    [face_id[("y", i, j + 1, k)], 1],
                    [face_id[("z", i, j, k)], -1],
                    [face_id[("z", i, j, k + 1)], 1],
                ]})
    return {"vertices": vertices, "edges": edges, "faces": faces,
            "cells": cells}


def unit_cube_document() -> dict:
    return box_grid_document([0, 1], [0, 1], [0, 1])


def two_cell_box_document() -> dict:
    return box_grid_document([0, 1, 2], [0, 1], [0, 1])


@pytest.fixture
def unit_cube():
    return load_complex(unit_cube_document())


@pytest.fixture
def pentagon():
    return load_complex(pentagon_document())


@pytest.fixture
def pentagon_prism():
    return load_complex(pentagon_prism_document())


@pytest.fixture
def tetra():
    return load_complex(tetra_document())


@pytest.fixture
def two_cell_box():
    return load_complex(two_cell_box_document())


@pytest.fixture
def cube_grid():
    return load_complex(box_grid_document([0, 1.0, 2.5], [0, 1.2, 2.0], [0, 1.4]))
