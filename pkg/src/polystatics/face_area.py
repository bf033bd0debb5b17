"""Quadratic area form of a planar face built from edge directions only.

For a face with k edges in cyclic order, the signed area is a quadratic
form (1/2k) q^T M q in the signed edge lengths q. The coefficients depend
only on the unit traversal directions and the chosen face normal, so the
same matrix stays valid while lengths are manipulated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFaceError
from .model import EdgeGeometry, Face

_NORMAL_COORD_EPS = 1e-9


@dataclass(frozen=True)
class AreaMatrix:
    """Quadratic form of one face.

    ``coeffs`` is the raw cyclic coefficient matrix; ``M`` is its symmetric
    part, which represents the same form and is what the solver uses.
    """

    M: np.ndarray            # (k, k), symmetric, zero diagonal
    coeffs: np.ndarray       # (k, k), raw pre-symmetrization coefficients
    eta: np.ndarray          # (k, k) direction-pair ratios, dimensionless
    face_index: int
    vertex_count: int

    @property
    def k(self) -> int:
        return self.vertex_count


def _eta_ratio(cross: np.ndarray, normal: np.ndarray) -> float:
    """Ratio between a cross product and the normal, via the first usable
    normal coordinate."""
    for axis in range(3):
        if abs(normal[axis]) > _NORMAL_COORD_EPS:
            return float(cross[axis] / normal[axis])
    raise DegenerateFaceError("face normal has no usable coordinate")


def area_matrix_from_directions(directions: np.ndarray, normal: np.ndarray,
                                face_index: int = -1) -> AreaMatrix:
    """Area matrix from the unit traversal directions of a face loop."""
    directions = np.asarray(directions, dtype=float)
    normal = np.asarray(normal, dtype=float).reshape(3)
    k = len(directions)
    if k < 3:
        raise DegenerateFaceError(f"face {face_index}: needs at least 3 edges")
    if not np.any(np.abs(normal) > _NORMAL_COORD_EPS):
        raise DegenerateFaceError(f"face {face_index}: degenerate normal {normal}")

    axis = next(c for c in range(3) if abs(normal[c]) > _NORMAL_COORD_EPS)
    crosses = np.cross(directions[:, None, :], directions[None, :, :])
    eta = crosses[:, :, axis] / normal[axis]
    np.fill_diagonal(eta, 0.0)

    i_idx, j_idx = np.indices((k, k))
    coeffs = np.where(j_idx > i_idx, (k - j_idx + i_idx - 1) * eta,
                      np.where(j_idx < i_idx, (i_idx - j_idx - 1) * eta, 0.0))
    M = 0.5 * (coeffs + coeffs.T)
    return AreaMatrix(M=M, coeffs=coeffs, eta=eta,
                      face_index=face_index, vertex_count=k)


def build_area_matrix(face: Face, geometry: EdgeGeometry,
                      face_index: int = -1) -> AreaMatrix:
    """Area matrix of a face against its stored normal."""
    dirs = geometry.directions[list(face.edge_indices)]
    traversal = dirs * np.array(face.signs, dtype=float)[:, None]
    return area_matrix_from_directions(traversal, face.normal, face_index)


def signed_area(M: AreaMatrix, q: np.ndarray) -> float:
    """Signed area (1/2k) q^T M q; sign is relative to the face normal.

    Self-intersecting loops yield the net of their enclosed signed regions,
    no special casing needed.
    """
    q = np.asarray(q, dtype=float).reshape(M.k)
    return float(q @ M.M @ q) / (2.0 * M.k)


# ---------------------------------------------------------------------------
# optional diagnostics: the mu / h / H quantities behind the coefficients


@dataclass(frozen=True)
class DerivationTrace:
    mu: np.ndarray        # (k, k) cross-product ratios, area units
    h: np.ndarray         # (k, k) signed heights: h[i, j] = distance of v_j from edge i
    H: np.ndarray         # (k,) average height per edge
    centroid: np.ndarray  # (3,) mean of the loop vertices


def derivation_trace(directions: np.ndarray, lengths: np.ndarray,
                     normal: np.ndarray,
                     start_point: np.ndarray | None = None) -> DerivationTrace:
    """Recompute the per-vertex heights and average heights of the derivation.

    Only for validation and debugging; solving never needs these.
    """
    directions = np.asarray(directions, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    normal = np.asarray(normal, dtype=float).reshape(3)
    k = len(directions)
    edge_vectors = lengths[:, None] * directions

    amat = area_matrix_from_directions(directions, normal)
    eta = amat.eta

    mu = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i != j:
                mu[i, j] = _eta_ratio(np.cross(edge_vectors[i], edge_vectors[j]),
                                      normal)

    # h[i, (i+l) % k] accumulates eta terms along the loop; the two vertices
    # on edge i itself have zero height
    h = np.zeros((k, k))
    for i in range(k):
        acc = 0.0
        for m in range(1, k - 1):
            acc += eta[i, (i + m) % k] * lengths[(i + m) % k]
            h[i, (i + m + 1) % k] = acc
        h[i, i] = 0.0
        h[i, (i + 1) % k] = 0.0
    H = h.sum(axis=1) / k

    if start_point is None:
        start_point = np.zeros(3)
    pts = np.cumsum(np.vstack([start_point, edge_vectors[:-1]]), axis=0)
    return DerivationTrace(mu=mu, h=h, H=H, centroid=pts.mean(axis=0))
