"""Dense linear-algebra kernel: RREF with pivot bookkeeping and the
Moore-Penrose solution family of a linear system."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig


@dataclass
class RrefResult:
    """Reduced row echelon form of an augmented system (B | b)."""

    rref_matrix: np.ndarray          # rows x (cols + 1), augmented
    pivot_columns: list[int]         # strictly increasing coefficient columns
    rank: int
    inconsistent: bool               # a row is (0 ... 0 | nonzero)

    @property
    def num_columns(self) -> int:
        return self.rref_matrix.shape[1] - 1

    def pivot_row_of(self, column: int) -> int:
        return self.pivot_columns.index(column)


def rref(matrix: np.ndarray, augment: np.ndarray | None = None,
         config: SolverConfig = DEFAULT_CONFIG) -> RrefResult:
    """Gauss-Jordan elimination with partial pivoting on (matrix | augment).

    Entries whose magnitude falls below ``tau_pivot`` times the largest
    absolute entry of the original matrix are treated as exact zeros, both
    when selecting pivots and when flagging inconsistent rows.
    """
    B = np.asarray(matrix, dtype=float)
    if B.ndim != 2 or B.size == 0:
        raise ValueError("rref requires a nonempty 2-D matrix")
    rows, cols = B.shape
    if augment is None:
        augment = np.zeros(rows)
    b = np.asarray(augment, dtype=float).reshape(rows)

    A = np.hstack([B, b[:, None]])
    scale = np.abs(B).max()
    if scale == 0.0:
        scale = max(np.abs(b).max(), 1.0)
    eps = config.tau_pivot * scale

    pivot_columns: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        # partial pivoting: largest magnitude, ties to the lowest row index
        pivot = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[pivot, c]) <= eps:
            A[r:, c][np.abs(A[r:, c]) <= eps] = 0.0
            continue
        if pivot != r:
            A[[r, pivot]] = A[[pivot, r]]
        A[r] = A[r] / A[r, c]
        A[r, c] = 1.0
        for i in range(rows):
            if i != r and A[i, c] != 0.0:
                A[i] -= A[i, c] * A[r]
                A[i, c] = 0.0
        pivot_columns.append(c)
        r += 1

    A[np.abs(A) <= eps] = 0.0
    inconsistent = any(
        np.all(A[i, :cols] == 0.0) and A[i, cols] != 0.0 for i in range(rows)
    )
    return RrefResult(
        rref_matrix=A,
        pivot_columns=pivot_columns,
        rank=len(pivot_columns),
        inconsistent=inconsistent,
    )


@dataclass
class PseudoInverseSolution:
    """Pseudo-inverse solve artifacts: particular solution and kernel projector."""

    particular: np.ndarray           # B+ b
    projector: np.ndarray            # Id - B+ B (projects onto the kernel)
    solvable: bool
    residual: float = 0.0
    pinv: np.ndarray = field(default=None, repr=False)


def pseudo_solve(B: np.ndarray, b: np.ndarray, nu: np.ndarray | None = None,
                 config: SolverConfig = DEFAULT_CONFIG,
                 ) -> tuple[np.ndarray, PseudoInverseSolution]:
    """Solve B q = b through the Moore-Penrose inverse.

    Returns ``B+ b + (Id - B+ B) nu``, which among all solutions is the one
    closest to ``nu`` in the 2-norm. Solvability is decided by the
    projection test ``||B B+ b - b|| <= tau_solve * (1 + ||b||)``; an
    unsolvable system is reported through the flag, not an exception.
    """
    B = np.asarray(B, dtype=float)
    b = np.asarray(b, dtype=float).reshape(B.shape[0])
    n = B.shape[1]
    if nu is None:
        nu = np.zeros(n)
    nu = np.asarray(nu, dtype=float).reshape(n)

    pinv = np.linalg.pinv(B, rcond=config.rcond)
    particular = pinv @ b
    projector = np.eye(n) - pinv @ B
    # symmetrize to kill round-off skew; the projector is symmetric in theory
    projector = 0.5 * (projector + projector.T)

    residual = float(np.linalg.norm(B @ particular - b))
    solvable = residual <= config.tau_solve * (1.0 + float(np.linalg.norm(b)))
    solution = particular + projector @ nu
    return solution, PseudoInverseSolution(
        particular=particular,
        projector=projector,
        solvable=solvable,
        residual=residual,
        pinv=pinv,
    )
