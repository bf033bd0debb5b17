# Exception hierarchy for model loading and solving.

from __future__ import annotations


class PolystaticsError(Exception):
    """Base class for all package errors."""


class DocumentError(PolystaticsError):
    """Malformed or inconsistent input document (bad indices, open loops...)."""


class PlanarityError(DocumentError):
    """A face deviates from its best-fit plane beyond tolerance."""

    def __init__(self, face_index: int, deviation: float, tolerance: float):
        self.face_index = face_index
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"face {face_index} is non-planar: relative deviation "
            f"{deviation:.3e} exceeds tolerance {tolerance:.3e}"
        )


class ClosureError(PolystaticsError):
    """Edge lengths do not close every face loop; geometry is inconsistent."""

    def __init__(self, max_error: float, tolerance: float, where: str = ""):
        self.max_error = max_error
        self.tolerance = tolerance
        detail = f" ({where})" if where else ""
        super().__init__(
            f"loop closure error {max_error:.3e} exceeds tolerance "
            f"{tolerance:.3e}{detail}"
        )


class DegenerateFaceError(PolystaticsError):
    """A face whose normal or in-plane basis cannot be formed."""


class NoSolutionForArea(PolystaticsError):
    """The quadratic for the target area has no real root.

    Carries the coefficients so callers can report them and prompt the
    user for a different target.
    """

    def __init__(self, face_index: int, a: float, b: float, c: float):
        self.face_index = face_index
        self.a = a
        self.b = b
        self.c = c
        self.discriminant = b * b - 4.0 * a * c
        super().__init__(
            f"no real edge length reaches the target area on face {face_index}: "
            f"a={a:.9g}, b={b:.9g}, c={c:.9g}, discriminant={self.discriminant:.9g}"
        )


class OverConstrainedError(PolystaticsError):
    """The global update system B_p q = b_p has no solution."""

    def __init__(self, message: str, recent_edges=None):
        self.recent_edges = list(recent_edges or [])
        super().__init__(message)


class DegenerateDualError(PolystaticsError):
    """The dual equilibrium system only admits the zero solution."""


class PipelineStepError(PolystaticsError):
    """A sequential solve failed; carries the partial state and step info."""

    def __init__(self, step_index: int, face_index: int, kind: str,
                 cause: Exception, state):
        self.step_index = step_index
        self.face_index = face_index
        self.kind = kind  # "cgdof" | "no_solution" | "over_constrained"
        self.cause = cause
        self.state = state
        super().__init__(
            f"step {step_index} (face {face_index}) failed [{kind}]: {cause}"
        )
