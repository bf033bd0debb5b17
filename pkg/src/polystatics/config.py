# Solver-wide numeric parameters and policies.

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and policies shared by every stage of the solver.

    All tolerances are relative to a problem-dependent scale (matrix
    magnitude, right-hand-side norm, bounding-box diagonal or squared
    perimeter, depending on the check).
    """

    tau_planar: float = 1e-6    # face planarity, vs. bounding-box diagonal
    tau_pivot: float = 1e-10    # RREF zero threshold, vs. largest matrix entry
    rcond: float = 1e-12        # singular-value cutoff for the pseudo-inverse
    tau_solve: float = 1e-8     # solvability / residual test for linear systems
    tau_area: float = 1e-8      # achieved-area check, vs. squared perimeter
    tau_zero: float = 1e-8      # zero-force threshold, vs. squared perimeter
    tau_closure: float = 1e-7   # loop-closure error during vertex reconstruction
    nu_policy: str = "current"  # solution-family parameter: "current" | "ones"
    xi_scale: float = 1.0       # scale of the all-ones dual seed vector
    root_policy: str = "near"   # quadratic-root choice: "near" | "low" | "high"

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith(("tau_", "rcond")):
                value = getattr(self, f.name)
                if not value > 0:
                    raise ValueError(f"{f.name} must be positive, got {value!r}")
        if self.nu_policy not in ("current", "ones"):
            raise ValueError(f"unknown nu_policy {self.nu_policy!r}")
        if self.root_policy not in ("near", "low", "high"):
            raise ValueError(f"unknown root_policy {self.root_policy!r}")

    def replace(self, **overrides) -> "SolverConfig":
        from dataclasses import replace

        return replace(self, **overrides)


DEFAULT_CONFIG = SolverConfig()
