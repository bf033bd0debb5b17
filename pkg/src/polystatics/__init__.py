"""Polyhedral graphic statics: constrained face areas and edge lengths on
reciprocal force/form diagrams."""

from .config import DEFAULT_CONFIG, SolverConfig
from .dual import (COMPRESSION, TENSION, ZERO, DualDiagram, MemberForce,
                   build_dual, face_signed_areas, update_member_forces)
from .equilibrium import (DualEquilibrium, FaceEquilibrium, GlobalEquilibrium,
                          dual_equilibrium, face_equilibrium, global_equilibrium)
from .errors import (ClosureError, DegenerateDualError, DegenerateFaceError,
                     DocumentError, NoSolutionForArea, OverConstrainedError,
                     PipelineStepError, PlanarityError, PolystaticsError)
from .face_area import (AreaMatrix, DerivationTrace, area_matrix_from_directions,
                        build_area_matrix, derivation_trace, signed_area)
from .face_solver import (ConstraintSystem, Dependence, EdgeClassification,
                          FaceSolveResult, InconsistentConstraintsError,
                          QuadraticProblem, analyze_constraints,
                          extract_dependence, solve_face, solve_target_area)
from .model import (Cell, EdgeGeometry, Face, PolyhedralComplex, load_complex,
                    load_document, reconstruct_vertices)
from .numerics import PseudoInverseSolution, RrefResult, pseudo_solve, rref
from .poly_solver import (ConstraintScript, FaceTarget, PolySolveState,
                          StepRecord, parse_constraints, run_pipeline,
                          update_polyhedron)

__version__ = "0.1.0"
