from __future__ import annotations

import numpy as np
import pytest

from polystatics import (ConstraintScript, DocumentError, FaceTarget,
                         OverConstrainedError, PipelineStepError,
                         build_area_matrix, face_signed_areas,
                         global_equilibrium, parse_constraints, run_pipeline,
                         signed_area, update_polyhedron)

from conftest import PENTAGON_FIXED_LENGTH


def empty_script(**kwargs) -> ConstraintScript:
    base = {"fixed_edges": {}, "face_targets": (), "order": None}
    base.update(kwargs)
    return ConstraintScript(**base)


def test_update_without_constraints_is_identity(pentagon_prism):
    lengths, residual = update_polyhedron(pentagon_prism, {})
    np.testing.assert_allclose(lengths, pentagon_prism.geometry.lengths,
                               atol=1e-9)
    assert residual < 1e-9


def test_update_cube_with_one_fixed_edge_vs_oracle(unit_cube):
    scipy_linalg = pytest.importorskip("scipy.linalg")
    lengths, _ = update_polyhedron(unit_cube, {0: 2.0})
    assert lengths[0] == 2.0
    Ep = global_equilibrium(unit_cube).matrix
    assert np.linalg.norm(Ep @ lengths) < 1e-8

    # oracle: explicit least-change solve over the stacked system's kernel
    L = np.zeros((1, 12))
    L[0, 0] = 1.0
    B = np.vstack([Ep, L])
    b = np.concatenate([np.zeros(18), [2.0]])
    nu = unit_cube.geometry.lengths
    particular = np.linalg.lstsq(B, b, rcond=None)[0]
    N = scipy_linalg.null_space(B)
    oracle = particular + (N @ (N.T @ (nu - particular)) if N.size else 0.0)
    np.testing.assert_allclose(lengths, oracle, atol=1e-7)


def test_update_ones_policy_gives_uniform_cube(unit_cube):
    lengths, _ = update_polyhedron(unit_cube, {0: 2.0}, nu_policy="ones")
    # the cube's closure forces parallel edges equal, so fixing one edge
    # drags its three parallels to the same length
    dirs = unit_cube.geometry.directions
    parallel = [j for j in range(12) if abs(dirs[j] @ dirs[0]) > 0.99]
    for j in parallel:
        assert lengths[j] == pytest.approx(2.0, abs=1e-9)


def test_update_detects_over_constraint(unit_cube):
    dirs = unit_cube.geometry.directions
    parallel = [j for j in range(12) if abs(dirs[j] @ dirs[0]) > 0.99]
    with pytest.raises(OverConstrainedError):
        update_polyhedron(unit_cube, {parallel[0]: 1.0, parallel[1]: 2.0})


def test_empty_script_is_a_no_op(pentagon_prism):
    state = run_pipeline(pentagon_prism, empty_script())
    assert state.complex is pentagon_prism
    assert state.step_log == []
    assert state.fixed_edges == {}


def test_fixed_point_pipeline_keeps_lengths(pentagon_prism):
    top = 1
    M = build_area_matrix(pentagon_prism.faces[top], pentagon_prism.geometry,
                          top)
    area = signed_area(M, pentagon_prism.face_lengths(top))
    script = empty_script(face_targets=(FaceTarget(face=top, area=area),))
    state = run_pipeline(pentagon_prism, script)
    np.testing.assert_allclose(state.complex.geometry.lengths,
                               pentagon_prism.geometry.lengths, atol=1e-9)
    assert len(state.step_log) == 1


def test_zero_area_prism_face_becomes_self_intersecting(pentagon_prism):
    # fix one top-pentagon edge and drive the top face to zero net area
    top = 1
    fixed_edge = pentagon_prism.faces[top].edge_loop[4][0]
    script = empty_script(
        fixed_edges={fixed_edge: PENTAGON_FIXED_LENGTH},
        face_targets=(FaceTarget(face=top, area=0.0),))
    state = run_pipeline(pentagon_prism, script)

    lengths = state.complex.geometry.lengths
    assert (lengths < 0).any()             # crossed loop needs negative lengths
    areas = face_signed_areas(state.complex)
    per = state.complex.face_perimeter(top)
    assert abs(areas[top]) <= 1e-8 * (1 + per ** 2)
    assert lengths[fixed_edge] == PENTAGON_FIXED_LENGTH
    Ep = global_equilibrium(state.complex).matrix
    assert np.linalg.norm(Ep @ lengths) < 1e-8 * (1 + np.linalg.norm(lengths))
    # the step log records the quadratic's two distinct solutions
    assert len(state.step_log[0].roots) == 2


def test_frozen_edges_and_areas_survive_later_steps(pentagon_prism):
    top, side = 1, 3
    fixed_edge = pentagon_prism.faces[top].edge_loop[4][0]
    script = empty_script(
        fixed_edges={fixed_edge: PENTAGON_FIXED_LENGTH},
        face_targets=(FaceTarget(face=top, area=0.0),
                      FaceTarget(face=side, area=12.0)))
    state = run_pipeline(pentagon_prism, script)
    assert len(state.step_log) == 2

    # every edge frozen at step 0 is still exact after step 1
    step0_frozen = {e: state.step_log[0].post_lengths[e]
                    for e in pentagon_prism.faces[top].edge_indices}
    for e, value in step0_frozen.items():
        assert state.complex.geometry.lengths[e] == value
    areas = face_signed_areas(state.complex)
    per_top = state.complex.face_perimeter(top)
    assert abs(areas[top] - 0.0) <= 1e-8 * (1 + per_top ** 2)
    per_side = state.complex.face_perimeter(side)
    assert abs(areas[side] - 12.0) <= 1e-8 * (1 + per_side ** 2)
    # the fixed-edge set only ever grows
    assert set(script.fixed_edges) <= set(state.fixed_edges)


def test_two_face_script_collapses_internal_face(two_cell_box):
    internal = next(i for i in range(two_cell_box.num_faces)
                    if len(two_cell_box.cells_of_face(i)) == 2)
    external = next(i for i in range(two_cell_box.num_faces)
                    if len(two_cell_box.cells_of_face(i)) == 1
                    and i != internal)
    script = empty_script(face_targets=(
        FaceTarget(face=external, area=0.0),
        FaceTarget(face=internal, area=0.0)))
    state = run_pipeline(two_cell_box, script)
    areas = face_signed_areas(state.complex)
    assert abs(areas[internal]) < 1e-8
    assert abs(areas[external]) < 1e-8
    # the rectangular internal face collapses onto a line: of its four
    # corners only two distinct positions remain
    loop = state.complex.face_vertex_loop(internal)
    pts = state.complex.vertices[loop]
    distinct = []
    for p in pts:
        if not any(np.linalg.norm(p - d) < 1e-6 for d in distinct):
            distinct.append(p)
    assert len(distinct) == 2


def test_pipeline_failure_carries_partial_state(pentagon_prism):
    top = 1
    e_fix = pentagon_prism.faces[top].edge_loop[4][0]
    bottom_face = pentagon_prism.faces[0]
    tetra_like_bad = {e_fix: PENTAGON_FIXED_LENGTH}
    script = empty_script(
        fixed_edges=tetra_like_bad,
        face_targets=(FaceTarget(face=top, area=0.0),
                      FaceTarget(face=0, area=1e9)))
    # the second face inherits frozen edges from the first; a huge area is
    # then out of reach, since the bottom face is already fully determined
    with pytest.raises(PipelineStepError) as err:
        run_pipeline(pentagon_prism, script)
    exc = err.value
    assert exc.step_index == 1
    assert exc.face_index == 0
    assert exc.kind in ("cgdof", "no_solution")
    assert len(exc.state.step_log) == 1
    assert bottom_face is pentagon_prism.faces[0]


def test_script_parsing_and_order():
    doc = {
        "fixed_edges": {"4": 41.78},
        "face_targets": [{"face": 1, "area": 0.0, "root": "low"},
                         {"face": 3, "area": 2.5}],
        "order": [3, 1],
    }
    script = parse_constraints(doc)
    assert script.fixed_edges == {4: 41.78}
    ordered = script.ordered_targets()
    assert [t.face for t in ordered] == [3, 1]
    assert ordered[1].root == "low"

    with pytest.raises(DocumentError):
        parse_constraints({"face_targets": [{"face": 1, "area": 0,
                                             "root": "weird"}]})
    with pytest.raises(DocumentError):
        ConstraintScript({}, (FaceTarget(1, 0.0),), (2,)).ordered_targets()


def test_script_validates_indices(pentagon_prism):
    with pytest.raises(DocumentError, match="edge 99"):
        run_pipeline(pentagon_prism,
                     empty_script(fixed_edges={99: 1.0}))
    with pytest.raises(DocumentError, match="face 99"):
        run_pipeline(pentagon_prism,
                     empty_script(face_targets=(FaceTarget(99, 0.0),)))
