import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial.transform import Rotation

from src.corpus import FIXTURE_REGISTRY, fixture
from src.mesh_core import (MeshError, NonManifoldError, OffParseError, OrientationError, Polyhedron, corner_angle,
                           emit_off, load_off, rotation_order, total_angle, validate, vertex_curvature)

CUBE_OFF = """OFF
# unit cube, faces outward
8 6 12
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
4 4 5 6 7
4 0 3 2 1
"""

CUBE_VERTS = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
CUBE_FACES = [(0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7), (4, 5, 6, 7), (0, 3, 2, 1)]


def dented_cube() -> Polyhedron:
    """Cube whose top face is pushed in to a point at the centre."""
    verts = CUBE_VERTS + [(0.5, 0.5, 0.5)]
    faces = CUBE_FACES[:4] + [CUBE_FACES[5]] + [(4, 5, 8), (5, 6, 8), (6, 7, 8), (7, 4, 8)]
    return Polyhedron(verts, faces, name='dented_cube')


def test_load_cube_counts():
    P = load_off(CUBE_OFF, name='cube')
    assert (P.num_vertices, P.num_edges, P.num_faces) == (8, 12, 6)
    assert P.signed_volume() == pytest.approx(1.0)
    assert validate(P).passed


def test_counts_on_header_line_and_comments():
    text = "OFF 4 4 6  # tetrahedron\n1 1 1\n1 -1 -1\n\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 2 3\n3 0 3 1\n3 1 3 2\n"
    P = load_off(text)
    assert P.num_vertices == 4
    assert P.num_edges == 6


def test_inward_mesh_is_reversed():
    inward = '\n'.join(
        line if not line.startswith('4 ') else '4 ' + ' '.join(reversed(line.split()[1:]))
        for line in CUBE_OFF.splitlines())
    P = load_off(inward)
    assert P.signed_volume() > 0.0
    assert validate(P).passed


def test_mixed_orientation_raises():
    lines = CUBE_OFF.splitlines()
    lines[-1] = '4 1 2 3 0'  # bottom face flipped to match the top
    with pytest.raises(OrientationError):
        load_off('\n'.join(lines))


def test_open_surface_raises():
    lines = CUBE_OFF.splitlines()
    lines[2] = '8 5 12'
    with pytest.raises(NonManifoldError):
        load_off('\n'.join(lines[:-1]))


@pytest.mark.parametrize("text,lineno", [
    ("OFFX\n3 1 3\n", 1),
    ("OFF\n3 one 3\n", 2),
    ("OFF\n3 1 3\n0 0 0\n1 0\n0 1 0\n3 0 1 2\n", 4),
    ("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2\n", 6),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(OffParseError) as info:
        load_off(text)
    assert info.value.lineno == lineno


def test_bad_face_records():
    with pytest.raises(MeshError):
        load_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n2 0 1\n")
    with pytest.raises(MeshError):
        load_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n")


def test_trailing_face_colour_is_ignored(caplog):
    lines = CUBE_OFF.splitlines()
    lines[-1] = '4 0 3 2 1 255 0 0'
    P = load_off('\n'.join(lines))
    assert P.faces[-1] == (0, 3, 2, 1)
    assert 'trailing' in caplog.text


def test_cube_angles_and_curvature(cube):
    for f, face in enumerate(cube.faces):
        for v in face:
            assert corner_angle(cube, f, v) == pytest.approx(math.pi / 2)
    for v in range(8):
        assert total_angle(cube, v) == pytest.approx(3 * math.pi / 2)
        assert vertex_curvature(cube, v) == pytest.approx(math.pi / 2)


def test_corner_angle_vertex_not_on_face(cube):
    with pytest.raises(MeshError):
        corner_angle(cube, 0, 7)


def test_pyramid_apex_and_base_angles(pyramid):
    assert total_angle(pyramid, 4) == pytest.approx(4 * math.pi / 3)
    for v in range(4):
        assert total_angle(pyramid, v) == pytest.approx(math.pi / 2 + 2 * math.pi / 3)


@pytest.mark.parametrize("name", sorted(FIXTURE_REGISTRY))
def test_gauss_bonnet(name):
    P = fixture(name)
    total = sum(vertex_curvature(P, v) for v in range(P.num_vertices))
    assert abs(total - 4 * math.pi) <= P.num_vertices * 1e-9


def test_rotation_order_cube_corner(cube):
    rot = rotation_order(cube, 0)
    others = [a if a != 0 else b for (a, b), _ in rot]
    faces = [f for _, f in rot]
    assert others == [1, 4, 3]
    assert faces == [0, 3, 5]


@given(st.floats(-math.pi, math.pi), st.floats(0.0, math.pi), st.floats(-math.pi, math.pi),
       st.tuples(*[st.floats(-10.0, 10.0)] * 3))
def test_rigid_motion_keeps_rotations_and_angles(a, b, c, shift):
    P = fixture('square_pyramid_octa_half')
    R = Rotation.from_euler('zyz', [a, b, c]).as_matrix()
    M = P.transformed(R, shift)
    for v in range(P.num_vertices):
        assert rotation_order(M, v) == rotation_order(P, v)
        assert total_angle(M, v) == pytest.approx(total_angle(P, v), abs=1e-12)


def test_validate_nonconvex_mode():
    P = dented_cube()
    strict = validate(P, convex_required=True)
    assert not strict.passed
    assert [c.name for c in strict.failures()] == ['convexity']
    relaxed = validate(P, convex_required=False)
    assert relaxed.passed
    with pytest.raises(KeyError):
        relaxed.check('convexity')


def test_validate_flags_nonplanar_face():
    verts = [list(v) for v in CUBE_VERTS]
    verts[6][2] = 1.1
    report = validate(Polyhedron(verts, CUBE_FACES))
    assert not report.check('planarity').passed
    assert report.check('euler').passed


def test_emit_then_load_is_exact():
    P = fixture('icosahedron')
    Q = load_off(emit_off(P), name=P.name)
    assert np.array_equal(Q.vertices, P.vertices)
    assert Q.faces == P.faces
    assert emit_off(Q) == emit_off(P)


def test_fingerprint_names_anonymous_solids():
    P = load_off(CUBE_OFF)
    assert P.label.startswith('sha256:')
    assert P.label == load_off(CUBE_OFF).label
