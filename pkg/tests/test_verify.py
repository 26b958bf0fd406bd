import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.corpus import fixture
from src.hamq_search import parse_cycle
from src.unfold import enumerate_nets, partition, unfold_half
from src.verify import (PolygonError, brute_force_ham_cycles, check_convex, check_isometry, check_no_overlap,
                        check_simple, congruent, rigid_residual, signed_area, verify_net)

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
BOWTIE = [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
L_HEXAGON = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]


def squares_net(offset):
    """Two unit squares, the second shifted by `offset`."""
    sq = np.array(SQUARE)
    return SimpleNamespace(placements={0: sq, 1: sq + np.asarray(offset)},
                           face_vertices={0: (0, 1, 2, 3), 1: (4, 5, 6, 7)})


def test_simple_square():
    report = check_simple(SQUARE)
    assert report.is_simple
    assert report.area == pytest.approx(1.0)


def test_bowtie_is_not_simple():
    report = check_simple(BOWTIE)
    assert not report.is_simple
    assert report.violations


def test_touching_vertex_is_not_simple():
    # the boundary revisits (1, 1)
    poly = [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2), (1, 1)]
    assert not check_simple(poly).is_simple


def test_simple_rejects_degenerate_input():
    with pytest.raises(PolygonError):
        check_simple([(0, 0), (1, 0)])
    with pytest.raises(PolygonError):
        check_simple([(0, 0), (1, 0), (1, 0), (0, 1)])


def test_convexity():
    assert check_convex(SQUARE)
    assert check_convex([(0, 0), (1, 0), (2, 0), (2, 1), (0, 1)])  # straight vertex allowed
    assert not check_convex(L_HEXAGON)
    with pytest.raises(PolygonError):
        check_convex(BOWTIE)


def test_overlap_detected():
    report = check_no_overlap(squares_net((0.5, 0.0)))
    assert not report.ok
    assert report.pairs[0][:2] == (0, 1)
    assert report.total_area == pytest.approx(0.5, abs=1e-5)


@pytest.mark.parametrize("offset", [(1.0, 0.0), (1.0, 1.0), (3.0, 0.0)])
def test_edge_and_point_contact_is_not_overlap(offset):
    assert check_no_overlap(squares_net(offset)).ok


def test_congruent_under_reflection():
    mirrored = [(-x, y) for x, y in L_HEXAGON]
    assert congruent(L_HEXAGON, mirrored)
    assert congruent(L_HEXAGON, L_HEXAGON[2:] + L_HEXAGON[:2])
    assert not congruent([(0, 0), (1, 0), (1, 3), (0, 3)], [(0, 0), (1, 0), (1, 2), (0, 2)])
    assert not congruent(SQUARE, L_HEXAGON)


def test_congruent_ignores_straight_vertices():
    with_midpoints = [(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)]
    assert congruent(SQUARE, with_midpoints)


@given(st.floats(-math.pi, math.pi), st.floats(-50.0, 50.0), st.floats(-50.0, 50.0), st.booleans())
def test_congruent_under_random_rigid_motion(theta, tx, ty, mirror):
    pts = np.array(L_HEXAGON)
    if mirror:
        pts = pts * np.array([1.0, -1.0])
    c, s = math.cos(theta), math.sin(theta)
    moved = pts @ np.array([[c, -s], [s, c]]).T + np.array([tx, ty])
    assert congruent(L_HEXAGON, moved, tol=1e-7 * 100)
    if not mirror:
        assert rigid_residual(np.array(L_HEXAGON), moved) <= 1e-9 * 100


def test_signed_area_orientation():
    assert signed_area(SQUARE) == pytest.approx(1.0)
    assert signed_area(SQUARE[::-1]) == pytest.approx(-1.0)


def test_isometry_detects_perturbation(cube, cube_cycle):
    A, _ = partition(cube, cube_cycle)
    L = unfold_half(cube, A)
    assert check_isometry(cube, A, L) <= 1e-9
    f = A.faces[0]
    L.placements[f] = L.placements[f] + np.array([[0.0, 0.0], [1e-6, 0.0], [0.0, 0.0], [0.0, 0.0]])
    assert check_isometry(cube, A, L) > 1e-9


def test_verify_net_suite(cube, cube_cycle):
    for net in enumerate_nets(cube, cube_cycle):
        report = verify_net(cube, net)
        assert report.passed, report.to_dict()
        assert [c.name for c in report.checks] == ['simple', 'no_overlap', 'half_planes', 'shared_edges',
                                                   'isometry', 'convex_halves', 'cut_path']
        assert report.worst_residual <= 1e-9


def test_verify_net_catches_moved_face(octahedron, octahedron_cycle):
    net = enumerate_nets(octahedron, octahedron_cycle)[0]
    f = next(iter(net.placements))
    net.placements[f] = net.placements[f] + np.array([0.3, 0.0])
    report = verify_net(octahedron, net)
    assert not report.check('shared_edges').passed
    assert not report.passed


def test_brute_force_tetrahedron():
    assert brute_force_ham_cycles(fixture('tetrahedron')) == [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)]


def test_edge_contact_with_last_bit_noise_is_not_overlap():
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]])
    other = np.array([[1.0, 1e-16], [0.0, -1e-16], [0.5, -0.8]])
    net = SimpleNamespace(placements={0: tri, 1: other}, face_vertices={0: (0, 1, 2), 1: (1, 0, 3)})
    assert check_no_overlap(net).ok


def test_octahedron_nets_along_second_cycle_do_not_overlap(octahedron):
    Q = parse_cycle(octahedron, '1-4-3-2-6-5')
    for net in enumerate_nets(octahedron, Q):
        assert check_no_overlap(net).ok, net.join_edge
        assert verify_net(octahedron, net).passed
