import math

import networkx as nx
import numpy as np
import pytest

from src.corpus import WORKED_CYCLES, fixture
from src.hamq_search import find_ham_quasigeodesics, parse_cycle
from src.unfold import (DevelopmentError, JoinError, crossable_dual_graph, enumerate_nets, join, partition,
                        spanning_trees, unfold_half, unfold_via_cut_tree)
from src.verify import (check_convex, check_half_planes, check_isometry, check_simple, congruent,
                        net_alignment_residual, rigid_residual)

RECT_1x3 = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 3.0], [0.0, 3.0]])


def worked_case(name):
    P = fixture(name)
    return P, parse_cycle(P, WORKED_CYCLES[name])


def test_partition_cube(cube, cube_cycle):
    A, B = partition(cube, cube_cycle)
    names = lambda H: {cube.face_label(f) for f in H.faces}
    assert names(A) == {'L', 'T', 'R'}
    assert names(B) == {'F', 'B', 'K'}
    assert A.boundary == cube_cycle.walk
    assert B.boundary == cube_cycle.reversed().walk


def test_partition_pyramid(pyramid, pyramid_cycle):
    A, B = partition(pyramid, pyramid_cycle)
    assert {pyramid.face_label(f) for f in A.faces} == {'F', 'K', 'L'}
    assert {pyramid.face_label(f) for f in B.faces} == {'R', 'B'}


@pytest.mark.parametrize("name", sorted(WORKED_CYCLES))
def test_halves_have_tree_duals(name):
    P, Q = worked_case(name)
    for H in partition(P, Q):
        # no interior vertices: the faces of a half are glued along a tree of edges
        assert len(H.interior_edges) == len(H.faces) - 1


def test_cube_halves_are_1x3_rectangles(cube, cube_cycle):
    for H in partition(cube, cube_cycle):
        L = unfold_half(cube, H)
        assert len(L.boundary) == 8
        assert congruent(L.boundary, RECT_1x3)


def test_octahedron_halves_are_congruent(octahedron, octahedron_cycle):
    A, B = partition(octahedron, octahedron_cycle)
    LA, LB = unfold_half(octahedron, A), unfold_half(octahedron, B)
    assert congruent(LA.boundary, LB.boundary)
    big = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]])
    assert congruent(LA.boundary, big)


@pytest.mark.parametrize("name", ['tetrahedron', 'cube', 'octahedron', 'square_pyramid_octa_half'])
def test_developed_halves_are_isometric_and_convex(name):
    P = fixture(name)
    for Q in find_ham_quasigeodesics(P):
        for H in partition(P, Q):
            L = unfold_half(P, H)
            assert check_isometry(P, H, L) <= 1e-9
            assert check_convex(L.boundary)
            assert check_simple(L.boundary).is_simple


def test_layout_is_unique_up_to_rigid_motion(cube, cube_cycle):
    A, _ = partition(cube, cube_cycle)
    base = unfold_half(cube, A)
    for seed in A.faces:
        moved = unfold_half(cube, A, seed_face=seed, seed_pose=(0.7, 3.0, -2.0))
        assert rigid_residual(base.boundary, moved.boundary) <= 1e-9
        assert moved.seed_face == seed


def test_unfold_half_rejects_foreign_seed(cube, cube_cycle):
    A, B = partition(cube, cube_cycle)
    with pytest.raises(DevelopmentError):
        unfold_half(cube, A, seed_face=B.faces[0])


@pytest.mark.parametrize("name", sorted(WORKED_CYCLES))
def test_join_at_every_edge(name):
    P, Q = worked_case(name)
    A, B = partition(P, Q)
    LA, LB = unfold_half(P, A), unfold_half(P, B)
    V = P.num_vertices
    for e in Q.directed_edges():
        net = join(P, Q, LA, LB, e)
        assert len(net.boundary) == 2 * V - 2
        assert len(net.cut_edges) == V - 1
        assert tuple(sorted(e)) not in net.cut_edges
        assert check_simple(net.boundary).is_simple
        assert check_half_planes(net)
        # half A keeps its own pose
        for f in A.faces:
            assert np.allclose(net.placements[f], LA.placements[f])


def test_join_rejects_non_cycle_edge(cube, cube_cycle):
    A, B = partition(cube, cube_cycle)
    LA, LB = unfold_half(cube, A), unfold_half(cube, B)
    with pytest.raises(JoinError):
        join(cube, cube_cycle, LA, LB, (0, 1))
    with pytest.raises(JoinError):
        join(cube, cube_cycle, LB, LA, (0, 4))


@pytest.mark.parametrize("name", sorted(WORKED_CYCLES))
def test_crossable_dual_graph_is_a_tree(name):
    P, Q = worked_case(name)
    for e in Q.directed_edges():
        G = crossable_dual_graph(P, Q, e)
        assert nx.is_tree(G)
        assert G.number_of_nodes() == P.num_faces


@pytest.mark.parametrize("name", sorted(WORKED_CYCLES))
def test_join_equals_cut_tree_unfolding(name):
    P, Q = worked_case(name)
    A, B = partition(P, Q)
    LA, LB = unfold_half(P, A), unfold_half(P, B)
    for e in Q.directed_edges():
        net = join(P, Q, LA, LB, e)
        trees = list(spanning_trees(crossable_dual_graph(P, Q, e)))
        assert trees
        for tree in trees:
            for seed in (0, P.num_faces - 1):
                other = unfold_via_cut_tree(P, Q, e, tree=tree, seed_face=seed)
                assert net_alignment_residual(net, other) <= 1e-7 * P.diagonal
                assert other.cut_edges == net.cut_edges


def test_cube_nets(cube, cube_cycle):
    nets = enumerate_nets(cube, cube_cycle)
    assert len(nets) == 8
    assert [n.join_edge for n in nets] == cube_cycle.directed_edges()
    assert all(n.provenance['simple'] for n in nets)
    # the T shape and the staircase
    assert len(enumerate_nets(cube, cube_cycle, dedupe=True)) == 2


def test_enumerate_nets_threads_keep_order(octahedron, octahedron_cycle):
    serial = enumerate_nets(octahedron, octahedron_cycle)
    threaded = enumerate_nets(octahedron, octahedron_cycle, workers=4)
    assert [n.join_edge for n in serial] == [n.join_edge for n in threaded]
    for a, b in zip(serial, threaded):
        assert np.array_equal(a.boundary, b.boundary)


def test_pyramid_halves_are_not_congruent(pyramid, pyramid_cycle):
    A, B = partition(pyramid, pyramid_cycle)
    LA, LB = unfold_half(pyramid, A), unfold_half(pyramid, B)
    # three triangles in a row make a trapezoid; triangle on square makes a pentagon
    trapezoid = np.array([[0.0, 0.0], [2.0, 0.0], [1.5, math.sqrt(3.0) / 2], [0.5, math.sqrt(3.0) / 2]])
    assert congruent(LA.boundary, trapezoid)
    assert not congruent(LA.boundary, LB.boundary)
