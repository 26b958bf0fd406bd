import math

import pytest

from src.corpus import fixture
from src.hamq_search import (CycleError, HamCycle, NotQuasigeodesicError, canonicalize, find_ham_cycles,
                             find_ham_quasigeodesics, format_cycle, is_quasigeodesic, make_cycle, parse_cycle,
                             require_quasigeodesic, side_split)
from src.verify import brute_force_ham_cycles, region_side_angles

SMALL_FIXTURES = ['tetrahedron', 'cube', 'octahedron', 'icosahedron', 'square_pyramid_octa_half']


def test_canonicalize_rotations_and_direction():
    assert canonicalize((3, 1, 0, 2)) == (0, 1, 3, 2)
    assert canonicalize((0, 4, 5, 1, 2, 6, 7, 3)) == (0, 3, 7, 6, 2, 1, 5, 4)


def test_cycle_equality_ignores_walk():
    a = HamCycle.from_walk((0, 4, 5, 1, 2, 6, 7, 3))
    b = HamCycle.from_walk((5, 4, 0, 3, 7, 6, 2, 1))
    assert a == b
    assert hash(a) == hash(b)
    assert a.walk != b.walk


def test_parse_cycle_forms(cube):
    Q = parse_cycle(cube, '15623784')
    assert Q == parse_cycle(cube, '1-5-6-2-3-7-8-4')
    assert Q == parse_cycle(cube, '1, 5, 6, 2, 3, 7, 8, 4')
    assert format_cycle(Q) == '1-5-6-2-3-7-8-4'
    assert format_cycle(Q, canonical=True) == '1-4-8-7-3-2-6-5'


@pytest.mark.parametrize("text", ['1-2-3-4', '1-5-6-2-3-7-8-8', '1-3-6-2-5-7-8-4', 'one-two', '1-5-6-2-3-7-8-9'])
def test_parse_cycle_rejects(cube, text):
    with pytest.raises(CycleError):
        parse_cycle(cube, text)


def test_tetrahedron_split_is_third_and_two_thirds():
    P = fixture('tetrahedron')
    Q = make_cycle(P, [0, 1, 2, 3])
    for v in range(4):
        assert sorted(side_split(P, Q, v)) == pytest.approx([math.pi / 3, 2 * math.pi / 3])


def test_pyramid_side_angles(pyramid, pyramid_cycle):
    ok, split = is_quasigeodesic(pyramid, pyramid_cycle)
    assert ok
    found = sorted({round(a / math.pi, 9) for a in split.values()})
    assert found == pytest.approx([1 / 3, 1 / 2, 2 / 3, 5 / 6, 1.0], abs=1e-9)
    # at vertex 1 the walk 4 -> 1 -> 2 has the two lateral triangles on its left and the base on its right
    assert side_split(pyramid, pyramid_cycle, 0) == pytest.approx((2 * math.pi / 3, math.pi / 2))


def test_reversing_the_walk_swaps_sides(pyramid, pyramid_cycle):
    R = pyramid_cycle.reversed()
    for v in range(pyramid.num_vertices):
        left, right = side_split(pyramid, pyramid_cycle, v)
        assert side_split(pyramid, R, v) == pytest.approx((right, left))


def test_side_split_sums_to_total_angle(cube, cube_cycle):
    for v in range(8):
        assert sum(side_split(cube, cube_cycle, v)) == pytest.approx(3 * math.pi / 2)


def test_side_split_agrees_with_face_regions(octahedron):
    for Q in find_ham_cycles(octahedron):
        regions = region_side_angles(octahedron, Q.walk)
        for v in Q.walk:
            assert side_split(octahedron, Q, v) == pytest.approx(regions[v], abs=1e-12)


def test_worked_cycles_are_quasigeodesic(cube, cube_cycle, octahedron, octahedron_cycle):
    assert is_quasigeodesic(cube, cube_cycle)[0]
    ok, split = is_quasigeodesic(octahedron, octahedron_cycle)
    assert ok
    for v in range(6):
        assert sorted(split.angles[v]) == pytest.approx([math.pi / 3, math.pi])


@pytest.mark.parametrize("name,circuits,quasigeodesics", [
    ('tetrahedron', 3, 3),
    ('cube', 6, 6),
])
def test_counts(name, circuits, quasigeodesics):
    P = fixture(name)
    assert len(find_ham_cycles(P)) == circuits
    assert len(find_ham_quasigeodesics(P)) == quasigeodesics


def test_search_cube_includes_napkin_holder(cube, cube_cycle):
    assert cube_cycle in find_ham_quasigeodesics(cube)


@pytest.mark.parametrize("name", ['dodecahedron', 'icosahedron'])
def test_no_quasigeodesic_but_hamiltonian(name):
    P = fixture(name)
    assert find_ham_quasigeodesics(P) == []
    assert len(find_ham_cycles(P, limit=1)) == 1


def test_rhombic_dodecahedron_has_no_circuit():
    assert find_ham_cycles(fixture('rhombic_dodecahedron')) == []


def test_dodecahedron_violation_reported():
    P = fixture('dodecahedron')
    Q = find_ham_cycles(P, limit=1)[0]
    with pytest.raises(NotQuasigeodesicError) as info:
        require_quasigeodesic(P, Q)
    err = info.value
    assert sorted((err.left, err.right)) == pytest.approx([3 * math.pi / 5, 6 * math.pi / 5])
    assert err.vertex in Q.walk


@pytest.mark.parametrize("name", SMALL_FIXTURES)
def test_search_matches_brute_force(name):
    P = fixture(name)
    oracle = brute_force_ham_cycles(P)
    assert [Q.vertices for Q in find_ham_cycles(P)] == oracle
    expected = [c for c in oracle if is_quasigeodesic(P, HamCycle(c))[0]]
    assert [Q.vertices for Q in find_ham_quasigeodesics(P)] == expected


def test_results_are_canonical_and_sorted(octahedron):
    cycles = find_ham_cycles(octahedron)
    assert all(Q.vertices == canonicalize(Q.vertices) for Q in cycles)
    assert [Q.vertices for Q in cycles] == sorted(Q.vertices for Q in cycles)


def test_workers_do_not_change_the_result():
    P = fixture('icosahedron')
    assert find_ham_cycles(P, workers=4) == find_ham_cycles(P, workers=1)


def test_limit_keeps_leading_cycles():
    P = fixture('icosahedron')
    full = find_ham_cycles(P)
    assert find_ham_cycles(P, limit=5) == full[:5]
    assert find_ham_cycles(P, limit=5, workers=3) == full[:5]
