"""
Composite workflows built from search, unfold and verify.
These back the CLI's `demo` and `nets --zipper` subcommands and the acceptance tests.
"""

import logging
import math
from typing import Iterable, Optional

import numpy as np

from .corpus import WORKED_CYCLES, corpus_gen, fixture
from .hamq_search import (HamCycle, find_ham_cycles, find_ham_quasigeodesics, format_cycle, is_quasigeodesic,
                          parse_cycle, require_quasigeodesic)
from .mesh_core import Polyhedron, vertex_curvature
from .unfold import (crossable_dual_graph, enumerate_nets, partition, spanning_trees, unfold_half,
                     unfold_via_cut_tree)
from .verify import (PolygonError, check_convex, check_half_planes, check_no_overlap, check_simple, congruent,
                     geom_tolerance, net_alignment_residual, placement_isometry_error, verify_net)

logger = logging.getLogger("HamNet.Utils")


def interior_angles(polygon) -> list:
    """Interior angle at each corner of a counterclockwise polygon, in [0, 2*pi)."""
    pts = np.asarray(polygon, dtype=float)
    n = len(pts)
    out = []
    for i in range(n):
        d1 = pts[(i + 1) % n] - pts[i]
        d2 = pts[i - 1] - pts[i]
        ang = math.atan2(d1[0] * d2[1] - d1[1] * d2[0], float(np.dot(d1, d2)))
        out.append(ang % (2.0 * math.pi))
    return out


def half_angle_error(P: Polyhedron, Q: HamCycle, config=None) -> float:
    """
    Largest gap between a developed half's corner angles and the cycle's side angles.

    Half A's corners carry the left sums of the walk, half B's the right sums.
    """
    _, split = is_quasigeodesic(P, Q, config)
    worst = 0.0
    for idx, H in enumerate(partition(P, Q)):
        L = unfold_half(P, H, config=config)
        for v, ang in zip(L.boundary_vertices, interior_angles(L.boundary)):
            worst = max(worst, abs(ang - split.angles[v][idx]))
    return worst


def theorem_check(P: Polyhedron, Q: HamCycle, config=None, verbose: bool = False) -> dict:
    """
    Check every net of one Hamiltonian quasigeodesic.

    For each cycle edge: the full verification suite on the joined net, and
    agreement of the join with the cut-tree unfolding for every spanning tree
    of the crossable dual graph. Also compares each half's corner angles with
    the cycle's side angles.

    Returns:
        dict: cycle, nets, failures (list of strings), worst_residual, angle_error, ok
    """
    failures = []
    worst = 0.0
    tol_angle = max(getattr(config, 'TOL_ANGLE', 1e-9), 1e-9)

    angle_error = half_angle_error(P, Q, config)
    if angle_error > tol_angle * P.num_vertices:
        failures.append(f"half corner angles differ from side angles by {angle_error:.3e}")

    nets = enumerate_nets(P, Q, require_simple=False, config=config)
    for net in nets:
        tag = f"{net.join_edge[0] + 1}-{net.join_edge[1] + 1}"
        report = verify_net(P, net, config)
        worst = max(worst, report.worst_residual)
        failures.extend(f"join {tag}: {c.name} ({c.details})" for c in report.checks if not c.passed)

        tol = geom_tolerance(np.vstack(list(net.placements.values())), config)
        G = crossable_dual_graph(P, Q, net.join_edge)
        for k, tree in enumerate(spanning_trees(G)):
            other = unfold_via_cut_tree(P, Q, net.join_edge, tree=tree, config=config)
            residual = net_alignment_residual(net, other)
            worst = max(worst, residual)
            if residual > tol:
                failures.append(f"join {tag}: cut-tree unfolding #{k} differs by {residual:.3e}")
        if verbose:
            logger.info(f"{P.label} {format_cycle(Q)} join {tag}: {'ok' if report.passed else 'FAILED'}")

    ok = not failures
    for msg in failures:
        logger.error(f"{P.label} {format_cycle(Q)}: {msg}")
    return {'polyhedron': P.label, 'cycle': format_cycle(Q), 'nets': len(nets), 'failures': failures,
            'worst_residual': worst, 'angle_error': angle_error, 'ok': ok}


def _rectangle(w: float, h: float) -> np.ndarray:
    return np.array([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]])


def run_demo(config=None) -> dict:
    """
    The three worked examples end to end: square pyramid Q=12534, octahedron
    Q=123645 and cube Q=15623784, each with its particular claim checked on top
    of theorem_check.

    Returns:
        dict: {'ok': bool, 'examples': [per-solid result dicts]}
    """
    examples = []
    for name, text in WORKED_CYCLES.items():
        P = fixture(name)
        Q = parse_cycle(P, text)
        split = require_quasigeodesic(P, Q, config)
        result = theorem_check(P, Q, config)
        A, B = partition(P, Q)
        LA = unfold_half(P, A, config=config)
        LB = unfold_half(P, B, config=config)

        if name == 'square_pyramid_octa_half':
            found = sorted({round(a / math.pi, 9) for a in split.values()})
            claim = found == [round(x, 9) for x in (1 / 3, 1 / 2, 2 / 3, 5 / 6, 1.0)]
            result['claim'] = f"side angles {found} x pi"
        elif name == 'octahedron':
            claim = congruent(LA.boundary, LB.boundary, config=config)
            result['claim'] = "halves congruent"
        else:
            rect = _rectangle(1.0, 3.0)
            claim = congruent(LA.boundary, rect, config=config) and congruent(LB.boundary, rect, config=config)
            result['claim'] = "halves are 1x3 rectangles"
        result['claim_ok'] = claim
        result['ok'] = result['ok'] and claim
        logger.info(f"demo {name} Q={text}: {result['nets']} nets, claim '{result['claim']}' "
                    f"{'holds' if claim else 'FAILS'}")
        examples.append(result)
    return {'ok': all(r['ok'] for r in examples), 'examples': examples}


def zipper_nets(P: Polyhedron, Q: HamCycle, config=None) -> list:
    """
    Join the halves of any Hamiltonian cycle at each of its edges.

    Without the angle condition the halves need not be convex and the result
    may overlap, so each unfolding is reported rather than rejected.

    Returns:
        list: (net, is_net) pairs in walk order
    """
    out = []
    for net in enumerate_nets(P, Q, require_simple=False, config=config):
        ok = bool(net.provenance.get('simple'))
        if ok:
            try:
                ok = check_no_overlap(net, config=config).ok
            except PolygonError:
                ok = False
        out.append((net, ok))
    return out


def zipper_survey(P: Polyhedron, config=None, limit: Optional[int] = None) -> dict:
    """
    Over every Hamiltonian cycle of the skeleton, count how many of the V
    cut-path unfoldings per cycle are non-overlapping nets.

    Returns:
        dict: cycles, quasigeodesic_cycles, unfoldings, nets, per_cycle
    """
    cycles = find_ham_cycles(P, limit=limit, config=config)
    per_cycle = []
    total = good = quasi = 0
    for Q in cycles:
        qg, _ = is_quasigeodesic(P, Q, config)
        quasi += qg
        results = zipper_nets(P, Q, config)
        n_ok = sum(ok for _, ok in results)
        total += len(results)
        good += n_ok
        per_cycle.append({'cycle': format_cycle(Q), 'quasigeodesic': qg, 'nets': n_ok, 'unfoldings': len(results)})
    logger.info(f"{P.label}: {good}/{total} zipper unfoldings over {len(cycles)} cycles are nets")
    return {'polyhedron': P.label, 'cycles': len(cycles), 'quasigeodesic_cycles': quasi,
            'unfoldings': total, 'nets': good, 'per_cycle': per_cycle}


def net_criteria_ok(P: Polyhedron, Q: HamCycle, config=None) -> bool:
    """
    Every join of Q gives a simple, non-overlapping net with halves on opposite
    sides of the join edge; both halves develop isometrically into convex
    polygons whose corner angles are the cycle's side angles.
    """
    tol_angle = max(getattr(config, 'TOL_ANGLE', 1e-9), 1e-9)
    tol_iso = getattr(config, 'TOL_ISO', 1e-9)
    for net in enumerate_nets(P, Q, require_simple=False, config=config):
        if not check_simple(net.boundary, config=config).is_simple:
            return False
        if not check_no_overlap(net, config=config).ok or not check_half_planes(net, config=config):
            return False
    for H in partition(P, Q):
        L = unfold_half(P, H, config=config)
        if not check_convex(L.boundary, config=config):
            return False
        if placement_isometry_error(P, H.faces, L.placements) > tol_iso:
            return False
    return half_angle_error(P, Q, config) <= tol_angle * P.num_vertices


def gauss_bonnet_error(P: Polyhedron) -> float:
    """|sum of vertex curvatures - 4*pi|."""
    return abs(math.fsum(vertex_curvature(P, v) for v in range(P.num_vertices)) - 4.0 * math.pi)


def corpus_sweep(sizes: Iterable[int], seeds: Iterable[int], config=None) -> dict:
    """
    Random convex hulls for every (size, seed): check Gauss-Bonnet, find all
    Hamiltonian quasigeodesics and check every net of each.

    Returns:
        dict: solids, cycles, failures (list of (solid label, cycle string or 'gauss_bonnet'))
    """
    tol_angle = max(getattr(config, 'TOL_ANGLE', 1e-9), 1e-9)
    solids = cycles = 0
    failures = []
    for n in sizes:
        for seed in seeds:
            P = corpus_gen(n, seed, config)
            solids += 1
            if gauss_bonnet_error(P) > tol_angle * P.num_vertices:
                failures.append((P.label, 'gauss_bonnet'))
            for Q in find_ham_quasigeodesics(P, config=config):
                cycles += 1
                if not net_criteria_ok(P, Q, config):
                    failures.append((P.label, format_cycle(Q)))
    logger.info(f"corpus sweep: {solids} solids, {cycles} quasigeodesics, {len(failures)} failure(s)")
    return {'solids': solids, 'cycles': cycles, 'failures': failures}
