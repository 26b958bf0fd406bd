"""
Cut a polyhedron along a Hamiltonian quasigeodesic and unfold it.

The cycle splits the surface into two halves with no interior vertices; each
half develops isometrically into a convex polygon, and gluing the two
polygons back along one cycle edge gives a net.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from .hamq_search import HamCycle, format_cycle
from .mesh_core import Polyhedron

logger = logging.getLogger("HamNet.Unfold")


class UnfoldError(ValueError):
    """The surface cannot be unfolded as requested."""


class PartitionError(UnfoldError):
    """The cycle does not split the faces into two consistent halves."""


class DevelopmentError(UnfoldError):
    """A half cannot be laid out in the plane (disconnected or inconsistent geometry)."""


class JoinError(UnfoldError):
    """Two layouts cannot be glued along the requested edge."""


@dataclass(frozen=True)
class HalfSurface:
    side: str  # 'left' or 'right' of the directed cycle
    faces: tuple
    boundary: tuple  # vertex walk with this half on its left
    interior_edges: tuple

    @property
    def label(self) -> str:
        return 'A' if self.side == 'left' else 'B'


@dataclass
class PlanarLayout:
    """Rigid planar placement of every face of a half.

    placements[f] lists 2D points in the order of P.faces[f].
    """
    half: HalfSurface
    placements: dict
    boundary: np.ndarray
    boundary_vertices: tuple
    seed_face: int
    tree_edges: tuple = ()


@dataclass
class Net:
    polyhedron: str
    cycle: HamCycle
    join_edge: tuple  # directed as the cycle walks it
    placements: dict
    face_vertices: dict
    halves: dict  # face -> 'A' | 'B'
    boundary: np.ndarray
    boundary_vertices: tuple
    cut_edges: tuple
    provenance: dict = field(default_factory=dict)


def _tol_fit(P: Polyhedron, config) -> float:
    return getattr(config, 'TOL_FIT_REL', 1e-7) * P.diagonal


def face_frame(P: Polyhedron, f: int) -> np.ndarray:
    """Face in its own plane: first vertex at the origin, first edge on +x, outward normal on +z."""
    face = list(P.faces[f])
    pts = P.vertices[face]
    n = P.face_normal(f)
    x = pts[1] - pts[0]
    x = x - np.dot(x, n) * n
    x = x / np.linalg.norm(x)
    y = np.cross(n, x)
    rel = pts - pts[0]
    return np.column_stack([rel @ x, rel @ y])


def _pose_matrix(pose) -> tuple:
    theta, tx, ty = pose if pose is not None else (0.0, 0.0, 0.0)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]]), np.array([tx, ty], dtype=float)


def _edge_motion(src_a, src_b, dst_a, dst_b) -> tuple:
    """Rotation + translation taking segment src onto dst (a onto a, direction onto direction)."""
    ds = src_b - src_a
    dd = dst_b - dst_a
    theta = math.atan2(dd[1], dd[0]) - math.atan2(ds[1], ds[0])
    c, s = math.cos(theta), math.sin(theta)
    R = np.array([[c, -s], [s, c]])
    return R, dst_a - R @ src_a


def _shared_edge(P: Polyhedron, f: int, g: int) -> tuple:
    fs = set(P.faces[f])
    face = P.faces[g]
    k = len(face)
    for j in range(k):
        u, v = face[j], face[(j + 1) % k]
        if u in fs and v in fs and P.halfedge_face(v, u) == f:
            return u, v
    raise DevelopmentError(f"faces {f} and {g} do not share an edge")


def _develop(P: Polyhedron, seed: int, tree_edges: Sequence[tuple], pose, tol_fit: float) -> dict:
    """Place the seed at `pose`, then each child across its shared edge with the placed parent."""
    R, t = _pose_matrix(pose)
    placements = {seed: face_frame(P, seed) @ R.T + t}
    for parent, child in tree_edges:
        u, v = _shared_edge(P, parent, child)
        pf, cf = P.faces[parent], P.faces[child]
        dst_u = placements[parent][pf.index(u)]
        dst_v = placements[parent][pf.index(v)]
        local = face_frame(P, child)
        src_u = local[cf.index(u)]
        src_v = local[cf.index(v)]
        mismatch = abs(np.linalg.norm(src_v - src_u) - np.linalg.norm(dst_v - dst_u))
        if mismatch > tol_fit:
            raise DevelopmentError(
                f"edge {u + 1}-{v + 1} has length mismatch {mismatch:.3e} between faces {parent} and {child}")
        Rm, tm = _edge_motion(src_u, src_v, dst_u, dst_v)
        placements[child] = local @ Rm.T + tm
        logger.debug(f"placed face {child} across edge {u + 1}-{v + 1} from face {parent}")
    return placements


def _dual_graph(P: Polyhedron, faces: Iterable[int], crossable: Iterable[tuple]) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(faces)
    for u, v in crossable:
        G.add_edge(P.halfedge_face(u, v), P.halfedge_face(v, u), edge=(min(u, v), max(u, v)))
    return G


def partition(P: Polyhedron, Q: HamCycle) -> tuple:
    """
    Split the faces into the halves left (A) and right (B) of the directed cycle.

    Along each cycle edge u -> v the face traversing u -> v is on the left.
    Faces away from the cycle are assigned by flooding across non-cycle edges.

    Returns:
        tuple: (A, B) HalfSurface

    Raises:
        PartitionError: a region touches the cycle from both sides, or there are not exactly two regions
    """
    directed = Q.directed_edges()
    cycle_edges = Q.edge_set()
    left_seeds = {P.halfedge_face(u, v) for u, v in directed}
    right_seeds = {P.halfedge_face(v, u) for u, v in directed}
    if None in left_seeds or None in right_seeds:
        raise PartitionError(f"cycle {format_cycle(Q)} uses a non-edge")

    interior = [e for e in P.edges if e not in cycle_edges]
    G = _dual_graph(P, range(P.num_faces), interior)
    regions = [set(c) for c in nx.connected_components(G)]
    left = [r for r in regions if r & left_seeds]
    right = [r for r in regions if r & right_seeds]
    if len(left) != 1 or len(right) != 1 or left[0] & right_seeds or len(regions) != 2:
        raise PartitionError(
            f"cycle {format_cycle(Q)} does not split {P.label} into two halves "
            f"({len(regions)} face regions)")

    halves = []
    for side, region, walk in (('left', left[0], Q.walk), ('right', right[0], Q.reversed().walk)):
        edges = tuple(e for e in interior if P.halfedge_face(*e) in region)
        halves.append(HalfSurface(side=side, faces=tuple(sorted(region)), boundary=tuple(walk),
                                  interior_edges=edges))
    logger.info(f"{P.label}: cycle {format_cycle(Q)} splits faces {len(halves[0].faces)}/{len(halves[1].faces)}")
    return halves[0], halves[1]


def _boundary_points(P: Polyhedron, walk: Sequence[int], placements: dict) -> np.ndarray:
    n = len(walk)
    pts = []
    for i, v in enumerate(walk):
        f = P.halfedge_face(v, walk[(i + 1) % n])
        pts.append(placements[f][P.faces[f].index(v)])
    return np.array(pts)


def unfold_half(P: Polyhedron, H: HalfSurface, seed_face: Optional[int] = None, seed_pose=None,
                config=None) -> PlanarLayout:
    """
    Develop a half into the plane by breadth-first traversal of its dual graph.

    Args:
        P: Polyhedron
        H: HalfSurface from partition()
        seed_face: face placed first (default: smallest face index of the half)
        seed_pose: (theta, tx, ty) applied to the seed's own frame; default identity
        config: Optional Config (TOL_FIT_REL)

    Returns:
        PlanarLayout

    Raises:
        DevelopmentError: disconnected dual graph or edge-length mismatch
    """
    seed = min(H.faces) if seed_face is None else seed_face
    if seed not in H.faces:
        raise DevelopmentError(f"seed face {seed} is not in half {H.label}")
    G = _dual_graph(P, H.faces, H.interior_edges)
    if not nx.is_connected(G):
        raise DevelopmentError(f"half {H.label} has a disconnected dual graph")
    tree = tuple(nx.bfs_edges(G, seed))
    placements = _develop(P, seed, tree, seed_pose, _tol_fit(P, config))
    boundary = _boundary_points(P, H.boundary, placements)
    return PlanarLayout(half=H, placements=placements, boundary=boundary, boundary_vertices=H.boundary,
                        seed_face=seed, tree_edges=tree)


def _directed_on_cycle(Q: HamCycle, e: Sequence[int]) -> tuple:
    a, b = int(e[0]), int(e[1])
    for u, v in Q.directed_edges():
        if (u, v) == (a, b) or (u, v) == (b, a):
            return u, v
    raise JoinError(f"edge {a + 1}-{b + 1} is not on cycle {format_cycle(Q)}")


def boundary_walk(Q: HamCycle, join_edge: Sequence[int]) -> list:
    """
    Vertices around the net outline as (vertex, successor) pairs.

    Half A contributes the walk from b around to a; half B then returns from a
    to b along the reversed walk, its endpoints already counted. That is 2V-2 corners.
    The successor picks the face whose copy of the vertex is used.
    """
    a, b = int(join_edge[0]), int(join_edge[1])
    walk = list(Q.walk)
    n = len(walk)
    ib = walk.index(b)
    a_path = [walk[(ib + k) % n] for k in range(n)]  # b ... a around half A
    rwalk = walk[::-1]
    ia = rwalk.index(a)
    b_path = [rwalk[(ia + k) % n] for k in range(n)]  # a ... b around half B
    pairs = [(v, a_path[i + 1] if i + 1 < n else b) for i, v in enumerate(a_path)]
    pairs += [(b_path[i], b_path[i + 1]) for i in range(1, n - 1)]
    return pairs


def _assemble_net(P: Polyhedron, Q: HamCycle, join_edge: tuple, placements: dict, halves: dict,
                  provenance: dict) -> Net:
    pts, labels = [], []
    for v, nxt in boundary_walk(Q, join_edge):
        f = P.halfedge_face(v, nxt)
        pts.append(placements[f][P.faces[f].index(v)])
        labels.append(v)

    cut = tuple(sorted(Q.edge_set() - {tuple(sorted(join_edge))}))
    return Net(polyhedron=P.label, cycle=Q, join_edge=tuple(join_edge), placements=placements,
               face_vertices={f: P.faces[f] for f in placements}, halves=halves,
               boundary=np.array(pts), boundary_vertices=tuple(labels), cut_edges=cut,
               provenance=provenance)


def join(P: Polyhedron, Q: HamCycle, layoutA: PlanarLayout, layoutB: PlanarLayout, e: Sequence[int],
         config=None) -> Net:
    """
    Glue the two developed halves along cycle edge e.

    A keeps its pose; B is moved rigidly so that its copy of e lands on A's with
    matching endpoints. Both layouts are seen from outside, so B unfolds across e
    like a page of a book and ends up on the other side of e's line.

    Raises:
        JoinError: e is not on the cycle, layouts are of the wrong halves, or the
            two copies of e differ in length
    """
    if layoutA.half.side != 'left' or layoutB.half.side != 'right':
        raise JoinError("join expects the left half first and the right half second")
    a, b = _directed_on_cycle(Q, e)
    fA = P.halfedge_face(a, b)
    fB = P.halfedge_face(b, a)
    if fA not in layoutA.placements or fB not in layoutB.placements:
        raise JoinError(f"edge {a + 1}-{b + 1}: faces {fA}/{fB} are missing from the layouts")
    pa = layoutA.placements[fA][P.faces[fA].index(a)]
    pb = layoutA.placements[fA][P.faces[fA].index(b)]
    qa = layoutB.placements[fB][P.faces[fB].index(a)]
    qb = layoutB.placements[fB][P.faces[fB].index(b)]
    mismatch = abs(np.linalg.norm(pb - pa) - np.linalg.norm(qb - qa))
    if mismatch > _tol_fit(P, config):
        raise JoinError(f"edge {a + 1}-{b + 1} has length mismatch {mismatch:.3e} between the halves")

    R, t = _edge_motion(qa, qb, pa, pb)
    placements = {f: np.array(pts) for f, pts in layoutA.placements.items()}
    for f, pts in layoutB.placements.items():
        placements[f] = pts @ R.T + t
    halves = {f: 'A' for f in layoutA.placements}
    halves.update({f: 'B' for f in layoutB.placements})
    provenance = {'method': 'join', 'seed_faces': [layoutA.seed_face, layoutB.seed_face]}
    net = _assemble_net(P, Q, (a, b), placements, halves, provenance)
    logger.debug(f"{P.label}: joined halves at {a + 1}-{b + 1}")
    return net


def crossable_dual_graph(P: Polyhedron, Q: HamCycle, e: Sequence[int]) -> nx.Graph:
    """Face graph across every edge that stays uncut: all non-cycle edges plus e."""
    a, b = _directed_on_cycle(Q, e)
    cycle_edges = Q.edge_set()
    crossable = [edge for edge in P.edges if edge not in cycle_edges] + [(min(a, b), max(a, b))]
    return _dual_graph(P, range(P.num_faces), crossable)


def spanning_trees(G: nx.Graph):
    """Every spanning tree of G, as edge lists."""
    for T in nx.SpanningTreeIterator(G):
        yield sorted(tuple(sorted(edge)) for edge in T.edges())


def unfold_via_cut_tree(P: Polyhedron, Q: HamCycle, e: Sequence[int], tree: Optional[Iterable[tuple]] = None,
                        seed_face: Optional[int] = None, config=None) -> Net:
    """
    Unfold after cutting every cycle edge except e, developing all faces along a
    spanning tree of the crossable dual graph.

    Args:
        tree: dual edges (face pairs) of a spanning tree; default is breadth-first from the seed
        seed_face: face placed first (default 0)

    Raises:
        UnfoldError: the crossable dual graph is disconnected or `tree` is not a spanning tree of it
    """
    a, b = _directed_on_cycle(Q, e)
    G = crossable_dual_graph(P, Q, e)
    if not nx.is_connected(G):
        raise UnfoldError(f"{P.label}: crossable dual graph for join edge {a + 1}-{b + 1} is disconnected")
    seed = 0 if seed_face is None else seed_face
    if tree is None:
        T = nx.bfs_tree(G, seed).to_undirected()
    else:
        T = nx.Graph()
        T.add_nodes_from(G.nodes)
        T.add_edges_from(tree)
        if not (nx.is_tree(T) and all(G.has_edge(*edge) for edge in T.edges())):
            raise UnfoldError("given tree is not a spanning tree of the crossable dual graph")
    order = tuple(nx.bfs_edges(T, seed))
    placements = _develop(P, seed, order, None, _tol_fit(P, config))
    A, B = partition(P, Q)
    halves = {f: 'A' for f in A.faces}
    halves.update({f: 'B' for f in B.faces})
    provenance = {'method': 'cut_tree', 'seed_faces': [seed], 'tree': [list(edge) for edge in order]}
    return _assemble_net(P, Q, (a, b), placements, halves, provenance)


def enumerate_nets(P: Polyhedron, Q: HamCycle, dedupe: bool = False, require_simple: bool = True,
                   config=None, workers: Optional[int] = None) -> list:
    """
    One net per cycle edge, in walk order.

    Args:
        dedupe: drop nets whose outline is congruent to an earlier one
        require_simple: raise if a boundary is not simple (off for zipper surveys)
        workers: threads used to build the nets; the order of the result does not depend on it

    Raises:
        UnfoldError: a net boundary self-intersects while require_simple is set
    """
    from .verify import check_simple, congruent

    A, B = partition(P, Q)
    LA = unfold_half(P, A, config=config)
    LB = unfold_half(P, B, config=config)
    edges = Q.directed_edges()
    if workers is None:
        workers = getattr(config, 'SEARCH_WORKERS', 1)

    def build(e):
        return join(P, Q, LA, LB, e, config=config)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            nets = list(pool.map(build, edges))
    else:
        nets = [build(e) for e in edges]

    for net in nets:
        simple = check_simple(net.boundary, config=config).is_simple
        net.provenance['simple'] = simple
        if not simple:
            msg = f"{P.label}: net of {format_cycle(Q)} joined at {net.join_edge[0] + 1}-{net.join_edge[1] + 1} is not simple"
            if require_simple:
                logger.error(msg)
                raise UnfoldError(msg)
            logger.info(msg)

    if dedupe:
        kept = []
        for net in nets:
            if not any(congruent(net.boundary, k.boundary, config=config) for k in kept):
                kept.append(net)
        logger.info(f"{P.label}: {len(nets)} nets, {len(kept)} up to congruence")
        nets = kept
    return nets
