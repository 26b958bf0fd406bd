"""
Independent numerical oracles for unfoldings.

Everything here works from the planar coordinates it is given (and the 3D solid
for isometry); none of the placement code in unfold.py is reused.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx
import numpy as np
from shapely.geometry import Polygon as ShapelyPolygon

from .mesh_core import CheckResult

logger = logging.getLogger("HamNet.Verify")

DEFAULT_TOL_GEOM_REL = 1e-7
DEFAULT_ANGLE_TOL = 1e-7


class PolygonError(ValueError):
    """A polygon or layout does not meet an oracle's precondition."""


@dataclass
class SimplePolygonReport:
    is_simple: bool
    violations: list = field(default_factory=list)  # ((edge_i, edge_j), (x, y))
    area: float = 0.0  # signed; > 0 for counterclockwise


@dataclass
class OverlapReport:
    pairs: list = field(default_factory=list)  # (face_a, face_b, area)
    total_area: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.pairs


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    worst_residual: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {'checks': [c.to_dict() for c in self.checks], 'worst_residual': self.worst_residual}


def _diag(points) -> float:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def geom_tolerance(points, config=None) -> float:
    """tol_geom for a layout: relative factor times its bounding-box diagonal."""
    return getattr(config, 'TOL_GEOM_REL', DEFAULT_TOL_GEOM_REL) * _diag(points)


def signed_area(polygon) -> float:
    pts = np.asarray(polygon, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _point_segment(p, a, b):
    """Distance from p to segment ab and the closest point."""
    ab = b - a
    denom = float(np.dot(ab, ab))
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float(np.dot(p - a, ab)) / denom))
    q = a + t * ab
    return float(np.linalg.norm(p - q)), q


def _segment_contact(a0, a1, b0, b1):
    """Distance between two segments and a representative contact point."""
    da = a1 - a0
    db = b1 - b0
    o1 = _cross(da, b0 - a0)
    o2 = _cross(da, b1 - a0)
    o3 = _cross(db, a0 - b0)
    o4 = _cross(db, a1 - b0)
    if ((o1 > 0 > o2) or (o1 < 0 < o2)) and ((o3 > 0 > o4) or (o3 < 0 < o4)):
        t = o3 / (o3 - o4)
        return 0.0, a0 + t * da
    best = None
    for p, s0, s1 in ((a0, b0, b1), (a1, b0, b1), (b0, a0, a1), (b1, a0, a1)):
        d, q = _point_segment(p, s0, s1)
        if best is None or d < best[0]:
            best = (d, 0.5 * (p + q))
    return best


def check_simple(polygon, tol: Optional[float] = None, config=None) -> SimplePolygonReport:
    """
    Brute-force O(n^2) simplicity test.

    Non-adjacent edges may not come within tol of each other; adjacent edges may
    only share their common endpoint. Straight (angle pi) vertices are allowed.

    Raises:
        PolygonError: fewer than 3 vertices, or repeated consecutive points
    """
    pts = np.asarray(polygon, dtype=float)
    n = len(pts)
    if n < 3:
        raise PolygonError(f"polygon needs at least 3 vertices, got {n}")
    if tol is None:
        tol = geom_tolerance(pts, config)
    for i in range(n):
        if np.linalg.norm(pts[(i + 1) % n] - pts[i]) <= tol:
            raise PolygonError(f"repeated consecutive points at vertex {i}")

    violations = []
    for i in range(n):
        a0, a1 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            b0, b1 = pts[j], pts[(j + 1) % n]
            if j == i + 1:
                # shared endpoint a1 == b0
                if _point_segment(b1, a0, a1)[0] <= tol or _point_segment(a0, b0, b1)[0] <= tol:
                    violations.append(((i, j), tuple(a1)))
            elif i == 0 and j == n - 1:
                # shared endpoint a0 == b1
                if _point_segment(b0, a0, a1)[0] <= tol or _point_segment(a1, b0, b1)[0] <= tol:
                    violations.append(((i, j), tuple(a0)))
            else:
                d, q = _segment_contact(a0, a1, b0, b1)
                if d <= tol:
                    violations.append(((i, j), tuple(q)))
    return SimplePolygonReport(is_simple=not violations, violations=violations, area=signed_area(pts))


def check_convex(polygon, tol: Optional[float] = None, config=None) -> bool:
    """Non-strict convexity: every turn has the same sign or is straight within tol.

    Raises:
        PolygonError: the polygon is not simple
    """
    pts = np.asarray(polygon, dtype=float)
    if tol is None:
        tol = geom_tolerance(pts, config)
    if not check_simple(pts, tol=tol).is_simple:
        raise PolygonError("convexity is only defined here for simple polygons")
    n = len(pts)
    left = right = False
    for i in range(n):
        e1 = pts[i] - pts[i - 1]
        e2 = pts[(i + 1) % n] - pts[i]
        # signed distance of the next vertex from the line of the previous edge
        h = _cross(e1, e2) / float(np.linalg.norm(e1))
        if h > tol:
            left = True
        elif h < -tol:
            right = True
    return not (left and right)


def _triangles(points: np.ndarray):
    return [points[[0, j, j + 1]] for j in range(1, len(points) - 1)]


def check_no_overlap(net, tol: Optional[float] = None, config=None) -> OverlapReport:
    """
    Pairwise face overlap test on fan-triangulated faces.

    Every triangle is shrunk by tol before intersecting, so faces that only touch
    along an edge or at a point (even with copies differing in the last bits)
    share no area. Only intersections with area above tol**2 count; the reported
    areas are those of the shrunk triangles.

    Raises:
        PolygonError: a face placement has (near) zero area
    """
    faces = sorted(net.placements)
    if not faces:
        raise PolygonError("net has no face placements")
    if tol is None:
        tol = geom_tolerance(np.vstack([net.placements[f] for f in faces]), config)
    threshold = tol * tol

    tris = {}
    boxes = {}
    for f in faces:
        pts = np.asarray(net.placements[f], dtype=float)
        if abs(signed_area(pts)) <= threshold:
            raise PolygonError(f"face {f} is placed with zero area")
        shrunk = (ShapelyPolygon(t).buffer(-tol, join_style='mitre') for t in _triangles(pts))
        tris[f] = [t for t in shrunk if not t.is_empty]
        boxes[f] = (pts.min(axis=0), pts.max(axis=0))

    report = OverlapReport()
    for i, f in enumerate(faces):
        for g in faces[i + 1:]:
            lo = np.maximum(boxes[f][0], boxes[g][0])
            hi = np.minimum(boxes[f][1], boxes[g][1])
            if np.any(hi - lo <= tol):
                continue
            area = 0.0
            for t1 in tris[f]:
                for t2 in tris[g]:
                    if t1.intersects(t2):
                        area += t1.intersection(t2).area
            if area > threshold:
                report.pairs.append((f, g, area))
                report.total_area += area
    if report.pairs:
        logger.debug(f"overlapping face pairs: {report.pairs}")
    return report


def _face_point(net, face: int, vertex: int) -> np.ndarray:
    verts = net.face_vertices[face]
    return np.asarray(net.placements[face][verts.index(vertex)], dtype=float)


def check_half_planes(net, tol: Optional[float] = None, config=None) -> bool:
    """Both halves lie in opposite closed half-planes of the line through the join edge.

    Raises:
        PolygonError: the net has no join edge or no half labels
    """
    if getattr(net, 'join_edge', None) is None or not getattr(net, 'halves', None):
        raise PolygonError("net has no join edge / half labels")
    a, b = net.join_edge
    carrier = [f for f, side in net.halves.items() if side == 'A'
               and a in net.face_vertices[f] and b in net.face_vertices[f]]
    if not carrier:
        raise PolygonError(f"join edge {net.join_edge} is not on a face of half A")
    pa = _face_point(net, carrier[0], a)
    pb = _face_point(net, carrier[0], b)
    d = pb - pa
    d = d / np.linalg.norm(d)
    if tol is None:
        tol = geom_tolerance(np.vstack(list(net.placements.values())), config)

    sides = {'A': [], 'B': []}
    for f, side in net.halves.items():
        pts = np.asarray(net.placements[f], dtype=float) - pa
        sides[side].extend(d[0] * pts[:, 1] - d[1] * pts[:, 0])
    sa = np.asarray(sides['A'])
    sb = np.asarray(sides['B'])
    if len(sa) == 0 or len(sb) == 0:
        return False
    return bool((sa.max() <= tol and sb.min() >= -tol) or (sa.min() >= -tol and sb.max() <= tol))


def _angle_3d(p, q, r, normal) -> float:
    a = q - p
    b = r - p
    ang = math.atan2(float(np.dot(np.cross(a, b), normal)), float(np.dot(a, b)))
    return ang + 2.0 * math.pi if ang < 0.0 else ang


def _angle_2d(p, q, r) -> float:
    a = q - p
    b = r - p
    ang = math.atan2(_cross(a, b), float(np.dot(a, b)))
    return ang + 2.0 * math.pi if ang < 0.0 else ang


def placement_isometry_error(P, faces: Sequence[int], placements: dict, face_vertices: Optional[dict] = None) -> float:
    """Max relative edge-length error and absolute corner-angle error over the given faces."""
    worst = 0.0
    for f in faces:
        verts = list(P.faces[f]) if face_vertices is None else list(face_vertices[f])
        if sorted(verts) != sorted(P.faces[f]) or f not in placements:
            raise PolygonError(f"face {f} placement does not match the solid")
        pts3 = P.vertices[verts]
        pts2 = np.asarray(placements[f], dtype=float)
        if len(pts2) != len(verts):
            raise PolygonError(f"face {f} placement has {len(pts2)} points for {len(verts)} vertices")
        normal = np.cross(pts3, np.roll(pts3, -1, axis=0)).sum(axis=0)
        normal = normal / np.linalg.norm(normal)
        k = len(verts)
        for j in range(k):
            l3 = float(np.linalg.norm(pts3[(j + 1) % k] - pts3[j]))
            l2 = float(np.linalg.norm(pts2[(j + 1) % k] - pts2[j]))
            worst = max(worst, abs(l2 - l3) / l3)
            a3 = _angle_3d(pts3[j], pts3[(j + 1) % k], pts3[j - 1], normal)
            a2 = _angle_2d(pts2[j], pts2[(j + 1) % k], pts2[j - 1])
            worst = max(worst, abs(a2 - a3))
    return worst


def check_isometry(P, H, L) -> float:
    """
    Max error between a half's planar layout and the solid.

    Args:
        P: Polyhedron
        H: HalfSurface (its face set)
        L: PlanarLayout for H

    Returns:
        float: max of relative edge-length errors and absolute corner-angle errors

    Raises:
        PolygonError: the layout's faces differ from the half's
    """
    if set(H.faces) != set(L.placements):
        raise PolygonError(f"layout faces {sorted(L.placements)} differ from half faces {sorted(H.faces)}")
    return placement_isometry_error(P, sorted(H.faces), L.placements)


def rigid_residual(points_a, points_b) -> float:
    """Max point distance after the best proper rigid motion of b onto a (Kabsch)."""
    A = np.asarray(points_a, dtype=float)
    B = np.asarray(points_b, dtype=float)
    if A.shape != B.shape:
        raise PolygonError(f"point sets differ in shape: {A.shape} vs {B.shape}")
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    Ac, Bc = A - ca, B - cb
    U, _, Vt = np.linalg.svd(Bc.T @ Ac)
    d = np.sign(np.linalg.det(Vt.T @ U.T)) or 1.0
    R = Vt.T @ np.diag([1.0, d]) @ U.T
    return float(np.linalg.norm(Ac - Bc @ R.T, axis=1).max())


def _ccw(points: np.ndarray) -> np.ndarray:
    return points[::-1].copy() if signed_area(points) < 0.0 else points


def _drop_straight(points: np.ndarray, angle_tol: float) -> np.ndarray:
    keep = [i for i in range(len(points))
            if abs(_angle_2d(points[i], points[(i + 1) % len(points)], points[i - 1]) - math.pi) > angle_tol]
    return points[keep]


def _signature(points: np.ndarray):
    n = len(points)
    lengths = np.array([np.linalg.norm(points[(i + 1) % n] - points[i]) for i in range(n)])
    angles = np.array([_angle_2d(points[i], points[(i + 1) % n], points[i - 1]) for i in range(n)])
    return lengths, angles


def congruent(p1, p2, tol: Optional[float] = None, angle_tol: float = DEFAULT_ANGLE_TOL, config=None) -> bool:
    """
    Planar congruence up to rotation, translation and reflection.

    Straight vertices are removed first, then edge-length/angle sequences are
    compared over all cyclic shifts of both orientations; a match is confirmed
    by the optimal rigid alignment.
    """
    a = np.asarray(p1, dtype=float)
    b = np.asarray(p2, dtype=float)
    if tol is None:
        tol = getattr(config, 'TOL_GEOM_REL', DEFAULT_TOL_GEOM_REL) * max(_diag(a), _diag(b))
    a = _drop_straight(_ccw(a), angle_tol)
    la, aa = _signature(a)
    for mirrored in (False, True):
        c = b * np.array([1.0, -1.0]) if mirrored else b
        c = _drop_straight(_ccw(c), angle_tol)
        if len(c) != len(a):
            continue
        lc, ac = _signature(c)
        n = len(a)
        for shift in range(n):
            if (np.abs(np.roll(lc, -shift) - la).max() <= tol
                    and np.abs(np.roll(ac, -shift) - aa).max() <= angle_tol):
                if rigid_residual(a, np.roll(c, -shift, axis=0)) <= tol:
                    return True
    return False


def net_alignment_residual(net_a, net_b) -> float:
    """Rigid residual between two nets of the same solid, matching face vertices by identity."""
    if set(net_a.placements) != set(net_b.placements):
        raise PolygonError("nets place different faces")
    pa, pb = [], []
    for f in sorted(net_a.placements):
        for v in net_a.face_vertices[f]:
            pa.append(_face_point(net_a, f, v))
            pb.append(_face_point(net_b, f, v))
    return rigid_residual(np.array(pa), np.array(pb))


def nets_congruent(net_a, net_b, tol: Optional[float] = None, config=None) -> bool:
    if tol is None:
        tol = geom_tolerance(np.vstack(list(net_a.placements.values())), config)
    return net_alignment_residual(net_a, net_b) <= tol


def half_boundary(P, net, side: str) -> np.ndarray:
    """Boundary polygon of one half, read off the net's face placements.

    Half A is bounded by the cycle walk, half B by the reversed walk.
    """
    walk = list(net.cycle.walk)
    if side == 'B':
        walk = walk[::-1]
    pts = []
    n = len(walk)
    for i, v in enumerate(walk):
        f = P.halfedge_face(v, walk[(i + 1) % n])
        if net.halves.get(f) != side:
            raise PolygonError(f"face {f} left of boundary edge at vertex {v} is not in half {side}")
        pts.append(_face_point(net, f, v))
    return np.array(pts)


def shared_edge_residual(P, net) -> float:
    """Max disagreement of the two placements of every uncut edge."""
    cut = set(tuple(sorted(e)) for e in net.cut_edges)
    worst = 0.0
    for u, v in P.edges:
        if (u, v) in cut:
            continue
        f, g = P.halfedge_face(u, v), P.halfedge_face(v, u)
        for w in (u, v):
            worst = max(worst, float(np.linalg.norm(_face_point(net, f, w) - _face_point(net, g, w))))
    return worst


def cut_path_ok(P, net) -> bool:
    """Cut edges plus the join edge are the cycle's edges, and the cuts form a spanning path."""
    walk = net.cycle.walk
    n = len(walk)
    cycle_edges = {tuple(sorted((walk[i], walk[(i + 1) % n]))) for i in range(n)}
    cut = {tuple(sorted(e)) for e in net.cut_edges}
    join = tuple(sorted(net.join_edge))
    if join in cut or cut | {join} != cycle_edges:
        return False
    G = nx.Graph(list(cut))
    G.add_nodes_from(range(P.num_vertices))
    return (G.number_of_edges() == P.num_vertices - 1 and nx.is_connected(G)
            and max(d for _, d in G.degree()) <= 2)


def region_side_angles(P, walk: Sequence[int]) -> dict:
    """Left/right angle at every walk vertex, summed over the two face regions the walk bounds.

    The regions are found by flooding faces across non-walk edges, independently of
    the rotation-order computation used by the search.
    """
    n = len(walk)
    walk_edges = {tuple(sorted((walk[i], walk[(i + 1) % n]))) for i in range(n)}
    G = nx.Graph()
    G.add_nodes_from(range(P.num_faces))
    for u, v in P.edges:
        if (u, v) not in walk_edges:
            G.add_edge(P.halfedge_face(u, v), P.halfedge_face(v, u))
    left_seed = P.halfedge_face(walk[0], walk[1])
    left = nx.node_connected_component(G, left_seed)
    out = {}
    for v in walk:
        lsum = rsum = 0.0
        for f in P.vertex_faces(v):
            k = P.faces[f].index(v)
            face = P.faces[f]
            ang = _angle_3d(P.vertices[v], P.vertices[face[(k + 1) % len(face)]], P.vertices[face[k - 1]],
                            P.face_normal(f))
            if f in left:
                lsum += ang
            else:
                rsum += ang
        out[v] = (lsum, rsum)
    return out


def brute_force_ham_cycles(P) -> list:
    """
    Oracle: every Hamiltonian cycle by exhaustive permutation of the vertices after 0.

    A permutation prefix is abandoned as soon as it uses a non-edge; there is no
    symmetry reduction beyond fixing vertex 0 and no geometric pruning.

    Returns:
        list: sorted canonical 0-based vertex tuples
    """
    from .hamq_search import canonicalize

    n = P.num_vertices
    found = set()
    seq = [0]
    rest = set(range(1, n))

    def extend():
        if not rest:
            if P.has_edge(seq[-1], 0):
                found.add(canonicalize(seq))
            return
        for v in sorted(rest):
            if not P.has_edge(seq[-1], v):
                continue
            seq.append(v)
            rest.remove(v)
            extend()
            rest.add(v)
            seq.pop()

    if n >= 3:
        extend()
    return sorted(found)


def verify_net(P, net, config=None) -> VerificationReport:
    """
    Full verification suite for a net.

    Checks: simple boundary, no face overlap, halves in opposite half-planes of
    the join edge, uncut edges glued, isometric faces, convex half boundaries,
    and the cut edges forming a spanning cut-path.
    """
    report = VerificationReport()
    all_pts = np.vstack([net.placements[f] for f in sorted(net.placements)])
    tol = geom_tolerance(all_pts, config)
    tol_iso = getattr(config, 'TOL_ISO', 1e-9)

    try:
        simple = check_simple(net.boundary, tol=tol)
        report.checks.append(CheckResult('simple', simple.is_simple,
                                         f"{len(simple.violations)} violation(s), area {simple.area:.6g}"))
    except PolygonError as e:
        report.checks.append(CheckResult('simple', False, str(e)))

    try:
        overlap = check_no_overlap(net, tol=tol)
        report.checks.append(CheckResult('no_overlap', overlap.ok,
                                         f"{len(overlap.pairs)} overlapping pair(s), total area {overlap.total_area:.3g}"))
    except PolygonError as e:
        report.checks.append(CheckResult('no_overlap', False, str(e)))

    try:
        report.checks.append(CheckResult('half_planes', check_half_planes(net, tol=tol),
                                         f"join edge {tuple(v + 1 for v in net.join_edge)}"))
    except PolygonError as e:
        report.checks.append(CheckResult('half_planes', False, str(e)))

    glue = shared_edge_residual(P, net)
    report.checks.append(CheckResult('shared_edges', glue <= tol, f"max residual {glue:.3e} (tol {tol:.3e})"))

    iso = placement_isometry_error(P, sorted(net.placements), net.placements, net.face_vertices)
    report.checks.append(CheckResult('isometry', iso <= tol_iso, f"max error {iso:.3e} (tol {tol_iso:.1e})"))

    convex_ok = True
    details = []
    for side in ('A', 'B'):
        try:
            ok = check_convex(half_boundary(P, net, side), tol=tol)
        except PolygonError as e:
            ok = False
            details.append(f"{side}: {e}")
        convex_ok = convex_ok and ok
        details.append(f"{side} {'convex' if ok else 'not convex'}")
    report.checks.append(CheckResult('convex_halves', convex_ok, ', '.join(details)))

    report.checks.append(CheckResult('cut_path', cut_path_ok(P, net), f"{len(net.cut_edges)} cut edges"))

    report.worst_residual = max(glue, iso)
    for c in report.checks:
        if not c.passed:
            logger.error(f"{net.polyhedron}: check {c.name} failed: {c.details}")
    return report
