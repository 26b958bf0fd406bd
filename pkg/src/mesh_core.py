"""
Polyhedral surface model.
Loads OFF meshes, checks them, and measures their intrinsic geometry
(corner angles, vertex curvature) and combinatorics (edges, rotation systems).
"""

import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

logger = logging.getLogger("HamNet.Mesh")

TWO_PI = 2.0 * math.pi


class MeshError(ValueError):
    """Base error for malformed or invalid meshes."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class OffParseError(MeshError):
    """The OFF text does not follow the format."""


class NonManifoldError(MeshError):
    """An edge is not shared by exactly two faces, or a vertex star is not a single disk."""


class OrientationError(MeshError):
    """Face cycles are not consistently oriented."""


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str = ''

    def to_dict(self) -> dict:
        return {'name': self.name, 'pass': self.passed, 'details': self.details}


@dataclass
class ValidationReport:
    """Pass/fail per mesh invariant."""
    convex_required: bool
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def _newell_normal(points: np.ndarray) -> np.ndarray:
    """Unit normal of a (near-)planar polygon by Newell's method."""
    nxt = np.roll(points, -1, axis=0)
    n = np.cross(points, nxt).sum(axis=0)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        return n
    return n / norm


class Polyhedron:
    """Closed oriented polygonal surface.

    Faces are vertex-index cycles, counterclockwise as seen from outside.
    All derived structures are built once here; the object is not mutated afterwards.
    """

    def __init__(self, vertices, faces: Iterable[Sequence[int]], name: Optional[str] = None,
                 face_names: Optional[Sequence[str]] = None, face_lines: Optional[Sequence[int]] = None):
        verts = np.array(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise MeshError(f"vertices must be an (n, 3) array, got shape {verts.shape}")
        verts.setflags(write=False)
        self._vertices = verts
        self._faces = tuple(tuple(int(i) for i in f) for f in faces)
        self.name = name
        self.face_names = tuple(face_names) if face_names is not None else None

        n = len(verts)
        for fi, face in enumerate(self._faces):
            lineno = face_lines[fi] if face_lines else None
            if len(face) < 3:
                raise MeshError(f"face {fi} has {len(face)} vertices (need at least 3)", lineno)
            for v in face:
                if v < 0 or v >= n:
                    raise MeshError(f"face {fi} references vertex {v}, out of range 0..{n - 1}", lineno)
            if len(set(face)) != len(face):
                raise MeshError(f"face {fi} repeats a vertex", lineno)

        # Halfedges: directed edge (u, v) -> face whose boundary traverses u then v
        uses = {}
        for fi, face in enumerate(self._faces):
            k = len(face)
            for j in range(k):
                u, v = face[j], face[(j + 1) % k]
                uses.setdefault((min(u, v), max(u, v)), []).append((fi, u, v))

        halfedge_face = {}
        for key, entries in uses.items():
            if len(entries) != 2:
                fi = entries[0][0]
                lineno = face_lines[fi] if face_lines else None
                raise NonManifoldError(f"edge {key} appears in {len(entries)} faces (expected 2)", lineno)
            (f1, u1, v1), (f2, u2, v2) = entries
            if (u1, v1) == (u2, v2):
                lineno = face_lines[f2] if face_lines else None
                raise OrientationError(
                    f"directed edge ({u1}, {v1}) is traversed by faces {f1} and {f2} in the same direction", lineno)
            halfedge_face[(u1, v1)] = f1
            halfedge_face[(u2, v2)] = f2
        self._halfedge_face = halfedge_face
        self._edges = tuple(sorted(uses.keys()))

        vertex_faces = [[] for _ in range(n)]
        neighbors = [set() for _ in range(n)]
        face_pos = {}
        for fi, face in enumerate(self._faces):
            for j, v in enumerate(face):
                vertex_faces[v].append(fi)
                face_pos[(fi, v)] = j
        for a, b in self._edges:
            neighbors[a].add(b)
            neighbors[b].add(a)
        self._vertex_faces = tuple(tuple(fs) for fs in vertex_faces)
        self._neighbors = tuple(tuple(sorted(ns)) for ns in neighbors)
        self._face_pos = face_pos

        self._normals = np.array([_newell_normal(verts[list(f)]) for f in self._faces])
        self._normals.setflags(write=False)
        lo, hi = verts.min(axis=0), verts.max(axis=0)
        self._diagonal = float(np.linalg.norm(hi - lo))

        self._corner = {}
        for fi, face in enumerate(self._faces):
            k = len(face)
            n_f = self._normals[fi]
            for j, v in enumerate(face):
                p = verts[v]
                a = verts[face[(j + 1) % k]] - p
                b = verts[face[j - 1]] - p
                ang = math.atan2(float(np.dot(n_f, np.cross(a, b))), float(np.dot(a, b)))
                if ang < 0.0:
                    ang += TWO_PI
                self._corner[(fi, v)] = ang

        self._rotations = tuple(self._build_rotation(v) for v in range(n))

    def _build_rotation(self, v: int):
        """Cyclic ((v, w), face) pairs around v, counterclockwise from outside; None if the star is broken."""
        if not self._neighbors[v]:
            return None
        start = self._neighbors[v][0]
        seq = []
        w = start
        for _ in range(len(self._vertex_faces[v]) + 1):
            f = self._halfedge_face.get((v, w))
            if f is None:
                return None
            seq.append(((min(v, w), max(v, w)), f))
            face = self._faces[f]
            w = face[self._face_pos[(f, v)] - 1]
            if w == start:
                break
        else:
            return None
        if len(seq) != len(self._vertex_faces[v]):
            return None
        return tuple(seq)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def faces(self) -> tuple:
        return self._faces

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def num_faces(self) -> int:
        return len(self._faces)

    @property
    def diagonal(self) -> float:
        """Bounding-box diagonal; the scale for relative tolerances."""
        return self._diagonal

    def neighbors(self, v: int) -> tuple:
        return self._neighbors[v]

    def vertex_faces(self, v: int) -> tuple:
        return self._vertex_faces[v]

    def face_normal(self, f: int) -> np.ndarray:
        return self._normals[f]

    def halfedge_face(self, u: int, v: int) -> Optional[int]:
        """Face whose boundary runs u -> v, i.e. the face to the left of the directed edge."""
        return self._halfedge_face.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._halfedge_face

    def face_label(self, f: int) -> str:
        if self.face_names is not None:
            return self.face_names[f]
        return str(f + 1)

    def fingerprint(self) -> str:
        """Short content hash used when the solid has no name."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self._vertices).tobytes())
        h.update(repr(self._faces).encode())
        return f"sha256:{h.hexdigest()[:16]}"

    @property
    def label(self) -> str:
        return self.name if self.name else self.fingerprint()

    def reversed(self) -> "Polyhedron":
        """Same solid with every face cycle reversed (inward orientation)."""
        return Polyhedron(self._vertices, [tuple(reversed(f)) for f in self._faces], name=self.name,
                          face_names=self.face_names)

    def signed_volume(self) -> float:
        vol = 0.0
        verts = self._vertices
        for face in self._faces:
            p0 = verts[face[0]]
            for j in range(1, len(face) - 1):
                vol += float(np.dot(p0, np.cross(verts[face[j]], verts[face[j + 1]])))
        return vol / 6.0

    def transformed(self, rotation: np.ndarray, translation=(0.0, 0.0, 0.0)) -> "Polyhedron":
        """Rigidly moved copy; combinatorics are untouched."""
        verts = self._vertices @ np.asarray(rotation, dtype=float).T + np.asarray(translation, dtype=float)
        return Polyhedron(verts, self._faces, name=self.name, face_names=self.face_names)


def corner_angle(P: Polyhedron, face: int, vertex: int) -> float:
    """Interior angle of `face` at `vertex`, from the 3D edge vectors.

    Raises:
        MeshError: if the vertex is not on the face
    """
    try:
        return P._corner[(face, vertex)]
    except KeyError:
        raise MeshError(f"vertex {vertex} is not on face {face}") from None


def total_angle(P: Polyhedron, vertex: int) -> float:
    """Sum of the corner angles incident to a vertex."""
    return math.fsum(P._corner[(f, vertex)] for f in P.vertex_faces(vertex))


def vertex_curvature(P: Polyhedron, vertex: int) -> float:
    """Angle defect 2*pi minus the incident corner angles."""
    return TWO_PI - total_angle(P, vertex)


def rotation_order(P: Polyhedron, vertex: int) -> tuple:
    """Edges and faces around a vertex, counterclockwise as seen from outside.

    Returns a cyclic tuple of (edge, face) pairs starting at the edge to the
    smallest neighbour; each face lies between its own edge and the next one.

    Raises:
        NonManifoldError: if the faces around the vertex do not close up into one fan
    """
    rot = P._rotations[vertex]
    if rot is None:
        raise NonManifoldError(f"star of vertex {vertex} is not a single closed fan")
    return rot


def _face_is_simple(P: Polyhedron, f: int, tol: float) -> bool:
    from .verify import check_simple, PolygonError

    face = P.faces[f]
    pts = P.vertices[list(face)]
    n = P.face_normal(f)
    x = pts[1] - pts[0]
    x = x - np.dot(x, n) * n
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return False
    x /= norm
    y = np.cross(n, x)
    rel = pts - pts[0]
    poly = np.column_stack([rel @ x, rel @ y])
    try:
        return check_simple(poly, tol=tol).is_simple
    except PolygonError:
        return False


def validate(P: Polyhedron, convex_required: bool = True, config=None) -> ValidationReport:
    """
    Check every mesh invariant and report each as pass/fail.

    Args:
        P: Polyhedron to check
        convex_required: include the convexity check (off for non-convex mode)
        config: Optional Config for tolerances

    Returns:
        ValidationReport: checks 'manifold', 'euler', 'planarity', 'simple_faces', 'degree' and,
        when required, 'convexity'
    """
    diag = P.diagonal
    tol_planar = getattr(config, 'TOL_PLANAR_REL', 1e-8) * diag
    tol_convex = getattr(config, 'TOL_CONVEX_REL', 1e-8) * diag
    report = ValidationReport(convex_required=convex_required)

    broken = [v for v in range(P.num_vertices) if P._rotations[v] is None]
    report.checks.append(CheckResult(
        'manifold', not broken,
        'every edge in 2 faces, every vertex star one fan' if not broken else f"broken vertex stars: {broken}"))

    V, E, F = P.num_vertices, P.num_edges, P.num_faces
    chi = V - E + F
    report.checks.append(CheckResult('euler', chi == 2, f"V - E + F = {V} - {E} + {F} = {chi}"))

    worst = 0.0
    worst_face = None
    for fi, face in enumerate(P.faces):
        pts = P.vertices[list(face)]
        d = np.abs((pts - pts.mean(axis=0)) @ P.face_normal(fi))
        if d.max() > worst:
            worst = float(d.max())
            worst_face = fi
    report.checks.append(CheckResult(
        'planarity', worst <= tol_planar, f"max off-plane distance {worst:.3e} (face {worst_face}, tol {tol_planar:.3e})"))

    bad_faces = [fi for fi in range(F) if not _face_is_simple(P, fi, 1e-7 * diag)]
    report.checks.append(CheckResult(
        'simple_faces', not bad_faces, 'all faces simple' if not bad_faces else f"non-simple faces: {bad_faces}"))

    low = [v for v in range(V) if len(P.neighbors(v)) < 3]
    report.checks.append(CheckResult(
        'degree', not low, 'all vertex degrees >= 3' if not low else f"vertices of degree < 3: {low}"))

    if convex_required:
        worst = -math.inf
        where = None
        for fi, face in enumerate(P.faces):
            centre = P.vertices[list(face)].mean(axis=0)
            side = (P.vertices - centre) @ P.face_normal(fi)
            j = int(np.argmax(side))
            if side[j] > worst:
                worst = float(side[j])
                where = (fi, j)
        report.checks.append(CheckResult(
            'convexity', worst <= tol_convex,
            f"max height above a face plane {worst:.3e} (face {where[0]}, vertex {where[1]}, tol {tol_convex:.3e})"))

    for c in report.failures():
        logger.warning(f"{P.label}: {c.name} check failed: {c.details}")
    logger.debug(f"{P.label}: validation {'passed' if report.passed else 'failed'}")
    return report


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].strip()


def load_off(text, name: Optional[str] = None) -> Polyhedron:
    """
    Parse an OFF mesh.

    Comments ('#') and blank lines are allowed anywhere. Faces are checked for
    consistent orientation; a consistently inward mesh is flipped to outward.

    Args:
        text: OFF contents, as a string or any iterable of lines
        name: Optional name for the polyhedron

    Returns:
        Polyhedron

    Raises:
        OffParseError: malformed header or records
        MeshError: bad face index or face with fewer than 3 vertices
        NonManifoldError, OrientationError: edge-level manifold / orientability violations
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    records = [(i + 1, _strip_comment(line)) for i, line in enumerate(lines)]
    records = [(no, body) for no, body in records if body]
    if not records:
        raise OffParseError("empty input")

    pos = 0
    lineno, header = records[pos]
    tokens = header.split()
    if tokens[0] != 'OFF':
        raise OffParseError(f"expected header 'OFF', found {tokens[0]!r}", lineno)
    counts = tokens[1:]
    pos += 1
    if not counts:
        if pos >= len(records):
            raise OffParseError("missing counts line", lineno)
        lineno, body = records[pos]
        counts = body.split()
        pos += 1
    try:
        nv, nf = int(counts[0]), int(counts[1])
    except (IndexError, ValueError):
        raise OffParseError(f"counts line must be 'V F E', got {' '.join(counts)!r}", lineno) from None
    if nv < 0 or nf < 0:
        raise OffParseError("negative vertex or face count", lineno)

    vertices = []
    for _ in range(nv):
        if pos >= len(records):
            raise OffParseError(f"expected {nv} vertex lines, found {len(vertices)}", records[-1][0])
        lineno, body = records[pos]
        pos += 1
        parts = body.split()
        try:
            vertices.append([float(x) for x in parts[:3]])
        except ValueError:
            raise OffParseError(f"bad vertex coordinates {body!r}", lineno) from None
        if len(parts) < 3:
            raise OffParseError(f"vertex line needs 3 coordinates, got {len(parts)}", lineno)

    faces = []
    face_lines = []
    for _ in range(nf):
        if pos >= len(records):
            raise OffParseError(f"expected {nf} face lines, found {len(faces)}", records[-1][0])
        lineno, body = records[pos]
        pos += 1
        parts = body.split()
        try:
            k = int(parts[0])
            idx = [int(x) for x in parts[1:1 + k]]
        except ValueError:
            raise OffParseError(f"bad face record {body!r}", lineno) from None
        if k < 3:
            raise MeshError(f"face with {k} vertices (need at least 3)", lineno)
        if len(idx) != k:
            raise OffParseError(f"face declares {k} vertices but lists {len(idx)}", lineno)
        if len(parts) > 1 + k:
            logger.warning(f"line {lineno}: ignoring {len(parts) - 1 - k} trailing face attribute(s)")
        for v in idx:
            if v < 0 or v >= nv:
                raise MeshError(f"vertex index {v} out of range 0..{nv - 1}", lineno)
        faces.append(idx)
        face_lines.append(lineno)

    if pos < len(records):
        logger.debug(f"ignoring {len(records) - pos} record(s) after the face list")

    P = Polyhedron(vertices, faces, name=name, face_lines=face_lines)
    if P.signed_volume() < 0.0:
        logger.info(f"{P.label}: faces oriented inward, reversing all {P.num_faces} faces")
        P = P.reversed()
    logger.info(f"Loaded OFF mesh {P.label}: V={P.num_vertices}, E={P.num_edges}, F={P.num_faces}")
    return P


def emit_off(P: Polyhedron) -> str:
    """Write OFF text that load_off reads back to the same doubles and faces."""
    lines = ['OFF']
    if P.name:
        lines.append(f"# {P.name}")
    lines.append(f"{P.num_vertices} {P.num_faces} {P.num_edges}")
    for x, y, z in P.vertices:
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    for face in P.faces:
        lines.append(' '.join(str(i) for i in (len(face),) + face))
    return '\n'.join(lines) + '\n'
