"""
Built-in solids and the random convex test corpus.

Vertex labels (1-based, as printed by the CLI) are frozen here so that the
worked-example cycles can be typed in verbatim:

  square_pyramid_octa_half   base square 1,2,3,4 (counterclockwise seen from above), apex 5.
                             Faces F=1-2-5, R=2-3-5, K=3-4-5, L=4-1-5, B=base.  Q = 12534.
  octahedron                 1=+x, 2=+y, 3=+z, 4=-y, 5=-z, 6=-x (unit edges).  Q = 123645.
  cube                       bottom 1,2,3,4 (counterclockwise seen from above), top 5..8 with
                             i+4 above i.  Faces F, R, K, L, T, B (front y=0, right x=1, back y=1,
                             left x=0, top, bottom).  Q = 15623784 (the "napkin holder").

Each builder returns a new Polyhedron; all faces are counterclockwise seen from outside.
"""

import logging
import math

import numpy as np
from scipy.spatial import ConvexHull

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.11
    from scipy.spatial.qhull import QhullError

from .mesh_core import Polyhedron, validate

logger = logging.getLogger("HamNet.Corpus")

PHI = (1.0 + math.sqrt(5.0)) / 2.0

# The three worked examples: fixture name -> cycle string in compact form
WORKED_CYCLES = {
    'square_pyramid_octa_half': '12534',
    'octahedron': '123645',
    'cube': '15623784',
}


class CorpusError(ValueError):
    """A random solid could not be generated."""


class UnknownFixtureError(KeyError):
    """No built-in solid has this name."""


def _plane_key_match(eq_a, eq_b, tol: float) -> bool:
    return abs(float(np.dot(eq_a[:3], eq_b[:3])) - 1.0) < tol and abs(float(eq_a[3] - eq_b[3])) < tol


def hull_faces(vertices, tol: float = 1e-9) -> list:
    """
    Facets of the convex hull of points that are all extreme, merging coplanar
    triangles into polygons. Each face is counterclockwise seen from outside and
    starts at its smallest vertex; faces are sorted.
    """
    pts = np.asarray(vertices, dtype=float)
    hull = ConvexHull(pts)
    groups = []  # (equation, vertex set)
    for simplex, eq in zip(hull.simplices, hull.equations):
        for g_eq, g_verts in groups:
            if _plane_key_match(eq, g_eq, tol):
                g_verts.update(int(v) for v in simplex)
                break
        else:
            groups.append((eq, set(int(v) for v in simplex)))

    faces = []
    for eq, verts in groups:
        idx = sorted(verts)
        normal = eq[:3]
        centre = pts[idx].mean(axis=0)
        x = pts[idx[0]] - centre
        x /= np.linalg.norm(x)
        y = np.cross(normal, x)
        order = sorted(idx, key=lambda v: math.atan2(float(np.dot(pts[v] - centre, y)),
                                                     float(np.dot(pts[v] - centre, x))))
        k = order.index(min(order))
        faces.append(tuple(order[k:] + order[:k]))
    return sorted(faces)


def tetrahedron() -> Polyhedron:
    verts = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)]
    return Polyhedron(verts, hull_faces(verts), name='tetrahedron')


def cube() -> Polyhedron:
    verts = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 0.0),
             (0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 1.0)]
    faces = [(0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7), (4, 5, 6, 7), (0, 3, 2, 1)]
    return Polyhedron(verts, faces, name='cube', face_names=('F', 'R', 'K', 'L', 'T', 'B'))


def octahedron() -> Polyhedron:
    s = 1.0 / math.sqrt(2.0)
    verts = [(s, 0.0, 0.0), (0.0, s, 0.0), (0.0, 0.0, s), (0.0, -s, 0.0), (0.0, 0.0, -s), (-s, 0.0, 0.0)]
    return Polyhedron(verts, hull_faces(verts), name='octahedron')


def dodecahedron() -> Polyhedron:
    inv = 1.0 / PHI
    verts = [(x, y, z) for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)]
    for a in (-inv, inv):
        for b in (-PHI, PHI):
            verts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    return Polyhedron(verts, hull_faces(verts), name='dodecahedron')


def icosahedron() -> Polyhedron:
    verts = []
    for a in (-1.0, 1.0):
        for b in (-PHI, PHI):
            verts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    return Polyhedron(verts, hull_faces(verts), name='icosahedron')


def rhombic_dodecahedron() -> Polyhedron:
    verts = [(x, y, z) for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)]
    verts += [(2.0, 0.0, 0.0), (-2.0, 0.0, 0.0), (0.0, 2.0, 0.0), (0.0, -2.0, 0.0), (0.0, 0.0, 2.0), (0.0, 0.0, -2.0)]
    return Polyhedron(verts, hull_faces(verts), name='rhombic_dodecahedron')


def square_pyramid_octa_half() -> Polyhedron:
    h = 1.0 / math.sqrt(2.0)
    verts = [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 0.0), (0.5, 0.5, h)]
    faces = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4), (0, 3, 2, 1)]
    return Polyhedron(verts, faces, name='square_pyramid_octa_half', face_names=('F', 'R', 'K', 'L', 'B'))


# Fixture registry - maps fixture names to builders
FIXTURE_REGISTRY = {
    'tetrahedron': tetrahedron,
    'cube': cube,
    'octahedron': octahedron,
    'dodecahedron': dodecahedron,
    'icosahedron': icosahedron,
    'rhombic_dodecahedron': rhombic_dodecahedron,
    'square_pyramid_octa_half': square_pyramid_octa_half,
}


def fixture(name: str) -> Polyhedron:
    """
    Build a named solid.

    Raises:
        UnknownFixtureError: name is not in FIXTURE_REGISTRY
    """
    try:
        builder = FIXTURE_REGISTRY[name]
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture {name!r}; available: {sorted(FIXTURE_REGISTRY)}") from None
    return builder()


def corpus_gen(n_points: int, seed=None, config=None) -> Polyhedron:
    """
    Convex hull of pseudo-random points on the unit sphere.

    Points are numpy PCG64 standard normals (np.random.default_rng(seed)) scaled to
    unit length, so a seed reproduces the same solid. Qhull returns triangles, so
    the result is simplicial.

    Args:
        n_points: number of points (>= 4); every point ends up a vertex
        seed: generator seed (default Config.CORPUS_SEED)
        config: Optional Config (CORPUS_SEED, CORPUS_MAX_RETRIES, CORPUS_JITTER)

    Raises:
        CorpusError: fewer than 4 points, or still degenerate after the retries
    """
    if n_points < 4:
        raise CorpusError(f"need at least 4 points, got {n_points}")
    if seed is None:
        seed = getattr(config, 'CORPUS_SEED', 1)
    retries = getattr(config, 'CORPUS_MAX_RETRIES', 5)
    jitter = getattr(config, 'CORPUS_JITTER', 1e-6)

    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n_points, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)

    for attempt in range(retries + 1):
        if attempt:
            pts = pts + jitter * rng.standard_normal(pts.shape)
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        try:
            hull = ConvexHull(pts)
        except QhullError as e:
            logger.warning(f"random hull n={n_points} seed={seed}: qhull failed ({e}), re-perturbing")
            continue
        if len(hull.vertices) != n_points:
            logger.warning(f"random hull n={n_points} seed={seed}: "
                           f"{n_points - len(hull.vertices)} point(s) not extreme, re-perturbing")
            continue
        faces = []
        for simplex, eq in zip(hull.simplices, hull.equations):
            a, b, c = (int(v) for v in simplex)
            if np.dot(np.cross(pts[b] - pts[a], pts[c] - pts[a]), eq[:3]) < 0.0:
                b, c = c, b
            faces.append((a, b, c))
        P = Polyhedron(pts, sorted(faces), name=f"random_n{n_points}_s{seed}")
        report = validate(P, convex_required=True, config=config)
        if report.passed:
            logger.debug(f"generated {P.label}: V={P.num_vertices}, E={P.num_edges}, F={P.num_faces}")
            return P
        logger.warning(f"{P.label}: validation failed ({[c.name for c in report.failures()]}), re-perturbing")
    raise CorpusError(f"no valid hull for n={n_points} seed={seed} after {retries} retries")
