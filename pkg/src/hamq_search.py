"""
Hamiltonian cycles on the 1-skeleton and the quasigeodesic angle condition.
"""

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .mesh_core import Polyhedron, corner_angle, rotation_order

logger = logging.getLogger("HamNet.Search")


class CycleError(ValueError):
    """A vertex sequence is not a Hamiltonian cycle of the solid."""

    def __init__(self, message: str, vertex: Optional[int] = None):
        self.vertex = vertex
        super().__init__(message)


class NotQuasigeodesicError(CycleError):
    """A Hamiltonian cycle has more than pi on one side of a vertex."""

    def __init__(self, message: str, vertex: int, left: float, right: float):
        self.left = left
        self.right = right
        super().__init__(message, vertex)


def canonicalize(seq: Sequence[int]) -> tuple:
    """Lexicographically smallest rotation of the cycle, over both directions."""
    seq = tuple(seq)
    n = len(seq)
    rev = seq[::-1]
    return min(min(s[i:] + s[:i] for i in range(n)) for s in (seq, rev))


@dataclass(frozen=True)
class HamCycle:
    """Undirected Hamiltonian cycle stored canonically.

    `walk` keeps the traversal it was built from (direction and start); it is
    ignored for equality and hashing.
    """
    vertices: tuple
    walk: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.walk is None:
            object.__setattr__(self, 'walk', self.vertices)

    @classmethod
    def from_walk(cls, walk: Sequence[int]) -> "HamCycle":
        walk = tuple(int(v) for v in walk)
        return cls(canonicalize(walk), walk)

    def __len__(self) -> int:
        return len(self.vertices)

    def reversed(self) -> "HamCycle":
        w = self.walk
        return HamCycle(self.vertices, (w[0],) + w[:0:-1])

    def directed_edges(self) -> list:
        w = self.walk
        return [(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]

    def edge_set(self) -> set:
        return {tuple(sorted(e)) for e in self.directed_edges()}

    def neighbours(self, v: int) -> tuple:
        """(previous, next) of v along the walk."""
        w = self.walk
        i = w.index(v)
        return w[i - 1], w[(i + 1) % len(w)]


@dataclass
class SideSplit:
    """Left/right angle sums at every cycle vertex, relative to the walk direction."""
    walk: tuple
    angles: dict  # vertex -> (left, right)

    def values(self) -> list:
        return [a for pair in self.angles.values() for a in pair]

    @property
    def worst(self) -> float:
        return max(self.values())

    def violations(self, tol: float = 1e-9) -> list:
        return [v for v in self.walk if max(self.angles[v]) > math.pi + tol]


def format_cycle(Q: HamCycle, canonical: bool = False) -> str:
    """1-based dash form, e.g. '1-5-6-2-3-7-8-4'."""
    seq = Q.vertices if canonical else Q.walk
    return '-'.join(str(v + 1) for v in seq)


def make_cycle(P: Polyhedron, walk: Sequence[int]) -> HamCycle:
    """
    Check a 0-based vertex sequence and wrap it as a HamCycle.

    Raises:
        CycleError: wrong length, repeated vertex or a consecutive pair that is not an edge
    """
    walk = [int(v) for v in walk]
    n = P.num_vertices
    if len(walk) != n:
        raise CycleError(f"cycle has {len(walk)} vertices, solid has {n}")
    seen = set()
    for v in walk:
        if v < 0 or v >= n:
            raise CycleError(f"vertex {v + 1} does not exist", v)
        if v in seen:
            raise CycleError(f"vertex {v + 1} visited twice", v)
        seen.add(v)
    for i in range(n):
        u, v = walk[i], walk[(i + 1) % n]
        if not P.has_edge(u, v):
            raise CycleError(f"{u + 1}-{v + 1} is not an edge", u)
    return HamCycle.from_walk(walk)


def parse_cycle(P: Polyhedron, text: str) -> HamCycle:
    """
    Parse a 1-based cycle string.

    Dash/comma/space separated ('1-5-6-2-3-7-8-4'), or undelimited digits
    ('15623784') when the solid has at most 9 vertices.

    Raises:
        CycleError: unparseable text or not a Hamiltonian cycle
    """
    text = text.strip()
    if re.fullmatch(r'\d+', text) and P.num_vertices <= 9:
        labels = [int(c) for c in text]
    elif re.fullmatch(r'\d+([-,\s]+\d+)*', text):
        labels = [int(t) for t in re.split(r'[-,\s]+', text)]
    else:
        raise CycleError(f"cannot parse cycle {text!r}")
    return make_cycle(P, [v - 1 for v in labels])


def _split_at(P: Polyhedron, v: int, prev: int, nxt: int) -> tuple:
    """(left, right) at v for the walk prev -> v -> nxt."""
    rot = rotation_order(P, v)
    others = [a if a != v else b for (a, b), _ in rot]
    if prev not in others or nxt not in others or prev == nxt:
        raise CycleError(f"cycle edges at vertex {v + 1} are not incident to it", v)
    k = len(rot)
    i = others.index(nxt)
    left, right = [], []
    j = i
    while others[j] != prev:
        left.append(corner_angle(P, rot[j][1], v))
        j = (j + 1) % k
    while others[j] != nxt:
        right.append(corner_angle(P, rot[j][1], v))
        j = (j + 1) % k
    return math.fsum(left), math.fsum(right)


def side_split(P: Polyhedron, Q: HamCycle, vertex: int) -> tuple:
    """
    Angle to the left and right of the cycle at one vertex.

    Going counterclockwise (seen from outside) from the outgoing cycle edge to the
    incoming one sweeps the faces on the left of the walk; the rest are on the right.

    Raises:
        CycleError: the vertex's cycle edges do not meet it (corrupt cycle)
    """
    if vertex not in Q.walk:
        raise CycleError(f"vertex {vertex + 1} is not on the cycle", vertex)
    prev, nxt = Q.neighbours(vertex)
    return _split_at(P, vertex, prev, nxt)


def is_quasigeodesic(P: Polyhedron, Q: HamCycle, config=None) -> tuple:
    """
    Test the at-most-pi condition on both sides at every vertex.

    Returns:
        tuple: (bool, SideSplit); the table is complete whatever the verdict
    """
    tol = getattr(config, 'TOL_ANGLE', 1e-9)
    split = SideSplit(walk=Q.walk, angles={v: side_split(P, Q, v) for v in Q.walk})
    ok = not split.violations(tol)
    logger.debug(f"{P.label}: cycle {format_cycle(Q)} quasigeodesic={ok}, worst side {split.worst:.12f}")
    return ok, split


def require_quasigeodesic(P: Polyhedron, Q: HamCycle, config=None) -> SideSplit:
    """Like is_quasigeodesic but raises on the first violating vertex."""
    ok, split = is_quasigeodesic(P, Q, config)
    if not ok:
        v = split.violations(getattr(config, 'TOL_ANGLE', 1e-9))[0]
        left, right = split.angles[v]
        raise NotQuasigeodesicError(
            f"cycle {format_cycle(Q)} is not quasigeodesic at vertex {v + 1}: "
            f"left {left / math.pi:.6f}*pi, right {right / math.pi:.6f}*pi", v, left, right)
    return split


def _pair_table(P: Polyhedron, tol: float) -> list:
    """Per vertex, the unordered neighbour pairs whose split is <= pi on both sides."""
    table = []
    for v in range(P.num_vertices):
        ok = set()
        nbrs = P.neighbors(v)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                left, right = _split_at(P, v, a, b)
                if left <= math.pi + tol and right <= math.pi + tol:
                    ok.add(frozenset((a, b)))
        table.append(ok)
    return table


def _search(P: Polyhedron, limit: Optional[int], quasigeodesic: bool, config=None,
            workers: Optional[int] = None) -> list:
    n = P.num_vertices
    if n < 3:
        return []
    if limit is None:
        limit = getattr(config, 'SEARCH_LIMIT', None)
    if workers is None:
        workers = getattr(config, 'SEARCH_WORKERS', 1)
    tol = getattr(config, 'TOL_ANGLE', 1e-9)
    ok = _pair_table(P, tol) if quasigeodesic else None
    nbrs = [P.neighbors(v) for v in range(n)]

    def run_branch(second: int) -> list:
        # Start at 0 toward `second`; a closed path counts only if second < last,
        # which yields exactly the canonical form of each undirected cycle.
        found = []
        path = [0, second]
        visited = [False] * n
        visited[0] = visited[second] = True

        def extend() -> bool:
            last = path[-1]
            if len(path) == n:
                if second < last and P.has_edge(last, 0):
                    if ok is None or (frozenset((path[-2], 0)) in ok[last]
                                      and frozenset((last, second)) in ok[0]):
                        found.append(tuple(path))
                        if limit is not None and len(found) >= limit:
                            return True
                return False
            for w in nbrs[last]:
                if visited[w]:
                    continue
                # `last` becomes interior: both its cycle edges are now fixed
                if ok is not None and frozenset((path[-2], w)) not in ok[last]:
                    continue
                visited[w] = True
                path.append(w)
                stop = extend()
                path.pop()
                visited[w] = False
                if stop:
                    return True
            return False

        extend()
        logger.debug(f"{P.label}: branch 1-{second + 1} yielded {len(found)} cycle(s)")
        return found

    branches = list(nbrs[0])
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_branch = list(pool.map(run_branch, branches))
    else:
        per_branch = [run_branch(b) for b in branches]

    merged = sorted(c for chunk in per_branch for c in chunk)
    if limit is not None:
        merged = merged[:limit]
    return [HamCycle(c) for c in merged]


def find_ham_cycles(P: Polyhedron, limit: Optional[int] = None, config=None,
                    workers: Optional[int] = None) -> list:
    """
    All Hamiltonian cycles of the 1-skeleton, canonical and in lexicographic order.

    Args:
        P: Polyhedron
        limit: keep only the first `limit` cycles of that order (None = all)
        config: Optional Config (SEARCH_LIMIT, SEARCH_WORKERS)
        workers: threads for the first branching level; the result does not depend on it

    Returns:
        list: HamCycle
    """
    cycles = _search(P, limit, quasigeodesic=False, config=config, workers=workers)
    logger.info(f"{P.label}: {len(cycles)} Hamiltonian circuit(s)")
    return cycles


def find_ham_quasigeodesics(P: Polyhedron, limit: Optional[int] = None, config=None,
                            workers: Optional[int] = None) -> list:
    """
    All Hamiltonian quasigeodesics, canonical and in lexicographic order.

    The search prunes a partial path as soon as its newest interior vertex has
    more than pi on either side, so nothing satisfying the condition is skipped.

    Returns:
        list: HamCycle
    """
    cycles = _search(P, limit, quasigeodesic=True, config=config, workers=workers)
    logger.info(f"{P.label}: {len(cycles)} Hamiltonian quasigeodesic(s)")
    return cycles
