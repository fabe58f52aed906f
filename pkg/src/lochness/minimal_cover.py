"""Minimal regular covers.

The cover of a map M is the regular map whose flags are the elements of
Mon(M), with ``adj_i(g) = g·r_i``.  Finite maps get the whole cover.
Periodic maps have infinite monodromy groups, so we build balls in the Cayley
graph of Mon(M) and read them as bordered triangulated surfaces: one triangle
per element, side i of g glued to side i of g·r_i.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

from . import periodic_map as pmap
from .errors import ResourceLimitError
from .flag_system import FlagSystem, transport, validate
from .monodromy import MonodromyGroup, group_of, mon_enumerate
from .periodic_map import PeriodicMap

DEFAULT_CAP = 5_000_000
DEFAULT_RADII = (4, 6, 8, 10, 12)
BOUNDARY = -1

# corner types: the two sides meeting at the corner
CORNER_SIDES = {"vertex": (1, 2), "edge": (0, 2), "face": (0, 1)}


def default_cap() -> int:
    return int(float(os.environ.get("LOCHNESS_CAP", DEFAULT_CAP)))


# -- finite maps ---------------------------------------------------------------

@dataclass(frozen=True)
class FiniteCover:
    cover: FlagSystem
    elements: tuple        # Mon(M) elements as flag permutations, in cover flag order
    projection: tuple      # cover flag -> base flag (image of base flag 0)


def finite_cover_data(fs: FlagSystem, cap: Optional[int] = None) -> FiniteCover:
    elements = mon_enumerate(fs, default_cap() if cap is None else cap)
    index = {g: k for k, g in enumerate(elements)}
    adj = tuple(tuple(index[tuple(a[x] for x in g)] for g in elements) for a in fs.adj)
    projection = tuple(g[0] for g in elements)
    cover = FlagSystem(adj, labels=projection)
    report = validate(cover)
    if not report:
        raise AssertionError(f"cover failed validation: {report}")
    if not is_regular(cover):
        raise AssertionError("cover is not regular")
    return FiniteCover(cover, tuple(elements), projection)


def finite_cover(fs: FlagSystem, cap: Optional[int] = None) -> FlagSystem:
    """The minimal regular cover of a finite map; flag labels give the projection."""
    return finite_cover_data(fs, cap).cover


def is_regular(fs: FlagSystem) -> bool:
    """Flag-transitive: flag 0 can be transported to every flag."""
    return all(transport(fs, fs, 0, g) is not None for g in range(fs.n))


def projection_commutes(fs: FlagSystem, data: FiniteCover) -> bool:
    proj = data.projection
    return all(proj[data.cover.adj[i][g]] == fs.adj[i][proj[g]]
               for i in range(3) for g in range(data.cover.n))


# -- periodic maps: Cayley balls ---------------------------------------------

@dataclass(frozen=True)
class CoverPatch:
    group: MonodromyGroup
    r: int
    elements: tuple          # MonodromyElements, breadth-first order, identity first
    edges: tuple             # edges[i][g] = index of g·r_i, or BOUNDARY
    dist: tuple              # word length of each element

    def __len__(self):
        return len(self.elements)

    def project(self, g: int) -> pmap.PeriodicFlag:
        """Covering projection: the image of the base representative."""
        return self.elements[g].images[0]

    def walk(self, word, start: int = 0) -> Optional[int]:
        """Follow a word through the patch; None if it leaves the patch."""
        from .words import as_letters
        g = start
        for a in as_letters(word):
            g = self.edges[a][g]
            if g == BOUNDARY:
                return None
        return g


def cover_patch(pm: PeriodicMap, reps=None, r: int = 4,
                cap: Optional[int] = None) -> CoverPatch:
    """Ball of radius r around the identity in the Cayley graph of Mon(M)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    cap = default_cap() if cap is None else cap
    grp = group_of(pm, reps)
    elements = [grp.identity]
    index = {grp.identity.images: 0}
    dist = [0]
    frontier = [0]
    for d in range(1, r + 1):
        nxt = []
        for g in frontier:
            for i in range(3):
                h = grp.step(elements[g], i)
                if h.images not in index:
                    index[h.images] = len(elements)
                    elements.append(h)
                    dist.append(d)
                    nxt.append(index[h.images])
                    if len(elements) > cap:
                        raise ResourceLimitError(f"cover patch exceeds {cap} elements at radius {d}")
        frontier = nxt
    edges = tuple(
        tuple(index.get(grp.step(g, i).images, BOUNDARY) for g in elements)
        for i in range(3))
    return CoverPatch(grp, r, tuple(elements), edges, tuple(dist))


def check_patch(cp: CoverPatch) -> bool:
    """Pairing, duplicate-freeness and ball property."""
    n = len(cp.elements)
    if len({e.images for e in cp.elements}) != n:
        return False
    for i in range(3):
        for g, h in enumerate(cp.edges[i]):
            if h != BOUNDARY and cp.edges[i][h] != g:
                return False
            if h == BOUNDARY and cp.dist[g] < cp.r:
                return False
    return all(d <= cp.r for d in cp.dist)


# -- surface statistics ----------------------------------------------------------

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[b] = a


@dataclass(frozen=True)
class PatchStats:
    r: int
    V: int
    E: int
    F: int
    chi: int
    boundary_cycles: int
    orientable: bool
    genus: Optional[int]                  # orientable genus
    nonorientable_genus: Optional[int] = None

    def row(self) -> tuple:
        return (self.r, self.F, self.chi, self.boundary_cycles,
                self.genus if self.orientable else f"N{self.nonorientable_genus}")


def _edges_of(cp):
    return cp.edges if isinstance(cp, CoverPatch) else cp


def patch_stats(cp: CoverPatch) -> PatchStats:
    """Cell counts, boundary curves and genus of the bordered surface glued from the patch."""
    edges = _edges_of(cp)
    F = len(edges[0])
    # corner (g, t) for t in 0..2 indexes the triangle corner opposite side t;
    # it is where the two other sides meet
    uf = _UnionFind(3 * F)
    for t in range(3):
        s1, s2 = [s for s in range(3) if s != t]
        for s in (s1, s2):
            for g, h in enumerate(edges[s]):
                if h != BOUNDARY and g < h:
                    uf.union(3 * g + t, 3 * h + t)
    V = len({uf.find(x) for x in range(3 * F)})
    unmatched = [(g, s) for s in range(3) for g, h in enumerate(edges[s]) if h == BOUNDARY]
    E = (3 * F + len(unmatched)) // 2
    chi = V - E + F

    # boundary curves: components of the graph on corner classes spanned by free sides
    buf = _UnionFind(3 * F)
    for g, s in unmatched:
        a, b = [t for t in range(3) if t != s]
        buf.union(uf.find(3 * g + a), uf.find(3 * g + b))
    q = len({buf.find(uf.find(3 * g + [t for t in range(3) if t != s][0])) for g, s in unmatched})

    orientable = _two_colourable(edges)
    if orientable:
        doubled = 2 - chi - q
        if doubled % 2:
            raise AssertionError(f"odd 2g for an orientable patch (chi={chi}, q={q})")
        return PatchStats(getattr(cp, "r", -1), V, E, F, chi, q, True, doubled // 2)
    return PatchStats(getattr(cp, "r", -1), V, E, F, chi, q, False, None, 2 - chi - q)


def _two_colourable(edges) -> bool:
    n = len(edges[0])
    colour = [-1] * n
    for start in range(n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            g = stack.pop()
            for s in range(3):
                h = edges[s][g]
                if h == BOUNDARY:
                    continue
                if colour[h] < 0:
                    colour[h] = 1 - colour[g]
                    stack.append(h)
                elif colour[h] == colour[g]:
                    return False
    return True


def genus_table(pm: PeriodicMap, radii: Sequence[int] = DEFAULT_RADII, reps=None,
                cap: Optional[int] = None) -> list[PatchStats]:
    """Stats for each radius; the largest patch is built once and truncated."""
    radii = sorted(radii)
    big = cover_patch(pm, reps, radii[-1], cap)
    return [patch_stats(truncate(big, r)) for r in radii]


def truncate(cp: CoverPatch, r: int) -> CoverPatch:
    """The sub-ball of radius r (breadth-first order makes it a prefix)."""
    n = sum(1 for d in cp.dist if d <= r)
    edges = tuple(tuple(h if h != BOUNDARY and h < n else BOUNDARY for h in row[:n])
                  for row in cp.edges)
    return CoverPatch(cp.group, r, cp.elements[:n], edges, cp.dist[:n])


def is_nondecreasing(values) -> bool:
    values = list(values)
    return all(a <= b for a, b in zip(values, values[1:]))


CSV_HEADER = ("r", "elements", "chi", "boundary", "genus")


def csv_rows(stats: Sequence[PatchStats]) -> list[tuple]:
    return [CSV_HEADER] + [s.row() for s in stats]


# -- (p, q) type and branching ----------------------------------------------------

@dataclass(frozen=True)
class BranchEntry:
    kind: str        # "face" or "vertex"
    cells: tuple     # flag cells of the class
    size: int        # face size or vertex degree
    index: int       # ramification index p/p_i or q/q_i

    @property
    def branched(self) -> bool:
        return self.index > 1


@dataclass(frozen=True)
class BranchReport:
    p: int
    q: int
    faces: tuple
    vertices: tuple

    def face_index_by_size(self) -> dict:
        return {e.size: e.index for e in self.faces}

    def vertex_index_by_degree(self) -> dict:
        return {e.size: e.index for e in self.vertices}

    @property
    def has_branch_point(self) -> bool:
        return any(e.branched for e in self.faces + self.vertices)


def pq_type(pm: PeriodicMap) -> tuple[int, int]:
    """(lcm of face sizes, lcm of vertex degrees)."""
    p = math.lcm(*(pmap.face_size(pm, cls[0]) for cls in pmap.face_classes(pm)))
    q = math.lcm(*(pmap.vertex_degree(pm, cls[0]) for cls in pmap.vertex_classes(pm)))
    return p, q


def branch_orders(pm: PeriodicMap) -> BranchReport:
    p, q = pq_type(pm)
    faces = tuple(BranchEntry("face", tuple(c), s, p // s)
                  for c in pmap.face_classes(pm) for s in [pmap.face_size(pm, c[0])])
    verts = tuple(BranchEntry("vertex", tuple(c), s, q // s)
                  for c in pmap.vertex_classes(pm) for s in [pmap.vertex_degree(pm, c[0])])
    return BranchReport(p, q, faces, verts)


# -- lifting words ------------------------------------------------------------

def lifts_to_closed_walk(cp: CoverPatch, word, start: int = 0) -> bool:
    """Whether the word, read from ``start``, stays in the patch and returns to it."""
    return cp.walk(word, start) == start


def lifts_everywhere(cp: CoverPatch, word) -> bool:
    """Closed walk from every element deep enough that the walk cannot leave the patch."""
    from .words import as_letters
    letters = as_letters(word)
    depth = cp.r - len(letters)
    starts = [g for g, d in enumerate(cp.dist) if d <= depth]
    return bool(starts) and all(cp.walk(letters, g) == g for g in starts)
