"""Probing the ends of locally finite graphs.

Ends are never computed, only probed: remove the ball B_r around the root
and count the pieces of B_R minus B_r that still reach distance R.  A graph
with one end shows a single such piece once R is large enough, a line shows
two, a tree a number growing with r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import ResourceLimitError

DEFAULT_SCHEDULE = ((2, 6), (4, 10), (6, 14), (8, 18))
DEFAULT_NODE_CAP = 5_000_000


@dataclass(frozen=True)
class GraphGen:
    """A rooted graph given by a neighbour function on hashable node ids.

    ``labelled``, when present, returns ``(label, neighbour)`` pairs and
    ``neighbors`` is derived from it.
    """

    root: Hashable
    neighbors: Callable[[Hashable], Sequence[Hashable]]
    name: str = "graph"
    labelled: Optional[Callable[[Hashable], Sequence[tuple]]] = field(default=None, compare=False)


def _labelled_graph(root, labelled, name) -> GraphGen:
    return GraphGen(root, lambda v: [w for _, w in labelled(v)], name, labelled)


@dataclass(frozen=True)
class EndsProbeResult:
    r: int
    R: int
    components: int
    ball_size: int


@dataclass(frozen=True)
class OneEndReport:
    graph: str
    schedule: tuple
    probes: tuple
    passed: bool
    skipped: tuple = ()     # schedule entries not run because the node cap was reached

    def __str__(self) -> str:
        rows = ", ".join(f"(r={p.r}, R={p.R}): {p.components}" for p in self.probes)
        verdict = ("one end at every tested scale" if self.passed
                   else "a second piece persists at some tested scale")
        text = (f"{self.graph}: {verdict} [{rows}]; probes only, no evidence beyond "
                f"schedule {[(p.r, p.R) for p in self.probes]}")
        if self.skipped:
            text += f"; skipped at node cap: {list(self.skipped)}"
        return text


def ball(g: GraphGen, r: int, cap: int = DEFAULT_NODE_CAP) -> dict:
    """Distance-labelled ball of radius r around the root, in breadth-first order."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist = {g.root: 0}
    frontier = [g.root]
    for d in range(1, r + 1):
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
            if len(dist) > cap:
                raise ResourceLimitError(f"ball of radius {d} exceeds {cap} nodes")
        frontier = nxt
        if not frontier:
            break
    return dist


def ends_probe(g: GraphGen, r: int, R: int, cap: int = DEFAULT_NODE_CAP) -> EndsProbeResult:
    """Components of B_R minus B_r that contain a node at distance exactly R."""
    if not 0 <= r < R:
        raise ValueError("need 0 <= r < R")
    dist = ball(g, R, cap)
    seen = set()
    count = 0
    for start, d in dist.items():
        if d <= r or start in seen:
            continue
        seen.add(start)
        stack, reaches = [start], d == R
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                dw = dist.get(w)
                if dw is not None and dw > r and w not in seen:
                    seen.add(w)
                    reaches = reaches or dw == R
                    stack.append(w)
        count += reaches
    return EndsProbeResult(r, R, count, len(dist))


def one_end_certificate(g: GraphGen, schedule: Iterable[tuple] = DEFAULT_SCHEDULE,
                        cap: int = DEFAULT_NODE_CAP, stop_at_cap: bool = False) -> OneEndReport:
    """Pass iff every probe sees exactly one piece.

    With ``stop_at_cap`` the schedule is cut at the first probe whose ball
    exceeds the cap; the rest is listed as skipped and at least one probe
    must have run.
    """
    schedule = tuple(tuple(s) for s in schedule)
    if not schedule:
        raise ValueError("empty schedule")
    probes = []
    for k, (r, R) in enumerate(schedule):
        try:
            probes.append(ends_probe(g, r, R, cap))
        except ResourceLimitError:
            if not stop_at_cap:
                raise
            return OneEndReport(g.name, schedule, tuple(probes),
                                bool(probes) and all(p.components == 1 for p in probes),
                                schedule[k:])
    return OneEndReport(g.name, schedule, tuple(probes), all(p.components == 1 for p in probes))


def tree_probe_count(d: int, r: int) -> int:
    """Closed-form probe count of the d-regular tree: one component per sphere node at r+1."""
    return d * (d - 1) ** r


def is_symmetric(g: GraphGen, radius: int = 3) -> bool:
    """Spot-check that every edge inside a ball is seen from both ends."""
    for v in ball(g, radius):
        for w in g.neighbors(v):
            if v not in g.neighbors(w):
                return False
    return True


def degrees(g: GraphGen, radius: int = 2) -> set:
    return {len(set(g.neighbors(v))) for v in ball(g, radius)}


def ball_to_dot(g: GraphGen, r: int) -> str:
    dist = ball(g, r)
    ids = {v: k for k, v in enumerate(dist)}
    lines = [f'graph "{g.name}" {{']
    for v, k in ids.items():
        lines.append(f'  {k} [label="{dist[v]}"];')
    for v, k in ids.items():
        pairs = g.labelled(v) if g.labelled else [(None, w) for w in g.neighbors(v)]
        for lab, w in pairs:
            j = ids.get(w)
            if j is not None and k < j:
                lines.append(f"  {k} -- {j}" + (f' [label="{lab}"];' if lab is not None else ";"))
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- builders ------------------------------------------------------------------------

def line_graph() -> GraphGen:
    """Cayley graph of the integers."""
    return GraphGen(0, lambda n: (n - 1, n + 1), "line")


def grid2() -> GraphGen:
    """Cayley graph of Z^2."""
    return GraphGen((0, 0), lambda v: ((v[0] + 1, v[1]), (v[0] - 1, v[1]),
                                       (v[0], v[1] + 1), (v[0], v[1] - 1)), "grid")


def tree(d: int) -> GraphGen:
    """The d-regular tree as the Cayley graph of a free product of d copies of Z/2."""
    if d < 3:
        raise ValueError("tree degree must be at least 3")

    def labelled(word):
        out = []
        for a in range(d):
            out.append((a, word[:-1] if word and word[-1] == a else word + (a,)))
        return out

    return _labelled_graph((), labelled, f"tree{d}")


HEX_GENERATORS = {"a": (0, 0), "b": (1, 0), "c": (0, 1)}


def hex_step(node, s: str):
    """Right multiplication in H: elements are the maps x -> eps*x + v, generators x -> -x + v_s."""
    eps, vx, vy = node
    sx, sy = HEX_GENERATORS[s]
    return (-eps, vx + eps * sx, vy + eps * sy)


def hex_cayley_H() -> GraphGen:
    """Hexagonal lattice as the Cayley graph of <a, b, c | a^2, b^2, c^2, (abc)^2>."""
    def labelled(node):
        return [(s, hex_step(node, s)) for s in "abc"]
    return _labelled_graph((1, 0, 0), labelled, "hex")


def product_graph(g1: GraphGen, g2: GraphGen, name: Optional[str] = None) -> GraphGen:
    """Cayley graph of a direct product, generators of each factor acting on its coordinate."""
    def lab(g, v):
        return g.labelled(v) if g.labelled else [(None, w) for w in g.neighbors(v)]

    def labelled(node):
        u, v = node
        return ([((1, a), (w, v)) for a, w in lab(g1, u)]
                + [((2, a), (u, w)) for a, w in lab(g2, v)])

    return _labelled_graph((g1.root, g2.root), labelled, name or f"{g1.name}x{g2.name}")


# colour i of the Cayley graph of H x H: odd colours generate the first factor
HXH_COLOURS = {1: (1, "a"), 3: (1, "b"), 5: (1, "c"), 2: (2, "a"), 4: (2, "b"), 6: (2, "c")}


def hxh_cayley() -> GraphGen:
    """Cayley graph of H x H with generators labelled a1..a6."""
    def labelled(node):
        u, v = node
        out = []
        for colour in range(1, 7):
            factor, s = HXH_COLOURS[colour]
            out.append((colour, (hex_step(u, s), v) if factor == 1 else (u, hex_step(v, s))))
        return out
    return _labelled_graph(((1, 0, 0), (1, 0, 0)), labelled, "hxh")


# -- exact Coxeter group [p, q] ---------------------------------------------------

class _Cyclotomic:
    """Integer arithmetic in Z[zeta_N] with canonical coefficient vectors."""

    def __init__(self, n: int):
        import sympy
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        self.n = n
        self.phi = tuple(int(c) for c in coeffs)   # monic, low degree first
        self.deg = len(self.phi) - 1

    def reduce(self, coeffs: list) -> tuple:
        c = list(coeffs)
        for k in range(len(c) - 1, self.deg - 1, -1):
            lead = c[k]
            if lead:
                for j in range(self.deg + 1):
                    c[k - self.deg + j] -= lead * self.phi[j]
        c = c[:self.deg] + [0] * max(0, self.deg - len(c))
        return tuple(c)

    def two_cos(self, m: int) -> tuple:
        """2cos(pi/m) = zeta^k + zeta^(N-k) with k = N/(2m)."""
        if self.n % (2 * m):
            raise ValueError(f"zeta_{self.n} does not reach 2cos(pi/{m})")
        k = self.n // (2 * m)
        c = [0] * self.n
        c[k % self.n] += 1
        c[(self.n - k) % self.n] += 1
        return self.reduce(c)

    def mul(self, a: tuple, b: tuple) -> tuple:
        out = [0] * (2 * self.deg)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self.reduce(out)


def coxeter_pq(p: int, q: int):
    """Root node and right-multiplication step for the Coxeter group [p, q].

    Elements are matrices of the faithful Tits representation over Z[zeta_N],
    so equal group elements have equal node ids.
    """
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    n = math.lcm(2 * p, 2 * q, 4)   # 4 so that the commuting pair gets 2cos(pi/2) = 0
    ring = _Cyclotomic(n)
    m = {(0, 1): p, (1, 2): q, (0, 2): 2}
    coef = {}
    for (i, j), mij in m.items():
        coef[i, j] = coef[j, i] = ring.two_cos(mij)
    zero = (0,) * ring.deg
    one = (1,) + (0,) * (ring.deg - 1)
    root = tuple(one if r == c else zero for r in range(3) for c in range(3))

    def step(mat, i):
        cols = [[mat[3 * r + c] for r in range(3)] for c in range(3)]
        ci = cols[i]
        new = []
        for j in range(3):
            if j == i:
                new.append([tuple(-x for x in e) for e in ci])
            else:
                k = coef[i, j]
                if any(k):
                    new.append([tuple(x + y for x, y in zip(e, ring.mul(k, f)))
                                for e, f in zip(cols[j], ci)])
                else:
                    new.append(cols[j])
        return tuple(new[c][r] for r in range(3) for c in range(3))

    return root, step


def hyperbolic_flag_graph(p: int, q: int, layers: Optional[int] = None) -> GraphGen:
    """Flag graph of the hyperbolic tiling {p, q}: Cayley graph of [p, q] on r0, r1, r2.

    ``layers`` optionally truncates the graph to a ball of that radius.
    """
    if p < 3 or q < 3 or 2 * (p + q) >= p * q:
        raise ValueError("{p,q} is not hyperbolic: need 1/p + 1/q < 1/2")
    root, step = coxeter_pq(p, q)
    cache = {}

    def labelled(node):
        out = cache.get(node)
        if out is None:
            out = [(i, step(node, i)) for i in range(3)]
            cache[node] = out
        return out

    g = _labelled_graph(root, labelled, f"hyperbolic{{{p},{q}}}")
    if layers is None:
        return g
    inside = ball(g, layers)

    def clipped(node):
        return [(i, w) for i, w in labelled(node) if w in inside]
    return _labelled_graph(root, clipped, g.name)


# -- graphs of maps ---------------------------------------------------------------

def flag_graph_of(source) -> GraphGen:
    """Flag graph of a FlagSystem or a PeriodicMap."""
    from .flag_system import FlagSystem
    from .periodic_map import PeriodicFlag, PeriodicMap
    if isinstance(source, FlagSystem):
        return _labelled_graph(0, lambda f: [(i, source.adj[i][f]) for i in range(3)], "flags")
    if isinstance(source, PeriodicMap):
        return _labelled_graph(PeriodicFlag(0),
                               lambda f: [(i, source.step(f, i)) for i in range(3)],
                               f"flags({source.name})")
    raise TypeError(f"cannot build a flag graph from {type(source).__name__}")


def dual_graph_of(cp) -> GraphGen:
    """Face-adjacency graph of a cover patch (faces are the {0,1}-fans, possibly open)."""
    from .minimal_cover import BOUNDARY
    edges = cp.edges
    n = len(edges[0])
    face = [-1] * n
    nfaces = 0
    for start in range(n):
        if face[start] >= 0:
            continue
        face[start] = nfaces
        stack = [start]
        while stack:
            g = stack.pop()
            for i in (0, 1):
                h = edges[i][g]
                if h != BOUNDARY and face[h] < 0:
                    face[h] = nfaces
                    stack.append(h)
        nfaces += 1
    adjacent = [set() for _ in range(nfaces)]
    for g in range(n):
        h = edges[2][g]
        if h != BOUNDARY:
            adjacent[face[g]].add(face[h])
    nbrs = [tuple(sorted(s)) for s in adjacent]
    return GraphGen(face[0], lambda v: nbrs[v], "patch-dual")


def cover_dual_graph(pm, reps=None, vertices: bool = False) -> GraphGen:
    """Dual graph of the whole minimal regular cover, generated lazily.

    Nodes are faces of the cover, i.e. cosets g<r0, r1> in Mon(M).  Group
    elements are interned in a table as they are met, and a face is named by
    the smallest table id among its members.  With ``vertices`` the roles of
    faces and vertices are swapped: nodes are cosets g<r1, r2> joined through r0.
    """
    from .monodromy import group_of
    grp = group_of(pm, reps)
    a, b = (1, 2) if vertices else (0, 1)
    cross = 0 if vertices else 2
    table = _ElementTable(grp)

    def coset(x):
        out = [x]
        cur = table.step(x, a)
        while cur != x:
            out.append(cur)
            cur = table.step(cur, b)
            if cur == x:
                break
            out.append(cur)
            cur = table.step(cur, a)
        return out

    key_of = {}

    def key(x):
        k = key_of.get(x)
        if k is None:
            members = coset(x)
            k = min(members)
            for y in members:
                key_of[y] = k
        return k

    cache = {}

    def neighbors(node):
        res = cache.get(node)
        if res is None:
            res = []
            # g and g·r_a cross into the same cell, so every other coset member suffices
            for x in coset(node)[::2]:
                k = key(table.step(x, cross))
                if k not in res:
                    res.append(k)
            cache[node] = res
        return res

    return GraphGen(key(0), neighbors, f"cover-dual({pm.name})")


class _ElementTable:
    """Monodromy elements interned as integers, with memoised generator steps."""

    def __init__(self, grp):
        self.grp = grp
        self.elements = [grp.identity]
        self.index = {grp.identity.images: 0}
        self.steps = [[-1, -1, -1]]

    def step(self, x: int, i: int) -> int:
        y = self.steps[x][i]
        if y < 0:
            h = self.grp.step(self.elements[x], i)
            y = self.index.get(h.images)
            if y is None:
                y = len(self.elements)
                self.index[h.images] = y
                self.elements.append(h)
                self.steps.append([-1, -1, -1])
            self.steps[x][i] = y
            self.steps[y][i] = x
        return y


GRAPHS = {
    "line": line_graph,
    "grid": grid2,
    "tree3": lambda: tree(3),
    "tree4": lambda: tree(4),
    "hex": hex_cayley_H,
    "hxh": hxh_cayley,
    "hyperbolic64": lambda: hyperbolic_flag_graph(6, 4),
}


def named_graph(name: str) -> GraphGen:
    """Graph by name: a key of GRAPHS, ``tree:D``, ``hyperbolic:P:Q`` or ``cover:TILING``."""
    if name in GRAPHS:
        return GRAPHS[name]()
    kind, _, rest = name.partition(":")
    if kind == "tree":
        return tree(int(rest))
    if kind == "hyperbolic":
        p, q = (int(x) for x in rest.split(":"))
        return hyperbolic_flag_graph(p, q)
    if kind == "cover":
        from .periodic_map import build_tiling
        return cover_dual_graph(build_tiling(rest))
    raise KeyError(f"unknown graph {name!r}")
