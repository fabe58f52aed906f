"""Lattice-periodic plane maps.

A periodic map has ``m`` flag classes per fundamental cell.  A flag is a
class index together with an integer lattice vector, and
``padj[i][c] = (c', dx, dy)`` means that r_i sends ``(c, t)`` to
``(c', t + (dx, dy))``.

Automorphisms are stored in affine form.  The translation lattice of these
maps is the full translation subgroup of Aut(M), which is normal, so every
automorphism acts as ``(c, t) -> (cells[c], A t + shift[c])`` for an integer
matrix ``A``.  A candidate read off a finite window is accepted only after
checking that affine form against every local adjacency, which makes the
verdict exact for the infinite map.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from importlib import resources
from typing import NamedTuple, Optional

from .errors import SearchExhaustedError
from .flag_system import FlagSystem, ValidationReport
from .words import as_letters

TILINGS = (
    "3.3.3.3.6", "3.3.3.4.4", "3.3.4.3.4", "3.6.3.6", "3.12.12", "4.6.12",
    "4.8.8", "3.4.6.4", "4.4.4.4", "3.3.3.3.3.3", "6.6.6",
)
REGULAR = ("4.4.4.4", "3.3.3.3.3.3", "6.6.6")
ARCHIMEDEAN = tuple(t for t in TILINGS if t not in REGULAR)


class PeriodicFlag(NamedTuple):
    cell: int
    x: int = 0
    y: int = 0

    def shifted(self, dx: int, dy: int) -> "PeriodicFlag":
        return PeriodicFlag(self.cell, self.x + dx, self.y + dy)


@dataclass(frozen=True, eq=False)
class PeriodicMap:
    name: str
    m: int
    padj: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    def step(self, f: PeriodicFlag, i: int) -> PeriodicFlag:
        c, dx, dy = self.padj[i][f[0]]
        return PeriodicFlag(c, f[1] + dx, f[2] + dy)


def from_dict(data: dict) -> PeriodicMap:
    m = int(data["m"])
    padj = tuple(tuple((int(c), int(dx), int(dy)) for c, dx, dy in row) for row in data["padj"])
    if len(padj) != 3 or any(len(row) != m for row in padj):
        raise ValueError("padj must be 3 rows of m entries")
    return PeriodicMap(str(data.get("name", "")), m, padj)


def to_dict(pm: PeriodicMap) -> dict:
    return {"m": pm.m, "name": pm.name, "padj": [[list(x) for x in row] for row in pm.padj]}


_FIXTURES: Optional[dict] = None
_BUILT: dict = {}


def build_tiling(name: str) -> PeriodicMap:
    """One of the three regular or eight Archimedean tilings, by vertex-type name."""
    global _FIXTURES
    if _FIXTURES is None:
        text = resources.files("lochness").joinpath("data/tilings.json").read_text()
        _FIXTURES = json.loads(text)
    if name not in _FIXTURES:
        raise KeyError(f"unknown tiling {name!r}; known: {', '.join(TILINGS)}")
    if name not in _BUILT:
        _BUILT[name] = from_dict(_FIXTURES[name])
    return _BUILT[name]


def padjacent(pm: PeriodicMap, f: PeriodicFlag, w) -> PeriodicFlag:
    c, x, y = f
    padj = pm.padj
    for a in as_letters(w):
        c, dx, dy = padj[a][c]
        x += dx
        y += dy
    return PeriodicFlag(c, x, y)


def validate(pm: PeriodicMap) -> ValidationReport:
    """Map axioms on (cell, offset) pairs plus exact connectivity of the infinite flag graph."""
    for i in range(3):
        for c in range(pm.m):
            f = PeriodicFlag(c)
            g = pm.step(f, i)
            if not 0 <= g.cell < pm.m:
                return ValidationReport(False, f"r{i} out of range", f)
            if pm.step(g, i) != f:
                return ValidationReport(False, f"r{i} not an involution", f)
            if g == f:
                return ValidationReport(False, f"r{i} not fixed-point-free", f)
    for c in range(pm.m):
        f = PeriodicFlag(c)
        if padjacent(pm, f, (0, 2)) != padjacent(pm, f, (2, 0)):
            return ValidationReport(False, "r0r2 ≠ r2r0", f)
        for i, j in ((0, 1), (1, 2), (0, 2)):
            if padjacent(pm, f, (j, i)) == f:
                return ValidationReport(False, f"r{i}r{j} has a fixed point", f)
    if not is_connected(pm):
        return ValidationReport(False, "flag graph not connected", PeriodicFlag(0))
    return ValidationReport(True)


def is_connected(pm: PeriodicMap) -> bool:
    """The infinite flag graph is connected iff the quotient graph is connected
    and the cycle offsets generate the whole lattice."""
    pos = {0: (0, 0)}
    queue = deque([0])
    cycles = []
    while queue:
        c = queue.popleft()
        for i in range(3):
            d, dx, dy = pm.padj[i][c]
            p = (pos[c][0] + dx, pos[c][1] + dy)
            if d not in pos:
                pos[d] = p
                queue.append(d)
            else:
                cycles.append((p[0] - pos[d][0], p[1] - pos[d][1]))
    if len(pos) != pm.m:
        return False
    minors = [a[0] * b[1] - a[1] * b[0] for a in cycles for b in cycles]
    return reduce(math.gcd, minors, 0) == 1


# -- automorphisms --------------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    """Exact automorphism of a periodic map, identified by where it sends ``base``."""

    base: PeriodicFlag
    image: PeriodicFlag
    cells: tuple = field(compare=False)
    linear: tuple = field(compare=False)  # (a, b, c, d): t -> (a tx + b ty, c tx + d ty)
    shifts: tuple = field(compare=False)  # per cell, image offset of (cell, base offset)

    def __call__(self, f: PeriodicFlag) -> PeriodicFlag:
        a, b, c, d = self.linear
        tx, ty = f[1] - self.base[1], f[2] - self.base[2]
        sx, sy = self.shifts[f[0]]
        return PeriodicFlag(self.cells[f[0]], a * tx + b * ty + sx, c * tx + d * ty + sy)

    @property
    def is_translation(self) -> bool:
        return self.base.cell == self.image.cell

    @property
    def translation(self) -> Optional[tuple[int, int]]:
        if not self.is_translation:
            return None
        return (self.image.x - self.base.x, self.image.y - self.base.y)


def _window_transport(pm, src, dst, window):
    """Propagate src -> dst through the flag graph inside a box of cells."""
    image = {src: dst}
    queue = deque([src])
    sx, sy = src.x, src.y
    while queue:
        f = queue.popleft()
        g = image[f]
        for i in range(3):
            f2 = pm.step(f, i)
            g2 = pm.step(g, i)
            if f2 in image:
                if image[f2] != g2:
                    return None
            elif abs(f2.x - sx) <= window and abs(f2.y - sy) <= window:
                image[f2] = g2
                queue.append(f2)
    return image


def automorphism_from(pm: PeriodicMap, src: PeriodicFlag, dst: PeriodicFlag,
                      window: int = 1, max_window: int = 4) -> Optional[Automorphism]:
    """The unique automorphism sending ``src`` to ``dst``, or None if there is none."""
    src, dst = PeriodicFlag(*src), PeriodicFlag(*dst)
    key = ("aut", src.cell, dst.cell)
    cached = pm._cache.get(key, False)
    if cached is False:
        cached = _affine_automorphism(pm, src.cell, dst.cell, window, max_window)
        pm._cache[key] = cached
    if cached is None:
        return None
    cells, linear, shifts = cached
    # cached form sends (src.cell, 0, 0) to (dst.cell, 0, 0); conjugate by the offsets
    shifts = tuple((sx + dst.x, sy + dst.y) for sx, sy in shifts)
    return Automorphism(src, dst, cells, linear, shifts)


def _affine_automorphism(pm, c_src, c_dst, window, max_window):
    src, dst = PeriodicFlag(c_src), PeriodicFlag(c_dst)
    while True:
        image = _window_transport(pm, src, dst, window)
        if image is None:
            return None
        needed = [PeriodicFlag(c) for c in range(pm.m)] + [PeriodicFlag(c_src, 1, 0),
                                                           PeriodicFlag(c_src, 0, 1)]
        if all(f in image for f in needed):
            break
        if window >= max_window:
            raise SearchExhaustedError(
                f"window {window} too small to transport flags of {pm.name or 'map'}")
        window += 1
    e1, e2 = image[PeriodicFlag(c_src, 1, 0)], image[PeriodicFlag(c_src, 0, 1)]
    if e1.cell != c_dst or e2.cell != c_dst:
        return None
    linear = (e1.x, e2.x, e1.y, e2.y)
    if abs(linear[0] * linear[3] - linear[1] * linear[2]) != 1:
        return None
    cells = tuple(image[PeriodicFlag(c)].cell for c in range(pm.m))
    if sorted(cells) != list(range(pm.m)):
        return None
    shifts = tuple((image[PeriodicFlag(c)].x, image[PeriodicFlag(c)].y) for c in range(pm.m))
    a, b, c, d = linear
    for i in range(3):
        row = pm.padj[i]
        for cc in range(pm.m):
            c2, dx, dy = row[cc]
            # phi((cc,0) r_i) must equal phi((cc,0)) r_i
            lhs = (cells[c2], a * dx + b * dy + shifts[c2][0], c * dx + d * dy + shifts[c2][1])
            c3, ex, ey = row[cells[cc]]
            rhs = (c3, shifts[cc][0] + ex, shifts[cc][1] + ey)
            if lhs != rhs:
                return None
    return cells, linear, shifts


def apply(pm: PeriodicMap, a: Automorphism, f: PeriodicFlag) -> PeriodicFlag:
    return a(PeriodicFlag(*f))


def identity(pm: PeriodicMap, base: PeriodicFlag = PeriodicFlag(0)) -> Automorphism:
    return automorphism_from(pm, base, base)


def translation(pm: PeriodicMap, dx: int, dy: int,
                base: PeriodicFlag = PeriodicFlag(0)) -> Automorphism:
    return automorphism_from(pm, base, PeriodicFlag(*base).shifted(dx, dy))


def inverse(pm: PeriodicMap, a: Automorphism) -> Automorphism:
    """a^-1, based at ``a.base``."""
    p, q, r, s = a.linear
    det = p * s - q * r
    for c in range(pm.m):
        g = a(PeriodicFlag(c, a.base.x, a.base.y))
        if g.cell == a.base.cell:
            # a(c, base + u) = g + A u; solve A u = base - g
            vx, vy = a.base.x - g.x, a.base.y - g.y
            ux, uy = det * (s * vx - q * vy), det * (-r * vx + p * vy)
            return automorphism_from(pm, a.base, PeriodicFlag(c, a.base.x + ux, a.base.y + uy))
    raise AssertionError("automorphism is not a bijection on cells")


def compose(pm: PeriodicMap, a: Automorphism, b: Automorphism) -> Automorphism:
    """a o b (apply b first)."""
    return automorphism_from(pm, b.base, a(b.image))


def aut_orbits(pm: PeriodicMap) -> list[list[int]]:
    """Partition of the flag classes into Aut(M)-orbits (lattice already quotiented)."""
    key = ("orbits",)
    if key in pm._cache:
        return pm._cache[key]
    perms = []
    for c in range(pm.m):
        aut = automorphism_from(pm, PeriodicFlag(0), PeriodicFlag(c))
        if aut is not None:
            perms.append(aut.cells)
    parent = list(range(pm.m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cells in perms:
        for c in range(pm.m):
            ra, rb = find(c), find(cells[c])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for c in range(pm.m):
        groups.setdefault(find(c), []).append(c)
    orbits = sorted(groups.values())
    pm._cache[key] = orbits
    return orbits


def orbit_representatives(pm: PeriodicMap) -> tuple[PeriodicFlag, ...]:
    """Lowest cell of each Aut-orbit, at offset (0, 0)."""
    return tuple(PeriodicFlag(o[0]) for o in aut_orbits(pm))


# -- cells of the map -------------------------------------------------------------

def _pair_classes(pm: PeriodicMap, i: int, j: int) -> list[list[int]]:
    seen = [False] * pm.m
    out = []
    for c in range(pm.m):
        if seen[c]:
            continue
        seen[c] = True
        orbit, stack = [c], [c]
        while stack:
            d = stack.pop()
            for g in (i, j):
                e = pm.padj[g][d][0]
                if not seen[e]:
                    seen[e] = True
                    orbit.append(e)
                    stack.append(e)
        out.append(sorted(orbit))
    return out


def face_classes(pm: PeriodicMap) -> list[list[int]]:
    return _pair_classes(pm, 0, 1)


def vertex_classes(pm: PeriodicMap) -> list[list[int]]:
    return _pair_classes(pm, 1, 2)


def edge_classes(pm: PeriodicMap) -> list[list[int]]:
    return _pair_classes(pm, 0, 2)


def face_size(pm: PeriodicMap, cell: int) -> int:
    return _cycle_length(pm, cell, (0, 1))


def vertex_degree(pm: PeriodicMap, cell: int) -> int:
    return _cycle_length(pm, cell, (1, 2))


def _cycle_length(pm, cell, pair):
    f0 = PeriodicFlag(cell)
    f, n = f0, 0
    while True:
        f = padjacent(pm, f, pair)
        n += 1
        if f == f0:
            return n
        if n > 4 * pm.m:
            raise AssertionError("unbounded face or vertex cycle")


def vertex_figure(pm: PeriodicMap, cell: int = 0) -> list[int]:
    """Face sizes met in order around the vertex of flag class ``cell``."""
    f0 = PeriodicFlag(cell)
    sizes, f = [], f0
    while True:
        sizes.append(face_size(pm, f.cell))
        f = padjacent(pm, f, (1, 2))
        if f == f0:
            return sizes


def same_cycle(a, b) -> bool:
    """Equal up to rotation and reflection."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    for seq in (b, b[::-1]):
        for k in range(len(seq)):
            if seq[k:] + seq[:k] == a:
                return True
    return False


def vertex_figures_match(pm: PeriodicMap, name: Optional[str] = None) -> bool:
    expected = [int(x) for x in (name or pm.name).split(".")]
    return all(same_cycle(vertex_figure(pm, c), expected) for c in range(pm.m))


def torus_quotient(pm: PeriodicMap, k: int, l: int) -> FlagSystem:
    """Finite flag system of the map wrapped on a k x l torus of cells."""
    if k < 1 or l < 1:
        raise ValueError("torus dimensions must be positive")

    def idx(c, x, y):
        return (c * k + x % k) * l + y % l

    adj = [[0] * (pm.m * k * l) for _ in range(3)]
    for i in range(3):
        for c in range(pm.m):
            c2, dx, dy = pm.padj[i][c]
            for x in range(k):
                for y in range(l):
                    adj[i][idx(c, x, y)] = idx(c2, x + dx, y + dy)
    labels = tuple((c, x, y) for c in range(pm.m) for x in range(k) for y in range(l))
    return FlagSystem(tuple(tuple(a) for a in adj), labels)


def window_flags(pm: PeriodicMap, radius: int = 1):
    """All flags whose cell offset lies in [-radius, radius]^2."""
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            for c in range(pm.m):
                yield PeriodicFlag(c, x, y)
