"""Finite maps as flag systems.

A flag system stores the three adjacency involutions r0, r1, r2 on a dense
set of flags ``0..n-1``.  Orbits of generator pairs are the cells of the map:
{0,1} gives faces, {1,2} vertices and {0,2} edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .words import as_letters


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    axiom: Optional[str] = None
    flag: Optional[object] = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return f"fail: {self.axiom} (witness flag {self.flag})"


@dataclass(frozen=True)
class FlagSystem:
    """Closed map given by three permutations of its flags."""

    adj: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        adj = tuple(tuple(int(x) for x in a) for a in self.adj)
        if len(adj) != 3:
            raise ValueError("a flag system needs exactly three adjacency permutations")
        if len({len(a) for a in adj}) != 1:
            raise ValueError("adjacency permutations have different lengths")
        object.__setattr__(self, "adj", adj)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.adj[0])

    def __len__(self) -> int:
        return self.n


def validate(fs: FlagSystem) -> ValidationReport:
    """Check the map axioms, stopping at the first violation."""
    n = fs.n
    a0, a1, a2 = fs.adj
    for i, a in enumerate(fs.adj):
        for f in range(n):
            if not 0 <= a[f] < n:
                return ValidationReport(False, f"r{i} out of range", f)
        for f in range(n):
            if a[a[f]] != f:
                return ValidationReport(False, f"r{i} not an involution", f)
        for f in range(n):
            if a[f] == f:
                return ValidationReport(False, f"r{i} not fixed-point-free", f)
    for f in range(n):
        if a0[a2[f]] != a2[a0[f]]:
            return ValidationReport(False, "r0r2 ≠ r2r0", f)
    for i, j in ((0, 1), (1, 2), (0, 2)):
        ai, aj = fs.adj[i], fs.adj[j]
        for f in range(n):
            if ai[aj[f]] == f:
                return ValidationReport(False, f"r{i}r{j} has a fixed point", f)
    if n and len(cell_orbits(fs, (0, 1, 2))) != 1:
        return ValidationReport(False, "flag graph not connected", 0)
    return ValidationReport(True)


def adjacent(fs: FlagSystem, f: int, w) -> int:
    """The flag reached from ``f`` by applying the letters of ``w`` left to right."""
    if not 0 <= f < fs.n:
        raise IndexError(f"flag {f} out of range")
    for a in as_letters(w):
        f = fs.adj[a][f]
    return f


def cell_orbits(fs: FlagSystem, gens: Iterable[int]) -> list[list[int]]:
    """Orbits of the subgroup generated by ``gens``, each sorted, ordered by minimum."""
    gens = sorted(set(gens))
    seen = [False] * fs.n
    orbits = []
    for start in range(fs.n):
        if seen[start]:
            continue
        seen[start] = True
        orbit, stack = [start], [start]
        while stack:
            f = stack.pop()
            for i in gens:
                g = fs.adj[i][f]
                if not seen[g]:
                    seen[g] = True
                    orbit.append(g)
                    stack.append(g)
        orbits.append(sorted(orbit))
    return orbits


def cell_counts(fs: FlagSystem) -> tuple[int, int, int]:
    """(V, E, F)."""
    return (len(cell_orbits(fs, (1, 2))), len(cell_orbits(fs, (0, 2))),
            len(cell_orbits(fs, (0, 1))))


def euler_characteristic(fs: FlagSystem) -> int:
    v, e, f = cell_counts(fs)
    return v - e + f


def is_orientable(fs: FlagSystem) -> bool:
    """True iff the flags can be 2-coloured so that every r_i swaps colours."""
    colour = [-1] * fs.n
    for start in range(fs.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for a in fs.adj:
                g = a[f]
                if colour[g] < 0:
                    colour[g] = 1 - colour[f]
                    stack.append(g)
                elif colour[g] == colour[f]:
                    return False
    return True


def genus(fs: FlagSystem) -> int:
    """Orientable genus (or non-orientable genus, i.e. crosscap number)."""
    chi = euler_characteristic(fs)
    return (2 - chi) // 2 if is_orientable(fs) else 2 - chi


def relabel(fs: FlagSystem, perm: Sequence[int]) -> FlagSystem:
    """Conjugate by a relabelling: flag f becomes ``perm[f]``."""
    inv = [0] * fs.n
    for f, p in enumerate(perm):
        inv[p] = f
    adj = tuple(tuple(perm[a[inv[g]]] for g in range(fs.n)) for a in fs.adj)
    return FlagSystem(adj)


def is_isomorphic(fs: FlagSystem, other: FlagSystem) -> bool:
    """Flag-graph isomorphism respecting the generator labels."""
    if fs.n != other.n:
        return False
    if fs.n == 0:
        return True
    return any(transport(fs, other, 0, g) is not None for g in range(other.n))


def transport(fs: FlagSystem, other: FlagSystem, src: int, dst: int) -> Optional[list[int]]:
    """The unique adjacency-preserving map sending ``src`` to ``dst``, or None."""
    image = [-1] * fs.n
    used = [False] * other.n
    image[src] = dst
    used[dst] = True
    stack = [src]
    while stack:
        f = stack.pop()
        for i in range(3):
            g, h = fs.adj[i][f], other.adj[i][image[f]]
            if image[g] < 0:
                if used[h]:
                    return None
                image[g] = h
                used[h] = True
                stack.append(g)
            elif image[g] != h:
                return None
    if -1 in image:
        return None
    return image


# -- builders -----------------------------------------------------------------

def from_faces(faces: Sequence[Sequence]) -> FlagSystem:
    """Build a map from its faces, each a cyclic list of vertex names.

    Flags are incident (vertex, edge, face) triples found by brute force, so
    the map must have no loops, no multiple edges and every edge on two faces.
    """
    flags = []
    for fi, face in enumerate(faces):
        k = len(face)
        for j in range(k):
            e = frozenset((face[j], face[(j + 1) % k]))
            for v in (face[j], face[(j + 1) % k]):
                flags.append((v, e, fi))
    flags.sort(key=lambda t: (t[2], repr(sorted(map(repr, t[1]))), repr(t[0])))
    index = {t: i for i, t in enumerate(flags)}
    if len(index) != len(flags):
        raise ValueError("repeated flag: faces must not repeat edges")
    adj = [[-1] * len(flags) for _ in range(3)]
    for t, i in index.items():
        v, e, fi = t
        for u in flags:
            if u == t:
                continue
            same = (u[0] == v, u[1] == e, u[2] == fi)
            if same == (False, True, True):
                adj[0][i] = index[u]
            elif same == (True, False, True):
                adj[1][i] = index[u]
            elif same == (True, True, False):
                adj[2][i] = index[u]
    labels = tuple((repr(v), tuple(sorted(map(repr, e))), fi) for v, e, fi in flags)
    return FlagSystem(tuple(tuple(a) for a in adj), labels)


def cube() -> FlagSystem:
    return from_faces(list(cube_faces()))


def triangular_prism() -> FlagSystem:
    top = [("t", i) for i in range(3)]
    bot = [("b", i) for i in range(3)]
    faces = [top, bot[::-1]]
    for i in range(3):
        j = (i + 1) % 3
        faces.append([top[i], bot[i], bot[j], top[j]])
    return from_faces(faces)


def hemicube() -> FlagSystem:
    """Antipodal quotient of the cube: 4 vertices, 6 edges, 3 squares."""
    def cls(v):
        w = tuple(1 - x for x in v)
        return min(v, w)

    # cube_faces yields each face before its antipode (side 0, then side 1)
    faces = [[cls(v) for v in face] for k, face in enumerate(cube_faces()) if k % 2 == 0]
    return from_faces(faces)


def cube_faces():
    for axis in range(3):
        for side in (0, 1):
            others = [k for k in range(3) if k != axis]
            cyc = []
            for a, b in ((0, 0), (1, 0), (1, 1), (0, 1)):
                v = [0, 0, 0]
                v[axis], v[others[0]], v[others[1]] = side, a, b
                cyc.append(tuple(v))
            yield cyc


def torus(tiling: str, k: int, l: int) -> FlagSystem:
    """k x l torus quotient of one of the periodic tilings."""
    from .periodic_map import build_tiling, torus_quotient
    return torus_quotient(build_tiling(tiling), k, l)


# -- interchange ----------------------------------------------------------------

def to_dict(fs: FlagSystem) -> dict:
    out = {"n": fs.n, "adj0": list(fs.adj[0]), "adj1": list(fs.adj[1]), "adj2": list(fs.adj[2])}
    if fs.labels is not None:
        out["labels"] = [list(x) if isinstance(x, tuple) else x for x in fs.labels]
    return out


def from_dict(data: dict) -> FlagSystem:
    adj = (data["adj0"], data["adj1"], data["adj2"])
    if any(len(a) != data["n"] for a in adj):
        raise ValueError("adjacency lengths disagree with n")
    labels = data.get("labels")
    return FlagSystem(tuple(tuple(a) for a in adj),
                      None if labels is None else tuple(_freeze(x) for x in labels))


def _freeze(x):
    return tuple(_freeze(y) for y in x) if isinstance(x, list) else x


def dumps(fs: FlagSystem) -> str:
    return json.dumps(to_dict(fs))


def loads(text: str) -> FlagSystem:
    return from_dict(json.loads(text))


def to_dot(fs: FlagSystem, name: str = "flags") -> str:
    lines = [f"graph {name} {{"]
    for i, a in enumerate(fs.adj):
        for f in range(fs.n):
            if f < a[f]:
                lines.append(f'  {f} -- {a[f]} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


BUILDERS = {
    "cube": cube,
    "prism": triangular_prism,
    "hemicube": hemicube,
}


def builtin(name: str) -> FlagSystem:
    """Named finite map: cube, prism, hemicube, or ``torus:TILING:KxL``."""
    if name in BUILDERS:
        return BUILDERS[name]()
    if name.startswith("torus:"):
        _, tiling, size = name.split(":")
        k, l = (int(x) for x in size.lower().split("x"))
        return torus(tiling, k, l)
    raise KeyError(f"unknown map {name!r}")
