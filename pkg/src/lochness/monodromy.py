"""Exact monodromy groups.

For a periodic map with Aut-orbit representatives Phi_1..Phi_k, an element g
of Mon(M) is stored as the tuple of flags ``(Phi_1 g, ..., Phi_k g)``.  Every
flag is ``beta(Phi_j)`` for a unique automorphism beta, and automorphisms
commute with the right action, so ``beta(Phi_j) g = beta(Phi_j g)`` recovers
the action of g on every flag.  The orbit permutation sigma and the
automorphisms alpha_i with ``Phi_i g = alpha_i(Phi_sigma(i))`` are derived
views of the same tuple.

Finite maps use plain permutation closure (:func:`mon_enumerate`).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import periodic_map as pmap
from .errors import ResourceLimitError, SearchExhaustedError
from .flag_system import FlagSystem
from .periodic_map import Automorphism, PeriodicFlag, PeriodicMap
from .words import Node, Power, Seq, as_letters, parse

POINT_GROUP_ORDER_BOUND = 12


@dataclass(frozen=True)
class MonodromyElement:
    images: tuple  # images of the orbit representatives, in order
    group: Optional["MonodromyGroup"] = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.images)

    @property
    def sigma(self) -> tuple[int, ...]:
        return self.group.sigma(self)

    @property
    def alphas(self) -> tuple[Automorphism, ...]:
        return self.group.alphas(self)


@dataclass(frozen=True)
class TranslationPower:
    power: int
    element: MonodromyElement
    trivial: bool


@dataclass(frozen=True)
class KernelWitness:
    words: tuple          # letter tuples mapping Phi_1 to its (1,0) and (0,1) translates
    powers: tuple         # exponents making each a pure translation element
    elements: tuple       # the two kernel elements
    vectors: tuple        # per element, translation vector on every orbit
    commute: bool

    @property
    def independent(self) -> bool:
        (ax, ay), (bx, by) = self.vectors[0][0], self.vectors[1][0]
        return ax * by - ay * bx != 0


class MonodromyGroup:
    """Mon(M) of a periodic map, relative to fixed orbit representatives."""

    def __init__(self, pm: PeriodicMap, reps: Optional[Sequence[PeriodicFlag]] = None):
        self.pm = pm
        self.reps = tuple(PeriodicFlag(*r) for r in (reps or pmap.orbit_representatives(pm)))
        self.k = len(self.reps)
        self.orbit_of_cell = [-1] * pm.m
        for j, orbit in enumerate(pmap.aut_orbits(pm)):
            for c in orbit:
                self.orbit_of_cell[c] = j
        if sorted(self.orbit_of_cell[r.cell] for r in self.reps) != list(range(self.k)):
            raise ValueError("representatives must contain exactly one flag per Aut-orbit")
        # rep index by orbit (reps may be given in any order)
        self._rep_of_orbit = [0] * self.k
        for i, r in enumerate(self.reps):
            self._rep_of_orbit[self.orbit_of_cell[r.cell]] = i
        self._affine = {}
        self.identity = MonodromyElement(self.reps, self)

    # -- primitive actions ----------------------------------------------------

    def _carry(self, cell):
        """Affine data of the automorphism taking the representative of cell's orbit to (cell, 0)."""
        data = self._affine.get(cell)
        if data is None:
            rep = self.reps[self._rep_of_orbit[self.orbit_of_cell[cell]]]
            aut = pmap.automorphism_from(self.pm, PeriodicFlag(rep.cell), PeriodicFlag(cell))
            data = (self._rep_of_orbit[self.orbit_of_cell[cell]], aut.cells, aut.linear,
                    aut.shifts, rep)
            self._affine[cell] = data
        return data

    def act(self, f: PeriodicFlag, g: MonodromyElement) -> PeriodicFlag:
        """The flag f·g for an arbitrary flag f."""
        i, cells, (a, b, c, d), shifts, rep = self._carry(f[0])
        h = g.images[i]
        tx, ty = h[1] - rep[1], h[2] - rep[2]
        sx, sy = shifts[h[0]]
        return PeriodicFlag(cells[h[0]], a * tx + b * ty + sx + f[1], c * tx + d * ty + sy + f[2])

    def step(self, g: MonodromyElement, i: int) -> MonodromyElement:
        """g·r_i."""
        row = self.pm.padj[i]
        out = []
        for c, x, y in g.images:
            c2, dx, dy = row[c]
            out.append(PeriodicFlag(c2, x + dx, y + dy))
        return MonodromyElement(tuple(out), self)

    def generator(self, i: int) -> MonodromyElement:
        return self.step(self.identity, i)

    # -- group law ---------------------------------------------------------------

    def compose(self, a: MonodromyElement, b: MonodromyElement) -> MonodromyElement:
        """a then b (right action): Phi (ab) = (Phi a) b."""
        return MonodromyElement(tuple(self.act(f, b) for f in a.images), self)

    def inverse(self, a: MonodromyElement) -> MonodromyElement:
        out = [None] * self.k
        for j, f in enumerate(a.images):
            # Phi_j a = alpha(Phi_i) with i the orbit of f; then Phi_i a^-1 = alpha^-1(Phi_j)
            i = self._rep_of_orbit[self.orbit_of_cell[f.cell]]
            alpha = pmap.automorphism_from(self.pm, self.reps[i], f)
            out[i] = pmap.inverse(self.pm, alpha)(self.reps[j])
        return MonodromyElement(tuple(out), self)

    def power(self, a: MonodromyElement, n: int) -> MonodromyElement:
        if n < 0:
            a, n = self.inverse(a), -n
        result, base = self.identity, a
        while n:
            if n & 1:
                result = self.compose(result, base)
            n >>= 1
            if n:
                base = self.compose(base, base)
        return result

    def evaluate(self, word) -> MonodromyElement:
        """Element of a word: a string in the word syntax, a letter sequence, or a parse tree."""
        if isinstance(word, str):
            word = parse(word)
        if isinstance(word, (Power, Seq, int)):
            return self._eval_node(word)
        g = self.identity
        for a in as_letters(word):
            g = self.step(g, a)
        return g

    def _eval_node(self, node: Node) -> MonodromyElement:
        if isinstance(node, int):
            return self.generator(node)
        if isinstance(node, Power):
            return self.power(self._eval_node(node.base), node.exponent)
        g = self.identity
        for item in node.items:
            if isinstance(item, int):
                g = self.step(g, item)
            else:
                g = self.compose(g, self._eval_node(item))
        return g

    # -- views ---------------------------------------------------------------

    def sigma(self, g: MonodromyElement) -> tuple[int, ...]:
        """Orbit permutation: orbit of the i-th representative goes to sigma[i]."""
        return tuple(self._rep_of_orbit[self.orbit_of_cell[f.cell]] for f in g.images)

    def alphas(self, g: MonodromyElement) -> tuple[Automorphism, ...]:
        sig = self.sigma(g)
        return tuple(pmap.automorphism_from(self.pm, self.reps[sig[i]], f)
                     for i, f in enumerate(g.images))

    def is_identity(self, g: MonodromyElement) -> bool:
        return g.images == self.reps

    def is_pure_translation(self, g: MonodromyElement) -> bool:
        return all(f.cell == r.cell for f, r in zip(g.images, self.reps))

    def translation_vectors(self, g: MonodromyElement) -> Optional[tuple]:
        if not self.is_pure_translation(g):
            return None
        return tuple((f.x - r.x, f.y - r.y) for f, r in zip(g.images, self.reps))

    def in_kernel(self, g: MonodromyElement) -> bool:
        return self.sigma(g) == tuple(range(self.k))

    # -- word machinery -----------------------------------------------------

    def fixes_all_flags(self, word) -> bool:
        return self.is_identity(self.evaluate(word))

    def translation_power(self, word, bound: Optional[int] = None) -> TranslationPower:
        """Least m >= 1 with g^m fixing every orbit and acting on it by a lattice translation."""
        if bound is None:
            bound = math.factorial(self.k) * POINT_GROUP_ORDER_BOUND
        g = self.evaluate(word)
        cur = g
        for m in range(1, bound + 1):
            if self.is_pure_translation(cur):
                return TranslationPower(m, cur, self.is_identity(cur))
            cur = self.compose(cur, g)
        raise SearchExhaustedError(f"no translation power of the word up to {bound}")

    def commutator_is_trivial(self, w1, k: int, w2, l: int) -> bool:
        """Whether w2^-l w1^-k w2^l w1^k is trivial in Mon(M)."""
        u, v = _node(w1), _node(w2)
        word = Seq((Power(_reverse(v), l), Power(_reverse(u), k), Power(v, l), Power(u, k)))
        return self.fixes_all_flags(word)

    def word_between(self, src: PeriodicFlag, dst: PeriodicFlag, limit: int = 1_000_000) -> tuple:
        """Shortest word w with src·w = dst, by breadth-first search in the flag graph."""
        src, dst = PeriodicFlag(*src), PeriodicFlag(*dst)
        parent = {src: None}
        queue = deque([src])
        while queue:
            f = queue.popleft()
            if f == dst:
                word = []
                while parent[f] is not None:
                    f, a = parent[f]
                    word.append(a)
                return tuple(reversed(word))
            for a in range(3):
                g = self.pm.step(f, a)
                if g not in parent:
                    parent[g] = (f, a)
                    queue.append(g)
            if len(parent) > limit:
                break
        raise SearchExhaustedError(f"no word from {src} to {dst} within {limit} flags")

    def kernel_rank_witness(self) -> KernelWitness:
        """Two commuting pure-translation kernel elements with independent vectors."""
        base = self.reps[0]
        words, powers, elements, vectors = [], [], [], []
        for d in ((1, 0), (0, 1)):
            w = self.word_between(base, base.shifted(*d))
            tp = self.translation_power(w)
            if tp.trivial:
                raise SearchExhaustedError(f"translation word {w} has trivial power")
            words.append(w)
            powers.append(tp.power)
            elements.append(tp.element)
            vectors.append(self.translation_vectors(tp.element))
        a, b = elements
        commute = self.compose(a, b) == self.compose(b, a)
        witness = KernelWitness(tuple(words), tuple(powers), tuple(elements), tuple(vectors), commute)
        if not witness.independent:
            raise SearchExhaustedError("translation witnesses are not independent")
        return witness

    def window_fixes(self, word, radius: int = 1) -> bool:
        """Brute force: does the word fix every flag of a window of cells?"""
        letters = as_letters(word)
        return all(pmap.padjacent(self.pm, f, letters) == f
                   for f in pmap.window_flags(self.pm, radius))


def _node(word) -> Node:
    if isinstance(word, str):
        return parse(word)
    if isinstance(word, (Power, Seq, int)):
        return word
    return Seq(tuple(as_letters(word)))


def _reverse(node: Node) -> Node:
    if isinstance(node, int):
        return node
    if isinstance(node, Power):
        return Power(_reverse(node.base), node.exponent)
    return Seq(tuple(_reverse(x) for x in reversed(node.items)))


# -- module-level API over (map, representatives) ----------------------------------------

_GROUPS: dict = {}


def group_of(pm: PeriodicMap, reps=None) -> MonodromyGroup:
    key = (id(pm), None if reps is None else tuple(reps))
    grp = _GROUPS.get(key)
    if grp is None or grp.pm is not pm:
        grp = MonodromyGroup(pm, reps)
        _GROUPS[key] = grp
    return grp


def evaluate(pm: PeriodicMap, reps, w) -> MonodromyElement:
    return group_of(pm, reps).evaluate(w)


def compose(pm: PeriodicMap, reps, a: MonodromyElement, b: MonodromyElement) -> MonodromyElement:
    return group_of(pm, reps).compose(a, b)


def inverse(pm: PeriodicMap, reps, a: MonodromyElement) -> MonodromyElement:
    return group_of(pm, reps).inverse(a)


def fixes_all_flags(pm: PeriodicMap, reps, w) -> bool:
    return group_of(pm, reps).fixes_all_flags(w)


def translation_power(pm: PeriodicMap, reps, w, bound=None) -> TranslationPower:
    return group_of(pm, reps).translation_power(w, bound)


def commutator_is_trivial(pm: PeriodicMap, reps, w1, k: int, w2, l: int) -> bool:
    return group_of(pm, reps).commutator_is_trivial(w1, k, w2, l)


def kernel_rank_witness(pm: PeriodicMap, reps=None) -> KernelWitness:
    return group_of(pm, reps).kernel_rank_witness()


# -- finite maps --------------------------------------------------------------------

def mon_enumerate(fs: FlagSystem, cap: int = 5_000_000) -> list[tuple[int, ...]]:
    """All elements of Mon(M) as flag permutations, breadth-first from the identity.

    ``(g·r_i)[f] = r_i[g[f]]``: apply g, then r_i.
    """
    ident = tuple(range(fs.n))
    seen = {ident: 0}
    out = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for a in fs.adj:
            h = tuple(a[x] for x in g)
            if h not in seen:
                seen[h] = len(out)
                out.append(h)
                queue.append(h)
                if len(out) > cap:
                    raise ResourceLimitError(f"Mon(M) has more than {cap} elements")
    return out
