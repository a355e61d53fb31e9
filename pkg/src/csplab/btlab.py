"""Finite pieces of the tree-like structure C built over U(A).

One tree component of the generator tree is modelled by reduced words in
the free group on D_1..D_b. A fragment of radius rho has universe
``{(w, S) : |w| <= rho, S in U(A)}``; a tuple of arity r rooted at w with
U-tuple (S_1..S_r) walks along ``w, D_{j_1} w, D_{j_2} D_{j_1} w, ...`` where
``j_k`` is the generator assigned to (relation, U-tuple, k).
"""
from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from math import perm

from .polywidth import u_structure
from .structures import (DEFAULT_GUARDS, Guards, Hom, Structure, gaifman_components, is_forest,
                         is_hom, iso_check, make_structure, quotient)


class TreeWord(tuple):
    """Freely reduced word over D_1..D_b; letter +j is D_j, -j its inverse."""

    def __new__(cls, letters=()):
        out = []
        for x in letters:
            if x == 0:
                raise ValueError("generator indices start at 1")
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return super().__new__(cls, out)

    def __mul__(self, other):
        return TreeWord(tuple(self) + tuple(other))

    def lmul(self, j: int) -> "TreeWord":
        """D_j * self (negative j for the inverse)."""
        return TreeWord((j,) + tuple(self))

    def sort_key(self):
        return (len(self), tuple((abs(x), x < 0) for x in self))

    def __str__(self):
        if not self:
            return "e"
        return ".".join(f"D{abs(x)}" + ("'" if x < 0 else "") for x in self)

    def __repr__(self):
        return f"TreeWord({str(self)})"


EMPTY = TreeWord()


@dataclass(frozen=True)
class GeneratorTable:
    b: int
    index: dict      # (relation, U-tuple, j) -> generator number 1..b
    triples: tuple   # generator number - 1 -> (relation, U-tuple, j)

    def generator(self, rel, utuple, j) -> int:
        return self.index[(rel, utuple, j)]


def compute_b(a: Structure, guards: Guards = DEFAULT_GUARDS, u: Structure | None = None):
    """Number of generators and their canonical assignment.

    Order: relation order, then U-tuples in U(a) order, then ascending j.
    """
    u = u if u is not None else u_structure(a, guards)
    triples = []
    for r, k in a.signature:
        if k < 2:
            continue
        for ut in u.relations[r]:
            for j in range(1, k):
                triples.append((r, ut, j))
    table = GeneratorTable(len(triples), {t: i + 1 for i, t in enumerate(triples)}, tuple(triples))
    return table.b, table


def ball_size(b: int, radius: int) -> int:
    if b == 0 or radius == 0:
        return 1
    if b == 1:
        return 2 * radius + 1
    return 1 + 2 * b * ((2 * b - 1) ** radius - 1) // (2 * b - 2)


def ball(b: int, radius: int) -> list[TreeWord]:
    """Reduced words of length <= radius, ordered by length then letters."""
    letters = sorted([j for i in range(1, b + 1) for j in (i, -i)], key=lambda x: (abs(x), x < 0))
    words, level = [EMPTY], [EMPTY]
    for _ in range(radius):
        level = [w.lmul(x) for w in level for x in letters if not (w and w[0] == -x)]
        words.extend(level)
    words.sort(key=TreeWord.sort_key)
    return words


def dset_size(b: int, limit: int | None = None) -> int:
    total = 0
    for k in range(b + 1):
        total += perm(b, k)
        if limit is not None and total > limit:
            return total
    return total


def build_dset(table: GeneratorTable, guards: Guards = DEFAULT_GUARDS) -> list[TreeWord]:
    """Products of pairwise distinct positive generators, every order, incl. the empty word."""
    guards.check("max_dset", dset_size(table.b, guards.max_dset))
    out = [TreeWord(p) for k in range(table.b + 1)
           for p in itertools.permutations(range(1, table.b + 1), k)]
    out.sort(key=TreeWord.sort_key)
    return out


@dataclass(frozen=True, eq=False)
class Fragment:
    template: Structure
    radius: int | None
    table: GeneratorTable
    u: Structure
    words: tuple
    structure: Structure


def _tuple_words(table: GeneratorTable, rel, utuple, root: TreeWord) -> list[TreeWord]:
    ws = [root]
    for j in range(1, len(utuple)):
        ws.append(ws[-1].lmul(table.generator(rel, utuple, j)))
    return ws


def fragment_over(a: Structure, words, guards: Guards = DEFAULT_GUARDS, u=None, table=None,
                  radius=None, name=None) -> Fragment:
    """The substructure of C on ``words x V(U(a))``; only tuples lying fully inside are kept."""
    u = u if u is not None else u_structure(a, guards)
    if table is None:
        _, table = compute_b(a, guards, u)
    words = tuple(words)
    guards.check("max_fragment", len(words) * len(u.universe))
    wordset = set(words)
    rels = {}
    for r, k in a.signature:
        out = []
        for w in words:
            for ut in u.relations[r]:
                ws = _tuple_words(table, r, ut, w) if k > 1 else [w]
                if all(x in wordset for x in ws):
                    out.append(tuple(zip(ws, ut)))
        rels[r] = out
    universe = [(w, s) for w in words for s in u.universe]
    s = make_structure(a.signature, universe, rels, name=name or f"C_{a.name}")
    return Fragment(a, radius, table, u, words, s)


def build_fragment(a: Structure, radius: int, guards: Guards = DEFAULT_GUARDS) -> Fragment:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    u = u_structure(a, guards)
    b, table = compute_b(a, guards, u)
    guards.check("max_fragment", ball_size(b, radius) * len(u.universe))
    return fragment_over(a, ball(b, radius), guards, u, table, radius,
                         name=f"C_{a.name}_r{radius}")


def projection(frag: Fragment) -> Hom:
    """(w, S) -> S, a homomorphism from the fragment to U(A)."""
    return Hom(frag.structure, frag.u, {x: x[1] for x in frag.structure.universe})


def fragment_label(frag: Fragment):
    """Labeller for serialising fragments: ``D1.D2'@s+t``."""
    a = frag.template

    def lab(x):
        w, s = x
        return f"{w}@" + "+".join(str(v) for v in sorted(s, key=a.index.__getitem__))
    return lab


def selection(a: Structure):
    """The fixed choice: least tuple of R(a) through value v at position j inside the U-tuple."""
    cache = {}

    def select(rel, utuple, j, v):
        key = (rel, utuple, j, v)
        if key not in cache:
            cache[key] = next(
                (t for t in a.relations[rel]
                 if t[j] == v and all(x in s for x, s in zip(t, utuple))), None)
        return cache[key]
    return select


def tree_hom(frag: Fragment, root_index: int = 0, value_index: int = 0) -> Hom:
    """Extend a choice at one root per component along the fixed selection.

    ``root_index`` picks the root of each component (position in universe
    order, modulo component size) and ``value_index`` picks among admissible
    root values. Raises ValueError when the fragment is not a forest or a root
    has no admissible value.
    """
    s, a = frag.structure, frag.template
    if not is_forest(s):
        raise ValueError("fragment is not acyclic; tree extension does not apply")
    select = selection(a)
    incident = defaultdict(list)
    for tid, (r, t) in enumerate(s.itertuples()):
        for x in dict.fromkeys(t):
            incident[x].append((tid, r, t))
    unary = {r for r, k in s.signature if k == 1}
    phi, entered = {}, set()
    for comp in gaifman_components(s):
        root = comp[root_index % len(comp)]
        cands = [v for v in a.universe if v in root[1]
                 and all(select(r, (root[1],), 0, v) is not None
                         for _, r, t in incident[root] if r in unary)]
        if not cands:
            raise ValueError(f"no admissible value for root {root!r}")
        phi[root] = cands[value_index % len(cands)]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for tid, r, t in incident[x]:
                if tid in entered:
                    continue
                entered.add(tid)
                j = t.index(x)
                row = select(r, tuple(y[1] for y in t), j, phi[x])
                if row is None:
                    raise ValueError(f"no selection for {r} tuple {t!r} at {j}")
                for y, v in zip(t, row):
                    if y not in phi:
                        phi[y] = v
                        queue.append(y)
    h = Hom(s, a, phi)
    assert is_hom(h)
    return h


def collapse_iso(a: Structure, guards: Guards = DEFAULT_GUARDS) -> Hom | None:
    """Restrict C to D-set words, collapse each U-layer, and match against U(a)."""
    u = u_structure(a, guards)
    _, table = compute_b(a, guards, u)
    dset = build_dset(table, guards)
    frag = fragment_over(a, dset, guards, u, table, name=f"C_{a.name}_dset")
    partition = [[(w, s) for w in dset] for s in u.universe]
    q = quotient(frag.structure, partition)
    return iso_check(q, u, guards)


def collapse_check(a: Structure, guards: Guards = DEFAULT_GUARDS) -> bool:
    return collapse_iso(a, guards) is not None


def invariant_point_search(frag: Fragment, phi: Hom, guards: Guards = DEFAULT_GUARDS):
    """Look for a word t whose pattern S -> phi(t, S) is unchanged by every d in the D-set.

    Returns ``(hom, reason)``; ``hom`` is a verified homomorphism U(A) -> A or None.
    """
    if phi.source is not frag.structure and phi.source != frag.structure:
        raise ValueError("phi is not defined on this fragment")
    if not is_hom(phi):
        raise ValueError("phi is not a homomorphism")
    dset = build_dset(frag.table, guards)
    wordset = set(frag.words)
    eligible = [t for t in frag.words if all(d * t in wordset for d in dset)]
    if not eligible:
        return None, "no eligible point"
    us = frag.u.universe
    invariant = 0
    for t in eligible:
        pattern = {s: phi.mapping[(t, s)] for s in us}
        if all(phi.mapping[(d * t, s)] == pattern[s] for d in dset for s in us):
            invariant += 1
            h = Hom(frag.u, frag.template, pattern)
            if is_hom(h):
                return h, "ok"
    if invariant == 0:
        return None, "no invariant point"
    return None, "invariant points are not homomorphisms"


def invariant_point_hom(frag: Fragment, phi: Hom, guards: Guards = DEFAULT_GUARDS) -> Hom | None:
    return invariant_point_search(frag, phi, guards)[0]
