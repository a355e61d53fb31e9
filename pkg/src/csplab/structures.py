"""Finite relational structures and structure-level constructions.

Elements are arbitrary hashable values. Structures parsed from text use
strings; derived constructions use tuples (powers), frozensets (power-set
structure, quotients) or ``(word, subset)`` pairs (tree fragments). The
order of ``universe`` is the global tie-break order for every search.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

Element = Hashable
Signature = tuple[tuple[str, int], ...]


class StructureError(ValueError):
    """Raised when a structure violates its invariants."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class SizeGuardError(RuntimeError):
    """A construction would exceed a configured size guard."""

    def __init__(self, guard: str, needed, limit):
        self.guard = guard
        self.needed = needed
        self.limit = limit
        super().__init__(f"size guard {guard!r} exceeded: need {needed}, limit {limit}")


@dataclass(frozen=True)
class Guards:
    max_power: int = 10**6
    max_tuples: int = 10**6
    max_u_base: int = 16
    max_iso: int = 20
    max_fragment: int = 200_000
    max_dset: int = 100_000
    max_pool: int = 5_000
    max_search_nodes: int = 10**6

    def check(self, guard: str, needed: int) -> None:
        limit = getattr(self, guard)
        if needed > limit:
            raise SizeGuardError(guard, needed, limit)


DEFAULT_GUARDS = Guards()


@dataclass(frozen=True, eq=False)
class Structure:
    signature: Signature
    universe: tuple
    relations: Mapping[str, tuple]
    name: str = "A"

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.universe)}

    @cached_property
    def arity(self) -> dict[str, int]:
        return dict(self.signature)

    def __len__(self):
        return len(self.universe)

    def __getitem__(self, rel: str):
        return self.relations[rel]

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.universe == other.universe
            and all(set(self.relations[r]) == set(other.relations[r]) for r, _ in self.signature)
        )

    def __repr__(self):
        rels = ", ".join(f"{r}/{k}:{len(self.relations[r])}" for r, k in self.signature)
        return f"Structure({self.name}, |V|={len(self.universe)}, {rels})"

    def tuple_key(self, t) -> tuple[int, ...]:
        return tuple(self.index[x] for x in t)

    def itertuples(self):
        """Yield ``(relation, tuple)`` pairs in relation order then tuple order."""
        for r, _ in self.signature:
            for t in self.relations[r]:
                yield r, t


@dataclass(frozen=True, eq=False)
class Hom:
    source: Structure
    target: Structure
    mapping: Mapping

    def __call__(self, x):
        return self.mapping[x]


def validate(s: Structure) -> list[str]:
    """Return a list of invariant violations; empty means the structure is valid."""
    errors = []
    names = [r for r, _ in s.signature]
    for r, c in Counter(names).items():
        if c > 1:
            errors.append(f"duplicate relation name {r!r}")
    for r, k in s.signature:
        if not isinstance(k, int) or k < 1:
            errors.append(f"relation {r!r} has invalid arity {k!r}")
    if len(s.universe) == 0:
        errors.append("empty universe")
    dup = [x for x, c in Counter(s.universe).items() if c > 1]
    if dup:
        errors.append(f"duplicate universe elements {dup!r}")
    extra = set(s.relations) - set(names)
    if extra:
        errors.append(f"relations not in signature: {sorted(map(str, extra))}")
    elems = set(s.universe)
    for r, k in s.signature:
        if r not in s.relations:
            errors.append(f"relation {r!r} missing")
            continue
        for t in s.relations[r]:
            if len(t) != k:
                errors.append(f"arity mismatch in {r}: tuple {t!r} has length {len(t)}, expected {k}")
                continue
            bad = [x for x in t if x not in elems]
            if bad:
                errors.append(f"unknown element(s) {bad!r} in {r} tuple {t!r}")
    return errors


def make_structure(signature: Iterable, universe: Iterable, relations: Mapping[str, Iterable],
                   name: str = "A") -> Structure:
    """Build a validated structure; duplicate tuples collapse, tuples are sorted."""
    signature = tuple((str(r), k) for r, k in signature)
    universe = tuple(universe)
    rels = {r: tuple(dict.fromkeys(tuple(t) for t in relations.get(r, ()))) for r, _ in signature}
    for r in relations:
        rels.setdefault(r, tuple(relations[r]))
    raw = Structure(signature, universe, rels, name)
    errors = validate(raw)
    if errors:
        raise StructureError(errors)
    index = raw.index
    rels = {r: tuple(sorted(ts, key=lambda t: tuple(index[x] for x in t))) for r, ts in rels.items()}
    return Structure(signature, universe, rels, name)


def same_signature(a: Structure, b: Structure) -> None:
    if a.signature != b.signature:
        raise ValueError(f"signature mismatch: {a.signature} vs {b.signature}")


def is_hom(h: Hom) -> bool:
    src, tgt = h.source, h.target
    same_signature(src, tgt)
    missing = [x for x in src.universe if x not in h.mapping]
    if missing:
        raise ValueError(f"partial mapping: no image for {missing[:5]!r}")
    tset = set(tgt.universe)
    if any(h.mapping[x] not in tset for x in src.universe):
        return False
    for r, _ in src.signature:
        target = set(tgt.relations[r])
        for t in src.relations[r]:
            if tuple(h.mapping[x] for x in t) not in target:
                return False
    return True


def power(a: Structure, n: int, guards: Guards = DEFAULT_GUARDS) -> Structure:
    """The n-th categorical power: n-tuples related iff every coordinate slice is."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    guards.check("max_power", len(a.universe) ** n)
    for r, _ in a.signature:
        guards.check("max_tuples", len(a.relations[r]) ** n)
    universe = tuple(itertools.product(a.universe, repeat=n))
    rels = {}
    for r, k in a.signature:
        rows = []
        # one R(a)-tuple per coordinate, transposed into k n-tuples
        for choice in itertools.product(a.relations[r], repeat=n):
            rows.append(tuple(tuple(choice[j][i] for j in range(n)) for i in range(k)))
        rels[r] = rows
    return make_structure(a.signature, universe, rels, name=f"{a.name}_pow{n}")


def gaifman_components(s: Structure) -> list[list]:
    """Blocks of the finest partition joining elements that share a tuple.

    Blocks are listed by their least element; members keep universe order.
    """
    parent = list(range(len(s.universe)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for _, t in s.itertuples():
        idx = [s.index[x] for x in t]
        for j in idx[1:]:
            ri, rj = find(idx[0]), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    blocks = defaultdict(list)
    for i, x in enumerate(s.universe):
        blocks[find(i)].append(x)
    return [blocks[k] for k in sorted(blocks)]


def is_forest(s: Structure) -> bool:
    """True iff the element/tuple incidence graph has no cycle.

    A tuple with a repeated element counts as a cycle.
    """
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for n, (_, t) in enumerate(s.itertuples()):
        tnode = ("tuple", n)
        for x in t:
            ra, rb = find(tnode), find(("elem", x))
            if ra == rb:
                return False
            parent[ra] = rb
    return True


def quotient(s: Structure, partition: Sequence[Iterable]) -> Structure:
    """Collapse each block of ``partition`` to one element (a frozenset)."""
    blocks = [frozenset(b) for b in partition]
    seen = set()
    for b in blocks:
        if not b:
            raise ValueError("partition has an empty block")
        if seen & b:
            raise ValueError("partition blocks overlap")
        seen |= b
    if seen != set(s.universe):
        raise ValueError("partition does not cover the universe exactly")
    # order blocks by their least element
    blocks.sort(key=lambda b: min(s.index[x] for x in b))
    where = {x: b for b in blocks for x in b}
    rels = {r: [tuple(where[x] for x in t) for t in s.relations[r]] for r, _ in s.signature}
    return make_structure(s.signature, blocks, rels, name=f"{s.name}_quot")


def block_map(partition: Iterable[Iterable]) -> dict:
    return {x: frozenset(b) for b in partition for x in b}


def _profile(s: Structure) -> dict:
    prof = {x: Counter() for x in s.universe}
    for r, t in s.itertuples():
        for j, x in enumerate(t):
            prof[x][(r, j)] += 1
        if len(set(t)) < len(t):
            for x in set(t):
                prof[x][(r, "rep", tuple(i for i, y in enumerate(t) if y == x))] += 1
    return {x: tuple(sorted(c.items(), key=repr)) for x, c in prof.items()}


def iso_check(a: Structure, b: Structure, guards: Guards = DEFAULT_GUARDS) -> Hom | None:
    """Find an isomorphism a -> b by backtracking with per-element profile pruning."""
    guards.check("max_iso", max(len(a), len(b)))
    if a.signature != b.signature or len(a) != len(b):
        return None
    if any(len(a.relations[r]) != len(b.relations[r]) for r, _ in a.signature):
        return None
    pa, pb = _profile(a), _profile(b)
    if Counter(pa.values()) != Counter(pb.values()):
        return None
    btargets = {r: set(b.relations[r]) for r, _ in b.signature}
    # tuples of a become checkable once their latest element (in order) is mapped
    order = list(a.universe)
    pos = {x: i for i, x in enumerate(order)}
    due = defaultdict(list)
    for r, t in a.itertuples():
        due[max(pos[x] for x in t)].append((r, t))

    mapping, used = {}, set()

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in b.universe:
            if y in used or pb[y] != pa[x]:
                continue
            mapping[x] = y
            if all(tuple(mapping[z] for z in t) in btargets[r] for r, t in due[i]):
                used.add(y)
                if extend(i + 1):
                    return True
                used.discard(y)
            del mapping[x]
        return False

    if not extend(0):
        return None
    h = Hom(a, b, dict(mapping))
    inv = Hom(b, a, {y: x for x, y in mapping.items()})
    assert is_hom(h) and is_hom(inv)
    return h


def compose(f: Hom, g: Hom) -> Hom:
    """g after f."""
    return Hom(f.source, g.target, {x: g.mapping[f.mapping[x]] for x in f.source.universe})


def identity(s: Structure) -> Hom:
    return Hom(s, s, {x: x for x in s.universe})


def relabel(s: Structure, names: Mapping, name: str | None = None) -> Structure:
    """Rename elements through an injective map."""
    rels = {r: [tuple(names[x] for x in t) for t in s.relations[r]] for r, _ in s.signature}
    return make_structure(s.signature, [names[x] for x in s.universe], rels, name or s.name)


def digraph(universe, arcs, name="G", rel="E") -> Structure:
    """Shorthand for a single binary relation structure."""
    return make_structure([(rel, 2)], universe, {rel: arcs}, name=name)
