"""The power-set structure U(A), width 1, and symmetric polymorphisms.

Polymorphism searches are phrased as ordinary CSP instances: the variables
are the argument classes (cyclic-shift orbits, or argument sets), and every
tuple of the power A^n contributes its class tuple as a constraint. The
instance is then handed to :func:`csplab.solver.solve_hom`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal

from .solver import solve_hom
from .structures import (DEFAULT_GUARDS, Guards, Hom, Structure, is_hom, make_structure, power)


def nonempty_subsets(a: Structure, max_size: int | None = None) -> list[frozenset]:
    """Nonempty subsets of V(a), ordered lexicographically by sorted index tuple."""
    n = len(a.universe)
    top = n if max_size is None else min(n, max_size)
    keys = [c for k in range(1, top + 1) for c in itertools.combinations(range(n), k)]
    keys.sort()
    return [frozenset(a.universe[i] for i in c) for c in keys]


def u_structure(a: Structure, guards: Guards = DEFAULT_GUARDS) -> Structure:
    """U(a): nonempty subsets; (S_1..S_r) related iff every a_j in S_j lies on
    some tuple of R(a) whose k-th coordinate is in S_k for all k."""
    guards.check("max_u_base", len(a.universe))
    subsets = nonempty_subsets(a)
    masks = [sum(1 << a.index[x] for x in s) for s in subsets]
    rels = {}
    for r, k in a.signature:
        guards.check("max_tuples", len(subsets) ** k)
        rows = [a.tuple_key(t) for t in a.relations[r]]
        related = []
        for combo in itertools.product(range(len(subsets)), repeat=k):
            ms = [masks[i] for i in combo]
            supported = [0] * k
            for t in rows:
                if all(m >> x & 1 for m, x in zip(ms, t)):
                    for j, x in enumerate(t):
                        supported[j] |= 1 << x
            if supported == ms:
                related.append(tuple(subsets[i] for i in combo))
        rels[r] = related
    return make_structure(a.signature, subsets, rels, name=f"U_{a.name}")


def width1_witness(a: Structure, guards: Guards = DEFAULT_GUARDS) -> Hom | None:
    """A homomorphism U(a) -> a, or None when a does not have width 1."""
    u = u_structure(a, guards)
    return solve_hom(u, a, guards=guards)


@dataclass(frozen=True)
class PolyWitness:
    arity: int
    kind: Literal["cyclic", "ts"]
    table: dict
    template: Structure

    def key(self, args: tuple):
        if self.kind == "cyclic":
            return cyclic_rep(self.template, args)
        return frozenset(args)

    def __call__(self, *args):
        return self.table[self.key(tuple(args))]

    def as_hom(self, guards: Guards = DEFAULT_GUARDS) -> Hom:
        p = power(self.template, self.arity, guards)
        return Hom(p, self.template, {f: self(*f) for f in p.universe})


def cyclic_rep(a: Structure, args: tuple) -> tuple:
    """Least rotation of ``args`` under universe order."""
    n = len(args)
    rots = [args[i:] + args[:i] for i in range(n)]
    return min(rots, key=a.tuple_key)


def _class_instance(a: Structure, n: int, classes: list, classify, name: str,
                    guards: Guards) -> Structure:
    rels = {}
    for r, k in a.signature:
        guards.check("max_tuples", len(a.relations[r]) ** n)
        out = set()
        for choice in itertools.product(a.relations[r], repeat=n):
            out.add(tuple(classify(tuple(choice[j][i] for j in range(n))) for i in range(k)))
        rels[r] = out
    return make_structure(a.signature, classes, rels, name=name)


def cyclic_polymorphism(a: Structure, n: int, guards: Guards = DEFAULT_GUARDS) -> PolyWitness | None:
    """An n-ary polymorphism invariant under cyclic shift, or None."""
    if n < 2:
        raise ValueError("cyclic polymorphisms need n >= 2")
    guards.check("max_power", len(a.universe) ** n)
    classes = sorted({cyclic_rep(a, t) for t in itertools.product(a.universe, repeat=n)},
                     key=a.tuple_key)
    inst = _class_instance(a, n, classes, lambda t: cyclic_rep(a, t), f"{a.name}_cyc{n}", guards)
    h = solve_hom(inst, a, guards=guards)
    if h is None:
        return None
    w = PolyWitness(n, "cyclic", dict(h.mapping), a)
    assert is_hom(w.as_hom(guards))
    return w


def ts_polymorphism(a: Structure, n: int, guards: Guards = DEFAULT_GUARDS) -> PolyWitness | None:
    """An n-ary polymorphism whose value depends only on the set of arguments."""
    if n < 1:
        raise ValueError("ts polymorphisms need n >= 1")
    classes = nonempty_subsets(a, max_size=n)
    inst = _class_instance(a, n, classes, frozenset, f"{a.name}_ts{n}", guards)
    h = solve_hom(inst, a, guards=guards)
    if h is None:
        return None
    w = PolyWitness(n, "ts", dict(h.mapping), a)
    if len(a.universe) ** n <= guards.max_power:
        assert is_hom(w.as_hom(guards))
    return w


def ts_from_width1(omega: Hom, n: int) -> PolyWitness:
    """Restrict a width-1 witness to argument sets of size <= n."""
    a = omega.target
    table = {s: v for s, v in omega.mapping.items() if len(s) <= n}
    return PolyWitness(n, "ts", table, a)
