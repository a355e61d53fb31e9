"""Arc consistency, homomorphism search, and the homomorphism-list map.

Lists are bit sets (Python ints) over the template's universe order.
"""
from __future__ import annotations

from collections import deque

from .structures import DEFAULT_GUARDS, Guards, Hom, Structure, SizeGuardError, is_hom, same_signature


class _Instance:
    """Index-level view of a CSP instance ``b -> a``."""

    def __init__(self, b: Structure, a: Structure):
        same_signature(b, a)
        self.b, self.a = b, a
        self.full = (1 << len(a.universe)) - 1
        self.targets = {r: [a.tuple_key(t) for t in a.relations[r]] for r, _ in a.signature}
        # constraints in relation order, tuple order
        self.cons = [(r, b.tuple_key(t)) for r, t in b.itertuples()]
        self.watch = [[] for _ in b.universe]
        for ci, (_, vars_) in enumerate(self.cons):
            for v in dict.fromkeys(vars_):
                self.watch[v].append(ci)

    def revise(self, ci, lists):
        """Trim the lists of one constraint; return changed variables or None on wipe-out."""
        r, vars_ = self.cons[ci]
        supported = [0] * len(vars_)
        for t in self.targets[r]:
            if all(lists[v] >> x & 1 for v, x in zip(vars_, t)):
                for j, x in enumerate(t):
                    supported[j] |= 1 << x
        changed = []
        for j, v in enumerate(vars_):
            new = lists[v] & supported[j]
            if new != lists[v]:
                lists[v] = new
                if v not in changed:
                    changed.append(v)
                if not new:
                    return None
        return changed

    def propagate(self, lists, queue=None) -> bool:
        """AC-3 style worklist; mutates ``lists``; False on wipe-out."""
        if queue is None:
            queue = range(len(self.cons))
        pending = deque(queue)
        inq = set(pending)
        while pending:
            ci = pending.popleft()
            inq.discard(ci)
            changed = self.revise(ci, lists)
            if changed is None:
                return False
            for v in changed:
                for cj in self.watch[v]:
                    if cj not in inq:
                        pending.append(cj)
                        inq.add(cj)
        return all(lists)

    def decode(self, lists):
        au = self.a.universe
        return {x: frozenset(au[i] for i in range(len(au)) if lists[k] >> i & 1)
                for k, x in enumerate(self.b.universe)}


def ac_lists(b: Structure, a: Structure, initial=None) -> dict | None:
    """Greatest arc-consistent list assignment, or None when some list empties.

    ``initial`` optionally maps elements of ``b`` to allowed subsets of V(a).
    """
    inst = _Instance(b, a)
    lists = [inst.full] * len(b.universe)
    if initial:
        for x, allowed in initial.items():
            lists[b.index[x]] = sum(1 << a.index[v] for v in allowed)
    if not all(lists) or not inst.propagate(lists):
        return None
    return inst.decode(lists)


def naive_ac_lists(b: Structure, a: Structure) -> dict | None:
    """Repeat-until-stable version of the trimming rule (reference for tests)."""
    lists = {x: set(a.universe) for x in b.universe}
    changed = True
    while changed:
        changed = False
        for r, t in b.itertuples():
            for j, x in enumerate(t):
                for v in list(lists[x]):
                    ok = any(w[j] == v and all(w[k] in lists[t[k]] for k in range(len(t)))
                             for w in a.relations[r])
                    if not ok:
                        lists[x].discard(v)
                        changed = True
        if any(not s for s in lists.values()):
            return None
    return {x: frozenset(s) for x, s in lists.items()}


class _Search:
    def __init__(self, inst: _Instance, max_nodes: int):
        self.inst = inst
        self.nodes = 0
        self.max_nodes = max_nodes

    def run(self, lists):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise SizeGuardError("max_search_nodes", self.nodes, self.max_nodes)
        open_ = [(bin(l).count("1"), k) for k, l in enumerate(lists) if l & (l - 1)]
        if not open_:
            return lists
        _, var = min(open_)
        l = lists[var]
        for x in range(l.bit_length()):
            if not l >> x & 1:
                continue
            trial = list(lists)
            trial[var] = 1 << x
            if self.inst.propagate(trial, self.inst.watch[var]):
                found = self.run(trial)
                if found is not None:
                    return found
        return None


def solve_hom(b: Structure, a: Structure, initial=None, guards: Guards = DEFAULT_GUARDS) -> Hom | None:
    """Backtracking search for a homomorphism b -> a.

    Variable order: smallest current list, ties by universe order. Value
    order: universe order. Arc consistency after every assignment.
    """
    inst = _Instance(b, a)
    lists = [inst.full] * len(b.universe)
    if initial:
        for x, allowed in initial.items():
            lists[b.index[x]] = sum(1 << a.index[v] for v in allowed)
    if not all(lists) or not inst.propagate(lists):
        return None
    found = _Search(inst, guards.max_search_nodes).run(lists)
    if found is None:
        return None
    au = a.universe
    h = Hom(b, a, {x: au[found[k].bit_length() - 1] for k, x in enumerate(b.universe)})
    assert is_hom(h)
    return h


def hom_lists(b: Structure, a: Structure, guards: Guards = DEFAULT_GUARDS) -> dict:
    """For each x, the set of values taken by x under some homomorphism b -> a."""
    same_signature(b, a)
    guards.check("max_power", len(b.universe) * len(a.universe))
    lists = ac_lists(b, a)
    if lists is None:
        return {x: frozenset() for x in b.universe}
    out = {}
    for x in b.universe:
        vals = []
        for v in a.universe:
            if v in lists[x] and solve_hom(b, a, initial={x: [v]}, guards=guards) is not None:
                vals.append(v)
        out[x] = frozenset(vals)
    return out


def lists_as_hom(b: Structure, u: Structure, lists: dict) -> Hom:
    """Cast a list assignment into a map b -> U(a) (elements of U are frozensets)."""
    return Hom(b, u, {x: frozenset(lists[x]) for x in b.universe})
