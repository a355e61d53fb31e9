"""Brute-force reference implementations, kept independent of csplab's search code."""
import itertools

import networkx as nx
import numpy as np


def maps(b, a):
    for values in itertools.product(a.universe, repeat=len(b.universe)):
        yield dict(zip(b.universe, values))


def preserves(m, b, a):
    return all(tuple(m[x] for x in t) in set(a.relations[r])
               for r, _ in b.signature for t in b.relations[r])


def brute_homs(b, a):
    return [m for m in maps(b, a) if preserves(m, b, a)]


def brute_hom_exists(b, a, chunk=200_000):
    """Vectorised exhaustive search over all |A|^|B| maps."""
    nb, na = len(b.universe), len(a.universe)
    bi, ai = b.index, a.index
    tables = {}
    for r, k in a.signature:
        t = np.zeros((na,) * k, dtype=bool)
        for row in a.relations[r]:
            t[tuple(ai[x] for x in row)] = True
        tables[r] = t
    cons = [(r, [bi[x] for x in row]) for r, _ in b.signature for row in b.relations[r]]
    total = na ** nb
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk))
        vals = np.stack([(codes // na ** i) % na for i in range(nb)], axis=1) if nb else codes[:, None]
        ok = np.ones(len(codes), dtype=bool)
        for r, vs in cons:
            ok &= tables[r][tuple(vals[:, v] for v in vs)]
            if not ok.any():
                break
        if ok.any():
            return True
    return False


def brute_u_relation(a, r):
    """U(a) relation straight from the definition, with Python sets."""
    k = a.arity[r]
    subsets = [frozenset(c) for n in range(1, len(a.universe) + 1)
               for c in itertools.combinations(a.universe, n)]
    rows = a.relations[r]
    out = set()
    for ss in itertools.product(subsets, repeat=k):
        good = True
        for j in range(k):
            for v in ss[j]:
                if not any(t[j] == v and all(t[i] in ss[i] for i in range(k)) for t in rows):
                    good = False
        if good:
            out.add(ss)
    return out


def brute_width1(a):
    from csplab import u_structure
    return brute_hom_exists(u_structure(a), a)


def incidence_graph(s):
    g = nx.MultiGraph()
    g.add_nodes_from(("e", x) for x in s.universe)
    n = 0
    for r, _ in s.signature:
        for t in s.relations[r]:
            for x in t:
                g.add_edge(("t", n), ("e", x))
            n += 1
    return g


def has_cycle(s):
    """DFS cycle detection on the element/tuple incidence multigraph."""
    g = incidence_graph(s)
    seen = set()
    for root in g.nodes:
        if root in seen:
            continue
        stack = [(root, None)]
        seen.add(root)
        while stack:
            v, via = stack.pop()
            for _, w, key in g.edges(v, keys=True):
                if (v, w, key) == via or (w, v, key) == via:
                    continue
                if w in seen:
                    return True
                seen.add(w)
                stack.append((w, (v, w, key)))
    return False


def orbit_table_search(a, n, classes, classify):
    """Exhaustive vectorised check over all tables classes -> V(a)."""
    na, nc = len(a.universe), len(classes)
    cidx = {c: i for i, c in enumerate(classes)}
    cons = set()
    for r, k in a.signature:
        for choice in itertools.product(a.relations[r], repeat=n):
            cons.add((r, tuple(cidx[classify(tuple(choice[j][i] for j in range(n)))] for i in range(k))))
    ai = a.index
    tables = {}
    for r, k in a.signature:
        t = np.zeros((na,) * k, dtype=bool)
        for row in a.relations[r]:
            t[tuple(ai[x] for x in row)] = True
        tables[r] = t
    total = na ** nc
    count = 0
    for start in range(0, total, 500_000):
        codes = np.arange(start, min(total, start + 500_000))
        vals = np.stack([(codes // na ** i) % na for i in range(nc)], axis=1)
        ok = np.ones(len(codes), dtype=bool)
        for r, vs in cons:
            ok &= tables[r][tuple(vals[:, v] for v in vs)]
        count += int(ok.sum())
    return count
