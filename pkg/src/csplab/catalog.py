"""Small named templates used throughout: T2, P2, K2, K3 and friends."""
from __future__ import annotations

import itertools

from .structures import Structure, digraph


def T2() -> Structure:
    """Transitive tournament on two vertices."""
    return digraph(["s", "t"], [("s", "t")], name="T2")


def P2() -> Structure:
    """Directed path with two consecutive arcs."""
    return digraph(["x", "y", "z"], [("x", "y"), ("y", "z")], name="P2")


def K(n: int) -> Structure:
    """Complete graph (symmetric, loopless) on 0..n-1."""
    vs = [str(i) for i in range(n)]
    return digraph(vs, [(u, v) for u, v in itertools.product(vs, vs) if u != v], name=f"K{n}")


def K2() -> Structure:
    return K(2)


def K3() -> Structure:
    return K(3)


def single_arc() -> Structure:
    return digraph(["x", "y"], [("x", "y")], name="Arc")


def single_vertex(signature=(("E", 2),)) -> Structure:
    from .structures import make_structure
    return make_structure(signature, ["v"], {}, name="Pt")


def transitive_tournament(n: int) -> Structure:
    vs = [str(i) for i in range(n)]
    return digraph(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:]], name=f"T{n}")


def directed_path(n_arcs: int, name=None) -> Structure:
    vs = [f"p{i}" for i in range(n_arcs + 1)]
    return digraph(vs, list(zip(vs, vs[1:])), name=name or f"P{n_arcs}")


def disjoint_union(a: Structure, b: Structure, name=None) -> Structure:
    """Tag elements with 'l_'/'r_' prefixes (string elements only)."""
    from .structures import make_structure
    assert a.signature == b.signature
    uni = [f"l_{x}" for x in a.universe] + [f"r_{x}" for x in b.universe]
    rels = {r: [tuple(f"l_{x}" for x in t) for t in a.relations[r]]
            + [tuple(f"r_{x}" for x in t) for t in b.relations[r]] for r, _ in a.signature}
    return make_structure(a.signature, uni, rels, name=name or f"{a.name}_plus_{b.name}")
