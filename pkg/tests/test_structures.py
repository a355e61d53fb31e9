import itertools

import pytest
from hypothesis import given, settings, strategies as st

from csplab.catalog import K, P2, T2, disjoint_union, single_vertex
from csplab.structures import (Guards, Hom, SizeGuardError, Structure, StructureError, block_map,
                               compose, digraph, gaifman_components, identity, is_hom, iso_check,
                               make_structure, power, quotient, validate)
from oracles import brute_homs


@st.composite
def digraphs(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    vs = [f"v{i}" for i in range(n)]
    arcs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=n * n))
    return digraph(vs, arcs, name="G")


def test_validate_t2(t2):
    assert validate(t2) == []


def test_validate_arity_error():
    raw = Structure((("E", 2),), ("s", "t", "u"), {"E": (("s", "t", "u"),)})
    errs = validate(raw)
    assert len(errs) == 1 and "arity" in errs[0]


def test_validate_empty_universe():
    raw = Structure((("E", 2),), (), {"E": ()})
    assert any("empty" in e for e in validate(raw))


def test_validate_unknown_element():
    raw = Structure((("E", 2),), ("s",), {"E": (("s", "q"),)})
    assert any("unknown" in e for e in validate(raw))


def test_make_structure_raises():
    with pytest.raises(StructureError):
        make_structure([("E", 2)], ["s"], {"E": [("s", "s", "s")]})


def test_power_size_and_edge(k2):
    p = power(k2, 2)
    assert len(p.universe) == 4
    assert (("0", "0"), ("1", "1")) in set(p.relations["E"])
    assert (("0", "0"), ("0", "1")) not in set(p.relations["E"])


def test_power_one_is_iso(k3):
    assert iso_check(power(k3, 1), k3) is not None


def test_power_guard(k3):
    with pytest.raises(SizeGuardError) as e:
        power(k3, 5, Guards(max_power=100))
    assert e.value.guard == "max_power"


@given(digraphs(3), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_power_projections_are_homs(g, n):
    p = power(g, n)
    assert len(p.universe) == len(g.universe) ** n
    for i in range(n):
        assert is_hom(Hom(p, g, {f: f[i] for f in p.universe}))


def test_gaifman(p2):
    assert len(gaifman_components(p2)) == 1
    assert len(gaifman_components(disjoint_union(p2, p2))) == 2
    s = make_structure([("U", 1)], ["a", "b", "c"], {"U": [("a",), ("b",)]})
    assert gaifman_components(s) == [["a"], ["b"], ["c"]]


def test_quotient_identity_partition(k3):
    q = quotient(k3, [[x] for x in k3.universe])
    h = iso_check(k3, q)
    assert h is not None
    assert h.mapping == {x: frozenset([x]) for x in k3.universe}


def test_quotient_single_block(k2):
    q = quotient(k2, [k2.universe])
    assert len(q.universe) == 1
    blk = q.universe[0]
    assert set(q.relations["E"]) == {(blk, blk)}


def test_quotient_rejects_non_partition(k3):
    with pytest.raises(ValueError):
        quotient(k3, [["0", "1"], ["1", "2"]])
    with pytest.raises(ValueError):
        quotient(k3, [["0", "1"]])


@given(digraphs(4), st.data())
@settings(max_examples=40, deadline=None)
def test_block_map_is_hom(g, data):
    labels = data.draw(st.lists(st.integers(0, 2), min_size=len(g.universe), max_size=len(g.universe)))
    blocks = {}
    for x, l in zip(g.universe, labels):
        blocks.setdefault(l, []).append(x)
    q = quotient(g, list(blocks.values()))
    assert is_hom(Hom(g, q, block_map(blocks.values())))


def test_iso_examples(k3, t2, k2):
    assert iso_check(k3, k3) is not None
    assert iso_check(t2, k2) is None
    rev = digraph(["x", "y", "z"], [("y", "x"), ("z", "y")], name="P2rev")
    h = iso_check(P2(), rev)
    assert h.mapping == {"x": "z", "y": "y", "z": "x"}


def test_iso_t2_k2_bruteforce(t2, k2):
    # oracle: both bijections
    for perm in itertools.permutations(k2.universe):
        m = dict(zip(t2.universe, perm))
        assert {tuple(m[x] for x in t) for t in t2.relations["E"]} != set(k2.relations["E"])


def test_iso_guard():
    with pytest.raises(SizeGuardError):
        iso_check(K(25), K(25))


@given(digraphs(4), st.permutations(range(4)))
@settings(max_examples=60, deadline=None)
def test_iso_symmetric_and_inverse(g, perm):
    names = {x: f"w{perm[i % 4]}_{i}" for i, x in enumerate(g.universe)}
    from csplab.structures import relabel
    h = relabel(g, names, "H")
    f = iso_check(g, h)
    r = iso_check(h, g)
    assert f is not None and r is not None
    assert is_hom(compose(f, Hom(h, g, {v: k for k, v in f.mapping.items()})))


def test_is_hom_examples(k3, k2, p2, t2):
    assert is_hom(identity(k3))
    assert is_hom(Hom(k2, k2, {"0": "1", "1": "0"}))
    assert not is_hom(Hom(p2, t2, {"x": "s", "y": "t", "z": "t"}))
    with pytest.raises(ValueError):
        is_hom(Hom(p2, t2, {"x": "s"}))


@given(digraphs(3), digraphs(2), digraphs(2))
@settings(max_examples=40, deadline=None)
def test_hom_composition(b, a, c):
    for f in brute_homs(b, a)[:3]:
        for g in brute_homs(a, c)[:3]:
            assert is_hom(compose(Hom(b, a, f), Hom(a, c, g)))


def test_single_vertex_structure():
    assert validate(single_vertex()) == []
