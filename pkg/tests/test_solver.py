import random

import pytest
from hypothesis import given, settings, strategies as st

from csplab.catalog import K2, K3, T2, single_arc, single_vertex, transitive_tournament
from csplab.polywidth import u_structure
from csplab.solver import ac_lists, hom_lists, lists_as_hom, naive_ac_lists, solve_hom
from csplab.structures import digraph, is_hom, make_structure
from oracles import brute_homs

TEMPLATES = [T2(), K2(), K3(), transitive_tournament(3)]


@st.composite
def digraphs(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    vs = [f"v{i}" for i in range(n)]
    arcs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=2 * n))
    return digraph(vs, arcs, name="B")


def test_ac_p2_t2_fails(p2, t2):
    assert ac_lists(p2, t2) is None


def test_ac_k3_k2_all_full(k3, k2):
    lists = ac_lists(k3, k2)
    assert lists == {x: frozenset({"0", "1"}) for x in k3.universe}


def test_ac_lone_vertex(t2):
    assert ac_lists(single_vertex(), t2) == {"v": frozenset({"s", "t"})}


def test_ac_loop_on_t2(t2):
    loop = digraph(["x"], [("x", "x")])
    assert ac_lists(loop, t2) is None


def test_ac_signature_mismatch(t2):
    other = make_structure([("F", 2)], ["a"], {})
    with pytest.raises(ValueError):
        ac_lists(other, t2)


def test_solve_examples(p2, t2, k3):
    assert solve_hom(p2, t2) is None
    h = solve_hom(single_arc(), t2)
    assert h.mapping == {"x": "s", "y": "t"}
    # oracle: exactly one of the 4 maps works
    assert brute_homs(single_arc(), t2) == [{"x": "s", "y": "t"}]
    assert is_hom(solve_hom(k3, k3))


def test_solve_deterministic(k3):
    g = digraph([f"v{i}" for i in range(6)], [(f"v{i}", f"v{(i + 1) % 6}") for i in range(6)])
    first = solve_hom(g, k3).mapping
    assert all(solve_hom(g, k3).mapping == first for _ in range(5))
    # value order is universe order: the first vertex takes the first value
    assert first["v0"] == "0"


def test_hom_lists_examples(k2, p2, t2):
    assert hom_lists(k2, k2) == {"0": frozenset("01"), "1": frozenset("01")}
    assert hom_lists(p2, t2) == {x: frozenset() for x in p2.universe}
    assert hom_lists(single_vertex(), t2) == {"v": frozenset(t2.universe)}


@pytest.mark.parametrize("a", TEMPLATES, ids=lambda a: a.name)
@given(b=digraphs())
@settings(max_examples=60, deadline=None)
def test_ac_matches_naive_fixpoint(a, b):
    assert ac_lists(b, a) == naive_ac_lists(b, a)


@pytest.mark.parametrize("a", TEMPLATES, ids=lambda a: a.name)
@given(b=digraphs())
@settings(max_examples=60, deadline=None)
def test_soundness_and_lists(a, b):
    homs = brute_homs(b, a)
    lists = ac_lists(b, a)
    found = solve_hom(b, a)
    assert (found is not None) == bool(homs)
    if lists is None:
        assert not homs
    else:
        assert is_hom(lists_as_hom(b, u_structure(a), lists))
    if found is not None:
        assert lists is not None
        assert all(found.mapping[x] in lists[x] for x in b.universe)
    hl = hom_lists(b, a)
    assert hl == {x: frozenset(m[x] for m in homs) for x in b.universe}
    if all(hl.values()):
        assert is_hom(lists_as_hom(b, u_structure(a), hl))


@given(b=digraphs(6))
@settings(max_examples=100, deadline=None)
def test_width1_templates_ac_decides(b):
    for a in (T2(), transitive_tournament(3)):
        if ac_lists(b, a) is not None:
            assert solve_hom(b, a) is not None


def test_ternary_relation():
    a = make_structure([("R", 3)], ["0", "1"], {"R": [("0", "0", "1"), ("0", "1", "0"), ("1", "0", "0")]})
    rng = random.Random(3)
    for _ in range(40):
        vs = [f"v{i}" for i in range(rng.randint(1, 5))]
        ts = [tuple(rng.choice(vs) for _ in range(3)) for _ in range(rng.randint(0, 4))]
        b = make_structure([("R", 3)], vs, {"R": ts})
        assert ac_lists(b, a) == naive_ac_lists(b, a)
        assert (solve_hom(b, a) is not None) == bool(brute_homs(b, a))
