from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import e1, e2, e3, e_inf, graphs, line, naive_breaking, naive_hsat
from lpadecomp.compat import condition_holds
from lpadecomp.decision import Verdict, all_witness_pairs, decide, decide_row_finite
from lpadecomp.errors import LimitExceeded, UnsupportedGraphError
from lpadecomp.graph import OMEGA, build_graph, disjoint_union, relabel
from lpadecomp.lattice import enumerate_hsat


def test_verdict_invariant():
    with pytest.raises(ValueError):
        Verdict(True)
    with pytest.raises(ValueError):
        Verdict(False, (("x",), ("y",)))
    assert Verdict(True, (("x",), ("y",))).to_json() == {
        "decomposable": True, "witness": {"X": ["x"], "Y": ["y"]}}
    assert Verdict(False).to_json() == {"decomposable": False, "witness": None}
    assert Verdict(False).kind == "Indecomposable"


class TestDecide:
    def test_reference_graphs(self):
        assert decide(e_inf()) == Verdict(False)
        assert decide(e2()) == Verdict(False)
        assert decide(e1()) == Verdict(True, (("x",), ("y",)))
        for n in (1, 2, 3):
            assert decide(e3(n)) == Verdict(True, (("x",), ("y",)))

    def test_single_loop(self):
        assert not decide(build_graph(["v"], [("v", "v", 1)])).decomposable

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            decide(line(5), limit=4)

    def test_first_witness_order(self):
        # three isolated sinks: a pair of singletons strands the third sink (no paths),
        # so only pairs covering everything pass, X being the earlier set in hsat order
        g = build_graph(["c", "b", "a"])
        assert decide(g).witness == (("a",), ("b", "c"))
        assert all_witness_pairs(g) == [(("a",), ("b", "c")), (("b",), ("a", "c")), (("c",), ("a", "b"))]

    def test_all_witness_pairs(self):
        assert all_witness_pairs(e3(2)) == [(("x",), ("y",))]
        assert all_witness_pairs(e_inf()) == []
        g = disjoint_union(relabel(e1(), {"w": "a", "x": "b", "y": "c"}), e1())
        assert (("a", "b", "c"), ("w", "x", "y")) in all_witness_pairs(g)


class TestRowFinite:
    def test_examples(self):
        assert decide_row_finite(e1()) == Verdict(True, (("x",), ("y",)))
        assert decide_row_finite(line(2)) == Verdict(False)
        with pytest.raises(UnsupportedGraphError):
            decide_row_finite(e2())

    def test_non_strict_is_unsound_on_omega(self):
        assert decide_row_finite(e2(), strict=False).decomposable
        assert not decide(e2()).decomposable

    @settings(max_examples=150, deadline=None)
    @given(graphs(6, mults=(1, 2)))
    def test_agrees_with_decide(self, g):
        assert decide(g) == decide_row_finite(g)


@settings(max_examples=120, deadline=None)
@given(graphs(5))
def test_witnesses_are_valid(g):
    hsat = [set(h) for h in naive_hsat(g)]
    for x, y in all_witness_pairs(g):
        assert set(x) in hsat and set(y) in hsat
        assert x and y and len(x) < len(g) and len(y) < len(g)
        assert not set(x) & set(y)
        assert condition_holds(g, x, y)
        assert not naive_breaking(g, x) & naive_breaking(g, y)
    verdict = decide(g)
    pairs = all_witness_pairs(g)
    assert verdict.decomposable == bool(pairs)
    if pairs:
        assert verdict.witness == pairs[0]


@settings(max_examples=80, deadline=None)
@given(graphs(4), graphs(3))
def test_disjoint_union_is_decomposable(g1, g2):
    if not len(g1) or not len(g2):
        return
    g2 = relabel(g2, {v: "u" + v for v in g2.vertices})
    assert decide(disjoint_union(g1, g2)).decomposable


@settings(max_examples=80, deadline=None)
@given(graphs(5, min_vertices=1))
def test_directly_connected_is_indecomposable(g):
    if all(g.reaches(v, w) for v in g.vertices for w in g.vertices):
        assert not decide(g).decomposable
        # only trivial hereditary saturated sets remain
        assert enumerate_hsat(g) == [(), tuple(sorted(g.vertices))]


def test_omega_graph_verdict_examples():
    # the compatible edges out of w are the single edge into y: one path, so decomposable
    g = build_graph(["w", "x", "y"], [("w", "x", OMEGA), ("w", "y", 1)])
    assert decide(g) == Verdict(True, (("x",), ("y",)))
