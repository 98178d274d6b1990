from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import e1, e3, e_inf, graphs, line
from lpadecomp.errors import GraphError, LimitExceeded, ParseError
from lpadecomp.graph import (
    OMEGA, Graph, VertexKind, add_mult, build_graph, canonical_form, disjoint_union, find_cycles,
    format_graph, graph_from_json, graph_to_json, has_exit, is_acyclic, parse_graph,
    parse_multiplicity, reaches, read_graph, relabel, restricted_subgraph, to_dot, vertex_kind,
)


class TestOmega:
    def test_order_and_absorption(self):
        assert OMEGA > 10**12 and not OMEGA < 3
        assert OMEGA + 1 is OMEGA and 1 + OMEGA is OMEGA
        assert add_mult(2, 3) == 5 and add_mult(0, OMEGA) is OMEGA

    def test_parse(self):
        assert parse_multiplicity("inf") is OMEGA
        assert parse_multiplicity("7") == 7
        for bad in ("0", "-2", "x", "1.5"):
            with pytest.raises(GraphError):
                parse_multiplicity(bad)

    def test_singleton_survives_pickle(self):
        import pickle
        assert pickle.loads(pickle.dumps(OMEGA)) is OMEGA


class TestBuild:
    def test_infinite_edges_graph(self):
        g = e_inf()
        assert vertex_kind(g, "w") is VertexKind.INFINITE_EMITTER
        assert vertex_kind(g, "x") is VertexKind.SINK

    def test_single_vertex(self):
        g = build_graph(["v"], [])
        assert g.vertex_kind("v") is VertexKind.SINK and g.sinks() == ["v"]

    def test_line_first_vertex_regular(self):
        assert line(2).vertex_kind("v0") is VertexKind.REGULAR

    @pytest.mark.parametrize("verts,bundles", [
        (["w", "x"], [("w", "x", 1), ("w", "x", 2)]),
        (["w", "w"], []),
        (["w"], [("w", "x", 1)]),
        (["w", "x"], [("w", "x", 0)]),
        (["a b"], []),
        ([""], []),
    ])
    def test_invalid(self, verts, bundles):
        with pytest.raises(GraphError):
            build_graph(verts, bundles)

    def test_unknown_vertex_queries(self):
        g = e1()
        with pytest.raises(GraphError):
            vertex_kind(g, "q")
        with pytest.raises(GraphError):
            reaches(g, "w", "q")
        with pytest.raises(GraphError):
            restricted_subgraph(g, ["w", "q"])

    def test_declaration_order_kept(self):
        g = build_graph(["z", "a"], [("z", "a", 2)])
        assert g.vertices == ("z", "a")
        assert g.sorted_names == ("a", "z")
        assert g.packed() == (2, (0, 0, 2, 0))


class TestReach:
    def test_examples(self):
        g = e1()
        assert reaches(g, "w", "x")
        assert not reaches(g, "x", "y")
        assert all(reaches(g, v, v) for v in g.vertices)

    @settings(max_examples=60, deadline=None)
    @given(graphs(5))
    def test_matches_networkx(self, g):
        dg = g.to_networkx()
        for v in g.vertices:
            assert g.reachable_from(v) == nx.descendants(dg, v) | {v}

    @settings(max_examples=60, deadline=None)
    @given(graphs(5), st.data())
    def test_reflexive_transitive(self, g, data):
        vs = list(g.vertices)
        if not vs:
            return
        u, v, w = (data.draw(st.sampled_from(vs)) for _ in range(3))
        assert reaches(g, u, u)
        if reaches(g, u, v) and reaches(g, v, w):
            assert reaches(g, u, w)


class TestSubgraph:
    def test_examples(self):
        assert restricted_subgraph(e1(), ["w"]) == build_graph(["w"], [])
        assert restricted_subgraph(e3(2), ["w", "x"]) == build_graph(["w", "x"], [("w", "x", OMEGA)])
        g = e3(3)
        assert restricted_subgraph(g, g.vertices) == g

    @settings(max_examples=60, deadline=None)
    @given(graphs(5), st.data())
    def test_nested_restriction(self, g, data):
        vs = list(g.vertices)
        v1 = set(data.draw(st.lists(st.sampled_from(vs), unique=True))) if vs else set()
        v2 = set(data.draw(st.lists(st.sampled_from(vs), unique=True))) if vs else set()
        both = v1 & v2
        assert restricted_subgraph(g, both) == restricted_subgraph(restricted_subgraph(g, v1), both)


class TestUnion:
    def test_examples(self):
        a, b = build_graph(["a"]), build_graph(["b"])
        assert disjoint_union(a, b) == build_graph(["a", "b"])
        loop = build_graph(["v"], [("v", "v", 1)])
        u = disjoint_union(e_inf(), loop)
        assert len(u) == 3 and u.multiplicity("v", "v") == 1
        assert disjoint_union(e1(), build_graph([])) == e1()

    def test_collision(self):
        with pytest.raises(GraphError):
            disjoint_union(e1(), e1())


class TestCycles:
    def test_single_loop(self):
        g = build_graph(["v"], [("v", "v", 1)])
        (c,) = find_cycles(g)
        assert c == ("v",) and not has_exit(g, c)

    def test_toeplitz(self):
        g = build_graph(["v", "s"], [("v", "v", 1), ("v", "s", 1)])
        (c,) = find_cycles(g)
        assert has_exit(g, c)

    def test_line_acyclic(self):
        assert find_cycles(line(4)) == [] and is_acyclic(line(4))

    def test_parallel_loop_is_exit(self):
        # the second loop edge leaves the cycle formed by the first
        g = build_graph(["v"], [("v", "v", 2)])
        assert has_exit(g, ("v",))

    def test_not_a_cycle(self):
        with pytest.raises(GraphError):
            has_exit(line(2), ("v0", "v1"))


def _nx_iso(g, h):
    em = lambda a, b: a["mult"] == b["mult"]  # noqa: E731
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx(), edge_match=em)


class TestCanonical:
    def test_examples(self):
        assert canonical_form(line(3, "a")) == canonical_form(line(3, "b"))
        cyc = build_graph(["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
        assert canonical_form(line(3)) != canonical_form(cyc)
        w2 = build_graph(["w", "y"], [("w", "y", 2)])
        w3 = build_graph(["w", "y"], [("w", "y", 3)])
        assert canonical_form(w2) != canonical_form(w3)

    def test_omega_is_own_label(self):
        a = build_graph(["w", "y"], [("w", "y", OMEGA)])
        b = build_graph(["w", "y"], [("w", "y", 10**6)])
        assert canonical_form(a) != canonical_form(b)

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            canonical_form(line(13))
        assert canonical_form(line(13), limit=13)

    @settings(max_examples=80, deadline=None)
    @given(graphs(6), st.randoms(use_true_random=False))
    def test_renaming_invariance(self, g, rnd):
        names = list(g.vertices)
        fresh = [f"u{i}" for i in range(len(names))]
        rnd.shuffle(fresh)
        h = relabel(g, dict(zip(names, fresh)))
        assert canonical_form(h) == canonical_form(g)

    def test_agrees_with_networkx(self):
        rnd = random.Random(5)
        pool = []
        for _ in range(150):
            n = rnd.randint(1, 5)
            mat = [[rnd.choice([0, 0, 0, 1, 2]) for _ in range(n)] for _ in range(n)]
            names = [f"v{i}" for i in range(n)]
            pool.append(build_graph(names, [(names[i], names[j], m) for i in range(n)
                                            for j in range(n) if (m := mat[i][j])]))
        for i in range(len(pool)):
            for j in range(i + 1, min(len(pool), i + 25)):
                g, h = pool[i], pool[j]
                if len(g) != len(h):
                    continue
                assert (canonical_form(g) == canonical_form(h)) == _nx_iso(g, h)


class TestText:
    SAMPLE = "# E_3\nvertex w\nvertex x\n\nvertex y\nedge w x inf\nedge w y 2\n"

    def test_roundtrip(self):
        g = parse_graph(self.SAMPLE)
        assert g == e3(2)
        assert parse_graph(format_graph(g)) == g

    @pytest.mark.parametrize("text,line_no", [
        ("vertex a\nedge a b 1\n", 2),
        ("vertex a\nvertex a\n", 2),
        ("vertex a\nedge a a 0\n", 2),
        ("vertex a\n\nbogus a\n", 3),
        ("vertex a\nedge a a 1\nedge a a 2\n", 3),
        ("vertex\n", 1),
        ("vertex a\nedge a a\n", 2),
    ])
    def test_errors_carry_line(self, text, line_no):
        with pytest.raises(ParseError) as info:
            parse_graph(text)
        assert info.value.line == line_no
        assert f"line {line_no}" in str(info.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            read_graph(tmp_path / "nope.graph")

    @settings(max_examples=60, deadline=None)
    @given(graphs(5))
    def test_json_and_text_roundtrip(self, g):
        assert graph_from_json(graph_to_json(g)) == g
        assert parse_graph(format_graph(g)) == g

    def test_dot(self):
        dot = to_dot(e3(2))
        assert dot.startswith("digraph") and '"w" -> "x"' in dot


def test_graph_is_immutable():
    g = e1()
    g.bundles[("x", "y")] = 3
    assert g.multiplicity("x", "y") == 0
    with pytest.raises(AttributeError):
        g.extra = 1
    assert isinstance(g, Graph)
