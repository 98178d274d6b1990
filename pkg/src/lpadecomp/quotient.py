"""Quotient graphs by admissible pairs and the recursive indecomposable decomposition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .decision import all_witness_pairs, decide
from .errors import GraphError
from .graph import Graph, canonical_form, graph_to_json
from .lattice import VertexSet, admissible_pair, breaking_vertices

PRIME_SUFFIX = "_prime"


def quotient_graph(g: Graph, H: Iterable[str], S: Iterable[str] = ()) -> Graph:
    """Graph whose algebra is L(g) modulo the graded ideal of the pair (H, S).

    Vertices of H disappear along with every bundle into H. Each breaking
    vertex v of H not in S gains a sink twin ``v_prime`` receiving a copy of
    every bundle into v.
    """
    pair = admissible_pair(g, H, S)
    h, s = set(pair.H), set(pair.S)
    primed = [v for v in g.vertices if v in set(breaking_vertices(g, pair.H)) - s]
    names = [v for v in g.vertices if v not in h]
    twin = {}
    for v in primed:
        twin[v] = v + PRIME_SUFFIX
        if twin[v] in g:
            raise GraphError(f"cannot add {twin[v]!r}: a vertex with that name already exists")
    bundles = [(a, b, m) for a, b, m in g.edge_bundles() if b not in h]
    bundles += [(a, twin[b], m) for a, b, m in g.edge_bundles() if b in twin]
    return Graph(names + [twin[v] for v in primed], bundles)


@dataclass
class DecompositionTree:
    graph: Graph
    witness: tuple[VertexSet, VertexSet] | None = None
    children: list[DecompositionTree] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.witness is None

    def leaves(self) -> list[Graph]:
        if self.is_leaf:
            return [self.graph]
        return [leaf for child in self.children for leaf in child.leaves()]

    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(c.depth() for c in self.children)

    def to_json(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = {"X": list(self.witness[0]), "Y": list(self.witness[1])}
        return {
            "graph": graph_to_json(self.graph),
            "witness": witness,
            "children": [c.to_json() for c in self.children],
        }


def split(g: Graph, X: Iterable[str], Y: Iterable[str]) -> tuple[Graph, Graph]:
    """The two summand graphs for a witness: quotients by (X, B_X) and by (Y, B_Y)."""
    X, Y = list(X), list(Y)
    return (quotient_graph(g, X, breaking_vertices(g, X)),
            quotient_graph(g, Y, breaking_vertices(g, Y)))


def decompose(g: Graph, limit: int | None = None, root_witness=None) -> DecompositionTree:
    """Split along the first witness until every piece is indecomposable.

    ``root_witness`` overrides the witness used at the top level only.
    """
    if root_witness is None:
        verdict = decide(g, limit)
        if not verdict.decomposable:
            return DecompositionTree(g)
        root_witness = verdict.witness
    X, Y = tuple(root_witness[0]), tuple(root_witness[1])
    left, right = split(g, X, Y)
    return DecompositionTree(g, (X, Y), [decompose(left, limit), decompose(right, limit)])


def components(g: Graph, limit: int | None = None) -> Counter:
    """Multiset of canonical codes of the indecomposable pieces."""
    return Counter(canonical_form(leaf) for leaf in decompose(g, limit).leaves())


def components_per_witness(g: Graph, limit: int | None = None) -> list[Counter]:
    """Component multisets obtained by splitting the root along each witness in turn."""
    return [Counter(canonical_form(leaf) for leaf in decompose(g, limit, w).leaves())
            for w in all_witness_pairs(g, limit)]
