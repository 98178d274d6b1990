"""Name the algebra of small standard graph shapes (matrix, Laurent, Leavitt families)."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .graph import OMEGA, Graph, find_cycles, has_exit
from .quotient import decompose


@dataclass(frozen=True)
class AlgebraDescriptor:
    family: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    def __str__(self):
        p = self.params
        return {
            "MatrixAlgebra": lambda: f"M_{p.get('size')}(K)",
            "LaurentPolynomials": lambda: "K[x,x^-1]",
            "MatrixOverLaurent": lambda: f"M_{p.get('size')}(K[x,x^-1])",
            "LeavittAlgebra": lambda: f"L_K(1,{p.get('n')})",
            "MatrixOverLeavitt": lambda: f"M_{p.get('size')}(L_K(1,{p.get('n')}))",
        }.get(self.family, lambda: "unknown")()

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items()))))


def MatrixAlgebra(size):
    return AlgebraDescriptor("MatrixAlgebra", {"size": size})


def LaurentPolynomials():
    return AlgebraDescriptor("LaurentPolynomials")


def MatrixOverLaurent(size):
    return AlgebraDescriptor("MatrixOverLaurent", {"size": size})


def LeavittAlgebra(n):
    return AlgebraDescriptor("LeavittAlgebra", {"n": n})


def MatrixOverLeavitt(size, n):
    return AlgebraDescriptor("MatrixOverLeavitt", {"size": size, "n": n})


UNKNOWN = AlgebraDescriptor("Unknown")


def is_connected(g: Graph) -> bool:
    """One weak component (edge directions ignored)."""
    return len(g) <= 1 or nx.is_weakly_connected(g.to_networkx())


def is_directly_connected(g: Graph) -> bool:
    """Every vertex reaches every vertex."""
    return len(g) <= 1 or nx.is_strongly_connected(g.to_networkx())


def _line_order(g: Graph, loops_at_end: bool):
    """Vertices along a directed path v1 -> ... -> vk using single edges, or None.

    With ``loops_at_end`` the last vertex may carry loops and nothing else.
    """
    starts = [v for v in g.vertices if not any(s != v for s in g.in_bundles(v))]
    if len(starts) != 1:
        return None
    order = [starts[0]]
    seen = {starts[0]}
    while True:
        out = {t: m for t, m in g.out_bundles(order[-1]).items() if t != order[-1]}
        if not out:
            break
        if len(out) != 1:
            return None
        (t, m), = out.items()
        if m != 1 or t in seen:
            return None
        order.append(t)
        seen.add(t)
    if len(order) != len(g):
        return None
    for v in order[:-1]:
        if g.multiplicity(v, v):
            return None
    if not loops_at_end and g.multiplicity(order[-1], order[-1]):
        return None
    # every vertex except the first has exactly one incoming non-loop edge
    for v in order[1:]:
        if len([s for s in g.in_bundles(v) if s != v]) != 1:
            return None
    return order


def recognize(g: Graph) -> AlgebraDescriptor:
    n = len(g)
    if n == 0:
        return UNKNOWN
    if g.has_omega():
        return UNKNOWN
    order = _line_order(g, loops_at_end=False)
    if order is not None:
        return MatrixAlgebra(n)
    if n == 1:
        (v,) = g.vertices
        loops = g.multiplicity(v, v)
        if loops == 1:
            return LaurentPolynomials()
        if loops is not OMEGA and loops >= 2:
            return LeavittAlgebra(loops)
    cycles = find_cycles(g)
    if (len(cycles) == 1 and len(cycles[0]) == n and not has_exit(g, cycles[0])
            and len(g.bundles) == n):
        return MatrixOverLaurent(n)
    order = _line_order(g, loops_at_end=True)
    if order is not None:
        loops = g.multiplicity(order[-1], order[-1])
        if loops >= 2:
            return MatrixOverLeavitt(n, loops)
    if n == 2 and len(g.bundles) == 1:
        (s, t), m = next(iter(g.bundles.items()))
        if s != t:
            # the n parallel edges into a sink give (m + 1)^2 dimensions, checked by the oracle
            return MatrixAlgebra(m + 1)
    return UNKNOWN


def describe_decomposition(g: Graph, limit: int | None = None) -> list[AlgebraDescriptor]:
    return [recognize(leaf) for leaf in decompose(g, limit).leaves()]
