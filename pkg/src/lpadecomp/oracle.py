"""Exact arithmetic in L_K(E) for finite acyclic graphs with finite multiplicities.

Such an algebra is finite dimensional with basis p q* where p and q are paths
ending at the same sink. Scalars are :class:`fractions.Fraction`. The module is
deliberately independent of the combinatorial decision code: it only knows
the graph, the Cuntz-Krieger relations and linear algebra.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import GraphError, UnsupportedGraphError
from .graph import Graph, is_acyclic

Edge = tuple  # (source, target, index) with 1-based index inside the bundle


class Monomial(NamedTuple):
    """p q* with p, q paths (tuples of edges) both ending at ``anchor``."""

    p: tuple
    q: tuple
    anchor: str

    @property
    def left(self) -> str:
        return self.p[0][0] if self.p else self.anchor

    @property
    def right(self) -> str:
        return self.q[0][0] if self.q else self.anchor

    def __str__(self):
        def word(path):
            return "".join(f"e[{s}>{t}#{i}]" for s, t, i in path)
        p = word(self.p) or self.anchor
        q = word(self.q)
        return p + (f"({q})*" if q else "")


def monomial_product(a: Monomial, b: Monomial) -> Monomial | None:
    """(p1 q1*)(p2 q2*) via q1* p2: nonzero only when one of q1, p2 extends the other."""
    q1, p2 = a.q, b.p
    if a.right != b.left:
        return None
    if len(q1) <= len(p2):
        if p2[:len(q1)] != q1:
            return None
        # an empty q1 only matches p2 starting at a's anchor, checked via right/left above
        return Monomial(a.p + p2[len(q1):], b.q, b.anchor)
    if q1[:len(p2)] != p2:
        return None
    return Monomial(a.p, b.q + q1[len(p2):], a.anchor)


class FiniteLPA:
    """The Leavitt path algebra of a finite acyclic graph, with an explicit monomial basis."""

    def __init__(self, g: Graph):
        if g.has_omega():
            raise UnsupportedGraphError("oracle needs finite multiplicities")
        if not is_acyclic(g):
            raise UnsupportedGraphError("oracle needs an acyclic graph")
        self.graph = g
        self._edges_from = {
            v: [(v, t, i) for t, m in g.out_bundles(v).items() for i in range(1, m + 1)]
            for v in g.vertices
        }
        self._sinks = set(g.sinks())
        ending = {}

        def paths_to(w):
            if w not in ending:
                found = [()]
                for u, m in g.in_bundles(w).items():
                    for i in range(1, m + 1):
                        found += [p + ((u, w, i),) for p in paths_to(u)]
                ending[w] = found
            return ending[w]

        self.basis = [Monomial(p, q, w)
                      for w in g.vertices if w in self._sinks
                      for p in paths_to(w) for q in paths_to(w)]
        self.index = {m: k for k, m in enumerate(self.basis)}
        self._by_right = defaultdict(list)
        self._by_left = defaultdict(list)
        for m in self.basis:
            self._by_right[m.right].append(m)
            self._by_left[m.left].append(m)
        self._normal = lru_cache(maxsize=None)(self._normal_uncached)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    # -- elements -------------------------------------------------------------

    def _normal_uncached(self, m: Monomial) -> tuple:
        if m.anchor in self._sinks:
            return ((m, 1),)
        out = []
        for e in self._edges_from[m.anchor]:
            out.extend(self._normal(Monomial(m.p + (e,), m.q + (e,), e[1])))
        return tuple(out)

    def element(self, terms) -> Element:
        """Element from ``{Monomial: coefficient}``; monomials are rewritten to normal form."""
        out = defaultdict(Fraction)
        for m, c in dict(terms).items():
            for mm, k in self._normal(Monomial(tuple(m.p), tuple(m.q), m.anchor)):
                out[mm] += Fraction(c) * k
        return Element(self, out)

    def vertex(self, v: str) -> Element:
        if v not in self.graph:
            raise GraphError(f"unknown vertex {v!r}")
        return self.element({Monomial((), (), v): 1})

    def _check_edge(self, e):
        s, t, i = e
        m = self.graph.multiplicity(s, t)
        if not 1 <= i <= (m or 0):
            raise GraphError(f"no edge {e!r}")
        return (s, t, i)

    def edge(self, e: Edge) -> Element:
        e = self._check_edge(e)
        return self.element({Monomial((e,), (), e[1]): 1})

    def ghost(self, e: Edge) -> Element:
        e = self._check_edge(e)
        return self.element({Monomial((), (e,), e[1]): 1})

    def one(self) -> Element:
        total = self.zero()
        for v in self.graph.vertices:
            total = total + self.vertex(v)
        return total

    def zero(self) -> Element:
        return Element(self, {})

    def basis_element(self, k: int) -> Element:
        return Element(self, {self.basis[k]: Fraction(1)})

    def multiply(self, a: Element, b: Element) -> Element:
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to different algebras")
        out = defaultdict(Fraction)
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = monomial_product(m1, m2)
                if m is None:
                    continue
                for mm, k in self._normal(m):
                    out[mm] += c1 * c2 * k
        return Element(self, out)

    def to_vector(self, a: Element) -> dict:
        return {self.index[m]: c for m, c in a.terms.items()}

    def from_vector(self, vec: dict) -> Element:
        return Element(self, {self.basis[k]: c for k, c in vec.items()})

    # -- ideals ---------------------------------------------------------------

    def ideal_span(self, generators: Iterable) -> Subspace:
        """Two-sided ideal generated by vertices (names) or Elements, as a subspace.

        Products of every spanning element with every basis monomial, on either
        side, are added until nothing new appears.
        """
        space = Subspace(self.dimension)
        frontier = []
        for gen in generators:
            elem = self.vertex(gen) if isinstance(gen, str) else gen
            if space.add(self.to_vector(elem)):
                frontier.append(elem)
        while frontier:
            fresh = []
            for elem in frontier:
                lefts = {m for t in elem.terms for m in self._by_right[t.left]}
                rights = {m for t in elem.terms for m in self._by_left[t.right]}
                products = [self.multiply(Element(self, {m: Fraction(1)}), elem) for m in lefts]
                products += [self.multiply(elem, Element(self, {m: Fraction(1)})) for m in rights]
                for prod in products:
                    if prod.terms and space.add(self.to_vector(prod)):
                        fresh.append(prod)
            frontier = fresh
        return space


class Element:
    """Finite rational combination of normal-form monomials of one algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FiniteLPA, terms):
        self.algebra = algebra
        self.terms = {m: Fraction(c) for m, c in dict(terms).items() if c}

    def _same(self, other):
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.algebra, out)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        return Element(self.algebra, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, scalar):
        return Element(self.algebra, {m: scalar * c for m, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, Element) and other.algebra is self.algebra
                and other.terms == self.terms)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = sorted((self.algebra.index[m], c, m) for m, c in self.terms.items())
        return " + ".join(f"{c}*{m}" for _, c, m in parts)


class Subspace:
    """Row-echelon basis of a subspace of Q^dim; vectors are ``{column: Fraction}``."""

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, dict] = {}  # pivot column -> row with 1 at the pivot

    def __len__(self):
        return len(self._rows)

    def reduce(self, vec: dict) -> dict:
        vec = {k: Fraction(v) for k, v in vec.items() if v}
        done = {}
        while vec:
            col = min(vec)
            row = self._rows.get(col)
            if row is None:
                done[col] = vec.pop(col)
                continue
            f = vec[col]
            for k, val in row.items():
                nv = vec.get(k, 0) - f * val
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return done

    def add(self, vec: dict) -> bool:
        """Insert a vector; True iff it enlarged the span."""
        rest = self.reduce(vec)
        if not rest:
            return False
        col = min(rest)
        lead = rest[col]
        self._rows[col] = {k: v / lead for k, v in rest.items()}
        return True

    def __contains__(self, vec) -> bool:
        return not self.reduce(vec)

    def rref(self) -> list[dict]:
        """Reduced row echelon basis, ordered by pivot column."""
        rows = {c: dict(r) for c, r in self._rows.items()}
        for c in sorted(rows, reverse=True):
            for other in rows:
                if other == c:
                    continue
                f = rows[other].get(c)
                if f:
                    for k, val in rows[c].items():
                        nv = rows[other].get(k, 0) - f * val
                        if nv:
                            rows[other][k] = nv
                        else:
                            rows[other].pop(k, None)
        return [rows[c] for c in sorted(rows)]

    def __add__(self, other: Subspace) -> Subspace:
        out = Subspace(self.dim)
        for space in (self, other):
            for row in space._rows.values():
                out.add(row)
        return out

    def __le__(self, other: Subspace) -> bool:
        return all(row in other for row in self._rows.values())

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.rref() == other.rref()


@dataclass(frozen=True)
class DirectSumReport:
    dim_total: int
    dim_IX: int
    dim_IY: int
    dim_intersection: int
    is_direct: bool
    spans_all: bool

    def to_json(self) -> dict:
        return {
            "dim_total": self.dim_total,
            "dim_IX": self.dim_IX,
            "dim_IY": self.dim_IY,
            "dim_intersection": self.dim_intersection,
            "is_direct": self.is_direct,
            "spans_all": self.spans_all,
        }


def oracle_basis(g: Graph) -> list[Monomial]:
    return list(FiniteLPA(g).basis)


def dimension(g: Graph) -> int:
    return FiniteLPA(g).dimension


def multiply(g: Graph, a: Element, b: Element) -> Element:
    if a.algebra.graph != g or b.algebra.graph != g:
        raise ValueError("elements do not belong to the algebra of this graph")
    return a.algebra.multiply(a, b)


def ideal_span(g: Graph, generator_vertices: Iterable[str], algebra: FiniteLPA | None = None) -> Subspace:
    algebra = algebra or FiniteLPA(g)
    names = list(generator_vertices)
    for v in names:
        if v not in g:
            raise GraphError(f"unknown vertex {v!r}")
    return algebra.ideal_span(names)


def verify_direct_sum(g: Graph, X: Iterable[str], Y: Iterable[str],
                      algebra: FiniteLPA | None = None) -> DirectSumReport:
    """Dimensions of the ideals generated by X and by Y, their intersection, and whether they fill L(g)."""
    algebra = algebra or FiniteLPA(g)
    ix = ideal_span(g, X, algebra)
    iy = ideal_span(g, Y, algebra)
    both = ix + iy
    inter = len(ix) + len(iy) - len(both)
    direct = inter == 0
    return DirectSumReport(algebra.dimension, len(ix), len(iy), inter, direct,
                           direct and len(ix) + len(iy) == algebra.dimension)
