"""XY-compatible edges and paths for a disjoint pair of hereditary saturated sets.

A path is XY-compatible when it starts outside X | Y, ends on its first entry
into X | Y, and never uses an edge from a breaking vertex of X into X (or from
a breaking vertex of Y into Y). Counting these paths per start vertex is the
core test of the decision procedure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import kernels
from .errors import InvalidPairError
from .graph import OMEGA, Graph, add_mult
from .lattice import _require_hsat, breaking_mask


class _Top:
    """Absorbing target vertex of a reduced graph; stands for all of X | Y."""

    def __repr__(self):
        return "TOP"

    def __str__(self):
        return "⊤"


TOP = _Top()


def _pair_masks(g: Graph, X, Y, nontrivial=False) -> tuple[int, int]:
    x, y = g.mask(X), g.mask(Y)
    _require_hsat(g, x, "X")
    _require_hsat(g, y, "Y")
    if x & y:
        raise InvalidPairError("X and Y are not disjoint")
    if nontrivial:
        full = g.full_mask
        for label, m in (("X", x), ("Y", y)):
            if m in (0, full):
                raise InvalidPairError(f"{label} must be nonempty and proper")
    return x, y


def _bundle_ok(bit, x, y, bx, by, s, t):
    return not ((bx >> bit[s] & 1 and x >> bit[t] & 1) or
                (by >> bit[s] & 1 and y >> bit[t] & 1))


def _bits_of(g: Graph):
    return {v: i for i, v in enumerate(g.sorted_names)}


def is_compatible_bundle(g: Graph, X: Iterable[str], Y: Iterable[str], bundle) -> bool:
    """False iff the bundle runs from a breaking vertex of X into X, or of Y into Y."""
    x, y = _pair_masks(g, X, Y)
    s, t = bundle[0], bundle[1]
    if g.multiplicity(s, t) == 0:
        raise InvalidPairError(f"{s}->{t} is not a bundle of the graph")
    return _bundle_ok(_bits_of(g), x, y, breaking_mask(g, x), breaking_mask(g, y), s, t)


@dataclass(frozen=True)
class ReducedGraph:
    """Compatible bundles out of E^0 minus (X | Y); targets inside X | Y are merged into TOP."""

    vertices: tuple[str, ...]
    bundles: dict = field(default_factory=dict)  # (source, target-or-TOP) -> multiplicity

    def successors(self, v):
        return {t: m for (s, t), m in self.bundles.items() if s == v}


def build_reduced(g: Graph, X: Iterable[str], Y: Iterable[str]) -> ReducedGraph:
    x, y = _pair_masks(g, X, Y)
    bx, by = breaking_mask(g, x), breaking_mask(g, y)
    bit = _bits_of(g)
    inside = x | y
    outside = [v for v in g.vertices if not inside >> bit[v] & 1]
    bundles = {}
    for s, t, m in g.edge_bundles():
        if inside >> bit[s] & 1 or not _bundle_ok(bit, x, y, bx, by, s, t):
            continue
        key = (s, TOP if inside >> bit[t] & 1 else t)
        bundles[key] = add_mult(bundles.get(key, 0), m)
    return ReducedGraph(tuple(outside), bundles)


def count_compatible_paths(g: Graph, X: Iterable[str], Y: Iterable[str], v: str):
    """Number of XY-compatible paths starting at ``v``: an int, or OMEGA if infinite."""
    x, y = _pair_masks(g, X, Y)
    if (x | y) & g.mask([v]):
        raise InvalidPairError(f"{v!r} lies inside X or Y")
    n, flat = g.packed()
    c = kernels.count_paths(n, flat, x, y, g.sorted_names.index(v))
    return OMEGA if c < 0 else c


def condition_holds(g: Graph, X: Iterable[str], Y: Iterable[str]) -> bool:
    """Every vertex outside X | Y starts at least one and finitely many compatible paths."""
    x, y = _pair_masks(g, X, Y, nontrivial=True)
    n, flat = g.packed()
    return kernels.condition_holds(n, flat, x, y)


def row_finite_conditions(g: Graph, X: Iterable[str], Y: Iterable[str]) -> bool:
    """Every vertex reaches X | Y, and the subgraph on the remaining vertices is acyclic.

    Only a valid decomposability test when the graph has no infinite emitters.
    """
    x, y = _pair_masks(g, X, Y, nontrivial=True)
    n, flat = g.packed()
    return kernels.row_finite_holds(n, flat, x, y)
