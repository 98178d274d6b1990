"""Decomposability verdicts.

Candidate witnesses are unordered pairs of disjoint, nonempty, proper
hereditary saturated sets. They are tried in a fixed order: by |X| + |Y|,
then by the positions of X and Y in :func:`lattice.enumerate_hsat` (X is the
earlier of the two). The first passing pair is the reported witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import UnsupportedGraphError
from .graph import Graph
from .lattice import VertexSet, check_limit


@dataclass(frozen=True)
class Verdict:
    decomposable: bool
    witness: tuple[VertexSet, VertexSet] | None = None

    def __post_init__(self):
        if self.decomposable != (self.witness is not None):
            raise ValueError("a witness is present exactly when the verdict is decomposable")

    @property
    def kind(self) -> str:
        return "Decomposable" if self.decomposable else "Indecomposable"

    def to_json(self) -> dict:
        witness = None
        if self.witness is not None:
            witness = {"X": list(self.witness[0]), "Y": list(self.witness[1])}
        return {"decomposable": self.decomposable, "witness": witness}


def _scan(g: Graph, first_only: bool, row_finite: bool, limit):
    check_limit(g, limit)
    n, flat = g.packed()
    return [(g.names(x), g.names(y))
            for x, y in kernels.witness_pairs(n, flat, first_only, row_finite)]


def _verdict(pairs) -> Verdict:
    return Verdict(True, pairs[0]) if pairs else Verdict(False)


def decide(g: Graph, limit: int | None = None) -> Verdict:
    """Decomposable iff some pair leaves every outside vertex with 1..finitely many compatible paths."""
    return _verdict(_scan(g, True, False, limit))


def all_witness_pairs(g: Graph, limit: int | None = None) -> list[tuple[VertexSet, VertexSet]]:
    return _scan(g, False, False, limit)


def decide_row_finite(g: Graph, strict: bool = True, limit: int | None = None) -> Verdict:
    """The finite row-finite criterion: everything reaches X | Y and the rest is acyclic.

    With ``strict`` (the default) graphs with omega bundles are refused, since
    the criterion is unsound for them. ``strict=False`` applies it anyway.
    """
    if strict and g.has_omega():
        raise UnsupportedGraphError(
            "graph has infinite emitters; the row-finite criterion does not apply (use decide)")
    return _verdict(_scan(g, True, True, limit))
