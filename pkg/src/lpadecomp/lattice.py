"""Hereditary and saturated vertex sets, breaking vertices and admissible pairs.

Vertex sets cross the API as sorted tuples of names; internally they are
bitmasks over ``Graph.sorted_names``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from . import kernels
from .errors import InvalidPairError, LimitExceeded
from .graph import Graph

DEFAULT_MAX_VERTICES = 16

VertexSet = tuple  # sorted tuple of vertex names


def enumeration_limit() -> int:
    """Largest graph the exhaustive routines accept (env ``LPA_MAX_VERTICES`` overrides)."""
    raw = os.environ.get("LPA_MAX_VERTICES")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise LimitExceeded(f"LPA_MAX_VERTICES must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_VERTICES


def check_limit(g: Graph, limit: int | None = None) -> None:
    limit = enumeration_limit() if limit is None else limit
    if len(g) > limit:
        raise LimitExceeded(f"graph has {len(g)} vertices; the enumeration limit is {limit}")


def vset(g: Graph, names: Iterable[str]) -> VertexSet:
    """Validate names against ``g`` and return them as a sorted tuple."""
    return g.names(g.mask(names))


def _succ_masks(g: Graph) -> list[int]:
    n, flat = g.packed()
    return [sum(1 << j for j in range(n) if flat[i * n + j]) for i in range(n)]


def _regular_mask(g: Graph) -> int:
    n, flat = g.packed()
    out = 0
    for i in range(n):
        row = flat[i * n:(i + 1) * n]
        if any(row) and -1 not in row:
            out |= 1 << i
    return out


def is_hereditary(g: Graph, H: Iterable[str]) -> bool:
    h = g.mask(H)
    succ = _succ_masks(g)
    return all(not succ[i] & ~h for i in range(len(g)) if h >> i & 1)


def is_saturated(g: Graph, H: Iterable[str]) -> bool:
    h = g.mask(H)
    succ = _succ_masks(g)
    reg = _regular_mask(g)
    return all(succ[i] & ~h for i in range(len(g)) if reg >> i & 1 and not h >> i & 1)


def is_hsat(g: Graph, H: Iterable[str]) -> bool:
    H = list(H)
    return is_hereditary(g, H) and is_saturated(g, H)


def _closure_mask(g: Graph, a: int) -> int:
    succ = _succ_masks(g)
    reg = _regular_mask(g)
    h = a
    while True:
        grown = h
        for i in range(len(g)):
            if grown >> i & 1:
                grown |= succ[i]
        for i in range(len(g)):
            if reg >> i & 1 and not succ[i] & ~grown:
                grown |= 1 << i
        if grown == h:
            return h
        h = grown


def hsat_closure(g: Graph, A: Iterable[str]) -> VertexSet:
    """Smallest hereditary saturated superset of ``A``."""
    return g.names(_closure_mask(g, g.mask(A)))


def enumerate_hsat_masks(g: Graph, limit: int | None = None) -> list[int]:
    check_limit(g, limit)
    n, flat = g.packed()
    return kernels.hsat_sets(n, flat)


def enumerate_hsat(g: Graph, limit: int | None = None) -> list[VertexSet]:
    """Every hereditary saturated subset, ordered by size then lexicographically."""
    return [g.names(h) for h in enumerate_hsat_masks(g, limit)]


def _require_hsat(g: Graph, h: int, label: str = "H") -> None:
    names = g.names(h)
    if not is_hereditary(g, names):
        raise InvalidPairError(f"{label}={list(names)} is not hereditary")
    if not is_saturated(g, names):
        raise InvalidPairError(f"{label}={list(names)} is not saturated")


def breaking_mask(g: Graph, h: int) -> int:
    n, flat = g.packed()
    return kernels.breaking_mask(n, flat, h)


def breaking_vertices(g: Graph, H: Iterable[str]) -> VertexSet:
    """Infinite emitters outside H sending finitely many (but some) edges out of H."""
    h = g.mask(H)
    _require_hsat(g, h)
    return g.names(breaking_mask(g, h))


@dataclass(frozen=True)
class AdmissiblePair:
    H: VertexSet
    S: VertexSet

    def to_json(self) -> dict:
        return {"H": list(self.H), "S": list(self.S)}

    def __str__(self):
        return json.dumps(self.to_json(), sort_keys=True)


def admissible_pair(g: Graph, H: Iterable[str], S: Iterable[str] = ()) -> AdmissiblePair:
    h, s = g.mask(H), g.mask(S)
    _require_hsat(g, h)
    b = breaking_mask(g, h)
    if s & ~b:
        raise InvalidPairError(
            f"S contains {list(g.names(s & ~b))}, which are not breaking vertices of H")
    return AdmissiblePair(g.names(h), g.names(s))


def _check_pair(g: Graph, p: AdmissiblePair) -> tuple[int, int]:
    if not isinstance(p, AdmissiblePair):
        raise InvalidPairError(f"expected an AdmissiblePair, got {p!r}")
    admissible_pair(g, p.H, p.S)
    return g.mask(p.H), g.mask(p.S)


def admissible_pairs(g: Graph, limit: int | None = None) -> list[AdmissiblePair]:
    """The whole lattice: every hsat H with every subset of its breaking vertices."""
    out = []
    for h in enumerate_hsat_masks(g, limit):
        b = list(g.names(breaking_mask(g, h)))
        for r in range(len(b) + 1):
            for sub in combinations(b, r):
                out.append(AdmissiblePair(g.names(h), tuple(sub)))
    return out


def meet(g: Graph, p1: AdmissiblePair, p2: AdmissiblePair) -> AdmissiblePair:
    """Greatest lower bound: H = X & Y, S = (S_X | X) & (S_Y | Y) & B_H."""
    x, sx = _check_pair(g, p1)
    y, sy = _check_pair(g, p2)
    h = x & y
    s = (sx | x) & (sy | y) & breaking_mask(g, h)
    return AdmissiblePair(g.names(h), g.names(s))


def join(g: Graph, p1: AdmissiblePair, p2: AdmissiblePair) -> AdmissiblePair:
    """Least upper bound: saturate X | Y, also absorbing S-vertices whose edges all land inside."""
    x, sx = _check_pair(g, p1)
    y, sy = _check_pair(g, p2)
    succ = _succ_masks(g)
    absorbable = _regular_mask(g) | sx | sy
    h = x | y
    while True:
        grown = h
        for i in range(len(g)):
            if absorbable >> i & 1 and not succ[i] & ~h:
                grown |= 1 << i
        if grown == h:
            break
        h = grown
    s = (sx | sy) & breaking_mask(g, h)
    return AdmissiblePair(g.names(h), g.names(s))


def top(g: Graph) -> AdmissiblePair:
    return AdmissiblePair(tuple(g.sorted_names), ())


def bottom(g: Graph) -> AdmissiblePair:
    return AdmissiblePair((), ())


def is_top(g: Graph, p: AdmissiblePair) -> bool:
    return set(p.H) == set(g.vertices) and not p.S


def is_bottom(p: AdmissiblePair) -> bool:
    return not p.H and not p.S
