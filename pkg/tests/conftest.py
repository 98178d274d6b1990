from __future__ import annotations

import random
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from lpadecomp.graph import OMEGA, Graph, build_graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def e_inf():
    return build_graph(["w", "x"], [("w", "x", OMEGA)])


def e1():
    return build_graph(["w", "x", "y"], [("w", "x", 1), ("w", "y", 1)])


def e2():
    return build_graph(["w", "x", "y"], [("w", "x", OMEGA), ("w", "y", OMEGA)])


def e3(n):
    return build_graph(["w", "x", "y"], [("w", "x", OMEGA), ("w", "y", n)])


def line(n, prefix="v"):
    names = [f"{prefix}{i}" for i in range(n)]
    return build_graph(names, [(names[i], names[i + 1], 1) for i in range(n - 1)])


def matrix_graph(mat, prefix="v") -> Graph:
    """Graph from a square matrix of multiplicities (0 none, -1 omega)."""
    n = len(mat)
    names = [f"{prefix}{i}" for i in range(n)]
    bundles = []
    for i in range(n):
        for j in range(n):
            m = int(mat[i][j])
            if m:
                bundles.append((names[i], names[j], OMEGA if m < 0 else m))
    return build_graph(names, bundles)


def random_graph(rng: random.Random, n: int, mults=(1, 2), density=0.35, prefix="v") -> Graph:
    mat = [[rng.choice(mults) if rng.random() < density else 0 for _ in range(n)] for _ in range(n)]
    return matrix_graph([[(-1 if m is OMEGA else m) for m in row] for row in mat], prefix)


def random_family(seed: int, count: int, sizes, mults, density=0.35):
    rng = random.Random(seed)
    return [random_graph(rng, rng.choice(sizes), mults, density) for _ in range(count)]


def graphs(max_vertices=5, mults=(1, 2, OMEGA), min_vertices=0):
    """Hypothesis strategy for small graphs with the given multiplicity alphabet."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_vertices, max_vertices))
        cells = draw(st.lists(st.sampled_from((0, 0) + tuple(mults)), min_size=n * n, max_size=n * n))
        names = [f"v{i}" for i in range(n)]
        bundles = [(names[k // n], names[k % n], m) for k, m in enumerate(cells) if m]
        return build_graph(names, bundles)

    return build()


# -- naive, set-based reference implementations --------------------------------

def naive_hereditary(g: Graph, H) -> bool:
    H = set(H)
    return all(t in H for (s, t) in g.bundles if s in H)


def naive_saturated(g: Graph, H) -> bool:
    H = set(H)
    for v in g.vertices:
        outs = g.out_bundles(v)
        if v in H or not outs or OMEGA in outs.values():
            continue
        if all(t in H for t in outs):
            return False
    return True


def naive_hsat(g: Graph):
    vs = list(g.vertices)
    return [set(c) for r in range(len(vs) + 1) for c in combinations(vs, r)
            if naive_hereditary(g, c) and naive_saturated(g, c)]


def naive_breaking(g: Graph, H) -> set:
    H = set(H)
    out = set()
    for v in g.vertices:
        outs = g.out_bundles(v)
        if v in H or OMEGA not in outs.values():
            continue
        leaving = [m for t, m in outs.items() if t not in H]
        if leaving and OMEGA not in leaving:
            out.add(v)
    return out


def brute_force_paths(g: Graph, X, Y, v):
    """Count XY-compatible paths from v by walking vertex sequences.

    Returns an int or OMEGA. A terminated path longer than |V| repeats an
    outside vertex and can be pumped, and if any such path exists one of
    length at most 2|V| does, so walks are explored to depth 2|V|.
    """
    X, Y = set(X), set(Y)
    inside = X | Y
    bx, by = naive_breaking(g, X), naive_breaking(g, Y)
    n = len(g)
    total = 0

    def ok(s, t):
        return not ((s in bx and t in X) or (s in by and t in Y))

    stack = [(v, 0, 1)]
    while stack:
        u, length, weight = stack.pop()
        for t, m in g.out_bundles(u).items():
            if not ok(u, t):
                continue
            if t in inside:
                if m is OMEGA or weight is OMEGA or length + 1 > n:
                    return OMEGA
                total += weight * m
            elif length + 1 < 2 * n:
                # an omega weight only matters if some continuation terminates
                step = OMEGA if OMEGA in (m, weight) else weight * m
                stack.append((t, length + 1, step))
    return total


@pytest.fixture
def rng():
    return random.Random(20240611)
