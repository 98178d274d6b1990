from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest

from lpadecomp import _pykernels, kernels

compiled = pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled extension not built")


def burnside_count(n: int, values: int) -> int:
    """Isomorphism classes of n x n matrices over `values` symbols under simultaneous permutation."""
    total = 0
    for perm in itertools.permutations(range(n)):
        seen, orbits = set(), 0
        for cell in itertools.product(range(n), repeat=2):
            if cell in seen:
                continue
            orbits += 1
            c = cell
            while c not in seen:
                seen.add(c)
                c = (perm[c[0]], perm[c[1]])
        total += values ** orbits
    return total // math.factorial(n)


def dag_classes_by_relabeling(n: int, max_mult: int) -> int:
    """Acyclic classes: upper-triangular matrices (every DAG has one) deduplicated by relabeling."""
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n)))
    reps = set()
    for vals in itertools.product(range(max_mult + 1), repeat=len(upper)):
        edges = {(i, j): m for (i, j), m in zip(upper, vals) if m}
        reps.add(min(tuple(sorted(((p[i], p[j]), m) for (i, j), m in edges.items())) for p in perms))
    return len(reps)


def random_flat(rng, n, omega=True):
    alphabet = [0, 0, 0, 1, 2] + ([-1] if omega else [])
    return tuple(rng.choice(alphabet) for _ in range(n * n))


class TestClassCounts:
    @pytest.mark.parametrize("n,max_mult", [(1, 2), (2, 2), (3, 1), (3, 2)])
    def test_burnside_small(self, n, max_mult):
        classes = _pykernels.graph_classes(n, max_mult)
        assert len(classes) == burnside_count(n, max_mult + 1)

    @compiled
    @pytest.mark.parametrize("n,max_mult", [(1, 2), (2, 2), (3, 2), (4, 1), (4, 2)])
    def test_burnside_compiled(self, n, max_mult):
        assert len(kernels.graph_classes(n, max_mult)) == burnside_count(n, max_mult + 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_dag_counts(self, n):
        got = kernels.graph_classes(n, 2, acyclic_only=True)
        assert len(got) == dag_classes_by_relabeling(n, 2)
        assert [1, 3, 21, 425][n - 1] == len(got)

    def test_representatives_distinct(self):
        mats = kernels.graph_classes(3, 2)
        assert len({m.tobytes() for m in mats}) == len(mats)
        assert mats.dtype == np.int8 and mats.shape[1:] == (3, 3)


@compiled
class TestParity:
    def test_batch_functions(self):
        for n in range(0, 4):
            c = kernels.compiled_backend.graph_classes(n, 2)
            p = _pykernels.graph_classes(n, 2)
            assert np.array_equal(c, p)
            for rf in (False, True):
                assert np.array_equal(kernels.compiled_backend.decide_kinds(c, rf), _pykernels.decide_kinds(p, rf))
        mats = kernels.graph_classes(3, 2)
        assert np.array_equal(kernels.compiled_backend.compatible_counts(mats),
                              _pykernels.compatible_counts(mats))
        dags = kernels.graph_classes(4, 2, acyclic_only=True)
        assert np.array_equal(dags, _pykernels.graph_classes(4, 2, acyclic_only=True))

    def test_scalar_functions_with_omega(self):
        rng = random.Random(9)
        c, p = kernels.compiled_backend, _pykernels
        for _ in range(400):
            n = rng.randint(1, 7)
            flat = random_flat(rng, n)
            hs = p.hsat_sets(n, flat)
            assert list(c.hsat_sets(n, flat)) == hs
            for h in hs:
                assert c.breaking_mask(n, flat, h) == p.breaking_mask(n, flat, h)
            for rf in (False, True):
                assert list(map(tuple, c.witness_pairs(n, flat, False, rf))) == \
                    list(map(tuple, p.witness_pairs(n, flat, False, rf)))
            for x, y in itertools.combinations(hs, 2):
                if x & y:
                    continue
                assert c.condition_holds(n, flat, x, y) == p.condition_holds(n, flat, x, y)
                assert c.row_finite_holds(n, flat, x, y) == p.row_finite_holds(n, flat, x, y)
                for v in range(n):
                    if not (x | y) >> v & 1:
                        assert c.count_paths(n, flat, x, y, v) == p.count_paths(n, flat, x, y, v)

    def test_overflow_falls_back(self):
        n = 34
        flat = [0] * (n * n)
        for i in range(32):
            flat[i * n + i + 1] = 4
        flat[31 * n + 33] = 1
        flat = tuple(flat)
        x, y = 1 << 32, 1 << 33
        with pytest.raises(OverflowError):
            kernels.compiled_backend.count_paths(n, flat, x, y, 0)
        assert kernels.count_paths(n, flat, x, y, 0) == 5 * 4 ** 31


def test_set_key_order():
    masks = [0b110, 0b1, 0b11, 0b100, 0b101, 0]
    assert sorted(masks, key=kernels.set_key) == [0, 0b1, 0b100, 0b11, 0b101, 0b110]


def test_backend_selection(monkeypatch):
    import importlib
    monkeypatch.setenv("LPA_PURE_PYTHON", "1")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.BACKEND == "python" and reloaded.hsat_sets is _pykernels.hsat_sets
    finally:
        monkeypatch.delenv("LPA_PURE_PYTHON")
        importlib.reload(kernels)


def test_vertex_limit():
    with pytest.raises(ValueError):
        _pykernels.hsat_sets(64, (0,) * (64 * 64))
