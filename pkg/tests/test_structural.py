import random

import numpy as np
import pytest

from netdecomp.linalg import Mat, rank
from netdecomp.structural import (DRAW_HIGH, DRAW_LOW, StructurePattern, generic_rank,
                                  genericity_probe, pattern_of, power_pattern, resample)
from netdecomp.system import NetworkSystem

from _gen import exhaustive_independent_entries, random_matrix, random_pattern


def instantiate(p: StructurePattern, rng) -> Mat:
    return Mat(p.rows, p.cols, (rng.randint(DRAW_LOW, DRAW_HIGH) if f else 0
                                for r in p.free for f in r))


class TestPattern:
    def test_zero(self):
        assert pattern_of(Mat.zeros(3, 2)).n_free == 0

    def test_net8_free_count(self, net8):
        assert pattern_of(net8.A).n_free == 9

    def test_identity(self):
        p = pattern_of(Mat.identity(4))
        assert p.free == tuple(tuple(i == j for j in range(4)) for i in range(4))

    def test_bad_mask(self):
        with pytest.raises(ValueError):
            StructurePattern(2, 2, ((True, False),))


class TestGenericRank:
    def test_diagonal(self):
        assert generic_rank(pattern_of(Mat.identity(5))) == 5

    def test_all_fixed(self):
        assert generic_rank(pattern_of(Mat.zeros(3, 4))) == 0
        assert generic_rank(StructurePattern(0, 0, ())) == 0

    def test_net8_A_against_instantiations(self, net8):
        p = pattern_of(net8.A)
        g = generic_rank(p)
        assert g == exhaustive_independent_entries(p)
        rng = random.Random(2024)
        hits = sum(rank(instantiate(p, rng)) == g for _ in range(50))
        assert hits >= 49

    def test_matches_exhaustive_search(self):
        rng = random.Random(8)
        for _ in range(100):
            p = random_pattern(rng, rng.randint(1, 6), rng.randint(1, 6), rng.random())
            assert generic_rank(p) == exhaustive_independent_entries(p)

    def test_bounds_realized_rank(self):
        rng = random.Random(9)
        for _ in range(100):
            M = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7), rng.random())
            assert generic_rank(pattern_of(M)) >= rank(M)


class TestPowerPattern:
    def test_identity(self):
        p = pattern_of(Mat.identity(3))
        for k in (1, 2, 5):
            assert power_pattern(p, k) == p

    def test_single_edge(self):
        # a_21 != 0 only: edge v1 -> v2, no walk of length two
        p = pattern_of(Mat.from_rows([[0, 0], [1, 0]]))
        assert power_pattern(p, 2).n_free == 0

    def test_net8_square(self, net8):
        A = net8.A
        assert pattern_of(A @ A) <= power_pattern(pattern_of(A), 2)

    def test_cancellation_is_ignored(self):
        # two walks of opposite weight cancel numerically, not structurally
        A = Mat.from_rows([[0, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [0, 1, -1, 0]])
        A2 = A @ A
        assert A2[3, 0] == 0
        assert power_pattern(pattern_of(A), 2).free[3][0]

    def test_containment_random(self):
        rng = random.Random(10)
        for _ in range(40):
            n = rng.randint(1, 8)
            A = random_matrix(rng, n, n, rng.choice([0.2, 0.5]))
            p = pattern_of(A)
            Ak = A
            for k in range(1, n):
                assert pattern_of(Ak) <= power_pattern(p, k)
                Ak = Ak @ A

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            power_pattern(pattern_of(Mat.zeros(2, 3)), 1)


class TestProbe:
    def test_full_sensors(self):
        A = Mat.from_rows([[0, 1, 0], [0, 0, 2], [3, 0, 1]])
        s = NetworkSystem.from_nodes(A, sensors=[0, 1, 2])
        rep = genericity_probe(s, 5, seed=1)
        assert rep.agreement_fraction == 1
        assert rep.baseline_set == ("v1", "v2", "v3")

    def test_single_sample(self, net8):
        rep = genericity_probe(net8, 1, seed=4)
        assert rep.samples == 1
        assert rep.agreement_fraction in (0, 1)

    def test_deterministic(self, net8):
        assert genericity_probe(net8, 10, seed=7) == genericity_probe(net8, 10, seed=7)

    def test_rejects_zero_samples(self, net8):
        with pytest.raises(ValueError):
            genericity_probe(net8, 0)

    def test_resample_keeps_structure_and_sign(self):
        A = Mat.from_rows([[0, -2], [5, 0]])
        s = NetworkSystem.from_nodes(A, drivers=[1], sensors=[0], gains=[-1])
        r = resample(s, np.random.default_rng([0, 0]))
        assert pattern_of(r.A) == pattern_of(A)
        assert r.A[0, 1] < 0 < r.A[1, 0]
        assert r.B[1, 0] < 0
        assert r.C == s.C
        assert all(abs(x) <= DRAW_HIGH for x in r.A.entries)

    def test_uses_observable_sets(self, net8):
        rep = genericity_probe(net8, 3)
        assert rep.to_json()["baseline_set"] == ["v1", "v2", "v3", "v4"]
