import random

import pytest

from isdkit.f2la import F2Matrix, F2Vector, Permutation, gauss_systematic, mat_vec_mul, windowed_weight
from isdkit.instance import generate_planted
from isdkit.isd_core import (
    ConfigError,
    Counters,
    IsdParams,
    JoinSpec,
    ListEntry,
    build_base_lists,
    isd_decode,
    mitm_join,
    prange_decode,
    quadratic_join,
    systematize,
)
from isdkit.oracle import brute_force_solve, iteration_statistics


def make_sf(n, k, rng, l1=0, l2=0):
    from isdkit.f2la import SingularBlockError

    h = F2Matrix(tuple(rng.getrandbits(n) for _ in range(n - k)), n - k, n)
    while True:
        try:
            return gauss_systematic(h, Permutation.random(n, rng), l1, l2)
        except SingularBlockError:
            continue


class TestIsdParams:
    def test_odd_p1_rejected(self):
        with pytest.raises(ConfigError):
            IsdParams(p=2, p1=3).validate(40, 20, 4)

    def test_window_overflow_rejected(self):
        with pytest.raises(ConfigError):
            IsdParams(l1=12, l2=12).validate(40, 20, 4)

    def test_p_without_representation_rejected(self):
        with pytest.raises(ConfigError):
            IsdParams(p=4, p1=0).validate(40, 20, 4)


class TestBuildBaseLists:
    def test_p1_zero_singletons(self):
        rng = random.Random(0)
        sf = make_sf(20, 10, rng)
        lists = build_base_lists(sf, IsdParams())
        for lst in lists:
            assert len(lst) == 1
            assert lst[0].x == F2Vector.zero(10)
            assert lst[0].hx == F2Vector.zero(10)

    def test_binomial_count(self):
        rng = random.Random(1)
        sf = make_sf(16, 8, rng, 2, 2)
        lists = build_base_lists(sf, IsdParams(p=2, p1=2, l1=2, l2=2))
        assert [len(l) for l in lists] == [4, 4, 4, 4]

    def test_hx_cache_coherent(self):
        rng = random.Random(2)
        sf = make_sf(40, 20, rng, 4, 4)
        lists = build_base_lists(sf, IsdParams(p=4, p1=4, l1=4, l2=4))
        for lst in lists:
            for entry in lst:
                assert entry.hx == mat_vec_mul(sf.h_tilde, entry.x)

    def test_half_support_separation(self):
        rng = random.Random(3)
        sf = make_sf(20, 10, rng)
        l1, l2, l3, l4 = build_base_lists(sf, IsdParams(p=2, p1=2))
        for e in l1 + l3:
            assert all(i < 5 for i in e.x.support())
        for e in l2 + l4:
            assert all(i >= 5 for i in e.x.support())


def random_entries(rng, count, k, r):
    return [
        ListEntry(F2Vector(rng.getrandbits(k), k), F2Vector(rng.getrandbits(r), r))
        for _ in range(count)
    ]


class TestMitmJoin:
    def test_exact_match_degenerate(self):
        rng = random.Random(4)
        a = random_entries(rng, 50, 10, 16)
        b = random_entries(rng, 50, 10, 16)
        spec = JoinSpec(0, 8, F2Vector.zero(16), 0)
        got = {e.x.bits for e in mitm_join(a, b, spec)}
        expect = {
            x.x.bits ^ y.x.bits
            for x in a
            for y in b
            if windowed_weight(x.hx ^ y.hx, 0, 8) == 0
        }
        assert got == expect

    def test_singleton_zero(self):
        zero = [ListEntry(F2Vector.zero(6), F2Vector.zero(8))]
        spec = JoinSpec(0, 4, F2Vector.zero(8), 0)
        out = mitm_join(zero, zero, spec)
        assert len(out) == 1 and out[0].x == F2Vector.zero(6)

    @pytest.mark.parametrize("weight", [0, 1, 2, 3, 4])
    def test_equals_quadratic_filter(self, weight):
        rng = random.Random(weight)
        a = random_entries(rng, 200, 24, 20)
        b = random_entries(rng, 200, 24, 20)
        spec = JoinSpec(2, 16, F2Vector(rng.getrandbits(20), 20), weight)
        got = sorted((e.x.bits, e.hx.bits) for e in mitm_join(a, b, spec))
        expect = sorted((e.x.bits, e.hx.bits) for e in quadratic_join(a, b, spec))
        assert got == expect

    def test_target_folded_into_output(self):
        rng = random.Random(9)
        a = random_entries(rng, 20, 8, 12)
        b = random_entries(rng, 20, 8, 12)
        target = F2Vector(rng.getrandbits(12), 12)
        spec = JoinSpec(0, 6, target, 1)
        for e in mitm_join(a, b, spec):
            assert windowed_weight(e.hx, 0, 6) == 1


class TestIsdDecode:
    def test_prange_config_small(self):
        inst, _ = generate_planted(24, 12, 2, seed=21)
        e = isd_decode(inst, IsdParams(), budget=50000, seed=1)
        assert e is not None and inst.check(e)

    def test_matches_oracle_solution_set(self):
        inst, _ = generate_planted(40, 20, 4, seed=22)
        e = isd_decode(
            inst, IsdParams(p=2, p1=2, l1=4, l2=4, w11=0), budget=50000, seed=2
        )
        assert e is not None
        assert brute_force_solve(inst).contains(e)

    def test_zero_weight_instant(self):
        inst, _ = generate_planted(20, 10, 0, seed=3)
        counters = Counters()
        e = isd_decode(inst, IsdParams(), budget=10, seed=0, counters=counters)
        assert e == F2Vector.zero(20)

    def test_budget_zero_not_found(self):
        inst, _ = generate_planted(20, 10, 2, seed=5)
        assert isd_decode(inst, IsdParams(), budget=0, seed=0) is None

    def test_nonzero_w11_path(self):
        inst, _ = generate_planted(40, 20, 4, seed=23)
        counters = Counters()
        e = isd_decode(
            inst,
            IsdParams(p=4, p1=2, l1=4, l2=4, w11=2),
            budget=50000,
            seed=3,
            counters=counters,
        )
        assert e is not None and inst.check(e)
        assert counters.l12_joins == counters.permutations

    def test_deterministic_given_seed(self):
        inst, _ = generate_planted(30, 15, 3, seed=8)
        c1, c2 = Counters(), Counters()
        e1 = isd_decode(inst, IsdParams(), budget=50000, seed=9, counters=c1)
        e2 = isd_decode(inst, IsdParams(), budget=50000, seed=9, counters=c2)
        assert e1 == e2 and c1 == c2


class TestPrange:
    def test_small_instance(self):
        inst, _ = generate_planted(20, 10, 1, seed=31)
        e = prange_decode(inst, budget=20000, seed=1)
        assert e is not None and inst.check(e)

    def test_zero_syndrome(self):
        inst, _ = generate_planted(20, 10, 0, seed=32)
        assert prange_decode(inst, budget=5, seed=0) == F2Vector.zero(20)

    def test_iteration_statistics_vs_binomial(self):
        import math

        n, k, w = 30, 15, 3
        eps = math.comb(n - k, w) / math.comb(n, w)
        counts = []
        for seed in range(200):
            inst, _ = generate_planted(n, k, w, seed=1000 + seed)
            counters = Counters()
            e = prange_decode(inst, budget=100000, seed=seed, counters=counters)
            assert e is not None
            counts.append(counters.permutations)
        stats = iteration_statistics(counts, eps)
        assert stats.within_3_sigma, stats
