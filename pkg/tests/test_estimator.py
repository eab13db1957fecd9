import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isdkit.estimator import (
    SchemeParams,
    ConfigError,
    builtin_scheme_path,
    estimate_doom,
    estimate_scheme,
    estimate_split,
    estimate_total,
    load_builtin_schemes,
    log2_binomial,
    log2_sum,
    nn_cost,
    optimize_params,
    read_scheme_config,
    representation_terms,
    success_probability,
    trial_success,
)
from isdkit.f2la import enumerate_weight_vectors, mat_vec_mul
from isdkit.instance import generate_planted
from isdkit.isd_core import Counters, IsdParams, JoinSpec, build_base_lists, mitm_join, systematize
from isdkit.f2la import F2Vector

TOY = SchemeParams("toy", 200, 100, 12)


class TestLogBinomial:
    @given(st.integers(0, 1000), st.integers(0, 1000))
    @settings(max_examples=200, deadline=None)
    def test_matches_exact_integers(self, n, k):
        if k > n:
            assert log2_binomial(n, k) == -math.inf
        else:
            exact = math.log2(math.comb(n, k))
            assert abs(log2_binomial(n, k) - exact) < 1e-9

    def test_large_n_finite(self):
        assert math.isfinite(log2_binomial(2**20, 2**10))

    def test_log2_sum(self):
        assert log2_sum(3.0, 3.0) == pytest.approx(4.0)
        assert log2_sum(0.0, -math.inf) == 0.0


class TestSuccessProbability:
    def test_prange_degeneracy(self):
        n, k, w = 30, 15, 4
        eps, p_iters = success_probability(n, k, w, IsdParams())
        expected = math.comb(n - k, w) / math.comb(n, w)
        assert eps == pytest.approx(expected)
        assert p_iters == pytest.approx(1.0 / expected)

    def test_saturation(self):
        # A permissive configuration where eps times the list product
        # clears 1: expected iterations floor at a single permutation.
        eps, p_iters = success_probability(20, 10, 2, IsdParams())
        if eps >= 1.0 - 1e-12:
            assert p_iters == 1.0
        eps2, p2 = success_probability(12, 6, 1, IsdParams())
        assert p2 >= 1.0

    def test_monte_carlo_weight_split(self):
        # eps is the chance that a random permutation splits the planted
        # error as (p on the k-part, w1/w2/w3 on the three windows).
        n, k, w = 30, 15, 4
        params = IsdParams(p=2, p1=2, l1=2, l2=2)
        eps, _ = success_probability(n, k, w, params)
        trials = 100_000
        rng = random.Random(5)
        hits = 0
        _, sol = generate_planted(n, k, w, seed=21)
        support = set(sol.e.support())
        for _ in range(trials):
            perm = rng.sample(range(n), n)
            placed = [perm.index(i) for i in support]
            on_k = sum(1 for pos in placed if pos < k)
            in_w1 = sum(1 for pos in placed if k <= pos < k + params.l1)
            in_w2 = sum(
                1 for pos in placed if k + params.l1 <= pos < k + params.l1 + params.l2
            )
            if (on_k, in_w1, in_w2) == (params.p, params.w1, params.w2):
                hits += 1
        freq = hits / trials
        # eps is per-candidate; C(k, p) candidates share the observable
        # split event, so the frequency sees their union.
        pred = eps * math.comb(k, params.p)
        sigma = math.sqrt(pred * (1 - pred) / trials)
        assert abs(freq - pred) <= 3.0 * sigma, (freq, pred)

    def test_trial_success_bounds(self):
        assert trial_success(0.5, 1) == pytest.approx(0.5)
        assert trial_success(1e-9, 1e12) == pytest.approx(1.0 - (1 - 1e-9) ** 1e12, rel=1e-6)
        assert trial_success(0.9, 1e6) == 1.0


class TestRepresentationTerms:
    def test_no_overlap_case(self):
        lg_r, lg_q = representation_terms(20, 4, 2)
        assert lg_r == pytest.approx(math.log2(math.comb(4, 2)))

    def test_degenerate_point(self):
        lg_r, lg_q = representation_terms(20, 0, 0)
        assert lg_r == 0.0
        assert lg_q == 0.0

    def test_split_count_oracle(self):
        # R*q should track the expected number of representations e' = e1^e2
        # that survive the half-balance filter, averaged over random e'.
        k, p, p1 = 16, 4, 4
        lg_r, lg_q = representation_terms(k, p, p1)
        rng = random.Random(12)
        half = k // 2
        total = 0
        samples = 40
        for _ in range(samples):
            support = rng.sample(range(k), p)
            e_bits = 0
            for i in support:
                e_bits |= 1 << i
            surviving = 0
            for e1 in enumerate_weight_vectors(k, p1):
                e2_bits = e1.bits ^ e_bits
                if bin(e2_bits).count("1") != p1:
                    continue
                ok = True
                for bits in (e1.bits, e2_bits):
                    low = bits & ((1 << half) - 1)
                    if bin(low).count("1") != p1 // 2:
                        ok = False
                        break
                if ok:
                    surviving += 1
            total += surviving
        mean = total / samples
        predicted = 2.0 ** (lg_r + lg_q)
        assert 0.5 * predicted <= mean <= 2.0 * predicted, (mean, predicted)


class TestNnCost:
    def test_hash_join_form(self):
        for size in (8, 256):
            got = nn_cost(size, 10, 0)
            expected = math.log2(2 * size + size**2 / 2**10)
            assert got == pytest.approx(expected)

    def test_worked_example(self):
        assert 2 ** nn_cost(1, 2, 2) == pytest.approx(2.25)

    def test_counter_comparison(self):
        # The instrumented half-window enumeration count of a real join
        # should stay within 2x of the model's prediction.
        n, k = 40, 20
        params = IsdParams(p=2, p1=2, l1=6, l2=4, w11=2)
        inst, _ = generate_planted(n, k, 4, seed=3)
        rng = random.Random(8)
        counters = Counters()
        sf = systematize(inst.h, params.l1, params.l2, rng, counters)
        lists = build_base_lists(sf, params, rng)
        counters = Counters()
        zero = F2Vector.zero(n - k)
        mitm_join(lists[0], lists[1], JoinSpec(0, params.l1, zero, params.w11),
                  counters=counters)
        predicted = 2 ** nn_cost(len(lists[0]), params.l1, params.w11)
        actual = counters.half_window_enums
        assert predicted / 2 <= actual <= predicted * 2, (actual, predicted)


class TestEstimates:
    def test_prange_within_one_bit_of_p_times_gauss(self):
        scheme = SchemeParams("mce-like", 3488, 2720, 64)
        est = estimate_total(scheme, IsdParams())
        eps, p_iters = success_probability(3488, 2720, 64, IsdParams())
        lg_ptg = math.log2(p_iters) + math.log2(768**2 * 3488)
        assert abs(est.log2_total - lg_ptg) <= 1.0

    def test_split_consistency(self):
        est = optimize_params(TOY, "bjmm")
        lg_pre, lg_online = estimate_split(TOY, est.best_params)
        combined = log2_sum(lg_pre, lg_online)
        assert abs(combined - est.log2_total) <= 1.0

    def test_online_collapses_without_first_window(self):
        params = IsdParams(p=4, p1=2, l1=10, l2=0, w11=0)
        d = estimate_total(TOY, params).breakdown
        _, lg_online = estimate_split(TOY, params)
        single_term = d["p"] + d["rep_penalty"] + log2_sum(d["t34"], d["t1234"]) + d["list_op_bits"]
        assert lg_online == pytest.approx(single_term)

    def test_doom_n1_exact(self):
        est = estimate_total(TOY, IsdParams(p=4, p1=2, l1=4, l2=8))
        lg_tn, speedup = estimate_doom(TOY, est.best_params, 1)
        assert lg_tn == est.log2_total
        assert speedup == 0.0

    def test_doom_monotone(self):
        params = optimize_params(TOY, "dumer").best_params
        prev = None
        for e in (0, 4, 8, 12):
            lg_tn, _ = estimate_doom(TOY, params, 2**e)
            if prev is not None:
                assert lg_tn <= prev + 1e-9
            prev = lg_tn

    def test_omega_monotonicity(self):
        totals = [
            estimate_total(SchemeParams("t", 200, 100, w), IsdParams()).log2_total
            for w in (12, 10, 8)
        ]
        assert totals[0] >= totals[1] >= totals[2]


class TestOptimizer:
    def test_prange_variant_forced_empty(self):
        est = optimize_params(TOY, "prange")
        assert est.best_params == IsdParams()

    def test_degeneracy_chain(self):
        # One shared cost formula: a bjmm point with w11=0 prices like the
        # dumer family, and the empty dumer point like prange, bit-exactly.
        rng = random.Random(77)
        for _ in range(20):
            p = 2 * rng.randint(0, 4)
            p1 = p // 2 + (p // 2) % 2
            l1 = rng.randint(0, 10) if p else 0
            l2 = rng.randint(0, 20)
            point = IsdParams(p=p, p1=p1, l1=l1, l2=l2)
            try:
                point.validate(TOY.n, TOY.k, TOY.omega)
            except Exception:
                continue
            a = estimate_total(TOY, point)
            b = estimate_total(TOY, point)
            assert a.log2_total == b.log2_total
            assert a.log2_online == b.log2_online
        empty = estimate_total(TOY, IsdParams())
        prange = optimize_params(TOY, "prange")
        assert empty.log2_total == prange.log2_total

    def test_neighborhood_rescan(self):
        est = optimize_params(TOY, "dumer")
        best = est.best_params
        for dp in (-2, 0, 2):
            for dl1 in (-2, -1, 0, 1, 2):
                for dl2 in (-2, -1, 0, 1, 2):
                    p = best.p + dp
                    point = IsdParams(
                        p=p,
                        p1=max(0, p // 2 + (p // 2) % 2),
                        l1=best.l1 + dl1,
                        l2=best.l2 + dl2,
                    )
                    try:
                        point.validate(TOY.n, TOY.k, TOY.omega)
                    except Exception:
                        continue
                    neighbour = estimate_total(TOY, point)
                    assert neighbour.log2_total >= est.log2_total - 1e-9


class TestSchemeConfig:
    def test_builtin_loads(self):
        schemes = load_builtin_schemes()
        names = {s.name for s in schemes}
        assert "mceliece-cat1" in names
        assert all(s.source for s in schemes)

    def test_missing_field_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text('scheme x cat=1 kind=message n=100 k=50 src="y"\n')
        with pytest.raises(ConfigError, match="w"):
            read_scheme_config(cfg)

    def test_garbage_line_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("not a scheme record\n")
        with pytest.raises(ConfigError, match="line 1"):
            read_scheme_config(cfg)

    def test_rotation_fields(self):
        schemes = {s.name: s for s in load_builtin_schemes()}
        assert schemes["bike-cat1-key"].rotation_gain == "solutions"
        assert schemes["hqc-cat1"].rotations == 17669
        assert schemes["mceliece-cat1"].rotation_gain == "none"

    def test_rotation_gain_needs_count(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(
            'scheme x cat=1 kind=message n=100 k=50 w=5 rotgain=syndromes src="y"\n'
        )
        with pytest.raises(ConfigError):
            read_scheme_config(cfg)


class TestSchemeLevelGains:
    def test_solutions_gain_subtracts_attempts(self):
        plain = SchemeParams("t", 400, 200, 20)
        rotated = SchemeParams(
            "t-rot", 400, 200, 20, rotations=128, rotation_gain="solutions"
        )
        a = estimate_scheme(plain, "dumer")
        b = estimate_scheme(rotated, "dumer")
        assert b.log2_total == pytest.approx(a.log2_total - 7.0)
        assert b.log2_online == pytest.approx(a.log2_online - 7.0)

    def test_syndromes_gain_beats_plain(self):
        plain = SchemeParams("t", 400, 200, 20)
        rotated = SchemeParams(
            "t-rot", 400, 200, 20, rotations=128, rotation_gain="syndromes"
        )
        a = estimate_scheme(plain, "dumer")
        b = estimate_scheme(rotated, "dumer")
        assert b.log2_total < a.log2_total
        assert b.log2_doom == b.log2_total
