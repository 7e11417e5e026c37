"""Oracle contracts: noise law, query-once semantics, determinism."""

import numpy as np
import pytest
from scipy import stats

from cycalign import (
    FaultyOracle,
    IdentityPairError,
    Labeling,
    NoiseParams,
    QueryPlan,
    RepeatQueryError,
    lookup_oriented,
    noise_from_uniform,
    sample_noise,
    seed_rest_plan,
)


class TestNoiseFromUniform:
    def test_k2_thresholds(self):
        # mass 0.75 on value 0, 0.25 on value 1
        u = np.array([0.0, 0.7499, 0.75, 0.999])
        assert noise_from_uniform(u, 2, 0.25).tolist() == [0, 0, 1, 1]

    def test_zero_bias_is_uniform(self):
        # delta = 0 splits [0, 1) into k equal cells
        u = np.array([0.0, 0.24, 0.26, 0.49, 0.51, 0.74, 0.76, 0.99])
        assert noise_from_uniform(u, 4, 0.0).tolist() == [0, 0, 1, 1, 2, 2, 3, 3]

    def test_preimage_measures_match_law(self):
        k, delta = 5, 0.13
        params = NoiseParams(k, delta)
        u = (np.arange(2_000_000) + 0.5) / 2_000_000
        vals = noise_from_uniform(u, k, delta)
        freq = np.bincount(vals, minlength=k) / u.size
        assert freq[0] == pytest.approx(params.p_zero, abs=1e-6)
        for i in range(1, k):
            assert freq[i] == pytest.approx(params.p_nonzero, abs=1e-6)

    def test_extreme_delta_always_zero(self):
        u = np.array([0.0, 0.5, 0.999999])
        assert noise_from_uniform(u, 2, 0.5).tolist() == [0, 0, 0]


class TestSampleNoise:
    def test_monte_carlo_frequency_of_zero(self):
        # frequency of outcome 0 within 4 sigma of 1/3 + 0.2
        params = NoiseParams(3, 0.2)
        draws = 100_000
        vals = sample_noise(params, np.random.default_rng(7), draws)
        p = params.p_zero
        sigma = np.sqrt(p * (1 - p) / draws)
        assert abs(np.mean(vals == 0) - p) < 4 * sigma

    def test_scalar_draw(self):
        v = sample_noise(NoiseParams(4, 0.1), np.random.default_rng(0))
        assert isinstance(v, int) and 0 <= v < 4


def _oracle(labels, k, delta=0.2, seed=1, noiseless=False):
    return FaultyOracle(Labeling(labels, k), NoiseParams(k, delta), seed,
                        noiseless=noiseless)


class TestQuery:
    def test_noiseless_difference(self):
        oracle = _oracle([0, 2, 1], 3, noiseless=True)
        assert oracle.query(0, 1) == (0 - 2) % 3 == 1

    def test_noiseless_reverse_read(self):
        oracle = _oracle([0, 2, 1], 3, noiseless=True)
        oracle.query(0, 1)
        assert lookup_oriented(oracle.issued, 1, 0) == 2

    def test_repeat_query_rejected(self):
        oracle = _oracle([0, 1, 2], 3)
        oracle.query(0, 1)
        with pytest.raises(RepeatQueryError):
            oracle.query(0, 1)
        with pytest.raises(RepeatQueryError):
            oracle.query(1, 0)

    def test_identity_rejected(self):
        with pytest.raises(IdentityPairError):
            _oracle([0, 1], 2).query(1, 1)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            _oracle([0, 1], 2).query(0, 2)

    def test_count_tracks_distinct_pairs(self):
        oracle = _oracle([0, 1, 2, 0], 3)
        oracle.query(0, 1)
        oracle.query(2, 3)
        assert oracle.query_count == 2
        n = oracle.n
        assert oracle.query_count <= n * (n - 1) // 2


class TestExecutePlan:
    def test_empty_plan(self):
        oracle = _oracle([0, 1, 2], 3)
        t = oracle.execute_plan(QueryPlan([], n=3))
        assert len(t) == 0 and oracle.query_count == 0

    def test_seed_rest_cardinality(self):
        oracle = _oracle([0] * 20, 2, delta=0.3)
        t = oracle.execute_plan(seed_rest_plan(20, 4))
        assert len(t) == 4 * 16
        assert oracle.query_count == 4 * 16

    def test_rerun_is_byte_identical(self):
        plan = seed_rest_plan(12, 3)
        texts = []
        for _ in range(2):
            oracle = _oracle(list(range(12)), 12, delta=0.1, seed=99)
            texts.append(oracle.execute_plan(plan).to_text())
        assert texts[0] == texts[1]

    def test_query_order_does_not_change_answers(self):
        plan = seed_rest_plan(10, 2)
        oracle_a = _oracle([i % 3 for i in range(10)], 3, seed=5)
        batch = oracle_a.execute_plan(plan)
        oracle_b = _oracle([i % 3 for i in range(10)], 3, seed=5)
        pairs = list(plan)
        rng = np.random.default_rng(0)
        rng.shuffle(pairs)
        for i, j in pairs:
            assert oracle_b.query(i, j) == batch.lookup_oriented(i, j)

    def test_plan_overlapping_history_rejected(self):
        oracle = _oracle([0, 1, 2, 0], 3)
        oracle.query(1, 2)
        with pytest.raises(RepeatQueryError):
            oracle.execute_plan(QueryPlan([(0, 1), (1, 2)], n=4))
        # failed batch must not have been recorded
        assert oracle.query_count == 1

    def test_wrong_size_plan_rejected(self):
        oracle = _oracle([0, 1, 2], 3)
        with pytest.raises(ValueError):
            oracle.execute_plan(QueryPlan([(0, 1)], n=4))

    def test_issued_merges_singles_and_batches(self):
        oracle = _oracle([0, 1, 2, 0, 1], 3)
        oracle.query(3, 4)
        oracle.execute_plan(QueryPlan([(0, 1), (0, 2)], n=5))
        issued = oracle.issued
        assert len(issued) == 3 and (3, 4) in issued

    def test_noiseless_answers_are_exact_differences(self):
        labels = [0, 2, 1, 2, 0, 1]
        oracle = _oracle(labels, 3, noiseless=True)
        t = oracle.execute_plan(seed_rest_plan(6, 3))
        for i, j, a in t.items():
            assert a == (labels[i] - labels[j]) % 3


class TestNoiseDistribution:
    def test_residuals_follow_the_law(self):
        # chi-square over >= 1e5 answered pairs at significance 1e-3
        n, k, delta = 800, 4, 0.2
        rng = np.random.default_rng(17)
        labels = rng.integers(0, k, n)
        oracle = FaultyOracle(Labeling(labels, k), NoiseParams(k, delta), 23)
        t = oracle.execute_plan(seed_rest_plan(n, 200))
        assert len(t) >= 100_000
        triples = np.array(list(t.items()))
        lo, hi, ans = triples[:, 0], triples[:, 1], triples[:, 2]
        residual = (ans - (labels[lo] - labels[hi])) % k
        counts = np.bincount(residual, minlength=k)
        params = NoiseParams(k, delta)
        expected = np.array([params.p_zero] + [params.p_nonzero] * (k - 1))
        result = stats.chisquare(counts, expected * len(t))
        assert result.pvalue >= 1e-3

    def test_distinct_seeds_give_distinct_noise(self):
        plan = seed_rest_plan(30, 5)
        t1 = _oracle([0] * 30, 4, seed=1).execute_plan(plan)
        t2 = _oracle([0] * 30, 4, seed=2).execute_plan(plan)
        assert t1.to_text() != t2.to_text()
