"""Simulated faulty oracle for pairwise-difference queries.

The oracle hides a ground-truth labeling and answers a query on the
unordered pair {i, j} (canonically i < j) with

    (truth(i) - truth(j) + noise) mod k

where the noise draw is 0 with probability 1/k + delta and each nonzero
value with probability 1/k - delta/(k-1). Each pair is answered exactly
once and the answer is fixed thereafter.

Noise is derived statelessly from (rng_seed, i, j) with a SplitMix64-style
mixer, so a transcript depends only on the seed and the set of pairs,
never on query order. This keeps batched and incremental querying, and
any parallel schedule, byte-for-byte reproducible.
"""

from __future__ import annotations

import numpy as np

from .core import (
    Labeling,
    NoiseParams,
    QueryPlan,
    QueryTranscript,
    RepeatQueryError,
    canonical_pair,
)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer; wraps mod 2^64."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def pair_uniform(seed: int, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Deterministic uniform [0, 1) variate per (seed, lo, hi) triple."""
    with np.errstate(over="ignore"):
        base = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GOLDEN)
        key = (lo.astype(np.uint64) << np.uint64(32)) ^ hi.astype(np.uint64)
        h = _mix64(base + _mix64(key + _GOLDEN))
    return (h >> np.uint64(11)) * 2.0**-53


def noise_from_uniform(u: np.ndarray, k: int, delta: float) -> np.ndarray:
    """Map uniform [0, 1) variates to noise values by inverse CDF.

    Value 0 owns the mass 1/k + delta; the remaining mass is split
    evenly over 1 .. k-1. delta = 0 is permitted here (uniform noise);
    parameter validation happens in NoiseParams.
    """
    u = np.asarray(u, dtype=np.float64)
    p_zero = 1.0 / k + delta
    if p_zero >= 1.0:
        return np.zeros(u.shape, dtype=np.int64)
    step = (1.0 - p_zero) / (k - 1)
    nonzero = 1 + np.minimum(
        ((u - p_zero) / step).astype(np.int64), np.int64(k - 2)
    )
    return np.where(u < p_zero, np.int64(0), nonzero)


def sample_noise(params: NoiseParams, rng: np.random.Generator,
                 size: int | tuple[int, ...] | None = None) -> int | np.ndarray:
    """Draw noise values from the zero-biased law using a numpy Generator."""
    vals = noise_from_uniform(rng.random(size), params.k, params.delta)
    return int(vals) if size is None else vals


class FaultyOracle:
    """Answers pairwise-difference queries about a hidden labeling.

    Parameters
    ----------
    truth : Labeling
        Hidden ground truth; never exposed by the oracle.
    params : NoiseParams
        Noise law for the answers.
    rng_seed : int
        64-bit seed; together with the pair it fully determines each
        noise draw.
    noiseless : bool
        Test mode forcing every noise draw to 0, which makes answers
        exact differences.
    """

    def __init__(self, truth: Labeling, params: NoiseParams, rng_seed: int,
                 noiseless: bool = False):
        if truth.k != params.k:
            raise ValueError(f"truth has k={truth.k} but params.k={params.k}")
        self._truth = truth
        self.params = params
        self.rng_seed = int(rng_seed)
        self.noiseless = bool(noiseless)
        self._issued_keys: set[int] = set()
        self._lo_chunks: list[np.ndarray] = []
        self._hi_chunks: list[np.ndarray] = []
        self._ans_chunks: list[np.ndarray] = []

    @property
    def n(self) -> int:
        return self._truth.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def query_count(self) -> int:
        return len(self._issued_keys)

    def _answers_for(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        g = self._truth.labels
        if self.noiseless:
            eta = np.int64(0)
        else:
            u = pair_uniform(self.rng_seed, lo, hi)
            eta = noise_from_uniform(u, self.k, self.params.delta)
        return (g[lo] - g[hi] + eta) % self.k

    def query(self, i: int, j: int) -> int:
        """Answer the unordered pair {i, j} under canonical orientation.

        Raises RepeatQueryError if the pair was queried before and
        IdentityPairError if i == j.
        """
        lo, hi = canonical_pair(i, j)
        if not 0 <= lo < hi < self.n:
            raise ValueError(f"pair ({i}, {j}) out of range for n={self.n}")
        key = lo * self.n + hi
        if key in self._issued_keys:
            raise RepeatQueryError(f"pair ({lo}, {hi}) was already queried")
        ans = self._answers_for(np.asarray([lo]), np.asarray([hi]))
        self._issued_keys.add(key)
        self._lo_chunks.append(np.asarray([lo], dtype=np.int64))
        self._hi_chunks.append(np.asarray([hi], dtype=np.int64))
        self._ans_chunks.append(ans)
        return int(ans[0])

    def execute_plan(self, plan: QueryPlan) -> QueryTranscript:
        """Answer every pair in the plan and return their transcript.

        The plan must be disjoint from everything queried so far;
        the oracle's query count grows by len(plan).
        """
        if plan.n != self.n:
            raise ValueError(f"plan is for n={plan.n}, oracle has n={self.n}")
        keys = (plan.lo * np.int64(self.n) + plan.hi).tolist()
        if self._issued_keys.intersection(keys):
            dup = min(self._issued_keys.intersection(keys))
            raise RepeatQueryError(
                f"pair ({dup // self.n}, {dup % self.n}) was already queried"
            )
        ans = self._answers_for(plan.lo, plan.hi)
        self._issued_keys.update(keys)
        self._lo_chunks.append(plan.lo)
        self._hi_chunks.append(plan.hi)
        self._ans_chunks.append(ans)
        return QueryTranscript(self.n, self.k, plan.lo, plan.hi, ans)

    @property
    def issued(self) -> QueryTranscript:
        """Snapshot transcript of every answer issued so far."""
        if self._lo_chunks:
            lo = np.concatenate(self._lo_chunks)
            hi = np.concatenate(self._hi_chunks)
            ans = np.concatenate(self._ans_chunks)
        else:
            lo = hi = ans = np.empty(0, dtype=np.int64)
        return QueryTranscript(self.n, self.k, lo, hi, ans)
