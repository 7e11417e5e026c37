"""Seeded plurality-vote recovery of cyclic labels.

The recovery strategy is non-adaptive: pick a seed set S (the first
|S| node indices), query every pair between S and the rest of the
graph in one batch, then

1. anchor the first seed node at label 0;
2. label every other seed node s' by a plurality vote over the rest
   nodes b of (answer(s', b) - answer(anchor, b)) mod k, which
   estimates the label difference between s' and the anchor;
3. label every non-seed node v by a plurality vote over seed nodes s
   of (label(s) + answer(v, s)) mod k.

Step 2 works because the difference of two independent noise draws is
again zero-biased, with the smaller effective bias k*delta^2/(k-1);
this is what drives the seed-size formulas and the validity boundary
delta >~ (ln n / (n k))^(1/4) below which seed reconciliation starves.

All votes break ties toward the smallest label, making every outcome a
deterministic function of the transcript.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import Labeling, NoiseParams, QueryPlan, QueryTranscript
from .oracle import FaultyOracle


@dataclass(frozen=True)
class SeedConfig:
    """Tuning knobs for the seed-size formulas.

    constant_c scales the leading term of both seed-size branches;
    min_seed floors the result; explicit_size bypasses the formulas
    entirely (validated against n at use time).
    """

    constant_c: float = 40.0
    min_seed: int = 1
    explicit_size: int | None = None

    def __post_init__(self):
        if not self.constant_c > 0:
            raise ValueError(f"constant_c must be positive, got {self.constant_c}")
        if self.min_seed < 1:
            raise ValueError(f"min_seed must be >= 1, got {self.min_seed}")
        if self.explicit_size is not None and self.explicit_size < 1:
            raise ValueError(f"explicit_size must be >= 1, got {self.explicit_size}")


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of one recovery run.

    per_node_margin[v] is the winning-vote count minus the runner-up
    count in the vote that fixed v's label; the anchor node, whose
    label is set by convention rather than by vote, gets the maximum
    attainable margin (its vote count) as a sentinel.
    """

    labeling: Labeling
    seed: tuple[int, ...]
    query_count: int
    per_node_margin: np.ndarray


class ValidityRegimeWarning(UserWarning):
    """The bias is below the boundary where seed reconciliation is reliable."""


def validity_threshold(n: int, k: int) -> float:
    """Smallest bias for which n rest nodes can reconcile a seed set,
    (ln n / (n k))^(1/4) up to constants."""
    return (math.log(n) / (n * k)) ** 0.25


def seed_size(n: int, params: NoiseParams, cfg: SeedConfig = SeedConfig()) -> int:
    """Seed-set size for an n-node instance.

    Uses ceil(c * ln n / (k delta^2)) when delta <= 1/(2k) and
    ceil(c * ln n / delta) otherwise, floored by cfg.min_seed and
    clamped to floor(n/2). cfg.explicit_size overrides the formulas.
    Warns (never errors) when delta is below the validity threshold.
    """
    if n < 4:
        raise ValueError(f"need n >= 4 for a seeded split, got n={n}")
    if params.delta < validity_threshold(n, params.k):
        warnings.warn(
            f"delta={params.delta:g} is below the validity boundary "
            f"{validity_threshold(n, params.k):.4g} for n={n}, k={params.k}; "
            "seed reconciliation is unreliable here",
            ValidityRegimeWarning,
            stacklevel=2,
        )
    if cfg.explicit_size is not None:
        if not 1 <= cfg.explicit_size <= n // 2:
            raise ValueError(
                f"explicit_size={cfg.explicit_size} outside [1, n/2] for n={n}"
            )
        return int(cfg.explicit_size)
    if params.delta <= 1.0 / (2 * params.k):
        raw = math.ceil(cfg.constant_c * math.log(n) / (params.k * params.delta**2))
    else:
        raw = math.ceil(cfg.constant_c * math.log(n) / params.delta)
    size = max(cfg.min_seed, raw)
    return max(1, min(size, n // 2))


def plurality(values: Sequence[int] | np.ndarray, k: int) -> int:
    """Most frequent label in a multiset; ties go to the smallest label."""
    arr = np.asarray(values, dtype=np.int64)
    if arr.size == 0:
        raise ValueError("plurality of an empty multiset is undefined")
    if arr.min() < 0 or arr.max() >= k:
        raise ValueError(f"votes must lie in [0, {k})")
    return int(np.bincount(arr, minlength=k).argmax())


def effective_bias(params: NoiseParams) -> float:
    """Zero-bias of the difference of two independent noise draws,
    k * delta^2 / (k - 1)."""
    return params.k * params.delta**2 / (params.k - 1)


def _vote_rows(votes: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise plurality winners and (top - runner-up) margins."""
    rows, width = votes.shape
    counts = np.zeros((rows, k), dtype=np.int64)
    row_idx = np.repeat(np.arange(rows), width)
    np.add.at(counts, (row_idx, votes.ravel()), 1)
    winners = counts.argmax(axis=1)
    top2 = np.partition(counts, k - 2, axis=1)[:, k - 2:]
    margins = top2[:, 1] - top2[:, 0]
    return winners, margins


def estimate_pairwise_diff(transcript: QueryTranscript, s: int, s_prime: int,
                           others: Sequence[int]) -> int:
    """Estimate (label(s) - label(s_prime)) mod k from shared neighbors.

    Takes the plurality over b in others of
    (answer(s, b) - answer(s_prime, b)) mod k, using oriented reads.
    """
    if s == s_prime:
        raise ValueError("need two distinct nodes to estimate a difference")
    others = np.asarray(others, dtype=np.int64)
    if others.size == 0:
        raise ValueError("others must be nonempty")
    mat = transcript.oriented_matrix([s, s_prime], others)
    votes = (mat[0] - mat[1]) % transcript.k
    return plurality(votes, transcript.k)


def align_seed(transcript: QueryTranscript, seed: Sequence[int],
               rest: Sequence[int], k: int) -> dict[int, int]:
    """Labels for the seed set, reconciled up to one shared cyclic shift.

    The first seed node is the anchor and gets label 0; every other
    seed node gets its estimated difference to the anchor. With all
    votes correct the result is truth shifted by (0 - truth(anchor)).
    """
    seed = list(seed)
    rest = np.asarray(rest, dtype=np.int64)
    if len(seed) < 1:
        raise ValueError("seed must contain at least one node")
    if rest.size == 0:
        raise ValueError("rest must be nonempty")
    labels = {seed[0]: 0}
    if len(seed) > 1:
        mat = transcript.oriented_matrix(seed, rest)
        diffs = (mat[1:] - mat[0:1]) % k
        winners, _ = _vote_rows(diffs, k)
        labels.update(zip(seed[1:], winners.tolist()))
    return labels


def extend_labels(transcript: QueryTranscript, seed_labels: Mapping[int, int],
                  targets: Sequence[int], k: int) -> Labeling:
    """Extend seed labels to the target nodes by plurality vote.

    Each target v gets the plurality over seed nodes s of
    (seed_labels[s] + answer(v, s)) mod k; seed nodes keep their
    labels. seed and targets together must cover all nodes.
    """
    targets = np.asarray(targets, dtype=np.int64)
    seed_nodes = np.asarray(sorted(seed_labels), dtype=np.int64)
    n = transcript.n
    covered = np.zeros(n, dtype=bool)
    covered[seed_nodes] = True
    covered[targets] = True
    if not covered.all():
        raise ValueError("seed and targets must cover every node")
    labels = np.zeros(n, dtype=np.int64)
    labels[seed_nodes] = [seed_labels[int(s)] for s in seed_nodes]
    if targets.size:
        mat = transcript.oriented_matrix(targets, seed_nodes)
        votes = (mat + labels[seed_nodes][None, :]) % k
        winners, _ = _vote_rows(votes, k)
        labels[targets] = winners
    return Labeling(labels, k)


def seed_rest_plan(n: int, seed_count: int) -> QueryPlan:
    """All pairs between the first seed_count nodes and the rest.

    This is the full non-adaptive query set: a pure function of
    (n, seed_count), computable before any answer is observed.
    """
    if not 1 <= seed_count < n:
        raise ValueError(f"seed_count must lie in [1, n), got {seed_count}")
    seed = np.arange(seed_count, dtype=np.int64)
    rest = np.arange(seed_count, n, dtype=np.int64)
    lo = np.repeat(seed, rest.size)
    hi = np.tile(rest, seed.size)
    return QueryPlan.from_arrays(lo, hi, n)


def recover_from_transcript(transcript: QueryTranscript,
                            seed_count: int) -> RecoveryResult:
    """Run seed alignment plus extension against an existing transcript.

    The transcript must contain every pair between the first
    seed_count nodes and the rest; extra pairs are ignored. Reported
    query_count is the number of pairs the votes consumed,
    seed_count * (n - seed_count).
    """
    n, k = transcript.n, transcript.k
    if not 1 <= seed_count < n:
        raise ValueError(f"seed_count must lie in [1, n), got {seed_count}")
    seed = np.arange(seed_count, dtype=np.int64)
    rest = np.arange(seed_count, n, dtype=np.int64)
    labels = np.zeros(n, dtype=np.int64)
    margins = np.zeros(n, dtype=np.int64)
    mat = transcript.oriented_matrix(seed, rest)

    margins[0] = rest.size  # anchor: fixed by convention, not by vote
    if seed_count > 1:
        diffs = (mat[1:] - mat[0:1]) % k
        winners, m = _vote_rows(diffs, k)
        labels[1:seed_count] = winners
        margins[1:seed_count] = m

    ext_votes = (labels[seed][:, None] + (k - mat) % k) % k
    winners, m = _vote_rows(ext_votes.T, k)
    labels[rest] = winners
    margins[rest] = m

    return RecoveryResult(
        labeling=Labeling(labels, k),
        seed=tuple(range(seed_count)),
        query_count=seed_count * (n - seed_count),
        per_node_margin=margins,
    )


def run_algorithm1(n: int, params: NoiseParams, cfg: SeedConfig,
                   oracle: FaultyOracle) -> RecoveryResult:
    """Full non-adaptive recovery against a fresh oracle.

    Sizes the seed, issues the single batched seed-vs-rest plan, then
    reconciles the seed and extends to the rest. Total work and query
    count are both seed_count * (n - seed_count).
    """
    if oracle.n != n:
        raise ValueError(f"oracle is for n={oracle.n}, requested n={n}")
    if oracle.query_count != 0:
        raise ValueError("oracle must be fresh (no queries issued)")
    if params.k != oracle.k:
        raise ValueError(f"params.k={params.k} does not match oracle k={oracle.k}")
    s = seed_size(n, params, cfg)
    if s >= n:
        raise ValueError(f"seed size {s} leaves no rest nodes for n={n}")
    plan = seed_rest_plan(n, s)
    transcript = oracle.execute_plan(plan)
    return recover_from_transcript(transcript, s)
