"""Exact and statistical oracles for recovery experiments.

Contents:

* success scoring up to a global cyclic shift, plus a graded Hamming
  distance after the best shift;
* transcript log-likelihood of a candidate labeling and brute-force
  maximum-likelihood enumeration for tiny instances;
* the tail probability P(sum_i X_i <= 0) for i.i.d. signed votes
  (X_i = +1 with probability 1/k + delta, -1 with probability
  1/k - delta/(k-1), else 0), evaluated exactly by dynamic
  programming, estimated by Monte Carlo, and summarized by a
  regime-wise exponent fit.

The tail quantity is the failure mode of a single plurality contest:
the correct label fails to beat one fixed wrong label exactly when the
signed vote sum is <= 0. Its exponential decay rate is delta^2 * n * k
for delta <= 1/(2k) and delta * n for larger delta, up to constants,
which the fit helper checks empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    DegenerateGridError,
    DegenerateLikelihoodError,
    DimensionMismatchError,
    InstanceTooLargeError,
    Labeling,
    NoiseParams,
    QueryTranscript,
    RegimeMixingError,
)

_MLE_ENUMERATION_LIMIT = 10**7
_DP_VOTE_LIMIT = 10**5
_Z_99 = 2.5758293035489004  # two-sided 99% normal quantile


def _check_same_shape(estimate: Labeling, truth: Labeling) -> None:
    if estimate.n != truth.n or estimate.k != truth.k:
        raise DimensionMismatchError(
            f"labelings disagree: (n={estimate.n}, k={estimate.k}) vs "
            f"(n={truth.n}, k={truth.k})"
        )


def recover_success(estimate: Labeling, truth: Labeling) -> bool:
    """True iff estimate equals truth plus some global shift mod k."""
    _check_same_shape(estimate, truth)
    offset = (estimate.labels - truth.labels) % truth.k
    return bool(np.all(offset == offset[0]))


def hamming_after_best_shift(estimate: Labeling, truth: Labeling) -> int:
    """Minimum number of mismatched nodes over all global shifts."""
    _check_same_shape(estimate, truth)
    offset = (estimate.labels - truth.labels) % truth.k
    counts = np.bincount(offset, minlength=truth.k)
    return int(truth.n - counts.max())


@dataclass(frozen=True)
class LikelihoodSplit:
    """Edge counts splitting a transcript against a candidate labeling:
    agree edges have zero residual noise, disagree edges do not."""

    agree: int
    disagree: int


def likelihood_split(transcript: QueryTranscript, g: Labeling) -> LikelihoodSplit:
    """Count transcript pairs whose answer matches the labeling's difference."""
    if g.n != transcript.n or g.k != transcript.k:
        raise DimensionMismatchError(
            f"labeling (n={g.n}, k={g.k}) does not fit transcript "
            f"(n={transcript.n}, k={transcript.k})"
        )
    if len(transcript) == 0:
        return LikelihoodSplit(0, 0)
    residual = (g.labels[transcript._lo] - g.labels[transcript._hi]
                - transcript._ans) % g.k
    agree = int(np.count_nonzero(residual == 0))
    return LikelihoodSplit(agree, len(transcript) - agree)


def log_likelihood(transcript: QueryTranscript, g: Labeling,
                   params: NoiseParams) -> float:
    """Log-probability of the transcript's answers given the labeling.

    Equals agree * ln(1/k + delta) + disagree * ln(1/k - delta/(k-1)).
    At the extreme delta = (k-1)/k a disagreeing edge has probability
    zero; that case raises instead of silently returning -inf.
    """
    split = likelihood_split(transcript, g)
    if split.disagree and params.p_nonzero <= 0.0:
        raise DegenerateLikelihoodError(
            f"{split.disagree} edges disagree but delta={params.delta:g} "
            "makes disagreement impossible"
        )
    out = split.agree * math.log(params.p_zero)
    if split.disagree:
        out += split.disagree * math.log(params.p_nonzero)
    return out


def _labels_for_ids(ids: np.ndarray, node: int, k: int) -> np.ndarray:
    # node 0 is pinned to label 0; nodes 1.. are mixed-radix digits of the id
    if node == 0:
        return np.zeros(ids.size, dtype=np.int64)
    return (ids // k ** (node - 1)) % k


def brute_force_mle(transcript: QueryTranscript, n: int,
                    params: NoiseParams) -> list[Labeling]:
    """All maximum-likelihood labelings with node 0 pinned to label 0.

    Enumerates the k^(n-1) candidates in deterministic (mixed-radix)
    order. Because delta > 0 makes the log-likelihood strictly
    increasing in the agree count, candidates are ranked by their
    integer agree counts, which sidesteps float ties entirely.
    """
    k = params.k
    if n != transcript.n or k != transcript.k:
        raise DimensionMismatchError(
            f"(n={n}, k={k}) does not fit transcript "
            f"(n={transcript.n}, k={transcript.k})"
        )
    total = k ** (n - 1)
    if total > _MLE_ENUMERATION_LIMIT:
        raise InstanceTooLargeError(
            f"k^(n-1) = {total} exceeds the enumeration guard "
            f"{_MLE_ENUMERATION_LIMIT}"
        )
    pairs = list(transcript.items())
    best_agree = -1
    best_ids: list[np.ndarray] = []
    chunk = 1 << 20
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        agree = np.zeros(ids.size, dtype=np.int64)
        for i, j, a in pairs:
            li = _labels_for_ids(ids, i, k)
            lj = _labels_for_ids(ids, j, k)
            agree += (li - lj - a) % k == 0
        top = int(agree.max()) if ids.size else -1
        if top > best_agree:
            best_agree = top
            best_ids = [ids[agree == top]]
        elif top == best_agree:
            best_ids.append(ids[agree == top])
    winners = np.concatenate(best_ids)
    out = []
    for ident in winners.tolist():
        labels = [0] + [(ident // k**d) % k for d in range(n - 1)]
        out.append(Labeling(labels, k))
    return out


@dataclass(frozen=True)
class TailSpec:
    """A tail-probability instance: vote_count i.i.d. signed votes with
    the given noise parameters."""

    vote_count: int
    params: NoiseParams

    def __post_init__(self):
        if self.vote_count < 1:
            raise ValueError(f"vote_count must be >= 1, got {self.vote_count}")


def vote_probabilities(params: NoiseParams) -> tuple[float, float, float]:
    """(P[X=+1], P[X=-1], P[X=0]) for one signed vote."""
    up = params.p_zero
    down = params.p_nonzero
    zero = (params.k - 2) * params.p_nonzero
    return up, down, zero


def tail_probability_exact(spec: TailSpec) -> float:
    """Exact P(sum of signed votes <= 0) by convolution over {-n, ..., n}.

    Float accumulation error is O(vote_count * machine epsilon); the
    test suite pins agreement with exact rational enumeration to 1e-12
    at small sizes.
    """
    n = spec.vote_count
    if n > _DP_VOTE_LIMIT:
        raise InstanceTooLargeError(
            f"vote_count {n} exceeds the dynamic-programming guard {_DP_VOTE_LIMIT}"
        )
    up, down, zero = vote_probabilities(spec.params)
    dist = np.zeros(2 * n + 1)
    dist[n] = 1.0  # sum s lives at index s + n
    for _ in range(n):
        nxt = zero * dist
        nxt[1:] += up * dist[:-1]
        nxt[:-1] += down * dist[1:]
        dist = nxt
    return float(dist[: n + 1].sum())


class TailEstimate(NamedTuple):
    """Monte Carlo tail estimate with a 99% normal half-width."""

    value: float
    half_width: float


def tail_probability_mc(spec: TailSpec, trials: int,
                        rng: np.random.Generator) -> TailEstimate:
    """Monte Carlo estimate of P(sum of signed votes <= 0).

    Samples the sufficient statistic (#up, #down) per trial from the
    trinomial law rather than individual votes; the event {sum <= 0}
    has identical distribution either way.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    pv = np.asarray(vote_probabilities(spec.params))
    pv = pv / pv.sum()  # renormalize away float round-off for multinomial
    counts = rng.multinomial(spec.vote_count, pv, size=trials)
    hits = counts[:, 0] <= counts[:, 1]
    value = float(np.mean(hits))
    half_width = _Z_99 * math.sqrt(value * (1.0 - value) / trials)
    return TailEstimate(value, half_width)


def tail_regime(params: NoiseParams) -> str:
    """'small' when delta <= 1/(2k), else 'large'."""
    return "small" if params.delta <= 1.0 / (2 * params.k) else "large"


def tail_predictor(spec: TailSpec) -> float:
    """Regime predictor: delta^2 * n * k (small) or delta * n (large)."""
    p = spec.params
    if tail_regime(p) == "small":
        return p.delta**2 * spec.vote_count * p.k
    return p.delta * spec.vote_count


@dataclass(frozen=True)
class TailFit:
    """Least-squares fit of -ln(tail) against the regime predictor."""

    slope: float
    intercept: float
    r_squared: float
    regime: str
    predictors: tuple[float, ...]
    neg_log_tails: tuple[float, ...]


def fit_tail_exponent(specs: Sequence[TailSpec],
                      tails: Sequence[float] | None = None) -> TailFit:
    """Fit -ln(tail) = slope * predictor + intercept over a spec grid.

    All specs must fall in one bias regime; tails default to the exact
    dynamic-programming values and must lie strictly in (0, 1).
    """
    specs = list(specs)
    if len(specs) < 5:
        raise ValueError(f"need at least 5 grid points to fit, got {len(specs)}")
    regimes = {tail_regime(s.params) for s in specs}
    if len(regimes) != 1:
        raise RegimeMixingError(
            "grid straddles the delta = 1/(2k) regime boundary"
        )
    regime = regimes.pop()
    if tails is None:
        tails = [tail_probability_exact(s) for s in specs]
    tails = [float(t) for t in tails]
    if any(not 0.0 < t < 1.0 for t in tails):
        raise ValueError("all tail probabilities must lie strictly in (0, 1)")
    x = np.asarray([tail_predictor(s) for s in specs])
    y = -np.log(tails)
    if np.ptp(x) == 0.0:
        raise DegenerateGridError("predictor is constant across the grid")
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 0.0
    return TailFit(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        r_squared=r_squared,
        regime=regime,
        predictors=tuple(float(v) for v in x),
        neg_log_tails=tuple(float(v) for v in y),
    )
