"""Experiment engine: trials, parameter sweeps, and verification reports.

Every random choice descends from explicit 64-bit seeds through a
stable hash, so any run is reproducible from its configuration alone:
trial seeds are base_seed XOR blake2b(cell, trial index), independent
of sweep ordering or parallel scheduling.

Failed recovery is data (a zero in the success column); an exception
inside a trial is a bug and aborts the sweep with cell context.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .analysis import (
    TailFit,
    TailSpec,
    brute_force_mle,
    fit_tail_exponent,
    hamming_after_best_shift,
    recover_success,
    tail_predictor,
    tail_probability_exact,
    tail_probability_mc,
    tail_regime,
)
from .core import Labeling, NoiseParams, QueryPlan, RegimeMixingError
from .oracle import FaultyOracle
from .recovery import (
    RecoveryResult,
    SeedConfig,
    recover_from_transcript,
    run_algorithm1,
    seed_size,
)

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1

CSV_HEADER = ("n,k,delta,constant_c,seed_size,query_count,"
              "trials,successes,mean_hamming,wall_time_seconds")


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class SweepConfig:
    """Grid specification for a parameter sweep."""

    n_values: tuple[int, ...]
    k_values: tuple[int, ...]
    delta_values: tuple[float, ...]
    constant_c_values: tuple[float, ...] = (40.0,)
    trials: int = 100
    base_seed: int = 0
    budget_scale: float | None = None

    def __post_init__(self):
        for name in ("n_values", "k_values", "delta_values", "constant_c_values"):
            vals = tuple(getattr(self, name))
            if not vals:
                raise ConfigError(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.budget_scale is not None and not self.budget_scale > 0:
            raise ConfigError(
                f"budget_scale must be positive, got {self.budget_scale}"
            )
        object.__setattr__(self, "base_seed", int(self.base_seed) & _MASK64)


@dataclass(frozen=True)
class ExperimentRecord:
    """One sweep cell: parameters, outcome counts, and timing."""

    n: int
    k: int
    delta: float
    constant_c: float
    seed_size: int
    query_count: int
    trials: int
    successes: int
    mean_hamming: float
    wall_time_seconds: float


class TrialOutcome(NamedTuple):
    success: bool
    hamming: int
    query_count: int


def _hash64(payload: str) -> int:
    digest = hashlib.blake2b(payload.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_trial_seed(base_seed: int, cell: tuple, trial_index: int) -> int:
    """base_seed XOR a stable hash of (cell, trial index)."""
    payload = "|".join(repr(part) for part in (*cell, trial_index))
    return (int(base_seed) ^ _hash64(payload)) & _MASK64


def _substream(seed: int, tag: str) -> int:
    return _hash64(f"{seed}:{tag}")


def sample_truth(n: int, k: int, rng: np.random.Generator) -> Labeling:
    """Uniform ground truth with node 0 pinned to label 0."""
    labels = rng.integers(0, k, size=n)
    labels[0] = 0
    return Labeling(labels, k)


def _effective_config(n: int, params: NoiseParams, cfg: SeedConfig,
                      budget_scale: float | None) -> SeedConfig:
    if budget_scale is None or budget_scale == 1.0:
        return cfg
    base = seed_size(n, params, cfg)
    scaled = max(1, min(n // 2, math.ceil(budget_scale * base)))
    return replace(cfg, explicit_size=scaled)


def run_trial_detailed(
        n: int, params: NoiseParams, cfg: SeedConfig, trial_seed: int,
        budget_scale: float | None = None, noiseless: bool = False,
) -> tuple[Labeling, RecoveryResult, TrialOutcome]:
    """One end-to-end trial, returning the hidden truth and the full
    recovery result alongside the scored outcome."""
    truth = sample_truth(n, params.k,
                         np.random.default_rng(_substream(trial_seed, "truth")))
    oracle = FaultyOracle(truth, params, _substream(trial_seed, "oracle"),
                          noiseless=noiseless)
    eff_cfg = _effective_config(n, params, cfg, budget_scale)
    result = run_algorithm1(n, params, eff_cfg, oracle)
    outcome = TrialOutcome(
        success=recover_success(result.labeling, truth),
        hamming=hamming_after_best_shift(result.labeling, truth),
        query_count=result.query_count,
    )
    return truth, result, outcome


def run_trial(n: int, params: NoiseParams, cfg: SeedConfig, trial_seed: int,
              budget_scale: float | None = None,
              noiseless: bool = False) -> TrialOutcome:
    """One end-to-end trial: sample truth, query, recover, score."""
    return run_trial_detailed(n, params, cfg, trial_seed,
                              budget_scale=budget_scale,
                              noiseless=noiseless)[2]


def _cell_is_valid(n: int, k: int, delta: float, constant_c: float) -> str | None:
    """None when the cell is runnable, else the reason to skip it."""
    if n < 4:
        return f"n={n} is below the minimum instance size 4"
    if k < 2:
        return f"k={k} is below 2"
    if not 0.0 < delta <= (k - 1) / k:
        return f"delta={delta:g} outside (0, {(k - 1) / k:g}] for k={k}"
    if not constant_c > 0:
        return f"constant_c={constant_c:g} is not positive"
    return None


def run_sweep(config: SweepConfig, noiseless: bool = False) -> list[ExperimentRecord]:
    """One ExperimentRecord per valid (n, k, delta, constant_c) cell.

    Invalid cells are skipped with a logged reason; trial errors abort
    with the offending cell in the exception chain. Deterministic for
    a fixed config (timing column aside).
    """
    records = []
    grid = itertools.product(config.n_values, config.k_values,
                             config.delta_values, config.constant_c_values)
    for n, k, delta, constant_c in grid:
        reason = _cell_is_valid(n, k, delta, constant_c)
        if reason is not None:
            logger.warning("skipping cell (n=%s, k=%s, delta=%s, c=%s): %s",
                           n, k, delta, constant_c, reason)
            continue
        params = NoiseParams(k, delta)
        cfg = SeedConfig(constant_c=constant_c)
        eff_cfg = _effective_config(n, params, cfg, config.budget_scale)
        cell_seed_size = seed_size(n, params, eff_cfg)
        cell = (n, k, delta, constant_c, config.budget_scale)
        start = time.perf_counter()
        successes = 0
        hamming_total = 0
        query_count = cell_seed_size * (n - cell_seed_size)
        for t in range(config.trials):
            trial_seed = derive_trial_seed(config.base_seed, cell, t)
            try:
                outcome = run_trial(n, params, cfg, trial_seed,
                                    budget_scale=config.budget_scale,
                                    noiseless=noiseless)
            except Exception as exc:
                raise RuntimeError(
                    f"trial {t} of cell (n={n}, k={k}, delta={delta}, "
                    f"c={constant_c}) failed"
                ) from exc
            successes += outcome.success
            hamming_total += outcome.hamming
            query_count = outcome.query_count
        records.append(ExperimentRecord(
            n=n, k=k, delta=float(delta), constant_c=float(constant_c),
            seed_size=cell_seed_size, query_count=query_count,
            trials=config.trials, successes=successes,
            mean_hamming=hamming_total / config.trials,
            wall_time_seconds=time.perf_counter() - start,
        ))
    return records


def records_to_csv(records: Sequence[ExperimentRecord],
                   include_timing: bool = True) -> str:
    """Render records in the fixed CSV schema.

    Wall-clock time is inherently nondeterministic; pass
    include_timing=False to zero that column when byte-identical
    output across reruns is required.
    """
    lines = [CSV_HEADER]
    for r in records:
        wall = r.wall_time_seconds if include_timing else 0.0
        lines.append(
            f"{r.n},{r.k},{r.delta!r},{r.constant_c!r},{r.seed_size},"
            f"{r.query_count},{r.trials},{r.successes},"
            f"{float(r.mean_hamming)!r},{wall:.6f}"
        )
    return "\n".join(lines) + "\n"


def records_to_json(records: Sequence[ExperimentRecord],
                    include_timing: bool = True) -> str:
    rows = []
    for r in records:
        row = {
            "n": r.n, "k": r.k, "delta": r.delta, "constant_c": r.constant_c,
            "seed_size": r.seed_size, "query_count": r.query_count,
            "trials": r.trials, "successes": r.successes,
            "mean_hamming": float(r.mean_hamming),
            "wall_time_seconds": r.wall_time_seconds if include_timing else 0.0,
        }
        rows.append(row)
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class LemmaPoint:
    """One grid point of a tail verification run."""

    vote_count: int
    k: int
    delta: float
    regime: str
    predictor: float
    exact_tail: float
    mc_tail: float
    mc_half_width: float


@dataclass(frozen=True)
class LemmaCheckReport:
    """Exact-vs-Monte-Carlo tail table plus the regime exponent fit
    (present once the grid has at least 5 points)."""

    points: tuple[LemmaPoint, ...]
    fit: TailFit | None
    trials: int


def run_lemma_check(specs: Sequence[TailSpec], trials: int,
                    base_seed: int = 0) -> LemmaCheckReport:
    """Evaluate each spec exactly and by Monte Carlo; fit the exponent.

    The grid must sit in a single bias regime. With fewer than 5
    points the report carries no fit.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one tail spec")
    if len({tail_regime(s.params) for s in specs}) != 1:
        raise RegimeMixingError("grid straddles the delta = 1/(2k) regime boundary")
    points = []
    exact_tails = []
    for idx, spec in enumerate(specs):
        exact = tail_probability_exact(spec)
        rng = np.random.default_rng(
            _substream(derive_trial_seed(base_seed, ("lemma", idx), 0), "mc"))
        mc = tail_probability_mc(spec, trials, rng)
        exact_tails.append(exact)
        points.append(LemmaPoint(
            vote_count=spec.vote_count, k=spec.params.k,
            delta=spec.params.delta, regime=tail_regime(spec.params),
            predictor=tail_predictor(spec), exact_tail=exact,
            mc_tail=mc.value, mc_half_width=mc.half_width,
        ))
    fit = None
    if len(specs) >= 5:
        fit = fit_tail_exponent(specs, tails=exact_tails)
    return LemmaCheckReport(points=tuple(points), fit=fit, trials=trials)


def lemma_report_to_text(report: LemmaCheckReport) -> str:
    lines = [
        f"{'votes':>7} {'k':>3} {'delta':>8} {'predictor':>11} "
        f"{'exact':>12} {'mc':>12} {'half_width':>11}"
    ]
    for p in report.points:
        lines.append(
            f"{p.vote_count:>7} {p.k:>3} {p.delta:>8g} {p.predictor:>11.5g} "
            f"{p.exact_tail:>12.6g} {p.mc_tail:>12.6g} {p.mc_half_width:>11.3g}"
        )
    if report.fit is not None:
        f = report.fit
        lines.append(
            f"fit ({f.regime} regime): -ln(tail) ~= {f.slope:.5g} * predictor "
            f"+ {f.intercept:.5g}, R^2 = {f.r_squared:.5f}"
        )
    else:
        lines.append("fit: not computed (needs at least 5 grid points)")
    return "\n".join(lines) + "\n"


def lemma_report_to_json(report: LemmaCheckReport) -> str:
    payload = {
        "trials": report.trials,
        "points": [
            {
                "vote_count": p.vote_count, "k": p.k, "delta": p.delta,
                "regime": p.regime, "predictor": p.predictor,
                "exact_tail": p.exact_tail, "mc_tail": p.mc_tail,
                "mc_half_width": p.mc_half_width,
            }
            for p in report.points
        ],
        "fit": None if report.fit is None else {
            "slope": report.fit.slope, "intercept": report.fit.intercept,
            "r_squared": report.fit.r_squared, "regime": report.fit.regime,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def lemma_report_to_csv(report: LemmaCheckReport) -> str:
    lines = ["vote_count,k,delta,regime,predictor,exact_tail,mc_tail,mc_half_width"]
    for p in report.points:
        lines.append(
            f"{p.vote_count},{p.k},{p.delta!r},{p.regime},{p.predictor!r},"
            f"{p.exact_tail!r},{p.mc_tail!r},{p.mc_half_width!r}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MleComparisonReport:
    """Agreement of the vote-based recovery with exhaustive maximum
    likelihood on full pairwise transcripts."""

    trials: int
    agreements: int
    nonunique_mle: int

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.trials


def full_pairwise_plan(n: int) -> QueryPlan:
    lo, hi = np.triu_indices(n, k=1)
    return QueryPlan.from_arrays(lo.astype(np.int64), hi.astype(np.int64), n)


def run_mle_comparison(n: int, params: NoiseParams, trials: int,
                       base_seed: int = 0,
                       cfg: SeedConfig = SeedConfig(),
                       noiseless: bool = False) -> MleComparisonReport:
    """Compare vote-based recovery against brute-force ML labelings.

    Each trial answers every pair once; the vote-based recovery reads
    only its seed-vs-rest block of that transcript while the
    enumeration sees all pairs. Agreement means the shift-normalized
    recovery output is one of the maximum-likelihood labelings.
    Restricted to n <= 8, k <= 3 to keep enumeration exhaustive.
    """
    if n > 8 or params.k > 3:
        raise ValueError(f"comparison supports n <= 8 and k <= 3, "
                         f"got n={n}, k={params.k}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    plan = full_pairwise_plan(n)
    agreements = 0
    nonunique = 0
    for t in range(trials):
        trial_seed = derive_trial_seed(
            base_seed, ("mle", n, params.k, params.delta), t)
        truth = sample_truth(n, params.k,
                             np.random.default_rng(_substream(trial_seed, "truth")))
        oracle = FaultyOracle(truth, params, _substream(trial_seed, "oracle"),
                              noiseless=noiseless)
        transcript = oracle.execute_plan(plan)
        s = seed_size(n, params, cfg)
        result = recover_from_transcript(transcript, s)
        normalized = Labeling(
            (result.labeling.labels - result.labeling.labels[0]) % params.k,
            params.k)
        candidates = brute_force_mle(transcript, n, params)
        nonunique += len(candidates) > 1
        agreements += any(normalized == c for c in candidates)
    return MleComparisonReport(trials=trials, agreements=agreements,
                               nonunique_mle=nonunique)


_LIST_FIELDS = {"n_values", "k_values", "delta_values", "constant_c_values"}
_INT_FIELDS = {"trials", "base_seed"}
_FLOAT_FIELDS = {"budget_scale"}


def parse_config_file(path: str) -> dict:
    """Read a flat key=value sweep configuration file.

    Recognized keys mirror SweepConfig; list values are comma
    separated, '#' starts a comment.
    """
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                if key in _LIST_FIELDS:
                    cast = int if key in ("n_values", "k_values") else float
                    out[key] = tuple(cast(v) for v in value.split(",") if v.strip())
                elif key in _INT_FIELDS:
                    out[key] = int(value)
                elif key in _FLOAT_FIELDS:
                    out[key] = float(value)
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigError(
                    f"{path}:{lineno}: bad value for {key!r}: {value!r}"
                ) from exc
    return out
