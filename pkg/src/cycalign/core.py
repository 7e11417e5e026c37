"""Domain types for cyclic-label alignment.

A problem instance assigns each of n nodes a label in {0, ..., k-1}.
Observations are noisy differences (label(i) - label(j)) mod k for
unordered node pairs {i, j}; each pair can be observed at most once.
Labels are therefore only identifiable up to a global cyclic shift.

Conventions used throughout the package:

* nodes are dense integer indices 0 .. n-1;
* every unordered pair is stored under its canonical orientation
  (i, j) with i < j, and the reversed reading is the negation mod k;
* all mod-k arithmetic is on non-negative residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class MissingPairError(KeyError):
    """A pair was read from a transcript that never answered it."""


class RepeatQueryError(ValueError):
    """An unordered pair was queried more than once."""


class IdentityPairError(ValueError):
    """A pair (x, x) was used where two distinct nodes are required."""


class DimensionMismatchError(ValueError):
    """Two labelings with different n or k were compared."""


class InstanceTooLargeError(ValueError):
    """An exhaustive computation was requested beyond its size guard."""


class DegenerateLikelihoodError(ValueError):
    """Likelihood evaluation hit a zero-probability observation."""


class RegimeMixingError(ValueError):
    """A tail-exponent fit mixed small-bias and large-bias grid points."""


class DegenerateGridError(ValueError):
    """A fit was requested on a grid with no predictor variation."""


@dataclass(frozen=True)
class NoiseParams:
    """Parameters (k, delta) of the zero-biased noise law.

    A noise draw equals 0 with probability 1/k + delta and equals each
    of the k-1 nonzero values with probability 1/k - delta/(k-1).
    Validity requires 0 < delta <= (k-1)/k so all masses are in [0, 1].
    """

    k: int
    delta: float

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")
        d = float(self.delta)
        if not (0.0 < d <= (self.k - 1) / self.k):
            raise ValueError(
                f"delta must lie in (0, (k-1)/k] = (0, {(self.k - 1) / self.k:g}], got {d!r}"
            )
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "delta", d)

    @property
    def p_zero(self) -> float:
        """Probability that a noise draw is 0."""
        return 1.0 / self.k + self.delta

    @property
    def p_nonzero(self) -> float:
        """Probability of each individual nonzero noise value."""
        return 1.0 / self.k - self.delta / (self.k - 1)


class Labeling:
    """An assignment of each of n nodes to a label in {0, ..., k-1}."""

    __slots__ = ("labels", "k")

    def __init__(self, labels: Sequence[int] | np.ndarray, k: int):
        arr = np.asarray(labels, dtype=np.int64).copy()
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("a labeling needs a 1-d sequence of at least 2 labels")
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        if arr.min() < 0 or arr.max() >= k:
            raise ValueError(f"labels must lie in [0, {k}), got range "
                             f"[{arr.min()}, {arr.max()}]")
        arr.flags.writeable = False
        self.labels = arr
        self.k = int(k)

    @property
    def n(self) -> int:
        return self.labels.size

    def __len__(self) -> int:
        return self.labels.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Labeling):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.labels, other.labels)

    def __repr__(self) -> str:
        return f"Labeling({self.labels.tolist()}, k={self.k})"


def shift_labeling(g: Labeling, alpha: int) -> Labeling:
    """Add the cyclic shift alpha to every label, mod k."""
    if not 0 <= alpha < g.k:
        raise ValueError(f"shift must lie in [0, {g.k}), got {alpha}")
    return Labeling((g.labels + alpha) % g.k, g.k)


def canonical_pair(x: int, y: int) -> tuple[int, int]:
    """Return the unordered pair {x, y} as (min, max); rejects x == y."""
    if x == y:
        raise IdentityPairError(f"pair ({x}, {y}) has identical endpoints")
    return (x, y) if x < y else (y, x)


def _encode_pairs(lo: np.ndarray, hi: np.ndarray, n: int) -> np.ndarray:
    return lo.astype(np.int64) * np.int64(n) + hi.astype(np.int64)


def _validate_pair_arrays(lo: np.ndarray, hi: np.ndarray, n: int) -> None:
    if lo.size and (lo.min() < 0 or hi.max() >= n):
        raise ValueError(f"pair endpoints must lie in [0, {n})")
    if np.any(lo >= hi):
        bad = int(np.argmax(lo >= hi))
        raise IdentityPairError(
            f"pair ({int(lo[bad])}, {int(hi[bad])}) is not in canonical i < j form"
        )


class QueryPlan:
    """A set of unordered node pairs scheduled for querying.

    Pairs are stored canonically oriented and deduplicated; iteration
    order is sorted by (i, j) so plans are deterministic objects.
    """

    __slots__ = ("n", "lo", "hi")

    def __init__(self, pairs: Iterable[tuple[int, int]], n: int):
        canon = [canonical_pair(x, y) for x, y in pairs]
        if canon:
            arr = np.asarray(canon, dtype=np.int64)
            lo, hi = arr[:, 0], arr[:, 1]
        else:
            lo = hi = np.empty(0, dtype=np.int64)
        _validate_pair_arrays(lo, hi, n)
        # np.unique also sorts, giving a canonical iteration order
        _, idx = np.unique(_encode_pairs(lo, hi, n), return_index=True)
        self.n = int(n)
        self.lo = np.ascontiguousarray(lo[idx])
        self.hi = np.ascontiguousarray(hi[idx])
        self.lo.flags.writeable = False
        self.hi.flags.writeable = False

    @classmethod
    def from_arrays(cls, lo: np.ndarray, hi: np.ndarray, n: int) -> "QueryPlan":
        plan = cls.__new__(cls)
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        _validate_pair_arrays(lo, hi, n)
        enc = _encode_pairs(lo, hi, n)
        if np.unique(enc).size != enc.size:
            raise ValueError("plan contains duplicate pairs")
        srt = np.argsort(enc)
        plan.n = int(n)
        plan.lo = lo[srt]
        plan.hi = hi[srt]
        plan.lo.flags.writeable = False
        plan.hi.flags.writeable = False
        return plan

    def __len__(self) -> int:
        return self.lo.size

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return zip(self.lo.tolist(), self.hi.tolist())

    def __contains__(self, pair: tuple[int, int]) -> bool:
        lo, hi = canonical_pair(*pair)
        enc = _encode_pairs(self.lo, self.hi, self.n)
        pos = np.searchsorted(enc, lo * self.n + hi)
        return bool(pos < enc.size and enc[pos] == lo * self.n + hi)


class QueryTranscript:
    """Immutable record of answered pairwise-difference queries.

    Each unordered pair appears at most once, keyed by its canonical
    orientation (i, j) with i < j; the stored answer lies in [0, k).
    Reading a pair against its orientation negates the answer mod k,
    so both directions reflect a single underlying noise draw.
    """

    __slots__ = ("n", "k", "_enc", "_ans", "_lo", "_hi", "_dict")

    def __init__(self, n: int, k: int,
                 lo: np.ndarray | Sequence[int],
                 hi: np.ndarray | Sequence[int],
                 answers: np.ndarray | Sequence[int]):
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        ans = np.ascontiguousarray(answers, dtype=np.int64)
        if not (lo.size == hi.size == ans.size):
            raise ValueError("lo, hi and answers must have equal length")
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        _validate_pair_arrays(lo, hi, n)
        if ans.size and (ans.min() < 0 or ans.max() >= k):
            raise ValueError(f"answers must lie in [0, {k})")
        enc = _encode_pairs(lo, hi, n)
        srt = np.argsort(enc)
        enc = enc[srt]
        if enc.size > 1 and np.any(enc[1:] == enc[:-1]):
            raise RepeatQueryError("transcript contains a duplicated pair")
        self.n = int(n)
        self.k = int(k)
        self._enc = enc
        self._lo = lo[srt]
        self._hi = hi[srt]
        self._ans = ans[srt]
        for a in (self._enc, self._lo, self._hi, self._ans):
            a.flags.writeable = False
        self._dict = None

    def __len__(self) -> int:
        return self._enc.size

    def __contains__(self, pair: tuple[int, int]) -> bool:
        lo, hi = canonical_pair(*pair)
        pos = np.searchsorted(self._enc, lo * self.n + hi)
        return bool(pos < self._enc.size and self._enc[pos] == lo * self.n + hi)

    @property
    def answers(self) -> dict[tuple[int, int], int]:
        """Mapping from canonical pair (i, j) to the stored answer."""
        if self._dict is None:
            self._dict = dict(zip(zip(self._lo.tolist(), self._hi.tolist()),
                                  self._ans.tolist()))
        return self._dict

    def items(self) -> Iterator[tuple[int, int, int]]:
        """Yield (i, j, answer) triples in sorted (i, j) order."""
        return zip(self._lo.tolist(), self._hi.tolist(), self._ans.tolist())

    def lookup_oriented(self, x: int, y: int) -> int:
        """Answer for the ordered read (x, y): stored value if x < y,
        its negation mod k if x > y."""
        lo, hi = canonical_pair(x, y)
        pos = np.searchsorted(self._enc, lo * self.n + hi)
        if pos >= self._enc.size or self._enc[pos] != lo * self.n + hi:
            raise MissingPairError(f"pair ({lo}, {hi}) was never queried")
        a = int(self._ans[pos])
        return a if x < y else (self.k - a) % self.k

    def oriented_matrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Matrix of oriented answers, entry [r, c] = answer read as (row, col).

        Raises MissingPairError if any required pair is absent and
        IdentityPairError if a row and column index coincide.
        """
        r = np.asarray(rows, dtype=np.int64)
        c = np.asarray(cols, dtype=np.int64)
        R = r[:, None]
        C = c[None, :]
        if np.any(R == C):
            raise IdentityPairError("row and column node sets overlap")
        lo = np.minimum(R, C)
        hi = np.maximum(R, C)
        enc = lo * np.int64(self.n) + hi
        if self._enc.size == 0:
            if enc.size:
                raise MissingPairError(
                    f"pair ({int(lo.flat[0])}, {int(hi.flat[0])}) was never queried"
                )
            return np.zeros(enc.shape, dtype=np.int64)
        pos = np.searchsorted(self._enc, enc)
        pos_c = np.minimum(pos, self._enc.size - 1)
        found = self._enc[pos_c] == enc
        if not np.all(found):
            i, j = np.argwhere(~found)[0]
            raise MissingPairError(
                f"pair ({int(lo[i, j])}, {int(hi[i, j])}) was never queried"
            )
        out = self._ans[pos_c].copy()
        flip = R > C
        out[flip] = (self.k - out[flip]) % self.k
        return out

    def to_text(self) -> str:
        """Serialize as a header line ``k=<k>,n=<n>`` then ``i,j,answer`` lines."""
        lines = [f"k={self.k},n={self.n}"]
        lines.extend(f"{i},{j},{a}" for i, j, a in self.items())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QueryTranscript":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty transcript text")
        header = lines[0]
        try:
            k_part, n_part = header.split(",")
            k = int(k_part.removeprefix("k="))
            n = int(n_part.removeprefix("n="))
            if not (header.startswith("k=") and n_part.startswith("n=")):
                raise ValueError
        except ValueError:
            raise ValueError(f"malformed transcript header: {header!r}") from None
        triples = []
        for ln in lines[1:]:
            i_s, j_s, a_s = ln.split(",")
            triples.append((int(i_s), int(j_s), int(a_s)))
        if triples:
            arr = np.asarray(triples, dtype=np.int64)
            return cls(n, k, arr[:, 0], arr[:, 1], arr[:, 2])
        return cls(n, k, [], [], [])


def lookup_oriented(transcript: QueryTranscript, x: int, y: int) -> int:
    """Oriented read of the unordered pair {x, y} from a transcript."""
    return transcript.lookup_oriented(x, y)
