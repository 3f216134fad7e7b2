"""Segmented odd-only sieve of Eratosthenes over half-open ranges [lo, hi).

Primes come back as int64 numpy arrays; hi is capped at 2**52 by default so
that p*p and every offset stay comfortably inside int64.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .config import limits
from .digits import System, as_system, digit_sums
from .errors import DomainError, ResourceLimitError

DEFAULT_SEGMENT_SIZE = 1 << 21
_MIN_SEGMENT_SIZE = 1 << 4

# Base primes are processed in chunks of growing size so that short ranges
# whose every element is already struck can stop early.
_FIRST_CHUNK = 256

_base_table: np.ndarray = np.array([2, 3, 5, 7], dtype=np.int64)
_base_limit: int = 10


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    odd = np.ones((limit - 1) // 2 + 1, dtype=bool)  # odd[i] <-> 2i + 1
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    return np.concatenate(([2], 2 * np.flatnonzero(odd) + 1)).astype(np.int64)


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit, from a table that only ever grows."""
    global _base_table, _base_limit
    if limit > _base_limit:
        new_limit = max(limit, 2 * _base_limit)
        _base_table = _simple_sieve(new_limit)
        _base_limit = new_limit
    return _base_table[: np.searchsorted(_base_table, limit, side="right")]


@dataclass(frozen=True)
class PrimeRange:
    lo: int
    hi: int

    def __post_init__(self):
        lo, hi = int(self.lo), int(self.hi)
        if lo < 0:
            raise DomainError("lo must be >= 0")
        if lo >= hi:
            raise DomainError(f"empty range [{lo}, {hi})")
        cap = limits().max_hi
        if hi > cap:
            raise ResourceLimitError(f"hi={hi} exceeds sieve cap {cap} (PRIMEDIGITS_MAX_HI)")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __len__(self) -> int:
        return self.hi - self.lo


def _as_range(rng: PrimeRange | tuple[int, int]) -> PrimeRange:
    return rng if isinstance(rng, PrimeRange) else PrimeRange(*rng)


def _sieve_segment(s: int, e: int, primes: np.ndarray) -> np.ndarray:
    """Primes in [s, e) given every odd prime up to sqrt(e - 1)."""
    o0 = s | 1
    n_odd = (e - o0 + 1) // 2 if e > o0 else 0
    out = [np.array([2], dtype=np.int64)] if s <= 2 < e else []
    if n_odd <= 0:
        return out[0] if out else np.zeros(0, dtype=np.int64)
    mask = np.ones(n_odd, dtype=bool)
    if o0 == 1:
        mask[0] = False

    start_idx, chunk = 0, _FIRST_CHUNK
    while start_idx < len(primes):
        P = primes[start_idx : start_idx + chunk]
        start_idx += chunk
        chunk *= 4
        starts = np.maximum(P * P, -(-o0 // P) * P)
        starts += P * (starts % 2 == 0)
        sel = starts < e
        for p, off in zip(P[sel].tolist(), ((starts[sel] - o0) // 2).tolist()):
            mask[off::p] = False
        if n_odd < 64 and not mask.any():
            break
    out.append(o0 + 2 * np.flatnonzero(mask).astype(np.int64))
    return np.concatenate(out) if len(out) > 1 else out[0]


def iter_segments(
    rng: PrimeRange | tuple[int, int], segment_size: int = DEFAULT_SEGMENT_SIZE
) -> Iterator[np.ndarray]:
    """Yield the primes of ``rng`` one segment at a time, in ascending order."""
    rng = _as_range(rng)
    if segment_size < _MIN_SEGMENT_SIZE or segment_size % 2:
        raise DomainError(f"segment size must be even and >= {_MIN_SEGMENT_SIZE}")
    primes = base_primes(math.isqrt(rng.hi - 1))
    odd_primes = primes[1:] if len(primes) else primes
    for s in range(rng.lo, rng.hi, segment_size):
        e = min(s + segment_size, rng.hi)
        # only primes with p*p < e can strike anything here
        ps = odd_primes[: np.searchsorted(odd_primes, math.isqrt(e - 1), side="right")]
        seg = _sieve_segment(s, e, ps)
        if len(seg):
            yield seg


def sieve_range(
    rng: PrimeRange | tuple[int, int], segment_size: int = DEFAULT_SEGMENT_SIZE
) -> np.ndarray:
    segs = list(iter_segments(rng, segment_size))
    if not segs:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(segs)


def prime_count(rng: PrimeRange | tuple[int, int], segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    return sum(len(seg) for seg in iter_segments(rng, segment_size))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the first twelve prime bases suffice below 3.3e24."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= 1 << 64:
        raise DomainError("is_prime is only certified for n < 2**64")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass
class DigitSumHistogram:
    q: int
    bins: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    def add(self, sums: np.ndarray) -> None:
        for m, c in enumerate(np.bincount(sums).tolist()):
            if c:
                self.bins[m] = self.bins.get(m, 0) + c

    def merge(self, other: "DigitSumHistogram") -> "DigitSumHistogram":
        if other.q != self.q:
            raise DomainError("cannot merge histograms of different bases")
        bins = dict(self.bins)
        for m, c in other.bins.items():
            bins[m] = bins.get(m, 0) + c
        return DigitSumHistogram(self.q, bins)

    def count_at_least(self, m: int) -> int:
        return sum(c for s, c in self.bins.items() if s >= m)

    def count_at_most(self, m: int) -> int:
        return sum(c for s, c in self.bins.items() if s <= m)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["digit_sum", "count"])
        for m in sorted(self.bins):
            w.writerow([m, self.bins[m]])
        return buf.getvalue()


def count_and_histogram(
    rng: PrimeRange | tuple[int, int],
    sys: System = 2,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> tuple[int, DigitSumHistogram]:
    """Prime count of ``rng`` and the histogram of those primes' digit sums."""
    q = as_system(sys).q
    hist = DigitSumHistogram(q)
    count = 0
    for seg in iter_segments(rng, segment_size):
        count += len(seg)
        hist.add(digit_sums(seg, q))
    return count, hist


def empirical_short_interval_density(x: int, theta: float, segment_size: int = DEFAULT_SEGMENT_SIZE) -> float:
    """(pi(x + h) - pi(x)) * log(x) / h with h = ceil(x**theta).

    This is the implied constant of the short-interval prime count, measured.
    """
    if x < 2:
        raise DomainError("x must be >= 2")
    if x**theta < 2:
        raise DomainError(f"x**theta = {x**theta:.3g} leaves an interval shorter than 2")
    h = math.ceil(x**theta)
    count = prime_count(PrimeRange(x + 1, x + h + 1), segment_size)
    return count * math.log(x) / h
