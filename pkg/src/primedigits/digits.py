"""Base-q digit arithmetic and exact digit-sum distributions over [0, q**k).

Counts are Python ints throughout, so nothing overflows; floats only appear
when a proportion is requested, and then from a correctly rounded Fraction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .config import limits
from .errors import DomainError, ResourceLimitError

# Thresholds such as 0.7 * 30 are computed in floating point; anything this
# close to an integer is treated as that integer before rounding.
SNAP_TOL = 1e-9


@dataclass(frozen=True)
class DigitSystem:
    q: int

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, (int, np.integer)):
            raise DomainError(f"base must be an integer, got {self.q!r}")
        if self.q < 2:
            raise DomainError(f"base must be >= 2, got {self.q}")
        object.__setattr__(self, "q", int(self.q))

    @property
    def max_digit(self) -> int:
        return self.q - 1

    def digit_sum(self, n: int) -> int:
        return digit_sum(n, self)

    def digit_count(self, n: int) -> int:
        return digit_count(n, self)

    def digits(self, n: int) -> list[int]:
        """Base-q digits of ``n``, most significant first (``[0]`` for zero)."""
        if n < 0:
            raise DomainError("n must be nonnegative")
        if n == 0:
            return [0]
        out = []
        while n:
            n, d = divmod(n, self.q)
            out.append(d)
        return out[::-1]


System = Union[DigitSystem, int]


def as_system(sys: System) -> DigitSystem:
    return sys if isinstance(sys, DigitSystem) else DigitSystem(sys)


def snap_ceil(x: float) -> int:
    r = round(x)
    if abs(x - r) <= SNAP_TOL * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def snap_floor(x: float) -> int:
    r = round(x)
    if abs(x - r) <= SNAP_TOL * max(1.0, abs(x)):
        return int(r)
    return math.floor(x)


def log_base(x: int, sys: System) -> float:
    """log_q(x), exact whenever x is a power of q."""
    q = as_system(sys).q
    k = digit_count(x, q) - 1
    return k + math.log(x / q**k) / math.log(q)


def digit_sum(n: int, sys: System = 2) -> int:
    q = as_system(sys).q
    if n < 0:
        raise DomainError("digit_sum requires n >= 0")
    n = int(n)
    if q == 2:
        return n.bit_count()
    s = 0
    while n:
        n, d = divmod(n, q)
        s += d
    return s


def digit_count(n: int, sys: System = 2) -> int:
    q = as_system(sys).q
    if n < 1:
        raise DomainError("digit_count requires n >= 1")
    n = int(n)
    if q == 2:
        return n.bit_length()
    # float log can be off by one near powers of q; correct it exactly
    c = max(1, int(math.log(n, q)) + 1)
    while q ** (c - 1) > n:
        c -= 1
    while q**c <= n:
        c += 1
    return c


def digit_sums(values: np.ndarray, sys: System = 2) -> np.ndarray:
    """Vectorised digit sums for an array of nonnegative integers (< 2**64)."""
    q = as_system(sys).q
    v = np.asarray(values, dtype=np.uint64)
    if q == 2:
        return np.bitwise_count(v).astype(np.int64)
    v = v.copy()
    out = np.zeros(v.shape, dtype=np.int64)
    qq = np.uint64(q)
    while v.any():
        out += (v % qq).astype(np.int64)
        v //= qq
    return out


@dataclass(frozen=True)
class DigitSumDistribution:
    """counts[m] = #{0 <= n < q**k : s_q(n) = m}, exact."""

    q: int
    k: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.q**self.k

    @property
    def max_sum(self) -> int:
        return (self.q - 1) * self.k

    def tail_count(self, threshold: float) -> int:
        """Number of n < q**k with digit sum >= threshold."""
        return tail_count(self, threshold)

    def head_count(self, threshold: float) -> int:
        """Number of n < q**k with digit sum <= threshold."""
        return head_count(self, threshold)

    def tail_proportion(self, a: float) -> float:
        return tail_proportion(self, a)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "count"])
        for m, c in enumerate(self.counts):
            w.writerow([m, str(c)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"q": self.q, "k": self.k, "counts": [str(c) for c in self.counts]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "DigitSumDistribution":
        return cls(int(d["q"]), int(d["k"]), tuple(int(c) for c in d["counts"]))


def build_distribution(sys: System, k: int, max_digits: int | None = None) -> DigitSumDistribution:
    """Exact digit-sum counts for all k-digit base-q strings.

    Each row is the previous row convolved with q ones; a sliding window sum
    keeps a row at O((q-1)k) big-int additions.
    """
    q = as_system(sys).q
    if k < 0:
        raise DomainError("k must be >= 0")
    cap = limits().max_digits if max_digits is None else max_digits
    if k > cap:
        raise ResourceLimitError(f"k={k} exceeds digit cap {cap} (PRIMEDIGITS_MAX_DIGITS)")
    row = [1]
    for _ in range(k):
        width = len(row) + q - 1
        new = [0] * width
        window = 0
        for m in range(width):
            if m < len(row):
                window += row[m]
            if m - q >= 0:
                window -= row[m - q]
            new[m] = window
        row = new
    return DigitSumDistribution(q, k, tuple(row))


def tail_count(dist: DigitSumDistribution, threshold: float) -> int:
    if not math.isfinite(threshold):
        raise DomainError("threshold must be finite")
    start = max(0, snap_ceil(threshold))
    return sum(dist.counts[start:])


def head_count(dist: DigitSumDistribution, threshold: float) -> int:
    if not math.isfinite(threshold):
        raise DomainError("threshold must be finite")
    stop = snap_floor(threshold)
    if stop < 0:
        return 0
    return sum(dist.counts[: stop + 1])


def exact_tail_fraction(dist: DigitSumDistribution, a: float) -> Fraction:
    if not 0.5 < a < 1:
        raise DomainError(f"a must lie in (1/2, 1), got {a}")
    return Fraction(tail_count(dist, a * (dist.q - 1) * dist.k), dist.total)


def tail_proportion(dist: DigitSumDistribution, a: float) -> float:
    """Fraction of n < q**k with s_q(n) >= a(q-1)k."""
    return float(exact_tail_fraction(dist, a))
