"""Digit-constrained intervals that certify many primes with extreme digit sums.

Upper tail: every n in [q^k - q^l, q^k) starts with k - l digits equal to
q - 1, so its digit sum is (q-1)(k-l) plus the sum of an unconstrained
l-digit tail. With l = ceil(2(1 - alpha')k) the interval holds about
q^l / log x primes and most of them clear alpha(q-1)log_q x.

Lower tail: [q^(k-1), q^(k-1) + q^l) has a leading 1 followed by k-1-l
zeros, and l = ceil(2 beta' k).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .config import limits
from .digits import (
    DigitSystem,
    build_distribution,
    digit_count,
    digit_sums,
    log_base,
    snap_ceil,
    snap_floor,
)
from .errors import DomainError, ResourceLimitError
from .sieve import DEFAULT_SEGMENT_SIZE, PrimeRange, iter_segments

Side = Literal["upper", "lower"]

ALPHA_MAX = 0.7375
BETA_MIN = 0.2625
# shortest admissible interval exponent for short-interval prime counts
THETA_MIN = 0.525


def proof_margin(x: int, c: float = 1.0) -> float:
    """c * log log x / sqrt(log x), the asymptotic shape of the threshold slack."""
    lx = math.log(x)
    return c * math.log(lx) / math.sqrt(lx)


@dataclass(frozen=True)
class TheoremInstance:
    q: int
    x: int
    side: Side
    target: float
    margin: float
    k: int
    l: int
    lo: int
    hi: int
    threshold: float

    @property
    def effective_target(self) -> float:
        """alpha' = alpha + margin on the upper side, beta' = beta - margin below."""
        return self.target + self.margin if self.side == "upper" else self.target - self.margin

    @property
    def interval(self) -> PrimeRange:
        return PrimeRange(self.lo, self.hi)

    @property
    def cutoff(self) -> int:
        """Integer digit-sum cutoff: qualify iff s >= cutoff (upper) or s <= cutoff (lower)."""
        return snap_ceil(self.threshold) if self.side == "upper" else snap_floor(self.threshold)

    @property
    def prefix_sum(self) -> int:
        """Digit sum contributed by the fixed leading digits."""
        return (self.q - 1) * (self.k - self.l) if self.side == "upper" else 1

    def qualifies(self, s):
        return s >= self.cutoff if self.side == "upper" else s <= self.cutoff


def build_instance(
    q: int, x: int, target: float, side: Side = "upper", margin: float = 0.0
) -> TheoremInstance:
    sys = DigitSystem(q)
    x = int(x)
    if side not in ("upper", "lower"):
        raise DomainError(f"side must be 'upper' or 'lower', got {side!r}")
    if margin < 0:
        raise DomainError("margin must be >= 0")
    if x < q * q:
        raise DomainError(f"x must be >= q^2 = {q * q}")
    if side == "upper":
        if not (0.5 <= target and target + margin < ALPHA_MAX):
            raise DomainError(
                f"need 1/2 <= alpha and alpha + margin < {ALPHA_MAX}; got alpha={target}, margin={margin}"
            )
        eff = target + margin
        width = 2 * (1 - eff)
    else:
        if not (target - margin > BETA_MIN and target <= 0.5):
            raise DomainError(
                f"need beta - margin > {BETA_MIN} and beta <= 1/2; got beta={target}, margin={margin}"
            )
        eff = target - margin
        width = 2 * eff
    assert width > THETA_MIN

    k = digit_count(x, sys) - 1
    l = snap_ceil(width * k)
    if l >= k:
        raise ResourceLimitError(f"l={l} >= k={k}: x too small for this target")
    if side == "upper":
        lo, hi = q**k - q**l, q**k
    else:
        lo, hi = q ** (k - 1), q ** (k - 1) + q**l
    threshold = target * (q - 1) * log_base(x, sys)
    inst = TheoremInstance(q, x, side, float(target), float(margin), k, l, lo, hi, threshold)
    _check_structure(inst)
    return inst


def fixed_prefix(inst: TheoremInstance) -> list[int]:
    """The leading digits shared by every element of the interval."""
    q, k, l = inst.q, inst.k, inst.l
    if inst.side == "upper":
        return [q - 1] * (k - l)
    return [1] + [0] * (k - 1 - l)


def _check_structure(inst: TheoremInstance) -> None:
    sys = DigitSystem(inst.q)
    if not inst.q**inst.k <= inst.x < inst.q ** (inst.k + 1):
        raise AssertionError("k is not floor(log_q x)")
    prefix = fixed_prefix(inst)
    width = len(prefix) + inst.l
    for n in (inst.lo, inst.hi - 1):
        ds = sys.digits(n)
        ds = [0] * (width - len(ds)) + ds
        if ds[: len(prefix)] != prefix:
            raise AssertionError(f"{n} does not carry the prefix {prefix}")


@dataclass(frozen=True)
class ExperimentRecord:
    instance: TheoremInstance
    primes_in_interval: int
    qualifying_primes: int
    chernoff_exceptions_bound: float
    exact_exceptions: int
    lower_bound_main: float
    ratio: float

    @property
    def qualifying_fraction(self) -> float:
        return self.qualifying_primes / self.primes_in_interval if self.primes_in_interval else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["qualifying_fraction"] = self.qualifying_fraction
        d["instance"]["cutoff"] = self.instance.cutoff
        return d


def chernoff_delta(l: int) -> float:
    """delta = log(l) / sqrt(l)."""
    return math.log(l) / math.sqrt(l)


def exceptions(inst: TheoremInstance) -> tuple[int, float]:
    """Integers in the interval whose free tail strays by more than delta.

    Returns (exact count, Chernoff bound q^l exp(-l delta^2 / 18)). The tail
    is "bad" when its digit sum falls below (q-1)l(1/2 - delta) on the upper
    side, or above (q-1)l(1/2 + delta) on the lower side.
    """
    q, l = inst.q, inst.l
    delta = chernoff_delta(l)
    bound = q**l * math.exp(-l * delta * delta / 18)
    if l > limits().max_digits:
        return -1, bound
    dist = build_distribution(q, l)
    if inst.side == "upper":
        # s < cut  <=>  s <= ceil(cut) - 1
        exact = dist.head_count(math.ceil((q - 1) * l * (0.5 - delta)) - 1)
    else:
        # s > cut  <=>  s >= floor(cut) + 1
        exact = dist.tail_count(math.floor((q - 1) * l * (0.5 + delta)) + 1)
    return exact, bound


def main_lower_bound(inst: TheoremInstance) -> float:
    """x^{2(1-alpha)} (upper) or x^{2 beta} (lower)."""
    e = 2 * (1 - inst.target) if inst.side == "upper" else 2 * inst.target
    return float(inst.x) ** e


def run_experiment(inst: TheoremInstance, segment_size: int = DEFAULT_SEGMENT_SIZE) -> ExperimentRecord:
    total = qualifying = 0
    for seg in iter_segments(inst.interval, segment_size):
        s = digit_sums(seg, inst.q)
        total += len(seg)
        qualifying += int(np.count_nonzero(inst.qualifies(s)))
    exact_exc, exc_bound = exceptions(inst)
    main = main_lower_bound(inst)
    ratio = qualifying / (main / math.log(inst.x))
    return ExperimentRecord(inst, total, qualifying, exc_bound, exact_exc, main, ratio)


def _enumeration_cap(x: int) -> None:
    cap = limits().enum_cap
    if x > cap:
        raise ResourceLimitError(f"x={x} exceeds enumeration cap {cap} (PRIMEDIGITS_ENUM_CAP)")


def _all_primes_upto(x: int, segment_size: int):
    _enumeration_cap(x)
    if x < 2:
        return iter(())
    return iter_segments(PrimeRange(2, x + 1), segment_size)


def survey_tail(
    q: int, x: int, alpha: float, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> tuple[int, float]:
    """Exact #{p <= x : s_q(p) >= alpha(q-1)log_q x} and x^{2(1-alpha)}."""
    sys = DigitSystem(q)
    x = int(x)
    if x < 2:
        raise DomainError("x must be >= 2")
    cutoff = snap_ceil(alpha * (q - 1) * log_base(x, sys))
    count = 0
    for seg in _all_primes_upto(x, segment_size):
        count += int(np.count_nonzero(digit_sums(seg, q) >= cutoff))
    return count, float(x) ** (2 * (1 - alpha))


@dataclass(frozen=True)
class ProblemOneCounts:
    """Primes p <= x with many ones in binary.

    count:    ones >= 2 * zeros, i.e. 3 s_2(p) >= 2 * bitlength(p)
    strict:   ones >  2 * zeros
    log_form: s_2(p) >= (2/3) log_2 p with the real logarithm
    """

    x: int
    count: int
    strict: int
    log_form: int


def problem_one(x: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> ProblemOneCounts:
    x = int(x)
    count = strict = log_form = 0
    for seg in _all_primes_upto(x, segment_size):
        ones = digit_sums(seg, 2)
        bits = np.floor(np.log2(seg.astype(np.float64))).astype(np.int64) + 1
        # float log2 can misplace values within an ulp of a power of two
        bits += (seg >= (np.int64(1) << bits)).astype(np.int64)
        bits -= (seg < (np.int64(1) << (bits - 1))).astype(np.int64)
        count += int(np.count_nonzero(3 * ones >= 2 * bits))
        strict += int(np.count_nonzero(3 * ones > 2 * bits))
        # 3 s >= 2 log2 p  <=>  2^(3s) >= p^2; settle near-ties exactly
        gap = 3 * ones - 2 * np.log2(seg.astype(np.float64))
        close = np.abs(gap) < 1e-6
        log_form += int(np.count_nonzero(gap[~close] > 0))
        for p, s in zip(seg[close].tolist(), ones[close].tolist()):
            log_form += (1 << (3 * s)) >= p * p
    return ProblemOneCounts(x, count, strict, log_form)


def copeland_erdos_average(
    q: int, x: int, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> tuple[float, float]:
    """Mean digit sum of the primes up to x, and (q-1)/2 * log_q x."""
    sys = DigitSystem(q)
    x = int(x)
    if x < 2:
        raise DomainError("no primes below 2")
    total = n = 0
    for seg in _all_primes_upto(x, segment_size):
        total += int(digit_sums(seg, q).sum())
        n += len(seg)
    return total / n, (q - 1) / 2 * log_base(x, sys)
