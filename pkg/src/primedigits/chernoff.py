"""Chernoff bounds for the digit sum of a uniformly random k-digit string.

A base-q digit d is rescaled to xi = 2d/(q-1) - 1, uniform on q points of
[-1, 1]. The tail event s_q(n) >= a(q-1)k is the event mean(xi) >= gamma with
gamma = 2a - 1, and for every t >= 0

    P(mean(xi) >= gamma) <= exp(-k * I(t, gamma)),
    I(t, gamma) = t*gamma - log E exp(t*xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

# Below this |t| log_mgf switches to its quartic Taylor polynomial.
SERIES_SWITCH = 1e-4
# Below this |t| the log-MGF derivative switches to its Taylor polynomial.
DERIV_SERIES_SWITCH = 1e-3
# |t| beyond which the MGF itself is not representable for any q.
_MAX_T = 700.0

DERIV_TOL = 1e-10
MAX_ITER = 400


def _check_base(q: int) -> None:
    if q < 2:
        raise DomainError(f"base must be >= 2, got {q}")


def _check_t(t: float) -> None:
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    if abs(t) > _MAX_T:
        raise OverflowError(f"exp(|t|) not representable for t={t}")


def digit_values(q: int) -> list[float]:
    """Support of the normalised digit: 2j/(q-1) - 1 for j = 0..q-1."""
    return [2 * j / (q - 1) - 1 for j in range(q)]


def series_coefficients(q: int) -> tuple[float, float]:
    """(c2, c4) with log E exp(t xi) = c2 t^2 + c4 t^4 + O(t^6)."""
    _check_base(q)
    c2 = (q + 1) / (6 * (q - 1))
    c4 = -(q**3 + q**2 + q + 1) / (180 * (q - 1) ** 3)
    return c2, c4


def mgf_direct(q: int, t: float) -> float:
    _check_base(q)
    _check_t(t)
    return sum(math.exp(t * x) for x in digit_values(q)) / q


def mgf_closed(q: int, t: float) -> float:
    """(1/q) sinh(t + t/(q-1)) / sinh(t/(q-1)), equal to 1 at t = 0."""
    _check_base(q)
    _check_t(t)
    if t == 0:
        return 1.0
    u = t / (q - 1)
    return math.sinh(q * u) / (q * math.sinh(u))


def _log_sinh_ratio(q: int, t: float) -> float:
    # log(sinh(q u) / sinh(u)) for u = |t|/(q-1) > 0, without overflow:
    # sinh(q u)/sinh(u) = e^{(q-1)u} (1 - e^{-2qu}) / (1 - e^{-2u})
    u = abs(t) / (q - 1)
    return (q - 1) * u + math.log1p(-math.exp(-2 * q * u)) - math.log1p(-math.exp(-2 * u))


def _mgf_excess(q: int, t: float) -> float:
    # E exp(t xi) - 1, pairing +x with -x: cosh(tx) - 1 = 2 sinh^2(tx/2)
    xs = digit_values(q)
    acc = 0.0
    for x in xs[: q // 2]:
        acc += math.sinh(t * x / 2) ** 2
    return 4 * acc / q


def log_mgf(q: int, t: float) -> float:
    """log E exp(t xi).

    Three branches, all equal to log(mgf_closed) up to rounding: the Taylor
    polynomial near 0, log1p of the excess over 1 for moderate t (keeps full
    relative precision where the MGF is close to 1), and a log-sinh form for
    large t that cannot overflow.
    """
    _check_base(q)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    t = abs(t)
    if t < SERIES_SWITCH:
        c2, c4 = series_coefficients(q)
        t2 = t * t
        # c4 < 0, so this never rounds above the quadratic bound c2*t*t
        return c2 * t * t + c4 * t2 * t2
    if t <= 2.0:
        return math.log1p(_mgf_excess(q, t))
    return _log_sinh_ratio(q, t) - math.log(q)


def log_mgf_derivative(q: int, t: float) -> float:
    """d/dt log E exp(t xi), the mean of xi under the tilted law."""
    _check_base(q)
    if t == 0:
        return 0.0
    sign = 1.0 if t > 0 else -1.0
    t = abs(t)
    if t < DERIV_SERIES_SWITCH:
        c2, c4 = series_coefficients(q)
        return sign * (2 * c2 * t + 4 * c4 * t**3)
    b = 1.0 / (q - 1)
    return sign * (q * b / math.tanh(q * b * t) - b / math.tanh(b * t))


def rate(q: int, gamma: float, t: float) -> float:
    """I(t, gamma) = t*gamma - log E exp(t xi)."""
    _check_gamma(gamma)
    if t < 0:
        raise DomainError("t must be >= 0")
    return t * gamma - log_mgf(q, t)


def rate_derivative(q: int, gamma: float, t: float) -> float:
    return gamma - log_mgf_derivative(q, t)


def _check_gamma(gamma: float) -> None:
    if not 0 <= gamma < 1:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")


@dataclass(frozen=True)
class RateFunction:
    q: int
    gamma: float
    t: float

    def __post_init__(self):
        _check_base(self.q)
        _check_gamma(self.gamma)
        if self.t < 0:
            raise DomainError("t must be >= 0")

    @property
    def mgf(self) -> float:
        return mgf_closed(self.q, self.t)

    @property
    def log_mgf(self) -> float:
        return log_mgf(self.q, self.t)

    @property
    def value(self) -> float:
        return rate(self.q, self.gamma, self.t)

    @classmethod
    def optimal(cls, q: int, gamma: float) -> "RateFunction":
        t_star, _ = optimize_rate(q, gamma)
        return cls(q, gamma, t_star)


def optimize_rate(q: int, gamma: float, tol: float = DERIV_TOL) -> tuple[float, float]:
    """Maximise t -> I(t, gamma) over t >= 0.

    I is strictly concave with I'(0) = gamma >= 0, so we double an upper
    bracket until I' turns negative and bisect on the derivative.
    """
    _check_base(q)
    _check_gamma(gamma)
    if gamma == 0:
        return 0.0, 0.0
    lo, hi = 0.0, 1.0
    while rate_derivative(q, gamma, hi) > 0:
        lo, hi = hi, 2 * hi
        if hi > _MAX_T:
            raise ConvergenceError(f"no bracket for gamma={gamma} below t={_MAX_T}")
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        d = rate_derivative(q, gamma, mid)
        if abs(d) < tol:
            return mid, rate(q, gamma, mid)
        if d > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * math.ulp(mid):
            break
    raise ConvergenceError(f"|I'(t)| >= {tol} after {MAX_ITER} bisections (q={q}, gamma={gamma})")


def _check_a(a: float) -> None:
    if not 0.5 < a < 1:
        raise DomainError(f"a must lie in (1/2, 1), got {a}")


def lemma_bound(q: int, k: int, a: float) -> float:
    """exp(-k (a - 1/2)^2 / 18), a bound on the tail proportion."""
    _check_base(q)
    _check_a(a)
    if k < 0:
        raise DomainError("k must be >= 0")
    return math.exp(-k * (a - 0.5) ** 2 / 18)


def explicit_t(q: int, gamma: float) -> float:
    """The closed-form tilt (gamma/3)(q-1)/(q+1)."""
    return gamma / 3 * (q - 1) / (q + 1)


def explicit_bound(q: int, k: int, a: float) -> float:
    """exp(-(k/6)((q-1)/(q+1)) gamma^2) with gamma = 2a - 1."""
    _check_base(q)
    _check_a(a)
    gamma = 2 * a - 1
    return math.exp(-k / 6 * (q - 1) / (q + 1) * gamma**2)


def refined_bound(q: int, k: int, a: float) -> float:
    """exp(-k sup_t I(t, 2a-1)), the sharpest Chernoff bound."""
    _check_base(q)
    _check_a(a)
    if k < 0:
        raise DomainError("k must be >= 0")
    _, rate_star = optimize_rate(q, 2 * a - 1)
    return math.exp(-k * rate_star)
