import math

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def naive_digit_sum(n: int, q: int) -> int:
    # string route, independent of the divmod loop under test
    if q == 10:
        return sum(int(c) for c in str(n))
    if q == 2:
        return bin(n).count("1")
    s = 0
    while n:
        s += n % q
        n //= q
    return s


@pytest.fixture
def small_primes():
    return [p for p in range(200) if trial_division_is_prime(p)]
