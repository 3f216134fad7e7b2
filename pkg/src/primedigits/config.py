"""Size caps, overridable through environment variables.

=========================  ==========  ==========================================
variable                   default     meaning
=========================  ==========  ==========================================
PRIMEDIGITS_MAX_HI         2**52       largest exclusive upper end for sieving
PRIMEDIGITS_MAX_DIGITS     1024        largest k for the digit-sum distribution
PRIMEDIGITS_ENUM_CAP       2**34       largest x for full enumeration surveys
=========================  ==========  ==========================================
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_HI = 1 << 52
DEFAULT_MAX_DIGITS = 1024
DEFAULT_ENUM_CAP = 1 << 34


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    # accept "2**40" as well as plain decimals
    if "**" in raw:
        base, exp = raw.split("**", 1)
        return int(base) ** int(exp)
    return int(raw)


@dataclass(frozen=True)
class Limits:
    max_hi: int = DEFAULT_MAX_HI
    max_digits: int = DEFAULT_MAX_DIGITS
    enum_cap: int = DEFAULT_ENUM_CAP

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            max_hi=_env_int("PRIMEDIGITS_MAX_HI", DEFAULT_MAX_HI),
            max_digits=_env_int("PRIMEDIGITS_MAX_DIGITS", DEFAULT_MAX_DIGITS),
            enum_cap=_env_int("PRIMEDIGITS_ENUM_CAP", DEFAULT_ENUM_CAP),
        )


def limits() -> Limits:
    return Limits.from_env()
