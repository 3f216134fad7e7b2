"""Exit criteria for the package, runnable from pytest or ``primedigits verify``.

Each criterion returns a :class:`CriterionResult`; wall-clock limits are part
of the pass condition. ``quick`` shrinks the random sample of criterion 6 and
the full-enumeration survey of criterion 8; ``full`` runs every
criterion at its stated size.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import chernoff
from .construction import build_instance, copeland_erdos_average, problem_one, run_experiment
from .digits import build_distribution, tail_proportion
from .sieve import is_prime, sieve_range

DEFAULT_SEED = 20260917
LEVELS = ("quick", "full")


@dataclass
class CriterionResult:
    number: int
    name: str
    measured: str
    tolerance: str
    passed: bool
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.number:2d}. {self.name}: {self.measured} "
            f"(tolerance: {self.tolerance}; {self.seconds:.2f}s)"
        )

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
        }


def _timed(fn: Callable[[], tuple[str, bool]], limit: float):
    t0 = time.perf_counter()
    measured, ok = fn()
    dt = time.perf_counter() - t0
    return measured, ok and dt < limit, dt


def criterion_1(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        ts = np.linspace(-5, 5, 1000)
        worst = 0.0
        for q in range(2, 11):
            for t in ts.tolist():
                d = chernoff.mgf_direct(q, t)
                worst = max(worst, abs(chernoff.mgf_closed(q, t) - d) / d)
        return f"max rel dev {worst:.3e}", worst < 1e-12

    m, ok, dt = _timed(run, 1.0)
    return CriterionResult(1, "MGF closed form", m, "< 1e-12 relative, < 1 s", ok, dt)


def criterion_2(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        ts = np.linspace(0, 10, 1001)[1:]
        violations = 0
        worst = -math.inf
        for q in range(2, 11):
            c2, _ = chernoff.series_coefficients(q)
            for t in ts.tolist():
                gap = chernoff.log_mgf(q, t) - c2 * t * t
                worst = max(worst, gap)
                violations += gap > 0
        return f"{violations} violations, max(log_mgf - c2 t^2) = {worst:.3e}", violations == 0

    m, ok, dt = _timed(run, 1.0)
    return CriterionResult(2, "quadratic bound on log-MGF", m, "no violations, < 1 s", ok, dt)


def criterion_3(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        worst = 0.0
        for q in range(2, 11):
            c2, c4 = chernoff.series_coefficients(q)
            r = [
                (chernoff.log_mgf(q, t) - c2 * t**2 - c4 * t**4) / t**6
                for t in (10**-1, 10**-1.5, 10**-2)
            ]
            spread = (max(r) - min(r)) / max(abs(v) for v in r)
            worst = max(worst, spread)
        return f"max spread of remainder/t^6 {worst:.3%}", worst < 0.10

    m, ok, dt = _timed(run, 1.0)
    return CriterionResult(3, "series coefficients c2, c4", m, "spread < 10%, < 1 s", ok, dt)


def criterion_4(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        bad = []
        for q in (2, 3, 5, 10):
            for k in (10, 20, 40):
                dist = build_distribution(q, k)
                for i in range(9):
                    a = 0.55 + 0.05 * i
                    e = tail_proportion(dist, a)
                    r = chernoff.refined_bound(q, k, a)
                    lb = chernoff.lemma_bound(q, k, a)
                    if not e <= r <= lb:
                        bad.append((q, k, a))
        dist = build_distribution(2, 20)
        e = tail_proportion(dist, 0.75)
        r = chernoff.refined_bound(2, 20, 0.75)
        lb = chernoff.lemma_bound(2, 20, 0.75)
        anchor = (
            abs(e - 21700 / 2**20) < 1e-15
            and abs(r - 0.0730) < 5e-4
            and abs(lb - 0.9330) < 5e-4
        )
        return (
            f"{len(bad)} violations; anchor exact={e:.5f} refined={r:.4f} lemma={lb:.5f}",
            not bad and anchor,
        )

    m, ok, dt = _timed(run, 10.0)
    return CriterionResult(4, "Chernoff sandwich exact <= refined <= lemma", m, "no violations, anchor to quoted digits, < 10 s", ok, dt)


def _enumerated_counts(q: int, k: int) -> np.ndarray:
    n = np.arange(q**k, dtype=np.int64)
    s = np.zeros_like(n)
    for _ in range(k):
        s += n % q
        n //= q
    return np.bincount(s, minlength=(q - 1) * k + 1)


def criterion_5(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        mismatches = 0
        cases = 0
        for q in range(2, 11):
            k = 0
            while q**k <= 10**6:
                dp = build_distribution(q, k).counts
                bf = _enumerated_counts(q, k).tolist()
                mismatches += list(dp) != bf
                cases += 1
                k += 1
        broken = 0
        for q in (2, 3, 10):
            for k in range(61):
                c = build_distribution(q, k).counts
                broken += sum(c) != q**k or c != c[::-1]
        return f"{mismatches}/{cases} brute-force mismatches, {broken} normalisation/symmetry failures", mismatches == 0 and broken == 0

    m, ok, dt = _timed(run, 30.0)
    return CriterionResult(5, "digit-sum distribution exactness", m, "exact equality, < 30 s", ok, dt)


def criterion_6(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    n_random = 10_000 if level == "full" else 1_000

    def run():
        count = len(sieve_range((0, 10**6)))
        rng = random.Random(seed)
        disagree = 0
        for _ in range(n_random):
            n = rng.getrandbits(48)
            disagree += (len(sieve_range((n, n + 1))) == 1) != is_prime(n)
        seg_diff = 0
        for _ in range(5):
            lo = rng.getrandbits(40)
            hi = lo + rng.randrange(1, 3_000_000)
            ref = sieve_range((lo, hi), 1 << 14)
            for size in (1 << 16, 1 << 20):
                seg_diff += not np.array_equal(ref, sieve_range((lo, hi), size))
        ok = count == 78498 and disagree == 0 and seg_diff == 0
        return f"pi(10^6)={count}, {disagree}/{n_random} primality disagreements, {seg_diff} segment-size mismatches", ok

    m, ok, dt = _timed(run, 30.0)
    return CriterionResult(6, "sieve correctness", m, "78498, zero disagreements, < 30 s", ok, dt)


def criterion_7(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    alpha = 0.7
    exps = list(range(24, 36, 2))

    def run():
        recs = [run_experiment(build_instance(2, 2**e, alpha)) for e in exps]
        quals = [r.qualifying_primes for r in recs]
        fracs = [r.qualifying_fraction for r in recs]
        # observed growth per step, normalised by the predicted x^{2(1-alpha)} growth
        norm = [
            (quals[i + 1] / quals[i]) / (2 ** (exps[i + 1] - exps[i])) ** (2 * (1 - alpha))
            for i in range(len(quals) - 1)
        ]
        ok = (
            all(c >= 1 for c in quals)
            and all(f >= 0.5 for f in fracs)
            and all(0.5 <= v <= 2 for v in norm)
        )
        m = (
            f"qualifying={quals}, min fraction={min(fracs):.4f}, "
            f"normalised growth in [{min(norm):.3f}, {max(norm):.3f}]"
        )
        return m, ok

    m, ok, dt = _timed(run, 300.0)
    return CriterionResult(7, f"theorem reproduction q=2 alpha=0.7 x=2^{exps[0]}..2^{exps[-1]}", m, ">=1, fraction >= 0.5, growth in [0.5, 2], < 5 min", ok, dt)


def criterion_8(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    survey_x = 2**30 if level == "full" else 2**26
    inst_x = 2**34

    def run():
        p1 = problem_one(survey_x)
        rec = run_experiment(build_instance(2, inst_x, 2 / 3))
        ok = p1.count >= 100 and rec.qualifying_primes >= 1000
        return f"problem_one({survey_x})={p1.count}, interval qualifying={rec.qualifying_primes}", ok

    m, ok, dt = _timed(run, 300.0)
    return CriterionResult(8, "Problem 1 desk evidence", m, ">= 100 and >= 1000, < 5 min", ok, dt)


def criterion_9(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        mean, ref = copeland_erdos_average(2, 10**7)
        rel = abs(mean - ref) / ref
        return f"mean={mean:.4f}, reference={ref:.4f}, rel dev={rel:.3%}", rel < 0.05

    m, ok, dt = _timed(run, 60.0)
    return CriterionResult(9, "Copeland-Erdos average digit sum", m, "< 5%, < 1 min", ok, dt)


def criterion_10(level: str = "full", seed: int = DEFAULT_SEED) -> CriterionResult:
    def run():
        rec = run_experiment(build_instance(2, 2**30, 0.4, side="lower"))
        f = rec.qualifying_fraction
        ok = rec.qualifying_primes >= 1 and f >= 0.5
        return f"qualifying={rec.qualifying_primes}/{rec.primes_in_interval}, fraction={f:.4f}", ok

    m, ok, dt = _timed(run, 60.0)
    return CriterionResult(10, "lower-tail mirror q=2 beta=0.4 x=2^30", m, ">= 1 and fraction >= 0.5, < 1 min", ok, dt)


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
]


def run_all(level: str = "quick", seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    return [c(level, seed) for c in CRITERIA]
