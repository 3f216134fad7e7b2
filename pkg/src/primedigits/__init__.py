"""Digit sums of primes: exact distributions, Chernoff tail bounds, and
digit-constrained prime intervals."""

from .chernoff import (
    RateFunction,
    lemma_bound,
    log_mgf,
    mgf_closed,
    mgf_direct,
    optimize_rate,
    rate,
    refined_bound,
)
from .construction import (
    ExperimentRecord,
    TheoremInstance,
    build_instance,
    copeland_erdos_average,
    problem_one,
    run_experiment,
    survey_tail,
)
from .digits import (
    DigitSumDistribution,
    DigitSystem,
    build_distribution,
    digit_count,
    digit_sum,
    head_count,
    tail_count,
    tail_proportion,
)
from .errors import ConvergenceError, DomainError, ResourceLimitError
from .sieve import (
    DigitSumHistogram,
    PrimeRange,
    count_and_histogram,
    empirical_short_interval_density,
    is_prime,
    sieve_range,
)

__version__ = "0.1.0"
