import math

import mpmath
import pytest

from resonpy.exceptions import InvalidArgument, DomainError
from resonpy.primes import (
    first_m_primes,
    log_binomial,
    prime_upper_bound,
    primes_up_to,
    stirling_bounds,
)


def trial_division_primes(limit):
    primes = []
    for n in range(2, limit + 1):
        if all(n % p for p in primes if p * p <= n):
            primes.append(n)
    return primes


@pytest.mark.parametrize(("limit", "expected"), [(10, (2, 3, 5, 7)), (2, (2,)), (3, (2, 3))])
def test_primes_up_to_small(limit, expected):
    assert primes_up_to(limit).primes == expected


def test_primes_up_to_matches_trial_division():
    assert list(primes_up_to(10 ** 4).primes) == trial_division_primes(10 ** 4)


def test_primes_up_to_count():
    table = primes_up_to(10 ** 5)
    assert len(table) == 9592
    assert table.limit == 10 ** 5


@pytest.mark.parametrize("limit", [1, 0, -5])
def test_primes_up_to_rejects_small_limit(limit):
    with pytest.raises(InvalidArgument):
        primes_up_to(limit)


@pytest.mark.parametrize(
    ("m", "expected"), [(1, (2,)), (5, (2, 3, 5, 7, 11)), (6, (2, 3, 5, 7, 11, 13))]
)
def test_first_m_primes(m, expected):
    assert first_m_primes(m) == expected


def test_first_m_primes_25_ends_in_97():
    primes = first_m_primes(25)
    assert len(primes) == 25
    assert primes[-1] == 97


def test_first_m_primes_rejects_zero():
    with pytest.raises(InvalidArgument):
        first_m_primes(0)


def test_prime_upper_bound_at_6():
    bound = prime_upper_bound(6)
    assert bound.value == pytest.approx(6 * (math.log(6) + math.log(math.log(6))))
    assert bound.value == pytest.approx(14.2498, abs=1e-4)
    assert bound.in_validity_range
    assert first_m_primes(6)[-1] < bound.value


def test_prime_upper_bound_at_100():
    assert prime_upper_bound(100).value > 541 == first_m_primes(100)[-1]


@pytest.mark.parametrize("r", [3, 4, 5])
def test_prime_upper_bound_flags_small_r(r):
    assert not prime_upper_bound(r).in_validity_range


@pytest.mark.parametrize("r", [0, 1, 2])
def test_prime_upper_bound_domain(r):
    with pytest.raises(DomainError):
        prime_upper_bound(r)


def test_prime_upper_bound_holds_up_to_10_4():
    primes = first_m_primes(10 ** 4)
    failures = [r for r in range(6, 10 ** 4 + 1) if not primes[r - 1] < prime_upper_bound(r).value]
    assert failures == []


def test_stirling_brackets_small():
    one = stirling_bounds(1)
    assert one.log_lower <= 0 <= one.log_upper

    ten = stirling_bounds(10)
    assert ten.log_lower <= mpmath.log(3628800) <= ten.log_upper
    assert float(mpmath.log(3628800)) == pytest.approx(15.1044, abs=1e-4)


def test_stirling_brackets_exact_factorials():
    factorial = 1
    for n in range(1, 1001):
        factorial *= n
        bounds = stirling_bounds(n)
        with mpmath.workdps(60):
            log_factorial = mpmath.log(mpmath.mpf(factorial))
        assert bounds.log_lower <= log_factorial <= bounds.log_upper, n


def test_stirling_width():
    for n in (1, 10, 1000):
        bounds = stirling_bounds(n)
        width = float(bounds.log_upper - bounds.log_lower)
        assert width == pytest.approx(1 / (12 * n) - 1 / (12 * n + 1), rel=1e-12)


def test_stirling_against_loggamma():
    bounds = stirling_bounds(1000)
    assert bounds.log_lower <= mpmath.loggamma(1001) <= bounds.log_upper


def test_log_binomial_identities():
    assert log_binomial(7, 0) == 0
    assert log_binomial(7, 7) == 0
    assert log_binomial(4, 2) == pytest.approx(math.log(6), abs=1e-12)


def test_log_binomial_matches_exact():
    assert log_binomial(100, 17) == pytest.approx(math.log(math.comb(100, 17)), abs=1e-10)


def test_log_binomial_symmetric():
    assert log_binomial(100, 17) == log_binomial(100, 83)
    assert log_binomial(10 ** 6, 3) == log_binomial(10 ** 6, 10 ** 6 - 3)


def test_log_binomial_rejects_r_above_m():
    with pytest.raises(InvalidArgument):
        log_binomial(3, 4)
