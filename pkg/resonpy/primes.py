"""Prime generation and the explicit inequalities the GCD-sum estimates rest on."""
import logging
import math
from functools import lru_cache
from typing import NamedTuple, Tuple

import mpmath
import numpy as np

from resonpy.exceptions import InvalidArgument, DomainError
from resonpy.precision import extended

logger = logging.getLogger(__name__)

PRIME_BOUND_VALID_FROM = 6


class PrimeTable(NamedTuple):
    limit: int
    primes: Tuple[int, ...]

    def __len__(self):
        return len(self.primes)


class PrimeBound(NamedTuple):
    r: int
    value: float
    in_validity_range: bool


class StirlingBounds(NamedTuple):
    """Natural-log bounds bracketing log(n!), held as mpmath reals"""

    n: int
    log_lower: mpmath.mpf
    log_upper: mpmath.mpf


def _sieve(limit):
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime)


def primes_up_to(limit):
    """
    All primes up to and including ``limit``.

    Parameters
    ----------
    limit : int
        At least 2

    Returns
    -------
    PrimeTable
    """
    if limit < 2:
        raise InvalidArgument("limit must be at least 2, got {}".format(limit))
    primes = tuple(int(p) for p in _sieve(int(limit)))
    logger.debug("sieved %s primes up to %s", len(primes), limit)
    return PrimeTable(int(limit), primes)


@lru_cache(maxsize=64)
def first_m_primes(m):
    """The ``m`` smallest primes, ascending, as a tuple"""
    if m < 1:
        raise InvalidArgument("m must be at least 1, got {}".format(m))
    if m < PRIME_BOUND_VALID_FROM:
        limit = 13
    else:
        limit = math.ceil(m * (math.log(m) + math.log(math.log(m))))
    primes = primes_up_to(limit).primes
    return primes[:m]


def prime_upper_bound(r):
    """
    Upper bound r(log r + log log r) for the r-th prime.

    The bound is only claimed for r >= 6; for r in {3, 4, 5} the value is still
    returned, with ``in_validity_range`` False.

    Parameters
    ----------
    r : int

    Returns
    -------
    PrimeBound
    """
    if r < 3:
        raise DomainError(
            "prime_upper_bound needs r >= 3 so that log log r > 0, got {}".format(r)
        )
    value = r * (math.log(r) + math.log(math.log(r)))
    valid = r >= PRIME_BOUND_VALID_FROM
    if not valid:
        logger.warning("prime bound evaluated at r=%s, outside its validity range", r)
    return PrimeBound(r, value, valid)


def stirling_bounds(n):
    """
    Robbins' form of Stirling's formula in the log domain:
    n^{n+1/2} e^{-n+1/(12n+1)} < n!/sqrt(2 pi) < n^{n+1/2} e^{-n+1/(12n)}.
    """
    if n < 1:
        raise InvalidArgument("n must be at least 1, got {}".format(n))
    with extended():
        n_mp = mpmath.mpf(n)
        base = mpmath.log(2 * mpmath.pi) / 2 + (n_mp + mpmath.mpf(1) / 2) * mpmath.log(n_mp) - n_mp
        lower = base + 1 / (12 * n_mp + 1)
        upper = base + 1 / (12 * n_mp)
    return StirlingBounds(n, lower, upper)


def log_binomial(m, r):
    """
    Natural log of binomial(m, r) via log-gamma at extended precision.

    The smaller of r and m - r is always used, so the result is exactly symmetric.
    """
    if r < 0 or m < 0:
        raise InvalidArgument("m and r must be nonnegative, got ({}, {})".format(m, r))
    if r > m:
        raise InvalidArgument("r must not exceed m, got r={} > m={}".format(r, m))
    r = min(r, m - r)
    if r == 0:
        return 0.0
    with extended():
        value = mpmath.loggamma(m + 1) - mpmath.loggamma(r + 1) - mpmath.loggamma(m - r + 1)
    return float(value)
