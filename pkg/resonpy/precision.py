"""
Extended-precision helpers.

Scalars that need more than double precision (logs of resonator integers, single
correction terms) are handled by mpmath at ``EXTENDED_DPS`` digits. Vector work uses
double-double numbers: an unevaluated sum ``hi + lo`` of two floats, manipulated with
error-free transformations, which gives roughly 32 significant digits at numpy speed.
"""
import logging
from functools import lru_cache

import mpmath
import numpy as np

logger = logging.getLogger(__name__)

EXTENDED_DPS = 40

_SPLITTER = 134217729.0  # 2**27 + 1


def extended():
    """Context manager switching mpmath to the extended working precision"""
    return mpmath.workdps(EXTENDED_DPS)


def two_sum(a, b):
    """Error-free sum: returns (s, e) with s = fl(a + b) and a + b = s + e exactly"""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_product(a, b):
    """Error-free product: returns (p, e) with p = fl(a * b) and a * b = p + e exactly"""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def mp_to_dd(x):
    """Split an mpmath real into a (hi, lo) pair of floats"""
    with extended():
        hi = float(x)
        lo = float(x - hi)
    return hi, lo


def dd_from_mp_list(values):
    """Arrays (hi, lo) from a sequence of mpmath reals"""
    pairs = [mp_to_dd(v) for v in values]
    hi = np.array([p[0] for p in pairs], dtype=float)
    lo = np.array([p[1] for p in pairs], dtype=float)
    return hi, lo


with extended():
    _TWO_PI = 2 * mpmath.pi
TWO_PI_HI, TWO_PI_LO = mp_to_dd(_TWO_PI)


def reduced_phase(t, log_hi, log_lo):
    """
    Compute ``t * L`` modulo 2π, where ``L = log_hi + log_lo`` is a double-double.

    The product is formed exactly as a double-double and the reduction subtracts
    a double-double multiple of 2π, so the result is accurate to a few ulps of π
    even when ``t * L`` is of order 10^7.

    Parameters
    ----------
    t : float or array-like
    log_hi, log_lo : float or array-like
        Broadcast against ``t``

    Returns
    -------
    np.ndarray
        Phases in roughly [-π, π]
    """
    t = np.asarray(t, dtype=float)
    p, e = two_product(t, log_hi)
    e = e + t * log_lo
    k = np.rint(p / TWO_PI_HI)
    q, qe = two_product(k, TWO_PI_HI)
    # p - q is exact: both lie within a factor of 2 of each other or q == 0
    r = p - q
    return (r - qe) + (e - k * TWO_PI_LO)


def smallest_prime_factors(limit):
    """
    Table ``spf`` with ``spf[n]`` the smallest prime factor of n for 2 <= n <= limit.

    ``spf[0]`` and ``spf[1]`` are 0.
    """
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit ** 0.5) + 1):
        if spf[p]:
            continue
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


@lru_cache(maxsize=8)
def integer_logs(n_max):
    """
    Double-double natural logs of 1..n_max, indexed by n (index 0 is unused).

    Logs of primes come from mpmath; composites are assembled as
    ``log(n) = log(spf(n)) + log(n / spf(n))`` with double-double addition, level by level.

    Returns
    -------
    (np.ndarray, np.ndarray)
        ``hi`` and ``lo`` arrays of length n_max + 1; read-only
    """
    n_max = int(n_max)
    hi = np.zeros(n_max + 1)
    lo = np.zeros(n_max + 1)
    if n_max < 2:
        return _freeze(hi, lo)

    spf = smallest_prime_factors(n_max)
    idx = np.arange(n_max + 1)
    primes = np.flatnonzero((spf == idx) & (idx >= 2))
    p_hi, p_lo = dd_from_mp_list(_prime_logs(tuple(int(p) for p in primes)))
    hi[primes] = p_hi
    lo[primes] = p_lo

    done = np.zeros(n_max + 1, dtype=bool)
    done[1] = True
    done[primes] = True
    pending = np.flatnonzero(~done)
    pending = pending[pending >= 2]
    while pending.size:
        cof = pending // spf[pending]
        ready = done[cof]
        n = pending[ready]
        c = cof[ready]
        f = spf[n]
        s, e = two_sum(hi[f], hi[c])
        e = e + (lo[f] + lo[c])
        hi[n], lo[n] = two_sum(s, e)
        done[n] = True
        pending = pending[~ready]
    logger.debug("built double-double log table up to %s", n_max)
    return _freeze(hi, lo)


def _prime_logs(primes):
    with extended():
        return [mpmath.log(p) for p in primes]


def _freeze(*arrays):
    for arr in arrays:
        arr.setflags(write=False)
    return arrays
