"""
Evaluation of zeta(alpha + it) inside the critical strip.

The fast paths sum Dirichlet polynomials with numpy; phases t log n are formed as
double-double products and reduced modulo 2 pi before any trigonometric call. The
reference path is an independent Euler-Maclaurin summation in mpmath.
"""
import logging
import math
from typing import NamedTuple

import mpmath
import numpy as np

from resonpy.exceptions import InvalidArgument, DomainError, require_alpha
from resonpy.limits import DEFAULT_CAPS
from resonpy.precision import integer_logs, reduced_phase, extended
from resonpy.util import StrEnum, ordered_map, is_uniform

logger = logging.getLogger(__name__)

DEFAULT_VALIDITY_C = 2.0
DEFAULT_ERROR_CONSTANT = 1.0
DEFAULT_REFERENCE_DIGITS = 15
REFERENCE_GUARD_DIGITS = 10
MAX_EULER_MACLAURIN_TERMS = 200

POINT_BLOCK = 64
ANCHOR_EVERY = 64
# relative slack on the closed window [T^{1-alpha}, T]
WINDOW_RTOL = 1e-12


class ZetaMethod(StrEnum):
    TRUNCATED = "truncated"
    CORRECTED = "corrected"
    REFERENCE = "reference"


class ZetaSample(NamedTuple):
    alpha: float
    t: float
    value: complex
    method: ZetaMethod
    est_error: float

    @property
    def modulus(self):
        return abs(self.value)


def _log_table(n_max):
    hi, lo = integer_logs(n_max)
    return hi[1:], lo[1:]


def _terms(alpha, t_block, n_max):
    """Matrix of n^{-alpha - i t} with one row per t and one column per n <= n_max"""
    hi, lo = _log_table(n_max)
    amplitude = np.exp(-alpha * hi)
    phase = reduced_phase(np.asarray(t_block, dtype=float)[:, None], hi, lo)
    return amplitude * np.exp(-1j * phase)


def _row_sums(terms):
    return terms.sum(axis=1)


def dirichlet_values(alpha, t_values, n_max, threads=None):
    """
    Partial sums of n^{-alpha - it} over n <= n_max at arbitrary points.

    Parameters
    ----------
    alpha : float
    t_values : array-like of float
    n_max : int
    threads : int, optional

    Returns
    -------
    np.ndarray of complex
    """
    t_values = np.asarray(t_values, dtype=float).ravel()
    if t_values.size == 0:
        return np.empty(0, dtype=complex)
    if n_max < 1:
        raise InvalidArgument("n_max must be at least 1, got {}".format(n_max))
    blocks = [t_values[i : i + POINT_BLOCK] for i in range(0, t_values.size, POINT_BLOCK)]
    parts = ordered_map(lambda block: _row_sums(_terms(alpha, block, n_max)), blocks, threads)
    return np.concatenate(parts)


def uniform_dirichlet_values(alpha, grid, n_max, threads=None):
    """
    As ``dirichlet_values`` on a uniform grid, advancing each row from the previous one
    by the rotation n^{-ih}. Every ``ANCHOR_EVERY`` points the phases are recomputed
    directly, which bounds rounding drift.
    """
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size <= 1:
        return dirichlet_values(alpha, grid, n_max, threads)
    step = (grid[-1] - grid[0]) / (grid.size - 1)
    hi, lo = _log_table(n_max)
    rotation = np.exp(-1j * reduced_phase(step, hi, lo))

    def chunk(start):
        ts = grid[start : start + ANCHOR_EVERY]
        rows = np.empty((ts.size, hi.size), dtype=complex)
        rows[0] = _terms(alpha, ts[:1], n_max)[0]
        for j in range(1, ts.size):
            np.multiply(rows[j - 1], rotation, out=rows[j])
        return _row_sums(rows)

    parts = ordered_map(chunk, range(0, grid.size, ANCHOR_EVERY), threads)
    return np.concatenate(parts)


def _check_window(alpha, t, T):
    lower = T ** (1 - alpha)
    t = np.asarray(t, dtype=float)
    if np.any(t < lower * (1 - WINDOW_RTOL)) or np.any(t > T * (1 + WINDOW_RTOL)):
        raise DomainError(
            "t must satisfy T^(1-alpha) <= t <= T, i.e. {} <= t <= {}".format(lower, T)
        )


def truncated_error_estimate(alpha, t, T):
    """
    Size of the terms the truncated sum drops: |x^{1-s}/(s-1)| + x^{-alpha}, x = floor(T).

    This is the leading Euler-Maclaurin correction, so it tracks the O(1) error of the
    truncated sum on its window.
    """
    x = math.floor(T)
    return x ** (1 - alpha) / math.hypot(alpha - 1, t) + x ** -alpha


def zeta_truncated(alpha, t, T):
    """
    Plain partial sum of n^{-alpha - it} over n <= floor(T), valid for T^{1-alpha} <= t <= T.

    Returns
    -------
    ZetaSample
    """
    require_alpha(alpha)
    if T < 2:
        raise InvalidArgument("T must be at least 2, got {}".format(T))
    _check_window(alpha, t, T)
    value = complex(dirichlet_values(alpha, [t], math.floor(T))[0])
    return ZetaSample(alpha, t, value, ZetaMethod.TRUNCATED, truncated_error_estimate(alpha, t, T))


def _correction(alpha, t, x):
    with extended():
        s = mpmath.mpc(alpha, t)
        return complex(mpmath.power(mpmath.mpf(x), 1 - s) / (s - 1))


def zeta_corrected(alpha, t, x, C=DEFAULT_VALIDITY_C, error_constant=DEFAULT_ERROR_CONSTANT):
    """
    Approximate zeta(alpha + it) by sum_{n <= x} n^{-s} + x^{1-s} / (s - 1).

    Parameters
    ----------
    alpha : float
    t : float
    x : float
        Cutoff, at least 2, with 2 pi x >= C |t|
    C : float
        Constant of the validity condition, greater than 1
    error_constant : float
        c in the reported error c x^{-alpha}

    Returns
    -------
    ZetaSample
    """
    require_alpha(alpha)
    if C <= 1:
        raise InvalidArgument("C must be greater than 1, got {}".format(C))
    if x < 2:
        raise DomainError("x must satisfy x >= 2, got {}".format(x))
    if 2 * math.pi * x < C * abs(t):
        raise DomainError(
            "validity condition 2*pi*x >= C*|t| violated: 2*pi*{} < {}*{}".format(x, C, abs(t))
        )
    partial = complex(dirichlet_values(alpha, [t], math.floor(x))[0])
    value = partial + _correction(alpha, t, x)
    return ZetaSample(alpha, t, value, ZetaMethod.CORRECTED, error_constant * x ** -alpha)


def reference_cutoff(t):
    """Number of directly summed terms used by ``zeta_reference`` at height t"""
    return 20 + int(math.ceil(abs(t) / math.pi))


def zeta_reference(alpha, t, target_digits=DEFAULT_REFERENCE_DIGITS, n_terms=None, caps=DEFAULT_CAPS):
    """
    Euler-Maclaurin evaluation of zeta(alpha + it) in mpmath.

    zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
              + sum_k B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}

    Correction terms are added until one falls below 10^{-(target_digits+3)} relative to
    the running value; the magnitude of the last term is reported as the error.

    Parameters
    ----------
    alpha : float
    t : float
    target_digits : int
    n_terms : int, optional
        N; defaults to ``reference_cutoff(t)``
    caps : ResourceCaps

    Returns
    -------
    ZetaSample
    """
    require_alpha(alpha)
    caps.check("max_reference_digits", target_digits)
    caps.check("max_reference_t", abs(t))
    if target_digits < 1:
        raise InvalidArgument("target_digits must be positive, got {}".format(target_digits))
    N = int(n_terms or reference_cutoff(t))
    with mpmath.workdps(target_digits + REFERENCE_GUARD_DIGITS):
        s = mpmath.mpc(alpha, t)
        head = mpmath.fsum(mpmath.power(n, -s) for n in range(1, N))
        n_pow = mpmath.power(N, -s)
        total = head + N * n_pow / (s - 1) + n_pow / 2
        tolerance = mpmath.power(10, -(target_digits + 3))
        rising = s
        power_term = n_pow / N
        last = mpmath.mpf(0)
        for k in range(1, MAX_EULER_MACLAURIN_TERMS + 1):
            term = mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) * rising * power_term
            total += term
            last = abs(term)
            if last <= tolerance * max(abs(total), 1):
                break
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            power_term /= N * N
        else:
            logger.warning("Euler-Maclaurin series did not reach %s digits at t=%s", target_digits, t)
        value = complex(total)
        est = float(last)
    return ZetaSample(alpha, t, value, ZetaMethod.REFERENCE, est)


def batch_zeta_modulus(alpha, t_grid, T, threads=None):
    """
    |sum_{n <= T} n^{-alpha - it}| over a uniform ascending grid inside [T^{1-alpha}, T].

    Returns
    -------
    np.ndarray of float
    """
    require_alpha(alpha)
    grid = np.asarray(t_grid, dtype=float).ravel()
    if grid.size == 0:
        return np.empty(0)
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise InvalidArgument("t_grid must be strictly ascending")
    if not is_uniform(grid):
        raise InvalidArgument("t_grid must be uniformly spaced")
    _check_window(alpha, grid, T)
    return np.abs(uniform_dirichlet_values(alpha, grid, math.floor(T), threads))


def zeta_moduli(alpha, t_values, T, lower_cutoff=100, threads=None):
    """
    |zeta(alpha + it)| at arbitrary points of [0, T]: the truncated sum on
    [T^{1-alpha}, T], the corrected sum with x = max(2t, lower_cutoff) below it.
    """
    t_values = np.asarray(t_values, dtype=float).ravel()
    out = np.empty(t_values.size)
    lower = T ** (1 - alpha)
    main = t_values >= lower
    if np.any(main):
        out[main] = np.abs(dirichlet_values(alpha, t_values[main], math.floor(T), threads))
    for idx in np.flatnonzero(~main):
        t = t_values[idx]
        out[idx] = zeta_corrected(alpha, t, max(2 * abs(t), lower_cutoff)).modulus
    return out


def zeta_grid(
    alpha, t_grid, method=ZetaMethod.TRUNCATED, T=None, x=None, target_digits=DEFAULT_REFERENCE_DIGITS
):
    """
    ZetaSamples over a uniform ascending grid.

    ``truncated`` needs T and a grid inside [T^{1-alpha}, T]; ``corrected`` uses the cutoff
    ``x``, or max(2|t|, 100) per point when it is not given; ``reference`` evaluates every
    point with ``zeta_reference``.

    Returns
    -------
    list of ZetaSample
    """
    require_alpha(alpha)
    grid = np.asarray(t_grid, dtype=float).ravel()
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise InvalidArgument("t_grid must be strictly ascending")
    method = ZetaMethod(method)
    if method is ZetaMethod.TRUNCATED:
        if T is None:
            raise InvalidArgument("the truncated method needs T")
        if not is_uniform(grid):
            raise InvalidArgument("t_grid must be uniformly spaced")
        _check_window(alpha, grid, T)
        values = uniform_dirichlet_values(alpha, grid, math.floor(T))
        return [
            ZetaSample(alpha, float(t), complex(v), method, truncated_error_estimate(alpha, t, T))
            for t, v in zip(grid, values)
        ]
    if method is ZetaMethod.CORRECTED:
        return [zeta_corrected(alpha, float(t), x or max(2 * abs(t), 100)) for t in grid]
    return [zeta_reference(alpha, float(t), target_digits) for t in grid]
