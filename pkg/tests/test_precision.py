import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from resonpy.precision import (
    extended,
    integer_logs,
    mp_to_dd,
    reduced_phase,
    smallest_prime_factors,
    two_product,
    two_sum,
)


def test_two_sum_is_exact(rng):
    for a, b in rng.normal(scale=1e8, size=(100, 2)):
        s, e = two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


def test_two_product_is_exact(rng):
    for a, b in rng.normal(scale=1e4, size=(100, 2)):
        p, e = two_product(a, b)
        assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_mp_to_dd_keeps_extra_digits():
    with extended():
        x = mpmath.log(7)
        hi, lo = mp_to_dd(x)
        assert abs(mpmath.mpf(hi) + mpmath.mpf(lo) - x) < mpmath.mpf("1e-30")
    assert lo != 0


@pytest.mark.parametrize("t", [1.0, 1e4, 1e7, 12345.678])
def test_reduced_phase_matches_mpmath(t):
    with extended():
        log_hi, log_lo = mp_to_dd(mpmath.log(2))
    with mpmath.workdps(60):
        expected = float(mpmath.fmod(mpmath.mpf(t) * mpmath.log(2), 2 * mpmath.pi))
    phase = float(reduced_phase(t, log_hi, log_lo))
    difference = (phase - expected + math.pi) % (2 * math.pi) - math.pi
    assert abs(difference) < 1e-12


def test_smallest_prime_factors():
    spf = smallest_prime_factors(30)
    assert spf[0] == spf[1] == 0
    assert spf[2] == 2
    assert spf[12] == 2
    assert spf[25] == 5
    assert spf[29] == 29
    assert spf[21] == 3


def test_integer_logs_accuracy():
    hi, lo = integer_logs(1000)
    with mpmath.workdps(60):
        for n in (2, 12, 97, 360, 720, 997, 1000):
            error = mpmath.mpf(hi[n]) + mpmath.mpf(lo[n]) - mpmath.log(n)
            assert abs(error) < mpmath.mpf("1e-25"), n


def test_integer_logs_read_only():
    hi, lo = integer_logs(50)
    assert hi[1] == 0
    assert not hi.flags.writeable
    assert not lo.flags.writeable
    assert np.allclose(hi[1:], np.log(np.arange(1, 51)))
