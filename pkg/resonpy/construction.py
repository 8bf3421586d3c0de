"""
The multiplicative resonator set B, the distance between its elements, the
parameters M and R, the ratio buckets and the representative set D.

Every decision about ratios and equalities is taken with exact integer arithmetic;
extended-precision logs are only used to locate candidates.
"""
import itertools
import json
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Tuple, Optional

import mpmath
import numpy as np

from resonpy.exceptions import (
    InvalidArgument,
    DomainError,
    InvariantViolation,
    require_alpha,
)
from resonpy.limits import DEFAULT_CAPS
from resonpy.precision import EXTENDED_DPS, extended, dd_from_mp_list, mp_to_dd
from resonpy.primes import first_m_primes
from resonpy.util import decimal_string, ordered_map

logger = logging.getLogger(__name__)

MIN_T = 16
# candidates closer than this to a boundary, in log units, get an exact comparison
BOUNDARY_TOLERANCE = mpmath.mpf("1e-25")
FLOAT_MARGIN = 1e-9


class ExponentVector(NamedTuple):
    """Exponents (beta_1, ..., beta_M) in {0, 1} of a square-free product of the first M primes"""

    bits: Tuple[int, ...]

    @classmethod
    def from_mask(cls, mask, M):
        return cls(tuple((mask >> r) & 1 for r in range(M)))

    @classmethod
    def from_str(cls, s):
        if set(s) - {"0", "1"}:
            raise InvalidArgument("Exponent strings contain only 0 and 1, got {}".format(repr(s)))
        return cls(tuple(int(c) for c in s))

    @property
    def mask(self):
        return sum(bit << r for r, bit in enumerate(self.bits))

    def __str__(self):
        return "".join(str(b) for b in self.bits)


class ResonatorInteger(NamedTuple):
    exponents: ExponentVector
    log_value: mpmath.mpf
    exact_value: int

    @property
    def mask(self):
        return self.exponents.mask

    @property
    def M(self):
        return len(self.exponents.bits)

    def to_json_dict(self):
        return {
            "bits": str(self.exponents),
            "log_value": decimal_string(self.log_value, EXTENDED_DPS),
            "exact_value": str(self.exact_value),
        }

    @classmethod
    def from_json_dict(cls, d):
        with extended():
            log_value = mpmath.mpf(d["log_value"])
        return cls(ExponentVector.from_str(d["bits"]), log_value, int(d["exact_value"]))


@lru_cache(maxsize=64)
def prime_logs(M):
    """Extended-precision logs of the first M primes"""
    with extended():
        return tuple(mpmath.log(p) for p in first_m_primes(M))


def _check_lengths(u, v):
    if len(u.bits) != len(v.bits):
        raise InvalidArgument(
            "Exponent vectors have different lengths: {} and {}".format(len(u.bits), len(v.bits))
        )


def delta(u, v):
    """Number of primes dividing exactly one of the two integers (Hamming distance)"""
    _check_lengths(u, v)
    return sum(a != b for a, b in zip(u.bits, v.bits))


def gcd_exponents(u, v):
    """Exponent vector of the gcd: componentwise minimum"""
    _check_lengths(u, v)
    return ExponentVector(tuple(min(a, b) for a, b in zip(u.bits, v.bits)))


def _snap(value, rounding):
    """Round to the nearest integer when within BOUNDARY_TOLERANCE of it, else apply ``rounding``"""
    nearest = mpmath.nint(value)
    if abs(value - nearest) < BOUNDARY_TOLERANCE * max(1, abs(value)):
        return nearest
    return rounding(value)


def choose_M(T, alpha, exponent=None):
    """
    M = ceil(e * log2 T) with e = 2 alpha - 1, or an explicit ``exponent``
    (the measure construction uses e = beta).
    """
    require_alpha(alpha)
    if T < MIN_T:
        raise InvalidArgument("T must be at least {}, got {}".format(MIN_T, T))
    with extended():
        e = 2 * mpmath.mpf(alpha) - 1 if exponent is None else mpmath.mpf(exponent)
        if e <= 0:
            raise InvalidArgument("exponent must be positive, got {}".format(exponent))
        value = e * mpmath.log(mpmath.mpf(T), 2)
        M = int(_snap(value, mpmath.ceil))
    return max(M, 1)


class RadiusChoice(NamedTuple):
    """R from its formula; ``asymptotic`` is set when the formula floors to 0"""

    R: int
    asymptotic: bool

    @property
    def effective(self):
        """R clamped to at least 1, as used by the lemma checks"""
        return max(self.R, 1)


def denominator_base(M):
    """M (log M + log log M), as an extended-precision real"""
    if M < 2:
        raise DomainError("M (log M + log log M) needs M >= 2, got {}".format(M))
    with extended():
        return M * (mpmath.log(M) + mpmath.log(mpmath.log(M)))


def choose_R(M, alpha):
    """R = floor(M^{1-alpha} / (e (log M + log log M)^alpha))"""
    require_alpha(alpha)
    if M < 3:
        raise DomainError("choose_R needs M >= 3, got {}".format(M))
    with extended():
        a = mpmath.mpf(alpha)
        value = mpmath.power(M, 1 - a) / (
            mpmath.e * mpmath.power(mpmath.log(M) + mpmath.log(mpmath.log(M)), a)
        )
        R = int(_snap(value, mpmath.floor))
    if R == 0:
        logger.warning("R formula gives 0 at M=%s, alpha=%s: asymptotic regime not reached", M, alpha)
    return RadiusChoice(R, R == 0)


class MultiplicativeSet(object):
    def __init__(self, M, primes, elements):
        """
        All 2^M square-free products of the first M primes, sorted ascending.

        Parameters
        ----------
        M : int
        primes : tuple of int
        elements : sequence of ResonatorInteger
            Sorted by exact value
        """
        self.M = M
        self.primes = tuple(primes)
        self.elements = tuple(elements)
        self._index_of_mask = {el.mask: idx for idx, el in enumerate(self.elements)}
        self._log_dd = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, item):
        return self.elements[item]

    def __eq__(self, other):
        return (
            isinstance(other, MultiplicativeSet)
            and self.M == other.M
            and [e.exact_value for e in self.elements] == [e.exact_value for e in other.elements]
        )

    def __repr__(self):
        return "MultiplicativeSet(M={}, N={})".format(self.M, len(self))

    @property
    def N(self):
        return len(self.elements)

    def index_of_mask(self, mask):
        return self._index_of_mask[mask]

    @property
    def exact_values(self):
        return [el.exact_value for el in self.elements]

    @property
    def log_dd(self):
        """(hi, lo) float arrays of the element logs"""
        if self._log_dd is None:
            self._log_dd = dd_from_mp_list([el.log_value for el in self.elements])
        return self._log_dd

    def to_json_dict(self, alpha=None):
        d = {
            "M": self.M,
            "primes": list(self.primes),
            "elements": [el.to_json_dict() for el in self.elements],
        }
        if alpha is not None:
            d["alpha"] = decimal_string(alpha)
        return d

    @classmethod
    def from_json_dict(cls, d):
        elements = [ResonatorInteger.from_json_dict(e) for e in d["elements"]]
        return cls(int(d["M"]), [int(p) for p in d["primes"]], elements)

    @classmethod
    def from_json(cls, path_or_dict):
        """Load from a dict or the path to a JSON file written by ``to_json_dict``"""
        if isinstance(path_or_dict, dict):
            return cls.from_json_dict(path_or_dict)
        with open(path_or_dict) as f:
            return cls.from_json_dict(json.load(f))


def build_B(M, caps=DEFAULT_CAPS):
    """
    Enumerate all square-free products of the first M primes.

    Parameters
    ----------
    M : int
    caps : ResourceCaps

    Returns
    -------
    MultiplicativeSet
    """
    if M < 1:
        raise InvalidArgument("M must be at least 1, got {}".format(M))
    caps.check("max_exact_M", M)
    primes = first_m_primes(M)
    logs = prime_logs(M)

    entries = [(1, 0, mpmath.mpf(0))]
    with extended():
        for r, (p, log_p) in enumerate(zip(primes, logs)):
            entries.extend([(value * p, mask | (1 << r), lv + log_p) for value, mask, lv in entries])
    entries.sort(key=lambda entry: entry[0])
    elements = [
        ResonatorInteger(ExponentVector.from_mask(mask, M), lv, value) for value, mask, lv in entries
    ]
    logger.debug("built B for M=%s with %s elements", M, len(elements))
    return MultiplicativeSet(M, primes, elements)


def _t_fraction(T):
    if T < 2:
        raise InvalidArgument("T must be at least 2, got {}".format(T))
    return Fraction(T)


def _in_bucket_exact(b, j, T_frac):
    """(1+1/T)^{j-1} <= b < (1+1/T)^j, exactly"""
    base = 1 + 1 / T_frac
    return base ** (j - 1) <= b < base ** j


def bucket_index(b, T):
    """
    Index j of the bucket [(1+1/T)^{j-1}, (1+1/T)^j) containing b.

    Parameters
    ----------
    b : ResonatorInteger or int
    T : float

    Returns
    -------
    int
    """
    T_frac = _t_fraction(T)
    if isinstance(b, ResonatorInteger):
        exact, log_b = b.exact_value, b.log_value
    else:
        exact = int(b)
        if exact < 1:
            raise InvalidArgument("b must be a positive integer, got {}".format(b))
        with extended():
            log_b = mpmath.log(exact)
    with extended():
        x = log_b / mpmath.log1p(1 / mpmath.mpf(T))
        j = int(mpmath.floor(x)) + 1
        near = abs(x - mpmath.nint(x)) < BOUNDARY_TOLERANCE * max(1, abs(x))
    if near:
        # resolve by exact rational comparison
        for candidate in (j - 1, j, j + 1):
            if candidate >= 1 and _in_bucket_exact(exact, candidate, T_frac):
                return candidate
    return j


class RepresentativeSet(object):
    def __init__(self, source, T, elements, bucket_of, bucket_of_source=None):
        """
        Bucket minima d_1 < ... < d_K of a multiplicative set.

        Parameters
        ----------
        source : MultiplicativeSet
        T : float
        elements : sequence of ResonatorInteger
            Ascending
        bucket_of : dict
            Exact value of each representative -> bucket index
        bucket_of_source : dict, optional
            Exact value of every element of ``source`` -> bucket index
        """
        self.source = source
        self.T = T
        self.elements = tuple(elements)
        self.bucket_of = dict(bucket_of)
        self.bucket_of_source = dict(bucket_of_source or bucket_of)
        self._index_of_bucket = {self.bucket_of[d.exact_value]: k for k, d in enumerate(self.elements)}
        self._log_dd = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, item):
        return self.elements[item]

    def __eq__(self, other):
        return (
            isinstance(other, RepresentativeSet)
            and self.T == other.T
            and [d.exact_value for d in self.elements] == [d.exact_value for d in other.elements]
            and self.bucket_of == other.bucket_of
        )

    def __repr__(self):
        return "RepresentativeSet(M={}, T={}, K={})".format(self.source.M, self.T, self.K)

    @property
    def K(self):
        return len(self.elements)

    @property
    def exact_values(self):
        return [d.exact_value for d in self.elements]

    @property
    def log_dd(self):
        if self._log_dd is None:
            self._log_dd = dd_from_mp_list([d.log_value for d in self.elements])
        return self._log_dd

    def representative_index(self, b):
        """Index k of the representative of the bucket containing element ``b`` of the source set"""
        return self._index_of_bucket[self.bucket_of_source[b.exact_value]]

    def to_json_dict(self):
        return {
            "T": decimal_string(self.T),
            "M": self.source.M,
            "elements": [d.to_json_dict() for d in self.elements],
            "buckets": [
                {"j": self.bucket_of[d.exact_value], "representative_index": k}
                for k, d in enumerate(self.elements)
            ],
        }

    @classmethod
    def from_json_dict(cls, d, source):
        """
        Parameters
        ----------
        d : dict
            As written by ``to_json_dict``
        source : MultiplicativeSet
        """
        elements = [ResonatorInteger.from_json_dict(e) for e in d["elements"]]
        bucket_of = {
            elements[b["representative_index"]].exact_value: int(b["j"]) for b in d["buckets"]
        }
        T = float(d["T"])
        bucket_of_source = {el.exact_value: bucket_index(el, T) for el in source}
        return cls(source, T, elements, bucket_of, bucket_of_source)


def build_D(B, T):
    """
    Keep the smallest element of every non-empty bucket.

    Parameters
    ----------
    B : MultiplicativeSet
    T : float

    Returns
    -------
    RepresentativeSet
    """
    _t_fraction(T)
    bucket_of_source = {}
    minima = {}
    for el in B.elements:  # ascending, so the first element seen in a bucket is its minimum
        j = bucket_index(el, T)
        bucket_of_source[el.exact_value] = j
        if j not in minima:
            minima[j] = el
    elements = sorted(minima.values(), key=lambda el: el.exact_value)
    bucket_of = {el.exact_value: j for j, el in minima.items()}
    logger.debug("built D with K=%s from N=%s at T=%s", len(elements), len(B), T)
    return RepresentativeSet(B, T, elements, bucket_of, bucket_of_source)


def as_resonator(B, T):
    """
    Treat the whole of B as the resonator spectrum (the Euler-product resonator).

    Buckets are not merged, so bucket indices may repeat; only the sums that do not
    depend on bucket separation should be evaluated on the result.
    """
    _t_fraction(T)
    bucket_of_source = {el.exact_value: bucket_index(el, T) for el in B.elements}
    rep = RepresentativeSet.__new__(RepresentativeSet)
    rep.source = B
    rep.T = T
    rep.elements = B.elements
    rep.bucket_of = dict(bucket_of_source)
    rep.bucket_of_source = bucket_of_source
    rep._index_of_bucket = {}
    rep._log_dd = None
    return rep


class BucketStatistics(NamedTuple):
    N: int
    K: int
    multi_element_buckets: int
    largest_bucket: int


def bucket_statistics(D):
    """How often buckets of D's source set hold more than one element"""
    sizes = {}
    for j in D.bucket_of_source.values():
        sizes[j] = sizes.get(j, 0) + 1
    return BucketStatistics(
        N=len(D.source),
        K=D.K,
        multi_element_buckets=sum(1 for s in sizes.values() if s > 1),
        largest_bucket=max(sizes.values()) if sizes else 0,
    )


def log_ratio(u, v):
    """
    log(u / v) for two resonator integers over the same primes, as a double-double.

    Shared prime factors cancel before any logs are summed.
    """
    _check_lengths(u.exponents, v.exponents)
    logs = prime_logs(len(u.exponents.bits))
    with extended():
        total = mpmath.mpf(0)
        for r, (a, b) in enumerate(zip(u.exponents.bits, v.exponents.bits)):
            if a != b:
                total += logs[r] if a else -logs[r]
    return mp_to_dd(total)


def reduced_ratio(u_value, v_value):
    """(numerator, denominator) of u/v in lowest terms"""
    g = math.gcd(u_value, v_value)
    return u_value // g, v_value // g


PAIR_VIOLATION_KINDS = ("denominator", "separation", "bucket")


class PairViolation(NamedTuple):
    i: int
    j: int
    delta: int
    numerator: int
    denominator: int
    kinds: Tuple[str, ...]


class PairSeparationReport(NamedTuple):
    M: int
    R: int
    T: float
    pairs_checked: int
    denominator_bound: float
    violations: Tuple[PairViolation, ...]
    min_ratio: Optional[Fraction]

    @property
    def holds(self):
        return not self.violations

    def count(self, kind):
        return sum(1 for v in self.violations if kind in v.kinds)


def verify_pair_separation(B, R, T, caps=DEFAULT_CAPS, threads=None):
    """
    Check, for every pair of B at distance 1 <= delta <= 2R, the separation argument:
    the reduced ratio's denominator is at most (M(log M + log log M))^{2R}, the ratio is
    at least 1 + 1/sqrt(T), and the two elements lie in different buckets.

    Parameters
    ----------
    B : MultiplicativeSet
    R : int
    T : float
    caps : ResourceCaps
    threads : int, optional

    Returns
    -------
    PairSeparationReport
        Violations sorted by pair index
    """
    if R < 1:
        raise InvalidArgument("R must be at least 1, got {}".format(R))
    T_frac = _t_fraction(T)
    M = B.M
    max_delta = min(2 * R, M)
    per_element = sum(math.comb(M, d) for d in range(1, max_delta + 1))
    caps.check("max_pair_operations", len(B) * per_element)

    with extended():
        bound_mp = mpmath.power(denominator_base(M), 2 * R)
    bound = float(bound_mp)
    buckets = [bucket_index(el, T) for el in B.elements]
    flips = [
        sum(1 << r for r in combo)
        for d in range(1, max_delta + 1)
        for combo in itertools.combinations(range(M), d)
    ]

    def check_chunk(indices):
        violations = []
        best = None
        checked = 0
        for i in indices:
            u = B.elements[i]
            for flip in flips:
                v_mask = u.mask ^ flip
                if v_mask < u.mask:
                    continue  # each unordered pair once
                j = B.index_of_mask(v_mask)
                v = B.elements[j]
                big, small = (u, v) if u.exact_value > v.exact_value else (v, u)
                num, den = reduced_ratio(big.exact_value, small.exact_value)
                checked += 1
                kinds = []
                if den > bound_mp:
                    kinds.append("denominator")
                # num/den >= 1 + 1/sqrt(T)  <=>  (num - den)^2 T >= den^2
                if (num - den) ** 2 * T_frac < den ** 2:
                    kinds.append("separation")
                if buckets[i] == buckets[j]:
                    kinds.append("bucket")
                if kinds:
                    lo, hi = sorted((i, j))
                    violations.append(PairViolation(lo, hi, bin(flip).count("1"), num, den, tuple(kinds)))
                if best is None or num * best[1] < best[0] * den:
                    best = (num, den)
        return violations, best, checked

    chunks = [range(start, min(start + 256, len(B))) for start in range(0, len(B), 256)]
    results = ordered_map(check_chunk, chunks, threads)
    violations = sorted(
        (v for result in results for v in result[0]), key=lambda v: (v.i, v.j)
    )
    bests = [r[1] for r in results if r[1] is not None]
    min_ratio = min((Fraction(*b) for b in bests), default=None)
    report = PairSeparationReport(
        M, R, T, sum(r[2] for r in results), bound, tuple(violations), min_ratio
    )
    if violations:
        logger.warning("%s pair separation violations at M=%s, R=%s, T=%s", len(violations), M, R, T)
    return report


class RatioViolation(NamedTuple):
    k: int
    l: int


class RatioReport(NamedTuple):
    K: int
    T: float
    pairs_checked: int
    exact_comparisons: int
    min_margin: Optional[float]
    violations: Tuple[RatioViolation, ...]

    @property
    def holds(self):
        return not self.violations


def _ratio_holds_exact(d_k, d_l, gap, T_frac):
    # d_l / d_k >= (1 + 1/T)^(gap - 1)
    return Fraction(d_l, d_k) >= (1 + 1 / T_frac) ** (gap - 1)


def verify_representative_ratios(D, caps=DEFAULT_CAPS):
    """
    Check d_l / d_k >= (1 + 1/T)^{l - k - 1} for every pair k < l of representatives.

    Float logs screen all pairs; pairs within ``FLOAT_MARGIN`` are re-evaluated at
    extended precision, and those still within ``BOUNDARY_TOLERANCE`` by exact
    rational comparison.

    The K(K-1)/2 pair comparisons count against ``max_pair_operations``.

    Raises
    ------
    InvariantViolation
        If any pair fails; the report is attached
    """
    K = D.K
    caps.check("max_pair_operations", K * (K - 1) // 2)
    T_frac = _t_fraction(D.T)
    logs = np.array([float(d.log_value) for d in D.elements])
    c = math.log1p(1 / D.T)
    with extended():
        c_mp = mpmath.log1p(1 / mpmath.mpf(D.T))

    violations = []
    exact = 0
    min_margin = None
    for gap in range(1, K):
        margins = logs[gap:] - logs[:-gap] - (gap - 1) * c
        low = float(margins.min())
        min_margin = low if min_margin is None else min(min_margin, low)
        for k in np.flatnonzero(margins < FLOAT_MARGIN):
            k = int(k)
            l = k + gap
            d_k, d_l = D.elements[k], D.elements[l]
            with extended():
                margin = d_l.log_value - d_k.log_value - (gap - 1) * c_mp
            if abs(margin) < BOUNDARY_TOLERANCE:
                exact += 1
                ok = _ratio_holds_exact(d_k.exact_value, d_l.exact_value, gap, T_frac)
            else:
                ok = margin > 0
            if not ok:
                violations.append(RatioViolation(k, l))

    report = RatioReport(K, D.T, K * (K - 1) // 2, exact, min_margin, tuple(sorted(violations)))
    if violations:
        raise InvariantViolation(
            "{} representative pairs violate d_l/d_k >= (1+1/T)^(l-k-1)".format(len(violations)),
            report,
        )
    return report


class WindowReport(NamedTuple):
    N: int
    T: float
    max_excess: Optional[Fraction]
    violations: Tuple[int, ...]

    @property
    def holds(self):
        return not self.violations


def verify_bucket_windows(D):
    """
    Check 1 <= b/d < 1 + 1/T exactly for every element b of the source set and the
    representative d of its bucket.

    Raises
    ------
    InvariantViolation
        If any element falls outside its representative's window
    """
    T_frac = _t_fraction(D.T)
    window = 1 + 1 / T_frac
    violations = []
    max_excess = None
    for idx, b in enumerate(D.source.elements):
        d = D.elements[D.representative_index(b)]
        ratio = Fraction(b.exact_value, d.exact_value)
        if not 1 <= ratio < window:
            violations.append(idx)
        if max_excess is None or ratio > max_excess:
            max_excess = ratio
    report = WindowReport(len(D.source), D.T, max_excess, tuple(violations))
    if violations:
        raise InvariantViolation(
            "{} elements lie outside [d, d(1+1/T))".format(len(violations)), report
        )
    return report


def distance_neighbours(B, index, distance):
    """Indices of all elements of B at exactly ``distance`` from element ``index``"""
    mask = B.elements[index].mask
    return [
        B.index_of_mask(mask ^ sum(1 << r for r in combo))
        for combo in itertools.combinations(range(B.M), distance)
    ]
