"""GCD sums over square-free sets and the numeric verification of the GCD-sum lower bound."""
import itertools
import logging
import math
from typing import NamedTuple, Optional, Dict, Tuple

import mpmath
import numpy as np

from resonpy.construction import MultiplicativeSet, choose_R, denominator_base
from resonpy.exceptions import InvalidArgument, DomainError, require_alpha
from resonpy.limits import DEFAULT_CAPS
from resonpy.precision import extended
from resonpy.primes import first_m_primes
from resonpy.util import StrEnum, ordered_map

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_M = 16
# constant in the final exponent of the GCD-sum lower bound
FINAL_BOUND_CONSTANT = "2.72"
DEFAULT_SCAN_EXPONENTS = tuple(range(4, 25))

_INT64_SAFE = 2 ** 62


def _as_values(S):
    if isinstance(S, MultiplicativeSet):
        return S.exact_values
    return [int(s) for s in S]


def gcd_sum_bruteforce(S, alpha, caps=DEFAULT_CAPS, threads=None):
    """
    Sum over all ordered pairs of gcd(n_k, n_l)^{2 alpha} / (n_k n_l)^alpha.

    Parameters
    ----------
    S : iterable of int or MultiplicativeSet
        Distinct positive integers
    alpha : float
    caps : ResourceCaps
    threads : int, optional

    Returns
    -------
    float
    """
    values = _as_values(S)
    if len(set(values)) != len(values):
        raise InvalidArgument("GCD sums need distinct elements")
    if any(v < 1 for v in values):
        raise InvalidArgument("GCD sums need positive integers")
    caps.check("max_gcd_elements", len(values))
    if not values:
        return 0.0

    if max(values) < _INT64_SAFE:
        arr = np.array(values, dtype=np.int64)
        logs = np.log(arr.astype(float))

        def row_sum(k):
            g = np.gcd(arr[k], arr)
            return math.fsum(np.exp(alpha * (2 * np.log(g.astype(float)) - logs[k] - logs)))

    else:
        logs = [math.log(v) for v in values]

        def row_sum(k):
            n_k = values[k]
            return math.fsum(
                math.exp(alpha * (2 * math.log(math.gcd(n_k, n_l)) - logs[k] - logs[l]))
                for l, n_l in enumerate(values)
            )

    rows = ordered_map(row_sum, range(len(values)), threads)
    return math.fsum(rows)


def gcd_sum_row_log_product(M, alpha):
    """log of the product over the first M primes of (1 + p^{-alpha})"""
    if M < 1:
        raise InvalidArgument("M must be at least 1, got {}".format(M))
    return math.fsum(math.log1p(p ** -alpha) for p in first_m_primes(M))


def gcd_sum_row_product(M, alpha):
    """
    Closed form of one row of the GCD sum over B: the product over the first M
    primes of (1 + p^{-alpha}), which does not depend on the row.
    """
    return math.exp(gcd_sum_row_log_product(M, alpha))


def restricted_terms(B, k, R, alpha, caps=DEFAULT_CAPS):
    """
    Terms gcd(b_k, b_l)^{2 alpha} / (b_k b_l)^alpha over all l with delta(b_k, b_l) = R.

    Generated by flipping R-subsets of exponent positions; each term is the product of
    p^{-alpha} over the flipped primes.

    Returns
    -------
    list of (int, float)
        (index l, term) in subset-enumeration order
    """
    if not 0 <= R <= B.M:
        raise InvalidArgument("R must lie in [0, M], got R={} with M={}".format(R, B.M))
    caps.check("max_restricted_terms", math.comb(B.M, R))
    mask = B.elements[k].mask
    logs = [math.log(p) for p in B.primes]
    out = []
    for combo in itertools.combinations(range(B.M), R):
        l = B.index_of_mask(mask ^ sum(1 << r for r in combo))
        out.append((l, math.exp(-alpha * math.fsum(logs[r] for r in combo))))
    return out


def gcd_sum_distance_restricted(B, k, R, alpha, caps=DEFAULT_CAPS):
    """Row k of the GCD sum restricted to elements at distance exactly R"""
    return math.fsum(term for _, term in restricted_terms(B, k, R, alpha, caps))


def lemma1_bound(M, alpha):
    """Exponent M^{1-alpha} / (2.72 (log M)^alpha) of the GCD-sum lower bound"""
    require_alpha(alpha)
    if M < 3:
        raise DomainError("lemma1_bound needs M >= 3, got {}".format(M))
    with extended():
        a = mpmath.mpf(alpha)
        value = mpmath.power(M, 1 - a) / (mpmath.mpf(FINAL_BOUND_CONSTANT) * mpmath.power(mpmath.log(M), a))
    return float(value)


class ChainLink(StrEnum):
    BINOMIAL_VS_STIRLING = "binomial_vs_stirling"
    STIRLING_VS_SIMPLIFIED = "stirling_vs_simplified"
    EXPONENT_MARGIN = "exponent_margin"
    FINAL_BOUND = "final_bound"
    RESTRICTED_VS_BINOMIAL = "restricted_vs_binomial"
    PER_TERM_FLOOR = "per_term_floor"


STIRLING_LINKS = (ChainLink.BINOMIAL_VS_STIRLING, ChainLink.STIRLING_VS_SIMPLIFIED)


class ChainReport(NamedTuple):
    """
    Every quantity of the GCD-sum lower-bound chain at one (M, alpha).

    Log-domain fields are natural logs. ``inequalities_held`` maps link names (see
    ``ChainLink``) to the literal evaluation of the inequality.
    """

    M: int
    R: int
    alpha: float
    asymptotic: bool
    lhs_restricted_sum: Optional[float]
    binomial_term: float
    stirling_lower: Optional[float]
    simplified_lower: float
    exponent_margin: float
    final_bound: float
    inequalities_held: Dict[str, bool]

    @property
    def all_hold(self):
        return all(self.inequalities_held.values())


def lemma1_chain_check(M, alpha, brute_force_max_M=BRUTE_FORCE_MAX_M):
    """
    Evaluate each link of the chain

        sum_{delta = R} >= binom(M, R) L^{-alpha R}
                        >= M^{M+1/2} / (3 (M-R)^{M-R+1/2} R^{R+1/2} L^{alpha R})
                        >= exp(R log M - R log R - alpha R log L) / (3 sqrt(M))
                        >= e^R / (3 sqrt(M))
                        >= exp(M^{1-alpha} / (2.72 (log M)^alpha))

    with L = M(log M + log log M) and R from ``choose_R`` (clamped to 1).

    Parameters
    ----------
    M : int
    alpha : float
    brute_force_max_M : int
        Largest M for which the restricted sum is enumerated

    Returns
    -------
    ChainReport
    """
    choice = choose_R(M, alpha)
    R = choice.effective
    held = {}
    with extended():
        a = mpmath.mpf(alpha)
        log_M = mpmath.log(M)
        L = denominator_base(M)
        log_L = mpmath.log(L)
        log_R = mpmath.log(R)
        log_binom = mpmath.loggamma(M + 1) - mpmath.loggamma(R + 1) - mpmath.loggamma(M - R + 1)
        binomial_term = log_binom - a * R * log_L
        if R < M:
            stirling_lower = (
                (M + mpmath.mpf(1) / 2) * log_M
                - mpmath.log(3)
                - (M - R + mpmath.mpf(1) / 2) * mpmath.log(M - R)
                - (R + mpmath.mpf(1) / 2) * log_R
                - a * R * log_L
            )
        else:
            stirling_lower = None
        simplified = -mpmath.log(3) - log_M / 2 + R * log_M - R * log_R - a * R * log_L
        margin = R * log_M - R * log_R - a * R * log_L - R
        final = mpmath.power(M, 1 - a) / (mpmath.mpf(FINAL_BOUND_CONSTANT) * mpmath.power(log_M, a))
        e_R_term = R - mpmath.log(3) - log_M / 2

        held[ChainLink.BINOMIAL_VS_STIRLING] = stirling_lower is not None and binomial_term >= stirling_lower
        held[ChainLink.STIRLING_VS_SIMPLIFIED] = stirling_lower is not None and stirling_lower >= simplified
        held[ChainLink.EXPONENT_MARGIN] = bool(margin >= 0)
        held[ChainLink.FINAL_BOUND] = bool(e_R_term >= final)

        lhs = None
        if M <= brute_force_max_M:
            primes = first_m_primes(M)
            logs = [math.log(p) for p in primes]
            L_R = mpmath.power(L, R)
            floor_ok = True
            terms = []
            for combo in itertools.combinations(range(M), R):
                product = math.prod(primes[r] for r in combo)
                # term = product^{-alpha} >= L^{-alpha R}  <=>  product <= L^R
                floor_ok = floor_ok and product <= L_R
                terms.append(math.exp(-alpha * math.fsum(logs[r] for r in combo)))
            lhs = math.fsum(terms)
            held[ChainLink.RESTRICTED_VS_BINOMIAL] = bool(mpmath.log(lhs) >= binomial_term)
            if primes[-1] <= L:
                held[ChainLink.PER_TERM_FLOOR] = floor_ok

    report = ChainReport(
        M=M,
        R=R,
        alpha=alpha,
        asymptotic=choice.asymptotic,
        lhs_restricted_sum=lhs,
        binomial_term=float(binomial_term),
        stirling_lower=None if stirling_lower is None else float(stirling_lower),
        simplified_lower=float(simplified),
        exponent_margin=float(margin),
        final_bound=float(final),
        inequalities_held=held,
    )
    logger.debug("chain check at M=%s alpha=%s: %s", M, alpha, held)
    return report


class ThresholdReport(NamedTuple):
    alpha: float
    reports: Tuple[ChainReport, ...]
    margin_threshold: Optional[int]
    all_links_threshold: Optional[int]


def _threshold(reports, predicate):
    threshold = None
    for report in reversed(reports):
        if not predicate(report):
            break
        threshold = report.M
    return threshold


def lemma1_threshold_scan(alpha, exponents=DEFAULT_SCAN_EXPONENTS, brute_force_max_M=BRUTE_FORCE_MAX_M):
    """
    Run ``lemma1_chain_check`` over M = 2^e and report the smallest grid M from which
    the exponent margin (respectively every link) holds for all larger grid M.
    """
    reports = tuple(lemma1_chain_check(2 ** e, alpha, brute_force_max_M) for e in sorted(exponents))
    return ThresholdReport(
        alpha=alpha,
        reports=reports,
        margin_threshold=_threshold(reports, lambda r: r.inequalities_held[ChainLink.EXPONENT_MARGIN]),
        all_links_threshold=_threshold(reports, lambda r: r.all_hold),
    )


def universal_bound_ratio(value, N, alpha, c=1.0):
    """
    Ratio of a GCD sum to N exp(c (log N)^{1-alpha} / (log log N)^alpha).

    Reported for comparison only; nothing is asserted about its size.
    """
    require_alpha(alpha)
    if N < 3:
        raise DomainError("universal_bound_ratio needs N >= 3, got {}".format(N))
    log_N = math.log(N)
    exponent = c * log_N ** (1 - alpha) / math.log(log_N) ** alpha
    return value / (N * math.exp(exponent))
