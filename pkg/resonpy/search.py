"""
Desk-scale search for large values of |zeta(alpha + it)| on [0, T], the large-value bound,
the err(T) threshold and Monte-Carlo estimates of the measure of the level set.
"""
import logging
import math
from typing import NamedTuple

import numpy as np

from resonpy.construction import MIN_T, choose_M
from resonpy.exceptions import InvalidArgument, require_alpha
from resonpy.gcd_sums import lemma1_bound
from resonpy.limits import DEFAULT_CAPS
from resonpy.util import StrEnum
from resonpy.zeta import batch_zeta_modulus, zeta_moduli, zeta_reference

logger = logging.getLogger(__name__)

BOUND_CONSTANT = 0.18
ERR_CONSTANT = 0.2
EXPONENT_LINK_CONSTANT = 0.36
TAU_DIVISOR = 6

MAX_GRID_STEP = 0.1
DEFAULT_GRID_STEP = 0.05
DEFAULT_REFINEMENT_DEPTH = 20
DEFAULT_CANDIDATES = 8
DEFAULT_STRATA = 100
DEFAULT_LOWER_CUTOFF = 100

_INV_PHI = (math.sqrt(5) - 1) / 2


def _require_T(T):
    if not T >= MIN_T:
        raise InvalidArgument("T must be at least {}, got {}".format(MIN_T, T))


def _log_shape(T, alpha):
    """(log T)^{1-alpha} / (log log T)^alpha"""
    log_T = math.log(T)
    return log_T ** (1 - alpha) / math.log(log_T) ** alpha


def bound_constant(alpha):
    """0.18 (2 alpha - 1)^{1 - alpha}"""
    require_alpha(alpha)
    return BOUND_CONSTANT * (2 * alpha - 1) ** (1 - alpha)


def theorem1_bound(alpha, T):
    """
    exp(c (log T)^{1-alpha} / (log log T)^alpha) with c = 0.18 (2 alpha - 1)^{1-alpha}:
    the size max |zeta(alpha + it)| over [0, T] is guaranteed to reach.
    """
    c = bound_constant(alpha)
    _require_T(T)
    return math.exp(c * _log_shape(T, alpha))


def err_threshold(alpha, T):
    """exp(0.2 (2 alpha - 1)^{1-alpha} log T / log log T)"""
    require_alpha(alpha)
    _require_T(T)
    log_T = math.log(T)
    return math.exp(ERR_CONSTANT * (2 * alpha - 1) ** (1 - alpha) * log_T / math.log(log_T))


class ExponentComparison(NamedTuple):
    alpha: float
    T: float
    M: int
    gcd_exponent: float
    bound_exponent: float

    @property
    def holds(self):
        return self.gcd_exponent > self.bound_exponent


def exponent_comparison(alpha, T):
    """
    Compare the GCD-sum exponent M^{1-alpha} / (2.72 (log M)^alpha), M = choose_M(T, alpha),
    with 0.36 ((2 alpha - 1) log T)^{1-alpha} / (log log T)^alpha.
    """
    require_alpha(alpha)
    _require_T(T)
    M = choose_M(T, alpha)
    log_T = math.log(T)
    rhs = EXPONENT_LINK_CONSTANT * ((2 * alpha - 1) * log_T) ** (1 - alpha) / math.log(log_T) ** alpha
    return ExponentComparison(alpha, T, M, lemma1_bound(M, alpha), rhs)


class Subinterval(StrEnum):
    """Where a maximum was found: below T^{1-alpha} or on [T^{1-alpha}, T]"""

    LOWER = "lower"
    MAIN = "main"


class SearchResult(NamedTuple):
    alpha: float
    T: float
    t_star: float
    max_modulus: float
    grid_step: float
    refinement_depth: int
    theorem1_bound: float
    exceeded: bool
    subinterval: Subinterval
    grid_t: np.ndarray
    grid_modulus: np.ndarray


def _coarse_grid(alpha, T, grid_step, threads):
    lower = T ** (1 - alpha)
    below = np.arange(0.0, lower, grid_step)
    n_main = int(math.floor((T - lower) / grid_step)) + 1
    main = lower + grid_step * np.arange(n_main)
    main = main[main <= T]
    below_mod = zeta_moduli(alpha, below, T, DEFAULT_LOWER_CUTOFF, threads)
    if below.size:
        # t = 0 anchored by the reference evaluation
        below_mod[0] = zeta_reference(alpha, 0.0).modulus
    main_mod = batch_zeta_modulus(alpha, main, T, threads)
    return np.concatenate([below, main]), np.concatenate([below_mod, main_mod])


def _candidates(moduli, n, separation):
    """Indices of the n largest values, at least ``separation`` indices apart"""
    chosen = []
    for idx in np.argsort(-moduli, kind="stable"):
        if all(abs(int(idx) - c) > separation for c in chosen):
            chosen.append(int(idx))
            if len(chosen) == n:
                break
    return chosen


def _golden_section_max(f, a, b, depth):
    """Golden-section search for a maximum of f on [a, b]; returns the best (t, f(t)) seen"""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, c), (fd, d))
    for _ in range(depth):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        best = max(best, (fc, c), (fd, d))
    return best[1], best[0]


def search_max(
    alpha,
    T,
    grid_step=DEFAULT_GRID_STEP,
    refinement_depth=DEFAULT_REFINEMENT_DEPTH,
    candidates=DEFAULT_CANDIDATES,
    caps=DEFAULT_CAPS,
    threads=None,
):
    """
    Largest |zeta(alpha + it)| found on [0, T].

    A uniform grid is swept first: the truncated sum on [T^{1-alpha}, T] and the corrected
    sum with x = max(2t, 100) below it, with t = 0 taken from ``zeta_reference``.
    Golden-section refinement then runs around the
    ``candidates`` best separated grid points. Refined points are only ever added, so
    refinement cannot lower the maximum.

    Parameters
    ----------
    alpha : float
    T : float
    grid_step : float
        In (0, 0.1]
    refinement_depth : int
        Golden-section iterations per candidate; 0 disables refinement
    candidates : int
    caps : ResourceCaps
    threads : int, optional

    Returns
    -------
    SearchResult
    """
    require_alpha(alpha)
    _require_T(T)
    caps.check("max_search_T", T)
    if not 0 < grid_step <= MAX_GRID_STEP:
        raise InvalidArgument("grid_step must satisfy 0 < grid_step <= {}, got {}".format(MAX_GRID_STEP, grid_step))
    if refinement_depth < 0:
        raise InvalidArgument("refinement_depth must be nonnegative, got {}".format(refinement_depth))

    bound = theorem1_bound(alpha, T)
    grid_t, grid_mod = _coarse_grid(alpha, T, grid_step, threads)
    best_idx = int(np.argmax(grid_mod))
    t_star, max_mod = float(grid_t[best_idx]), float(grid_mod[best_idx])
    logger.info("coarse grid of %s points: max %s at t=%s", grid_t.size, max_mod, t_star)

    if refinement_depth:

        def modulus(t):
            return float(zeta_moduli(alpha, [t], T, DEFAULT_LOWER_CUTOFF)[0])

        for idx in _candidates(grid_mod, candidates, separation=2):
            lo = max(0.0, grid_t[idx] - grid_step)
            hi = min(float(T), grid_t[idx] + grid_step)
            t, value = _golden_section_max(modulus, lo, hi, refinement_depth)
            if value > max_mod:
                t_star, max_mod = t, value
        logger.info("refined max %s at t=%s", max_mod, t_star)

    lower = T ** (1 - alpha)
    return SearchResult(
        alpha=alpha,
        T=T,
        t_star=t_star,
        max_modulus=max_mod,
        grid_step=grid_step,
        refinement_depth=refinement_depth,
        theorem1_bound=bound,
        exceeded=max_mod >= bound,
        subinterval=Subinterval.MAIN if t_star >= lower else Subinterval.LOWER,
        grid_t=grid_t,
        grid_modulus=grid_mod,
    )


def tau_limit(alpha):
    """(2 alpha - 1)^{1-alpha} / 6: admissible tau lie strictly below it"""
    require_alpha(alpha)
    return (2 * alpha - 1) ** (1 - alpha) / TAU_DIVISOR


def theorem2_exponent(alpha, tau):
    """
    beta = (6 tau)^{1/(1-alpha)} and the measure floor exponent 2 alpha - 1 - beta.

    Raises
    ------
    InvalidArgument
        Unless 0 < tau < (2 alpha - 1)^{1-alpha} / 6
    """
    limit = tau_limit(alpha)
    if not 0 < tau < limit:
        raise InvalidArgument(
            "tau must satisfy 0 < tau < (2 alpha - 1)^(1 - alpha) / 6 = {}, got {}".format(limit, tau)
        )
    beta = (TAU_DIVISOR * tau) ** (1 / (1 - alpha))
    floor_exponent = 2 * alpha - 1 - beta
    if floor_exponent <= 0:
        raise InvalidArgument("tau={} leaves no positive measure exponent at alpha={}".format(tau, alpha))
    return beta, floor_exponent


def level_threshold(alpha, tau, T):
    """exp(tau (log T)^{1-alpha} / (log log T)^alpha)"""
    require_alpha(alpha)
    _require_T(T)
    return math.exp(tau * _log_shape(T, alpha))


class MeasureReport(NamedTuple):
    alpha: float
    tau: float
    T: float
    threshold: float
    sampled_fraction: float
    estimated_measure: float
    theorem2_floor: float
    beta: float
    M: int
    samples: int
    seed: int
    standard_error: float
    t_samples: np.ndarray
    moduli: np.ndarray

    @property
    def above_floor(self):
        return self.estimated_measure >= self.theorem2_floor

    @property
    def above_threshold(self):
        return self.moduli >= self.threshold


def _stratum_counts(samples, strata):
    base, extra = divmod(samples, strata)
    return [base + (1 if i < extra else 0) for i in range(strata)]


def stratified_samples(T, samples, seed, strata=DEFAULT_STRATA):
    """
    Uniform points on [0, T] with equal counts per stratum of width T/strata.

    Each stratum draws from its own generator spawned from ``SeedSequence(seed)``.

    Returns
    -------
    (np.ndarray, list of int)
        points in stratum order, per-stratum counts
    """
    if seed < 0:
        raise InvalidArgument("seed must be nonnegative, got {}".format(seed))
    strata = min(strata, samples)
    counts = _stratum_counts(samples, strata)
    width = T / strata
    children = np.random.SeedSequence(seed).spawn(strata)
    parts = [
        width * (h + np.random.default_rng(child).random(count))
        for h, (child, count) in enumerate(zip(children, counts))
    ]
    return np.concatenate(parts), counts


def measure_estimate(
    alpha, tau, T, samples, seed, strata=DEFAULT_STRATA, caps=DEFAULT_CAPS, threads=None,
):
    """
    Estimate meas{t in [0, T] : |zeta(alpha + it)| >= threshold} by stratified sampling.

    Parameters
    ----------
    alpha : float
    tau : float
        Admissible, see ``theorem2_exponent``
    T : float
    samples : int
        Positive
    seed : int
    strata : int
    caps : ResourceCaps
    threads : int, optional

    Returns
    -------
    MeasureReport
        ``standard_error`` is the stratified binomial standard error of the measure
    """
    beta, floor_exponent = theorem2_exponent(alpha, tau)
    _require_T(T)
    if samples < 1:
        raise InvalidArgument("samples must be positive, got {}".format(samples))
    if seed < 0:
        raise InvalidArgument("seed must be nonnegative, got {}".format(seed))
    caps.check("max_samples", samples)
    caps.check("max_search_T", T)

    threshold = level_threshold(alpha, tau, T)
    t_samples, counts = stratified_samples(T, samples, seed, strata)
    moduli = zeta_moduli(alpha, t_samples, T, DEFAULT_LOWER_CUTOFF, threads)
    above = moduli >= threshold

    fractions = []
    variance = []
    start = 0
    n_strata = len(counts)
    for count in counts:
        p = float(np.mean(above[start : start + count]))
        fractions.append(p)
        variance.append(p * (1 - p) / count / n_strata ** 2)
        start += count
    fraction = math.fsum(fractions) / n_strata
    se = math.sqrt(math.fsum(variance))

    report = MeasureReport(
        alpha=alpha,
        tau=tau,
        T=T,
        threshold=threshold,
        sampled_fraction=fraction,
        estimated_measure=T * fraction,
        theorem2_floor=T ** floor_exponent,
        beta=beta,
        M=choose_M(T, alpha, exponent=beta),
        samples=samples,
        seed=seed,
        standard_error=T * se,
        t_samples=t_samples,
        moduli=moduli,
    )
    logger.info(
        "measure estimate %s +- %s against floor %s",
        report.estimated_measure,
        report.standard_error,
        report.theorem2_floor,
    )
    return report


def scan_fraction_above(alpha, T, threshold, grid_step=DEFAULT_GRID_STEP, threads=None):
    """Fraction of a uniform grid over [0, T] where |zeta| >= threshold"""
    _, moduli = _coarse_grid(alpha, T, grid_step, threads)
    return float(np.mean(moduli >= threshold))
