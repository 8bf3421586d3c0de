"""
The resonator A(t), the weight w(t), the frequency classification and the weighted
resonance integral with its exact decomposition into type 1/2/3 contributions.
"""
import logging
import math
from fractions import Fraction
from typing import NamedTuple, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from resonpy.construction import (
    RepresentativeSet,
    as_resonator,
    choose_R,
    distance_neighbours,
    log_ratio,
    prime_logs,
    reduced_ratio,
)
from resonpy.exceptions import InvalidArgument, DomainError, require_alpha
from resonpy.limits import DEFAULT_CAPS
from resonpy.precision import integer_logs, reduced_phase, two_sum, dd_from_mp_list
from resonpy.util import StrEnum, ordered_map
from resonpy.zeta import uniform_dirichlet_values

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE_ORDER = 8
DEFAULT_QUADRATURE_RTOL = 1e-4
MAX_QUADRATURE_LEVELS = 5
# phase advance per quadrature panel at the highest frequency is at most pi / PANEL_DIVISOR
PANEL_DIVISOR = 8
RESONATOR_BLOCK_ELEMENTS = 2 ** 20
TAIL_ROW_BLOCK = 256
L2_BOUND_CONSTANT = 11


class FrequencyType(StrEnum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    TYPE3 = "type3"


class WeightedKernel(NamedTuple):
    T: float
    alpha: float
    lower: float
    breakpoint: float
    upper: float

    @classmethod
    def from_params(cls, T, alpha):
        """
        Support [T^{1-alpha}, T] with the jump at 2 T^{1-alpha}.

        Raises
        ------
        InvalidArgument
            Unless 2 T^{1-alpha} <= T
        """
        require_alpha(alpha)
        lower = T ** (1 - alpha)
        if 2 * lower > T:
            raise InvalidArgument(
                "the weight needs 2 T^(1-alpha) <= T, got T={}, alpha={}".format(T, alpha)
            )
        return cls(T, alpha, lower, 2 * lower, T)

    @property
    def total_mass(self):
        """Integral of w over its support"""
        return float(weighted_cos_integral(0.0, self))


def resonator_values(D, t_values):
    """A(t) = sum_k d_k^{it} at each point of ``t_values``"""
    t_values = np.asarray(t_values, dtype=float).ravel()
    hi, lo = D.log_dd
    rows = max(1, RESONATOR_BLOCK_ELEMENTS // max(len(hi), 1))
    out = np.empty(t_values.size, dtype=complex)
    for start in range(0, t_values.size, rows):
        block = t_values[start : start + rows]
        phase = reduced_phase(block[:, None], hi, lo)
        out[start : start + rows] = np.exp(1j * phase).sum(axis=1)
    return out


def resonator_eval(D, t):
    """A(t) = sum_k d_k^{it} for a representative set (or any resonator spectrum)"""
    return complex(resonator_values(D, [t])[0])


def euler_product_eval(M, t):
    """The finite Euler product prod_{r <= M} (1 + p_r^{it})"""
    hi, lo = dd_from_mp_list(prime_logs(M))
    phase = reduced_phase(t, hi, lo)
    return complex(np.prod(1 + np.exp(1j * phase)))


def weight(t, kernel):
    """w(t): 3 - t/T on [T^{1-alpha}, 2T^{1-alpha}], 1 - t/T on (2T^{1-alpha}, T]"""
    if not kernel.lower <= t <= kernel.upper:
        raise DomainError(
            "w(t) needs T^(1-alpha) <= t <= T, i.e. {} <= t <= {}, got {}".format(
                kernel.lower, kernel.upper, t
            )
        )
    base = 1 - t / kernel.T
    return base + 2 if t <= kernel.breakpoint else base


def _weights_on(t, kernel):
    t = np.asarray(t, dtype=float)
    return 1 - t / kernel.T + np.where(t <= kernel.breakpoint, 2.0, 0.0)


def frequency_bounds(T, alpha):
    """(1/T, 1/(2 T^{1-alpha})): the upper ends of the type 1 and type 2 intervals"""
    return 1 / T, 1 / (2 * T ** (1 - alpha))


def classify_frequency(a, T, alpha):
    """
    Type of the frequency ``a``: [0, 1/T] is type 1, (1/T, 1/(2T^{1-alpha})] type 2,
    everything beyond type 3.
    """
    if a < 0:
        raise InvalidArgument("frequencies are nonnegative, got {}".format(a))
    first, second = frequency_bounds(T, alpha)
    if a <= first:
        return FrequencyType.TYPE1
    if a <= second:
        return FrequencyType.TYPE2
    return FrequencyType.TYPE3


def triangle_cos_integral(a, T):
    """
    integral_0^T cos(at)(1 - t/T) dt = (1 - cos aT)/(a^2 T), evaluated as 2 sin^2(aT/2)/(a^2 T);
    T/2 at a = 0. Accepts arrays.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise InvalidArgument("frequencies are nonnegative")
    safe = np.where(a == 0, 1.0, a)
    value = np.where(a == 0, T / 2, 2 * np.sin(safe * T / 2) ** 2 / (safe ** 2 * T))
    return value if value.ndim else float(value)


def weighted_cos_integral(a, kernel):
    """
    Closed form of integral_{T^{1-alpha}}^T cos(at) w(t) dt.

    With L = T^{1-alpha}, antiderivatives of the two pieces give

        [cos(aL) - cos(aT)]/(a^2 T) - sin(aL)(1 - L/T)/a + 2[sin(2aL) - sin(aL)]/a

    The differences of trigonometric values are rewritten as products so the
    expression stays accurate as a -> 0. Accepts arrays.
    """
    a = np.abs(np.asarray(a, dtype=float))
    T, L = kernel.T, kernel.lower
    safe = np.where(a == 0, 1.0, a)
    triangle = 2 * np.sin(safe * (T + L) / 2) * np.sin(safe * (T - L) / 2) / (safe ** 2 * T) - np.sin(
        safe * L
    ) * (1 - L / T) / safe
    step = 4 * np.cos(1.5 * safe * L) * np.sin(safe * L / 2) / safe
    at_zero = (T - L) - (T * T - L * L) / (2 * T) + 2 * L
    value = np.where(a == 0, at_zero, triangle + step)
    return value if value.ndim else float(value)


def _pair_log_ratios(D):
    """Double-double log(d_l/d_k) for all k < l, as flat arrays with index arrays"""
    hi, lo = D.log_dd
    k_idx, l_idx = np.triu_indices(len(hi), k=1)
    s, e = two_sum(hi[l_idx], -hi[k_idx])
    e = e + (lo[l_idx] - lo[k_idx])
    return k_idx, l_idx, s, e


def resonator_square_integral(D, T):
    """
    integral_0^T |A(t)|^2 dt = K T + 2 sum_{k<l} sin(T log(d_l/d_k)) / log(d_l/d_k)

    Parameters
    ----------
    D : RepresentativeSet
        Elements must be distinct
    T : float

    Returns
    -------
    float
    """
    K = len(D.elements)
    if K < 2:
        return float(K * T)
    _, _, s, e = _pair_log_ratios(D)
    sines = np.sin(reduced_phase(T, s, e))
    return math.fsum([K * T, 2 * math.fsum(sines / (s + e))])


def l2_bound_ratio(value, K, T):
    """Ratio of a square integral to 11 K T (1 + log K)"""
    return value / (L2_BOUND_CONSTANT * K * T * (1 + math.log(K)))


def euler_product_square_integral(B, T):
    """integral_0^T |prod (1 + p^{it})|^2 dt divided by 2^M T"""
    return resonator_square_integral(as_resonator(B, T), T) / (len(B) * T)


class ResonantPairEntry(NamedTuple):
    k: int
    H: int
    found_in_type1: int
    contribution: float
    restricted_sum: float
    target: float
    identities_hold: bool
    representative_identities: int
    within_window: bool
    distinct_targets: bool

    @property
    def holds(self):
        return self.identities_hold and self.within_window and self.contribution >= self.target


class ResonantPairReport(NamedTuple):
    R: int
    T: float
    mn_limit: int
    entries: Tuple[ResonantPairEntry, ...]

    @property
    def all_hold(self):
        return all(entry.holds for entry in self.entries)


class ResonantQuadruple(NamedTuple):
    m1: int
    n1: int
    k: int
    k_h: int
    b_index: int
    frequency: float


def resonant_quadruples(D, k, R):
    """
    For d_k and every b in B at distance R from it: m1 = b/gcd, n1 = d_k/gcd and k_h,
    the representative index of b's bucket. Then m1 d_k = n1 b and m1 d_k/(n1 d_{k_h}) = b/d_{k_h}.
    """
    B = D.source
    d = D.elements[k]
    out = []
    for idx in distance_neighbours(B, B.index_of_mask(d.mask), R):
        b = B.elements[idx]
        g = math.gcd(d.exact_value, b.exact_value)
        k_h = D.representative_index(b)
        hi, lo = log_ratio(b, D.elements[k_h])
        out.append(ResonantQuadruple(b.exact_value // g, d.exact_value // g, k, k_h, idx, abs(hi + lo)))
    return out


def resonant_pair_report(D, alpha, mn_limit=None, R=None):
    """
    Check the type 1 construction for every representative d_k: each quadruple from
    ``resonant_quadruples`` satisfies m1 b_k = n1 b exactly, its frequency lies in the
    window b/d_{k_h} < 1 + 1/T, and the summed contributions
    (m1 n1)^{-alpha} * weighted_cos_integral(frequency) reach (T/4) times the GCD sum
    restricted to distance R.

    Parameters
    ----------
    D : RepresentativeSet
    alpha : float
    mn_limit : int, optional
        Quadruples with m1 or n1 above it are not counted as found; defaults to floor(T)
    R : int, optional
        Defaults to ``choose_R(M, alpha)`` clamped to 1 (1 when M < 3)

    Returns
    -------
    ResonantPairReport
    """
    T = D.T
    kernel = WeightedKernel.from_params(T, alpha)
    B = D.source
    if R is None:
        R = choose_R(B.M, alpha).effective if B.M >= 3 else 1
    mn_limit = mn_limit or math.floor(T)
    T_frac = Fraction(T)
    window = 1 + 1 / T_frac
    first_bound = 1 / T

    entries = []
    for k, d in enumerate(D.elements):
        quads = resonant_quadruples(D, k, R)
        terms = []
        contributions = []
        found = 0
        identities = True
        rep_identities = 0
        within = True
        for q in quads:
            b = B.elements[q.b_index]
            d_h = D.elements[q.k_h]
            identities = identities and q.m1 * d.exact_value == q.n1 * b.exact_value
            if q.m1 * d.exact_value == q.n1 * d_h.exact_value:
                rep_identities += 1
            in_window = 1 <= Fraction(b.exact_value, d_h.exact_value) < window
            within = within and in_window
            term = math.exp(-alpha * (math.log(q.m1) + math.log(q.n1)))
            terms.append(term)
            contributions.append(term * weighted_cos_integral(q.frequency, kernel))
            if in_window and q.frequency <= first_bound and q.m1 <= mn_limit and q.n1 <= mn_limit:
                found += 1
        restricted = math.fsum(terms)
        targets = {q.k_h for q in quads}
        entries.append(
            ResonantPairEntry(
                k=k,
                H=len(quads),
                found_in_type1=found,
                contribution=math.fsum(contributions),
                restricted_sum=restricted,
                target=T / 4 * restricted,
                identities_hold=identities,
                representative_identities=rep_identities,
                within_window=within,
                distinct_targets=len(targets) == len(quads) and k not in targets,
            )
        )
    return ResonantPairReport(R, T, mn_limit, tuple(entries))


class ResonanceDecomposition(NamedTuple):
    alpha: float
    T: float
    K: int
    mn_limit: int
    type1_sum: float
    type2_sum: float
    type3_sum: float
    total: float
    pair_counts: Dict[FrequencyType, int]
    resonant_pairs: Optional[ResonantPairReport]

    def class_sum(self, frequency_type):
        return {
            FrequencyType.TYPE1: self.type1_sum,
            FrequencyType.TYPE2: self.type2_sum,
            FrequencyType.TYPE3: self.type3_sum,
        }[FrequencyType(frequency_type)]

    @property
    def partition_error(self):
        parts = math.fsum([self.type1_sum, self.type2_sum, self.type3_sum])
        return abs(parts - self.total) / max(abs(self.total), np.finfo(float).tiny)


class _LogDifferences(NamedTuple):
    hi: np.ndarray
    lo: np.ndarray
    weights: np.ndarray


def _log_differences(mn_limit, alpha):
    """log m - log n as a double-double matrix, with (mn)^{-alpha}"""
    hi, lo = integer_logs(mn_limit)
    hi, lo = hi[1:], lo[1:]
    s, e = two_sum(hi[:, None], -hi[None, :])
    e = e + (lo[:, None] - lo[None, :])
    weights = np.exp(-alpha * (hi[:, None] + hi[None, :]))
    return _LogDifferences(s, e, weights)


def _frequencies(diffs, u, v, mn_limit):
    """
    |log(m u / (n v))| for all m, n <= mn_limit, exactly 0 where m u = n v.
    """
    d_hi, d_lo = log_ratio(u, v)
    s, e = two_sum(diffs.hi, d_hi)
    a = np.abs(s + (e + diffs.lo + d_lo))
    # m u = n v  <=>  (m, n) = j (p, q) with v/u = p/q in lowest terms
    p, q = reduced_ratio(v.exact_value, u.exact_value)
    top = mn_limit // max(p, q)
    if top:
        j = np.arange(1, top + 1)
        a[j * p - 1, j * q - 1] = 0.0
    return a


def frequency_decomposition(D, alpha, T, mn_limit=None, caps=DEFAULT_CAPS, threads=None, resonant=True):
    """
    Split the weighted resonance integral

        sum_{k,l} sum_{m,n <= mn_limit} (mn)^{-alpha} integral cos(a t) w(t) dt,
        a = |log(m d_k / (n d_l))|

    by frequency type.

    Parameters
    ----------
    D : RepresentativeSet
    alpha : float
    T : float
    mn_limit : int, optional
        Defaults to floor(T)
    caps : ResourceCaps
    threads : int, optional
    resonant : bool
        Attach ``resonant_pair_report`` when D is a bucketed representative set

    Returns
    -------
    ResonanceDecomposition
    """
    kernel = WeightedKernel.from_params(T, alpha)
    mn_limit = int(mn_limit or math.floor(T))
    if mn_limit < 1:
        raise InvalidArgument("mn_limit must be at least 1, got {}".format(mn_limit))
    K = len(D.elements)
    caps.check("max_quadruple_operations", K * K * mn_limit * mn_limit)
    first, second = frequency_bounds(T, alpha)
    diffs = _log_differences(mn_limit, alpha)

    def row(k):
        sums = {ft: [] for ft in FrequencyType}
        counts = {ft: 0 for ft in FrequencyType}
        everything = []
        for l in range(K):
            a = _frequencies(diffs, D.elements[k], D.elements[l], mn_limit)
            contrib = diffs.weights * weighted_cos_integral(a, kernel)
            masks = {
                FrequencyType.TYPE1: a <= first,
                FrequencyType.TYPE2: (a > first) & (a <= second),
                FrequencyType.TYPE3: a > second,
            }
            for ft, mask in masks.items():
                sums[ft].append(math.fsum(contrib[mask]))
                counts[ft] += int(np.count_nonzero(mask))
            everything.append(math.fsum(contrib.ravel()))
        return {ft: math.fsum(v) for ft, v in sums.items()}, counts, math.fsum(everything)

    rows = ordered_map(row, range(K), threads)
    class_sums = {ft: math.fsum(r[0][ft] for r in rows) for ft in FrequencyType}
    counts = {ft: sum(r[1][ft] for r in rows) for ft in FrequencyType}
    total = math.fsum(r[2] for r in rows)

    report = None
    if resonant and isinstance(D, RepresentativeSet) and D._index_of_bucket and D.T == T:
        report = resonant_pair_report(D, alpha, mn_limit)

    logger.debug("decomposition K=%s mn_limit=%s: %s", K, mn_limit, class_sums)
    return ResonanceDecomposition(
        alpha=alpha,
        T=T,
        K=K,
        mn_limit=mn_limit,
        type1_sum=class_sums[FrequencyType.TYPE1],
        type2_sum=class_sums[FrequencyType.TYPE2],
        type3_sum=class_sums[FrequencyType.TYPE3],
        total=total,
        pair_counts=counts,
        resonant_pairs=report,
    )


def type3_tail_sum(d_k, d_l, alpha, T, caps=DEFAULT_CAPS):
    """
    sum over m, n <= T with a = |log(m d_k / (n d_l))| > 1/(2 T^{1-alpha}) of (mn)^{-alpha} / a.

    Parameters
    ----------
    d_k, d_l : ResonatorInteger
    alpha : float
    T : float
    caps : ResourceCaps

    Returns
    -------
    float
    """
    require_alpha(alpha)
    caps.check("max_tail_T", T)
    n_max = math.floor(T)
    if n_max < 1:
        raise InvalidArgument("T must be at least 1, got {}".format(T))
    _, second = frequency_bounds(T, alpha)
    hi, lo = integer_logs(n_max)
    hi, lo = hi[1:], lo[1:]
    d_hi, d_lo = log_ratio(d_k, d_l)
    p, q = reduced_ratio(d_l.exact_value, d_k.exact_value)

    selected = []
    for start in range(0, n_max, TAIL_ROW_BLOCK):
        rows = slice(start, min(start + TAIL_ROW_BLOCK, n_max))
        s, e = two_sum(hi[rows, None], -hi[None, :])
        e = e + (lo[rows, None] - lo[None, :])
        s2, e2 = two_sum(s, d_hi)
        a = np.abs(s2 + (e2 + e + d_lo))
        m = np.arange(rows.start + 1, rows.stop + 1)[:, None]
        n = np.arange(1, n_max + 1)[None, :]
        a[(m * q == n * p)] = 0.0  # exact equality m d_k = n d_l
        keep = a > second
        w = np.exp(-alpha * (hi[rows, None] + hi[None, :]))
        selected.append((w[keep] / a[keep]))
    return math.fsum(np.concatenate(selected)) if selected else 0.0


class QuadratureResult(NamedTuple):
    value: float
    error_estimate: float
    panels: int
    levels: int


def _gauss_legendre_piece(lo, hi, panel_step, order, integrand):
    n_panels = max(1, int(math.ceil((hi - lo) / panel_step)))
    width = (hi - lo) / n_panels
    nodes, weights = leggauss(order)
    starts = lo + width * np.arange(n_panels)
    partial = []
    for x, wt in zip(nodes, weights):
        grid = starts + width * (x + 1) / 2
        partial.append(wt * math.fsum(integrand(grid)))
    return math.fsum(partial) * width / 2, n_panels


def resonance_integral_quadrature(
    D,
    alpha,
    T,
    n_max=None,
    rel_tol=DEFAULT_QUADRATURE_RTOL,
    order=DEFAULT_QUADRATURE_ORDER,
    caps=DEFAULT_CAPS,
    threads=None,
):
    """
    integral_{T^{1-alpha}}^T |zeta_n(alpha + it) A(t)|^2 w(t) dt by composite Gauss-Legendre,
    where zeta_n is the partial sum over n <= n_max (default floor(T)).

    Panels advance the fastest phase log(d_K n_max) by at most pi/8; the panel count is
    doubled until two successive results agree to ``rel_tol``.

    Returns
    -------
    QuadratureResult
    """
    caps.check("max_quadrature_T", T)
    kernel = WeightedKernel.from_params(T, alpha)
    n_max = int(n_max or math.floor(T))
    K = len(D.elements)
    a_max = max(1.0, float(D.elements[-1].log_value) + math.log(n_max))
    base_step = math.pi / (PANEL_DIVISOR * a_max)
    estimated_points = (T - kernel.lower) / base_step * order * 2
    caps.check("max_quadrature_operations", int(estimated_points * (n_max + K)))

    def integrand(t):
        zeta_part = uniform_dirichlet_values(alpha, t, n_max, threads)
        resonator = resonator_values(D, t)
        return (np.abs(zeta_part) ** 2) * (np.abs(resonator) ** 2) * _weights_on(t, kernel)

    def integrate(step):
        first, n1 = _gauss_legendre_piece(kernel.lower, kernel.breakpoint, step, order, integrand)
        second, n2 = _gauss_legendre_piece(kernel.breakpoint, kernel.upper, step, order, integrand)
        return first + second, n1 + n2

    previous, panels = integrate(base_step)
    step = base_step
    error = float("inf")
    for level in range(1, MAX_QUADRATURE_LEVELS + 1):
        step /= 2
        current, panels = integrate(step)
        error = abs(current - previous)
        previous = current
        if error <= rel_tol * abs(current):
            break
    else:
        logger.warning("quadrature did not reach rtol=%s; estimated error %s", rel_tol, error)
    return QuadratureResult(previous, error, panels, level)
