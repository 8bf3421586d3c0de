import logging
import math

import mpmath
import numpy as np

from resonpy.config import Command, LemmaName
from resonpy.construction import (
    PAIR_VIOLATION_KINDS,
    build_B,
    verify_bucket_windows,
    verify_pair_separation,
    verify_representative_ratios,
)
from resonpy.experiments.base import Experiment, ExperimentResult
from resonpy.experiments.gcd_sum import chain_checks, chain_outputs
from resonpy.gcd_sums import lemma1_chain_check, lemma1_threshold_scan
from resonpy.precision import extended
from resonpy.primes import PRIME_BOUND_VALID_FROM, first_m_primes, prime_upper_bound, stirling_bounds
from resonpy.report import CheckResult
from resonpy.resonance import WeightedKernel, resonant_pair_report, type3_tail_sum, weighted_cos_integral

logger = logging.getLogger(__name__)

GRID_POINTS = 10 ** 4
TYPE3_GRID_TOP = 1e3
TYPE3_INTEGRAL_CONSTANT = 7
POSITIVITY_SLACK = 1e-12
PRIME_BOUND_MAX_R = 10 ** 4
STIRLING_MAX_N = 10 ** 3


class LemmaCheckExperiment(Experiment):
    """Numeric checks of the construction and integral lemmas, one per ``LemmaName``"""

    command = Command.LEMMA_CHECK

    def execute(self):
        handler = {
            LemmaName.GCD_CHAIN: self.check_gcd_chain,
            LemmaName.SEPARATION: self.check_separation,
            LemmaName.WINDOWS: self.check_windows,
            LemmaName.RATIOS: self.check_ratios,
            LemmaName.RESONANT_PAIRS: self.check_resonant_pairs,
            LemmaName.TYPE2_POSITIVITY: self.check_type2_positivity,
            LemmaName.TYPE3_BOUND: self.check_type3_bound,
            LemmaName.CHAIN_SCAN: self.check_chain_scan,
            LemmaName.PRIME_BOUND: self.check_prime_bound,
            LemmaName.STIRLING: self.check_stirling,
        }[self.config.lemma]
        return handler()

    def check_gcd_chain(self):
        report = lemma1_chain_check(self.resolve_M(), self.alpha)
        return ExperimentResult(chain_outputs(report), chain_checks(report), {"R_clamped": report.asymptotic})

    def check_separation(self):
        M = self.resolve_M()
        R, clamped = self.resolve_R(M)
        B = build_B(M, self.caps)
        report = verify_pair_separation(B, R, self.T, self.caps, self.threads)
        outputs = {
            "M": M,
            "R": R,
            "T": self.T,
            "pairs_checked": report.pairs_checked,
            "denominator_bound": report.denominator_bound,
            "min_ratio": None if report.min_ratio is None else float(report.min_ratio),
            "violations": {kind: report.count(kind) for kind in PAIR_VIOLATION_KINDS},
        }
        # only claimed for sufficiently large T
        check = CheckResult(
            "pair_separation", report.holds, "{} violations".format(len(report.violations)), required=False
        )
        return ExperimentResult(outputs, [check], {"R_clamped": clamped})

    def check_windows(self):
        M, B, D = self.build_sets()
        check, report = self.invariant_check("bucket_windows", verify_bucket_windows, D)
        outputs = {"M": M, "N": len(B), "K": D.K, "violations": len(report.violations) if report else None}
        if report is not None and report.max_excess is not None:
            outputs["max_ratio"] = float(report.max_excess)
        return ExperimentResult(outputs, [check], {})

    def check_ratios(self):
        M, B, D = self.build_sets()
        check, report = self.invariant_check("representative_ratios", verify_representative_ratios, D, self.caps)
        outputs = {"M": M, "N": len(B), "K": D.K}
        if report is not None:
            outputs.update(
                pairs_checked=report.pairs_checked,
                exact_comparisons=report.exact_comparisons,
                min_margin=report.min_margin,
                violations=len(report.violations),
            )
        return ExperimentResult(outputs, [check], {})

    def check_resonant_pairs(self):
        M, B, D = self.build_sets()
        R, clamped = self.resolve_R(M)
        report = resonant_pair_report(D, self.alpha, self.config.mn_limit, R)
        ratios = [e.contribution / e.target for e in report.entries if e.target > 0]
        outputs = {
            "M": M,
            "K": D.K,
            "R": R,
            "mn_limit": report.mn_limit,
            "quadruples": sum(e.H for e in report.entries),
            "found_in_type1": sum(e.found_in_type1 for e in report.entries),
            "representative_identities": sum(e.representative_identities for e in report.entries),
            "min_contribution_ratio": min(ratios) if ratios else None,
            "distinct_targets": all(e.distinct_targets for e in report.entries),
        }
        checks = [
            CheckResult("exact_identities", all(e.identities_hold for e in report.entries)),
            CheckResult("type1_window", all(e.within_window for e in report.entries)),
            CheckResult("contribution_at_least_T_over_4", all(e.contribution >= e.target for e in report.entries)),
        ]
        return ExperimentResult(outputs, checks, {"R_clamped": clamped})

    def check_type2_positivity(self):
        kernel = WeightedKernel.from_params(self.T, self.alpha)
        a = np.geomspace(1 / self.T, 1 / (2 * kernel.lower), GRID_POINTS + 1)[1:]
        values = weighted_cos_integral(a, kernel)
        low = int(np.argmin(values))
        floor = -POSITIVITY_SLACK * self.T
        outputs = {"T": self.T, "alpha": self.alpha, "points": a.size, "min_value": values[low], "argmin": a[low]}
        check = CheckResult(
            "type2_nonnegative", bool(values[low] >= floor), "min {} at a={}".format(values[low], a[low])
        )
        return ExperimentResult(outputs, [check], {})

    def check_type3_bound(self):
        kernel = WeightedKernel.from_params(self.T, self.alpha)
        a = np.geomspace(1 / self.T, TYPE3_GRID_TOP, GRID_POINTS)
        scaled = np.abs(weighted_cos_integral(a, kernel)) * a
        worst = int(np.argmax(scaled))
        outputs = {"T": self.T, "alpha": self.alpha, "points": a.size, "max_a_times_integral": scaled[worst]}
        checks = [
            CheckResult(
                "integral_below_7_over_a",
                bool(scaled[worst] <= TYPE3_INTEGRAL_CONSTANT),
                "max a|I(a)| = {} at a={}".format(scaled[worst], a[worst]),
            )
        ]
        if self.T <= self.caps.max_tail_T:
            one = build_B(1).elements[0]
            tail = type3_tail_sum(one, one, self.alpha, self.T, self.caps)
            scale = self.T ** (2 - 2 * self.alpha) * math.log(self.T)
            outputs.update(tail_sum=tail, tail_ratio=tail / scale)
        return ExperimentResult(outputs, checks, {})

    def check_chain_scan(self):
        scan = lemma1_threshold_scan(self.alpha)
        checks = []
        for report in scan.reports:
            checks.extend(chain_checks(report, prefix="M={}:".format(report.M)))
        outputs = {
            "alpha": self.alpha,
            "margin_threshold": scan.margin_threshold,
            "all_links_threshold": scan.all_links_threshold,
            "exponent_margins": {str(r.M): r.exponent_margin for r in scan.reports},
        }
        return ExperimentResult(outputs, checks, {})

    def check_prime_bound(self):
        primes = first_m_primes(PRIME_BOUND_MAX_R)
        failures = []
        worst = 0.0
        for r in range(PRIME_BOUND_VALID_FROM, PRIME_BOUND_MAX_R + 1):
            bound = prime_upper_bound(r).value
            worst = max(worst, primes[r - 1] / bound)
            if not primes[r - 1] < bound:
                failures.append(r)
        outputs = {"r_max": PRIME_BOUND_MAX_R, "max_ratio": worst, "failures": failures}
        check = CheckResult("prime_upper_bound", not failures, "max p_r / bound = {}".format(worst))
        return ExperimentResult(outputs, [check], {})

    def check_stirling(self):
        failures = []
        factorial = 1
        with extended():
            for n in range(1, STIRLING_MAX_N + 1):
                factorial *= n
                bounds = stirling_bounds(n)
                log_factorial = mpmath.log(mpmath.mpf(factorial))
                if not bounds.log_lower <= log_factorial <= bounds.log_upper:
                    failures.append(n)
        outputs = {"n_max": STIRLING_MAX_N, "failures": failures}
        return ExperimentResult(outputs, [CheckResult("stirling_bounds", not failures)], {})
