import itertools
import json
import math

import mpmath
import pytest

from resonpy.construction import (
    ExponentVector,
    MultiplicativeSet,
    RepresentativeSet,
    bucket_index,
    bucket_statistics,
    build_B,
    build_D,
    choose_M,
    choose_R,
    delta,
    denominator_base,
    distance_neighbours,
    gcd_exponents,
    reduced_ratio,
    verify_bucket_windows,
    verify_pair_separation,
    verify_representative_ratios,
)
from resonpy.exceptions import DomainError, InvalidArgument, InvariantViolation, ResourceRefusal
from resonpy.limits import ResourceCaps


@pytest.mark.parametrize(("T", "alpha", "expected"), [(1e6, 0.75, 10), (2 ** 40, 0.75, 20), (1e4, 0.6, 3)])
def test_choose_M(T, alpha, expected):
    assert choose_M(T, alpha) == expected


def test_choose_M_with_exponent():
    assert choose_M(1e4, 0.75, exponent=0.0081) == math.ceil(0.0081 * math.log2(1e4))


@pytest.mark.parametrize(("T", "alpha"), [(1e4, 0.5), (1e4, 1.0), (1e4, 0.4), (10, 0.75)])
def test_choose_M_rejects(T, alpha):
    with pytest.raises(InvalidArgument):
        choose_M(T, alpha)


@pytest.mark.parametrize(
    ("M", "alpha", "R", "asymptotic"), [(16, 0.75, 0, True), (10 ** 5, 0.6, 7, False), (3, 0.9, 0, True)]
)
def test_choose_R(M, alpha, R, asymptotic):
    choice = choose_R(M, alpha)
    assert choice.R == R
    assert choice.asymptotic == asymptotic
    assert choice.effective == max(R, 1)


def test_choose_R_domain():
    with pytest.raises(DomainError):
        choose_R(2, 0.75)


@pytest.mark.parametrize(("M", "expected"), [(1, [1, 2]), (2, [1, 2, 3, 6])])
def test_build_B_small(M, expected):
    assert build_B(M).exact_values == expected


def test_build_B_4(B4):
    assert len(B4) == 16
    assert B4.exact_values[-1] == 2 * 3 * 5 * 7
    assert B4.exact_values == sorted(set(B4.exact_values))


def test_build_B_elements_consistent():
    B = build_B(8)
    assert len(B) == 2 ** 8
    with mpmath.workdps(60):
        for el in B:
            assert el.exact_value == math.prod(p for p, bit in zip(B.primes, el.exponents.bits) if bit)
            assert abs(el.log_value - mpmath.log(el.exact_value)) < mpmath.mpf("1e-25")


def test_build_B_cap():
    with pytest.raises(ResourceRefusal) as excinfo:
        build_B(27)
    assert excinfo.value.cap_name == "max_exact_M"

    with pytest.raises(ResourceRefusal):
        build_B(5, ResourceCaps(max_exact_M=4))


@pytest.mark.parametrize(
    ("u", "v", "expected"), [("1100", "1100", 0), ("1100", "1010", 2), ("1111", "0000", 4)]
)
def test_delta(u, v, expected):
    assert delta(ExponentVector.from_str(u), ExponentVector.from_str(v)) == expected


@pytest.mark.parametrize(
    ("u", "v", "expected"), [("1100", "1010", "1000"), ("0110", "0110", "0110"), ("1111", "0000", "0000")]
)
def test_gcd_exponents(u, v, expected):
    assert str(gcd_exponents(ExponentVector.from_str(u), ExponentVector.from_str(v))) == expected


def test_gcd_exponents_match_integer_gcd(B4):
    for u, v in itertools.product(B4, repeat=2):
        g = gcd_exponents(u.exponents, v.exponents)
        assert B4[B4.index_of_mask(g.mask)].exact_value == math.gcd(u.exact_value, v.exact_value)


def test_length_mismatch():
    with pytest.raises(InvalidArgument):
        delta(ExponentVector.from_str("10"), ExponentVector.from_str("100"))
    with pytest.raises(InvalidArgument):
        gcd_exponents(ExponentVector.from_str("10"), ExponentVector.from_str("100"))


def test_delta_is_a_metric(B4):
    vectors = [el.exponents for el in B4]
    for u, v in itertools.product(vectors, repeat=2):
        assert (delta(u, v) == 0) == (u == v)
        assert delta(u, v) == delta(v, u)
    for u, v, w in itertools.product(vectors, repeat=3):
        assert delta(u, w) <= delta(u, v) + delta(v, w)


@pytest.mark.parametrize(("b", "T", "expected"), [(1, 10, 1), (1, 1e4, 1), (6, 100, 181), (2, 10, 8)])
def test_bucket_index(b, T, expected):
    assert bucket_index(b, T) == expected


def test_bucket_index_of_resonator_integer(B4):
    six = B4[B4.exact_values.index(6)]
    assert bucket_index(six, 100) == 181


def test_build_D_M1():
    D = build_D(build_B(1), 10)
    assert D.exact_values == [1, 2]
    assert D.K == 2


def test_build_D_M4(D4):
    assert D4.K == 16
    assert D4.exact_values == D4.source.exact_values


def test_build_D_keeps_bucket_minimum(B4):
    D = build_D(B4, 2)
    # 6 and 7 share the bucket [1.5^4, 1.5^5)
    assert bucket_index(6, 2) == bucket_index(7, 2)
    assert 6 in D.exact_values
    assert 7 not in D.exact_values
    assert len(set(D.bucket_of.values())) == D.K
    assert verify_bucket_windows(D).holds

    stats = bucket_statistics(D)
    assert stats.N == 16
    assert stats.K == D.K < 16
    assert stats.multi_element_buckets >= 1
    assert stats.largest_bucket >= 2


def test_build_D_deterministic(B4):
    assert build_D(B4, 100) == build_D(B4, 100)


def test_build_D_property_windows_and_ratios():
    B = build_B(10)
    for T in (50, 1e3, 2 ** 20):
        D = build_D(B, T)
        assert verify_bucket_windows(D).holds
        assert verify_representative_ratios(D).holds


def test_verify_pair_separation_M4(B4):
    report = verify_pair_separation(B4, 1, 1e6)
    assert report.holds
    # distance 1 and 2 pairs: 16 * (4 + 6) / 2
    assert report.pairs_checked == 80
    assert report.min_ratio > 1


def test_verify_pair_separation_small_T_reports():
    report = verify_pair_separation(build_B(2), 1, 4)
    assert report.pairs_checked == 6
    for violation in report.violations:
        assert set(violation.kinds) <= {"denominator", "separation", "bucket"}
        assert violation.i < violation.j


def test_verify_pair_separation_cap(B4):
    with pytest.raises(ResourceRefusal):
        verify_pair_separation(B4, 1, 1e6, ResourceCaps(max_pair_operations=10))


def test_pair_six_ten():
    num, den = reduced_ratio(10, 6)
    assert (num, den) == (5, 3)
    assert den <= denominator_base(4) ** 2


@pytest.mark.parametrize("M", [4, 6, 8, 10, 12])
def test_separation_at_matching_T(M):
    alpha = 0.75
    T = 2 ** (M / (2 * alpha - 1))
    B = build_B(M)
    D = build_D(B, T)
    assert verify_representative_ratios(D).holds
    R = choose_R(M, alpha).effective
    report = verify_pair_separation(B, R, T, threads=2)
    assert report.count("denominator") == 0


def test_verify_representative_ratios_M4(D4):
    report = verify_representative_ratios(D4)
    assert report.holds
    assert report.pairs_checked == 16 * 15 // 2


def test_verify_representative_ratios_cap(D4):
    with pytest.raises(ResourceRefusal):
        verify_representative_ratios(D4, ResourceCaps(max_pair_operations=16 * 15 // 2 - 1))
    assert verify_representative_ratios(D4, ResourceCaps(max_pair_operations=16 * 15 // 2)).holds


def test_verify_representative_ratios_single_element():
    B = build_B(1)
    D = RepresentativeSet(B, 10, [B[0]], {1: 1}, {1: 1, 2: 8})
    report = verify_representative_ratios(D)
    assert report.holds
    assert report.pairs_checked == 0


def test_verify_representative_ratios_raises(B4):
    five, six, seven = (B4[B4.exact_values.index(v)] for v in (5, 6, 7))
    # 7/5 < 1.5, so the gap-2 pair breaks the ratio bound at T = 2
    D = RepresentativeSet(B4, 2, [five, six, seven], {5: 1, 6: 2, 7: 3})
    with pytest.raises(InvariantViolation) as excinfo:
        verify_representative_ratios(D)
    assert (0, 2) in excinfo.value.report.violations


def test_verify_bucket_windows(D4):
    report = verify_bucket_windows(D4)
    assert report.holds
    assert report.max_excess == 1


@pytest.mark.parametrize("M", [6, 12])
def test_distance_neighbour_count(M):
    B = build_B(M)
    for R in range(M + 1):
        for k in (0, len(B) // 3, len(B) - 1):
            neighbours = distance_neighbours(B, k, R)
            assert len(neighbours) == math.comb(M, R)
            assert all(delta(B[k].exponents, B[l].exponents) == R for l in neighbours)


def test_sets_json(tmpdir, B4):
    D = build_D(B4, 2)
    path = str(tmpdir.join("sets.json"))
    with open(path, "w") as f:
        json.dump({"B": B4.to_json_dict(0.75), "D": D.to_json_dict()}, f)
    with open(path) as f:
        data = json.load(f)

    B = MultiplicativeSet.from_json(data["B"])
    assert B == B4
    assert RepresentativeSet.from_json_dict(data["D"], B) == D
    assert data["B"]["alpha"] == "0.75"
    assert data["B"]["elements"][-1]["exact_value"] == "210"
