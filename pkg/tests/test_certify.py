import json
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from nc_forge.certify import (
    LowerBoundCertificate,
    Schedule,
    binomial,
    certify_lower_bound,
    check_binomial_floor,
    enumerate_certificate,
    exponent_report,
    parse_threshold,
    schedule_params,
    verify_certificate,
)
from nc_forge.errors import DomainError, ResourceError

from oracles import pascal_binomial


def test_binomial_examples():
    assert binomial(4, 2) == 6
    assert binomial(17, 11) == 12376 == pascal_binomial(17, 11)
    assert binomial(5, 9) == 0


@settings(max_examples=100, deadline=None)
@given(n=st.integers(min_value=0, max_value=40), k=st.integers(min_value=0, max_value=50))
def test_binomial_matches_pascal(n, k):
    assert binomial(n, k) == pascal_binomial(n, k)


def test_threshold_decimal_and_int():
    assert parse_threshold("12345").value == 12345
    assert parse_threshold(12345).value == 12345
    assert parse_threshold("1_000").value == 1000
    with pytest.raises(DomainError):
        parse_threshold("0")
    with pytest.raises(DomainError):
        parse_threshold("12.5")


def test_threshold_power_of_ten():
    t = parse_threshold("10^30")
    assert t.value == 10**30
    assert abs(t.log - 30 * math.log(10)) < 1e-9


def test_threshold_e_power_matches_high_precision_floor():
    with mpmath.workdps(80):
        want = int(mpmath.floor(mpmath.exp(100)))
    t = parse_threshold("e^100")
    assert t.value == want
    assert t.log == 100.0


def test_threshold_rejects_garbage():
    for bad in ("", "2^30", "ten", "-5"):
        with pytest.raises(DomainError):
            parse_threshold(bad)


def test_schedule_params_t1_at_huge_x():
    r, s, feasible = schedule_params(Schedule.t1(parse_threshold("e^10000"), 0.5))
    assert (r, s, feasible) == (117, 13689, True)
    assert math.floor(10**4 / math.log(10**4) ** 2) == 117


def test_schedule_params_t1_at_desk_scale():
    r, s, feasible = schedule_params(Schedule.t1(10**6, 0.5))
    assert (r, s, feasible) == (2, 4, True)


def test_schedule_params_manual_passthrough():
    assert schedule_params(Schedule.manual(10**6, 10, 100)) == (10, 100, True)
    assert schedule_params(Schedule.manual(10**6, 5, 3)) == (5, 3, False)


def test_schedule_params_requires_x_16_for_formulas():
    with pytest.raises(DomainError):
        schedule_params(Schedule.t1(15, 0.5))
    with pytest.raises(DomainError):
        schedule_params(Schedule.t2(15))
    # manual schedules work below 16
    assert schedule_params(Schedule.manual(10, 2, 2)) == (2, 2, True)


def test_schedule_rejects_bad_u():
    with pytest.raises(DomainError):
        Schedule.t1(10**6, 0.0)
    with pytest.raises(DomainError):
        Schedule.t1(10**6, 1.0)


def test_certificate_flagship_example():
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100))
    assert cert.pi == 17
    assert dict(cert.exponents) == {2: 6, 3: 4, 5: 2, 7: 2}
    assert cert.A == 11
    assert cert.count == 12376
    assert cert.max_member_check
    assert not cert.lemma2_applicable  # 11 > 17/2 + 1
    assert abs(cert.log10_count - math.log10(12376)) < 1e-12


def test_certificate_boundary_example():
    cert = certify_lower_bound(Schedule.manual(2520, 3, 10))
    assert (cert.pi, cert.A, cert.count) == (4, 1, 4)
    assert cert.max_member_check
    assert cert.lemma2_applicable


def test_certificate_tiny_example():
    cert = certify_lower_bound(Schedule.manual(10, 2, 2))
    assert (cert.pi, cert.A, cert.count) == (1, 1, 1)
    assert cert.max_member_check


def test_a_selection_is_maximal_for_the_power_check():
    for args in (("10^30", 10, 100), (2520, 3, 10), (10, 2, 2)):
        cert = certify_lower_bound(Schedule.manual(*args))
        x = parse_threshold(args[0]).value
        d = math.prod(p**e for p, e in cert.exponents)
        assert d * cert.s**cert.A <= x or cert.A == cert.pi
        assert d * cert.s ** (cert.A + 1) > x or cert.A + 1 > cert.pi


def test_closed_form_floor_holds_when_applicable():
    cert = certify_lower_bound(Schedule.manual(2520, 3, 10))
    assert cert.lemma2_applicable
    # count >= (pi/A)^A in exact rational form
    assert cert.count * cert.A**cert.A >= cert.pi**cert.A


def test_infeasible_schedule_yields_zero_certificate():
    cert = certify_lower_bound(Schedule.manual(10**6, 5, 3))
    assert cert.count == 0
    assert not cert.max_member_check
    assert cert.infeasible_reason is not None
    cert2 = certify_lower_bound(Schedule.t2("10^30"))
    assert cert2.count == 0 and cert2.infeasible_reason is not None


def test_base_above_x_yields_zero_certificate():
    cert = certify_lower_bound(Schedule.manual(1000, 10, 100))
    assert cert.count == 0
    assert cert.pi == 17  # facts about (s, r) are still reported
    assert "exceeds" in cert.infeasible_reason


def test_certify_rejects_undersized_tables(tables_small):
    with pytest.raises(ResourceError):
        certify_lower_bound(Schedule.manual("10^30", 10, 20_000), tables_small)


def test_certify_accepts_covering_tables(tables_small):
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100), tables_small)
    assert cert.count == 12376


def test_formula_certificates_verify():
    for cert in (
        certify_lower_bound(Schedule.t1(parse_threshold("e^10000"), 0.5)),
        certify_lower_bound(Schedule.t2("e^1000")),
    ):
        ok, mismatches = verify_certificate(cert)
        assert ok, mismatches


def test_verify_roundtrip_through_json():
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100))
    data = json.loads(json.dumps(cert.to_dict()))
    ok, mismatches = verify_certificate(data)
    assert ok, mismatches
    assert LowerBoundCertificate.from_dict(data) == cert


MUTATIONS = {
    "x": "10^24",
    "r": 11,
    "s": 90,
    "pi": 18,
    "exponents": [[2, 5], [3, 4], [5, 2], [7, 2]],
    "A": 12,
    "count": "12377",
    "log10_count": 4.5,
    "max_member_check": False,
    "lemma2_applicable": True,
}


@pytest.mark.parametrize("field", sorted(MUTATIONS))
def test_verify_flags_any_mutated_field(field):
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100))
    data = cert.to_dict()
    data[field] = MUTATIONS[field]
    ok, mismatches = verify_certificate(data)
    assert not ok
    assert mismatches


def test_verify_flags_missing_and_extra_fields():
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100))
    data = cert.to_dict()
    del data["count"]
    assert not verify_certificate(data)[0]
    data = cert.to_dict()
    data["bonus"] = 1
    assert not verify_certificate(data)[0]


def test_verify_zero_certificates_roundtrip():
    for cert in (
        certify_lower_bound(Schedule.manual(10**6, 5, 3)),
        certify_lower_bound(Schedule.manual(1000, 10, 100)),
    ):
        ok, mismatches = verify_certificate(cert.to_dict())
        assert ok, mismatches


def test_binomial_floor_sweep():
    assert check_binomial_floor(4)
    assert binomial(6, 3) == 20 >= (6 / 3) ** 3
    assert binomial(2, 1) == 2  # equality case
    assert check_binomial_floor(60)
    with pytest.raises(DomainError):
        check_binomial_floor(1)


def test_enumeration_of_boundary_certificate():
    cert = certify_lower_bound(Schedule.manual(2520, 3, 10))
    report = enumerate_certificate(cert)
    assert report.members == 4
    assert report.ok


def test_enumeration_respects_cap():
    cert = certify_lower_bound(Schedule.manual("10^30", 10, 100))
    with pytest.raises(ResourceError):
        enumerate_certificate(cert, cap=100)


def test_enumeration_of_zero_certificate_is_trivially_ok():
    cert = certify_lower_bound(Schedule.manual(10**6, 5, 3))
    assert enumerate_certificate(cert).ok


def test_exponent_report_manual_row():
    (row,) = exponent_report(["10^30"], "manual", r=10, s=100)
    assert row.feasible
    assert abs(row.exponent - math.log10(12376) / 30) < 1e-3
    assert row.target is None


def test_exponent_report_t1_rows():
    rows = exponent_report(["10^30", "10^60"], "t1", u=0.5)
    for row in rows:
        assert row.target == 0.5
        assert row.feasible


def test_exponent_report_marks_infeasible_rows():
    (row,) = exponent_report(["10^30"], "t2")
    assert not row.feasible
    assert row.exponent is None
