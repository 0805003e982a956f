import math
import random
from itertools import chain, combinations

import pytest
from hypothesis import given, settings, strategies as st

from nc_forge.construction import (
    build_base,
    build_member,
    member_from_dict,
    member_to_dict,
    shifted_part_divides_base,
    verify_family,
)
from nc_forge.errors import DomainError
from nc_forge.smoothness import shifted_smooth_set


def all_subsets(members):
    return list(chain.from_iterable(combinations(members, k) for k in range(len(members) + 1)))


def test_base_examples(tables_small):
    b = build_base(10, 3, tables_small.primes)
    assert b.exponents == ((2, 3), (3, 2))
    assert b.value == 72
    assert build_base(2, 2, tables_small.primes).value == 2
    b2 = build_base(100, 10, tables_small.primes)
    assert b2.value == 2**6 * 3**4 * 5**2 * 7**2 == 6350400


def test_base_rejects_bad_parameters(tables_small):
    with pytest.raises(DomainError):
        build_base(10, 1, tables_small.primes)
    with pytest.raises(DomainError):
        build_base(10, 11, tables_small.primes)


@settings(max_examples=100, deadline=None)
@given(s=st.integers(min_value=2, max_value=5000), r=st.integers(min_value=2, max_value=5000))
def test_exponents_are_exact(tables_small, s, r):
    if r > s:
        r, s = s, r
    b = build_base(s, r, tables_small.primes)
    for p, e in b.exponents:
        assert p**e <= s < p ** (e + 1)
    assert b.value == math.prod(p**e for p, e in b.exponents)


@settings(max_examples=60, deadline=None)
@given(s=st.integers(min_value=2, max_value=5000), r=st.integers(min_value=2, max_value=5000))
def test_log_bound(tables_small, s, r):
    if r > s:
        r, s = s, r
    b = build_base(s, r, tables_small.primes)
    assert b.log_value <= tables_small.primes.pi(r) * math.log(s) * (1 + 1e-12)


def test_member_examples(tables_small):
    base = build_base(10, 3, tables_small.primes)
    pset = shifted_smooth_set(10, 3, tables_small.primes, tables_small.factors)
    assert build_member(base, {5, 7}, pset).value == 72 * 35 == 2520
    assert build_member(base, set(), pset).value == 72
    assert build_member(base, {2}, pset).value == 144


def test_member_rejects_foreign_primes(tables_small):
    base = build_base(10, 3, tables_small.primes)
    pset = shifted_smooth_set(10, 3, tables_small.primes, tables_small.factors)
    with pytest.raises(DomainError):
        build_member(base, {11}, pset)


def test_member_rejects_mismatched_set(tables_small):
    base = build_base(10, 3, tables_small.primes)
    other = shifted_smooth_set(100, 10, tables_small.primes, tables_small.factors)
    with pytest.raises(DomainError):
        build_member(base, {5}, other)


def test_family_exhaustive_for_small_set(tables_small):
    base = build_base(10, 3, tables_small.primes)
    pset = shifted_smooth_set(10, 3, tables_small.primes, tables_small.factors)
    subsets = all_subsets(pset.members)
    assert len(subsets) == 16
    assert verify_family(base, pset, subsets)
    values = [build_member(base, s, pset).value for s in subsets]
    assert len(set(values)) == 16  # distinct subsets give distinct members


def test_family_random_sample(tables_small):
    base = build_base(100, 10, tables_small.primes)
    pset = shifted_smooth_set(100, 10, tables_small.primes, tables_small.factors)
    rng = random.Random(20260809)
    samples = [
        rng.sample(pset.members, rng.randint(0, 5)) for _ in range(100)
    ]
    assert verify_family(base, pset, samples)
    values = {build_member(base, s, pset).value for s in samples}
    assert len(values) == len({tuple(sorted(s)) for s in samples})


def test_family_degenerate_base(tables_small):
    base = build_base(2, 2, tables_small.primes)
    pset = shifted_smooth_set(2, 2, tables_small.primes, tables_small.factors)
    assert pset.members == (2,)
    assert verify_family(base, pset, [(2,)])
    assert build_member(base, (2,), pset).value == 4


def test_base_primes_lie_in_the_smooth_set(tables_small):
    base = build_base(100, 10, tables_small.primes)
    pset = shifted_smooth_set(100, 10, tables_small.primes, tables_small.factors)
    assert {p for p, _ in base.exponents} <= set(pset.members)


def test_shifted_part_check_matches_direct_division(tables_small):
    base = build_base(100, 10, tables_small.primes)
    pset = shifted_smooth_set(100, 10, tables_small.primes, tables_small.factors)
    for q in pset.members:
        assert shifted_part_divides_base(q, base) == (base.value % max(q - 1, 1) == 0)


def test_member_json_roundtrip(tables_small):
    base = build_base(10, 3, tables_small.primes)
    pset = shifted_smooth_set(10, 3, tables_small.primes, tables_small.factors)
    member = build_member(base, {5, 7}, pset)
    data = member_to_dict(member)
    assert data == {"D": "72", "subset": [5, 7], "E": "2520"}
    again = member_from_dict(data, base, pset)
    assert again.value == member.value
    with pytest.raises(DomainError):
        member_from_dict({"D": "72", "subset": [5, 7], "E": "9999"}, base, pset)
