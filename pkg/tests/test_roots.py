from itertools import product

import pytest

from adecurves.lattice import DivisorClass, DynkinSpec, build_lattice
from adecurves.roots import (
    RootError,
    alpha_string,
    box_positive_roots,
    enumerate_roots,
    expected_root_count,
    height,
)

DESK = [("A", n) for n in range(1, 9)] + [("D", n) for n in range(4, 9)] + [("E", 6), ("E", 7), ("E", 8)]


def signed_box_roots(lat, lo=-3, hi=3):
    """Small-rank oracle: full signed box scan for norm -2 vectors."""
    hits = []
    for coeffs in product(range(lo, hi + 1), repeat=lat.rank):
        v = DivisorClass.make(0, coeffs)
        if lat.norm(v) == -2:
            hits.append(v)
    return hits


def test_a2_count_by_signed_box():
    lat = build_lattice(DynkinSpec("A", 2, 1))
    rs = enumerate_roots(lat)
    assert len(signed_box_roots(lat)) == 6
    assert len(rs) == 6


@pytest.mark.parametrize("family,rank", DESK)
def test_counts_match_formula(family, rank):
    lat = build_lattice(DynkinSpec(family, rank, 1))
    rs = enumerate_roots(lat)
    assert len(rs) == expected_root_count(family, rank)
    assert len(rs) == 2 * len(rs.positive)


@pytest.mark.parametrize("family,rank", DESK)
def test_closure_equals_box_oracle(family, rank):
    lat = build_lattice(DynkinSpec(family, rank, 1))
    rs = enumerate_roots(lat)
    assert rs.positive == box_positive_roots(lat)


def test_simple_classes_are_roots():
    lat = build_lattice(DynkinSpec("D", 5, 1))
    rs = enumerate_roots(lat)
    for i in range(1, 6):
        assert rs.is_positive(DivisorClass.simple(i, 5))


def test_positive_plus_negative_partition():
    lat = build_lattice(DynkinSpec("D", 4, 1))
    rs = enumerate_roots(lat)
    pos = set(rs.positive)
    assert pos.isdisjoint({-a for a in pos})
    for a in rs.all:
        assert all(x >= 0 for x in a.a) or all(x <= 0 for x in a.a)


def test_heights():
    lat = build_lattice(DynkinSpec("A", 2, 1))
    rs = enumerate_roots(lat)
    assert height(rs, DivisorClass.simple(1, 2)) == 1
    assert height(rs, DivisorClass.simple(1, 2) + DivisorClass.simple(2, 2)) == 2
    with pytest.raises(RootError):
        height(rs, -DivisorClass.simple(1, 2))


def test_e8_highest_root_height():
    lat = build_lattice(DynkinSpec("E", 8, 1))
    rs = enumerate_roots(lat)
    assert max(sum(a.a) for a in rs.positive) == 29
    assert sum(rs.highest().a) == 29


def test_descent_step_exists():
    # every positive root of height >= 2 drops to a positive root by a simple
    for family, rank in [("A", 4), ("D", 5), ("E", 6)]:
        lat = build_lattice(DynkinSpec(family, rank, 1))
        rs = enumerate_roots(lat)
        pos = set(rs.positive)
        for a in rs.positive:
            if sum(a.a) < 2:
                continue
            assert any(
                lat.pair(a, DivisorClass.simple(i, rank)) == -1 and (a - DivisorClass.simple(i, rank)) in pos
                for i in range(1, rank + 1)
            )


def test_alpha_string_examples():
    lat2 = build_lattice(DynkinSpec("A", 2, 1))
    rs2 = enumerate_roots(lat2)
    assert alpha_string(rs2, DivisorClass.simple(1, 2), DivisorClass.simple(2, 2)) == (0, 1)
    lat3 = build_lattice(DynkinSpec("A", 3, 1))
    rs3 = enumerate_roots(lat3)
    assert alpha_string(rs3, DivisorClass.simple(1, 3), DivisorClass.simple(3, 3)) == (0, 0)
    with pytest.raises(RootError):
        alpha_string(rs2, DivisorClass.simple(1, 2), DivisorClass.simple(1, 2))


def test_alpha_string_bounded():
    lat = build_lattice(DynkinSpec("D", 4, 1))
    rs = enumerate_roots(lat)
    roots = rs.all
    for a in roots[:12]:
        for b in roots[:12]:
            if a in (b, -b):
                continue
            r, q = alpha_string(rs, b, a)
            assert r + q <= 1


def test_json_listing_sorted():
    lat = build_lattice(DynkinSpec("A", 3, 1))
    rs = enumerate_roots(lat)
    listing = rs.to_json()
    keyed = [(sum(a), a) for a in listing]
    assert keyed == sorted(keyed)
