#!/usr/bin/env python3
"""
Test the wall search, the brute-force oracle, the quadric table replay and
the exceptional collection
"""

from fractions import Fraction

import pytest

from chern_calculus import ChernCharacter, Truncation, line_bundle, spinor_bundle
from tilt_geometry import numerical_wall, radius_bound, wall_relation
from varieties import DomainRejection
from wall_search import (
    EITHER,
    all_rank_two_cases,
    brute_force_walls,
    check_candidate,
    enumerate_walls,
    exceptional_decomposition,
    scan_walls,
    verification_window,
    verify_rank_two_case,
)

WINDOW = (Fraction(-2), Fraction(-1, 2))


@pytest.fixture(scope="module")
def quadric_case():
    v = ChernCharacter.build("X2", 2, 0, -2, 4)
    return v, scan_walls(v, 4, WINDOW, Fraction(1, 100))


def wall_keys(candidates):
    return [(cand.wall.center, cand.wall.radius_sq) for cand in candidates]


def test_known_walls_of_the_quadric_case(quadric_case):
    _, (candidates, exhaustive) = quadric_case
    assert exhaustive
    keys = wall_keys(candidates)
    assert (Fraction(-2), Fraction(2)) in keys
    assert (Fraction(-3, 2), Fraction(1, 4)) in keys
    spinor_wall = candidates[keys.index((Fraction(-2), Fraction(2)))]
    assert spinor_wall.side == EITHER
    assert Truncation.of(2, -1, 0) in [w for w, _ in spinor_wall.witnesses]


def test_order_is_radius_descending(quadric_case):
    _, (candidates, _) = quadric_case
    radii = [cand.wall.radius_sq for cand in candidates]
    assert radii == sorted(radii, reverse=True)
    assert len(set(wall_keys(candidates))) == len(candidates)


def test_line_bundle_wall_sits_at_the_radius_bound():
    v = Truncation.of(2, 0, -2)
    found = check_candidate(v, Truncation.of(4, -4, 2), WINDOW, Fraction(0), Fraction(1, 2))
    assert found is not None
    wall, constraints = found
    assert wall.radius_sq == radius_bound(v, 4) == Fraction(1, 4)
    assert "radius-bound" in constraints


def test_matches_brute_force(quadric_case):
    v, (candidates, _) = quadric_case
    oracle = brute_force_walls(v, 4, WINDOW, Fraction(1, 100), (-12, 12), (-20, 20))
    assert candidates == oracle


def test_worker_processes_do_not_change_the_result(quadric_case):
    v, expected = quadric_case
    assert scan_walls(v, 4, WINDOW, Fraction(1, 100), workers=2) == expected


def test_radius_bound_and_symmetry(quadric_case):
    v, (candidates, _) = quadric_case
    t = v.truncation()
    for cand in candidates:
        for w, _ in cand.witnesses:
            if w.r > t.r:
                assert cand.wall.radius_sq <= radius_bound(t, w.r)
            assert numerical_wall(t, t - w).key() == cand.wall.key()
        assert cand.w + cand.complement == t


def test_smaller_searches_find_fewer_walls(quadric_case):
    v, (candidates, _) = quadric_case
    everything = set(wall_keys(candidates))
    narrow = set(wall_keys(enumerate_walls(v, 4, (Fraction(-3, 2), -1), Fraction(1, 100))))
    large = set(wall_keys(enumerate_walls(v, 4, WINDOW, 1)))
    assert narrow <= everything
    assert large <= everything
    assert (Fraction(-2), Fraction(2)) in large


def test_largest_wall_on_each_side_contains_the_others():
    v = ChernCharacter.build("X2", 2, 0, -2, 4)
    candidates = enumerate_walls(v, 4, (-3, 3), Fraction(1, 100))
    walls = [cand.wall for cand in candidates]
    assert not any(wall.contains_beta(0) for wall in walls)
    for side in (-1, 1):
        on_side = [wall for wall in walls if wall.center * side > 0]
        largest = max(on_side, key=lambda wall: wall.radius_sq)
        assert largest.radius_sq >= 2
        for wall in on_side:
            if wall is not largest:
                assert wall.radius_sq < largest.radius_sq
                assert wall_relation(wall, largest) == "disjoint"


def test_twisted_line_bundles_on_c_minus_one():
    v = ChernCharacter.build("X2", 2, -1, "-1/2", "5/3")
    keys = wall_keys(enumerate_walls(v, 3, (-2, -1)))
    # 2 O(-1) = (2, -2, 1)
    assert (Fraction(-3, 2), Fraction(1, 4)) in keys


def test_no_walls_without_discriminant():
    assert enumerate_walls(line_bundle("X2", 0), 4, (-4, 4), Fraction(1, 100)) == []


def test_rejections_and_empty_window():
    with pytest.raises(DomainRejection):
        enumerate_walls(ChernCharacter.build("X2", 1, 0, 1, 0), 4, (-1, 0))
    with pytest.raises(DomainRejection):
        enumerate_walls(-line_bundle("X2", 0), 4, (-1, 0))
    assert scan_walls(spinor_bundle(-1), 4, (0, -1)) == ([], True)


def test_verification_window():
    assert verification_window(0, Fraction(-2)) == (Fraction(-3, 2), Fraction(-1))
    assert verification_window(-1, Fraction(-1, 2)) == (Fraction(-3, 2), Fraction(-1))


@pytest.mark.parametrize("c, d", all_rank_two_cases())
def test_rank_two_table(c, d):
    report = verify_rank_two_case(c, d)
    assert report.exhaustive
    assert report.ok, report.witnesses


def test_exceptional_decomposition():
    result = exceptional_decomposition(spinor_bundle(-1), twist_by=1)
    assert result["status"] == "DECOMPOSED"
    assert result["coefficients"] == (0, -1, -4, 0)
    assert exceptional_decomposition(line_bundle("X2", -1), twist_by=0)["coefficients"] == (-1, 0, 0, 0)
    assert exceptional_decomposition(2 * line_bundle("X2", 0), twist_by=0)["coefficients"] == (0, 0, -2, 0)

    fractional = exceptional_decomposition(ChernCharacter.build("X2", 1, 0, 0, "1/6"), twist_by=0)
    assert fractional["status"] == "NON_INTEGRAL"
    assert fractional["coefficients"][0] == Fraction(1, 6)

    mixed = exceptional_decomposition(line_bundle("X2", 1) + line_bundle("X2", -1), twist_by=0)
    assert mixed["status"] == "SIGN_MIXED"

    with pytest.raises(DomainRejection):
        exceptional_decomposition(line_bundle("P3", 0))


if __name__ == "__main__":
    print("🧪 Testing wall search")
    raise SystemExit(pytest.main([__file__, "-v"]))
