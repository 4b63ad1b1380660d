#!/usr/bin/env python3
"""
Test the moduli series: characters, dimensions, fibrations and the
maximal-c3 moduli on the quadric
"""

from fractions import Fraction

import pytest

from bounds_classify import c3_max, extremal_case
from chern_calculus import to_chern_classes
from moduli_series import (
    GRASSMANNIZATION,
    PROJECTIVIZATION,
    SeriesParams,
    base_dim,
    ext2_vanishes,
    fibration,
    fibration_dim,
    linear_system_dim,
    maximal_moduli,
    series_a_classes,
    series_bundle_rank,
    series_chern,
    series_dim,
    series_ext1_rank,
    series_for_extremal,
    series_moduli,
)
from varieties import DomainRejection, VarietyId
from wall_search import all_rank_two_cases


def params(series, variety, k, m, n=None):
    if n is None:
        n = (k + 1) // 2 if series == "A" else k // 2 + 1
    return SeriesParams(series, variety, k, m, n)


@pytest.mark.parametrize("variety", ["P3", "X2", "X4", "X5"])
@pytest.mark.parametrize("k, m", [(1, -2), (1, -4), (2, -3), (3, -5), (4, -4)])
def test_series_a_classes(variety, k, m):
    p = params("A", variety, k, m)
    assert to_chern_classes(series_chern(p)) == series_a_classes(p)


@pytest.mark.parametrize("variety, expected", [("P3", 11), ("X2", 18), ("X4", 27), ("X5", 34)])
def test_series_a_dimension(variety, expected):
    p = params("A", variety, 1, -2)
    assert series_dim(p) == expected
    assert type(series_dim(p)) is int
    assert fibration_dim(p) == expected
    assert fibration(p) == GRASSMANNIZATION


def test_series_a_matches_riemann_roch_on_the_quadric():
    for k in (1, 2):
        for m in range(-6, -(k + 1) // 2):
            p = params("A", "X2", k, m)
            assert series_dim(p) == fibration_dim(p)


@pytest.mark.parametrize("p", range(2, 11))
def test_series_a_closed_form_on_the_quadric(p):
    a = params("A", "X2", 1, -p)
    c2 = to_chern_classes(series_chern(a)).c2
    assert series_dim(a) == Fraction((c2 + 2) ** 2, 2)


@pytest.mark.parametrize("m", range(-1, -11, -1))
def test_series_b_closed_form(m):
    b = params("B", "X2", 1, m)
    c2 = to_chern_classes(series_chern(b)).c2
    assert series_dim(b) == Fraction((c2 + 1) * (c2 + 3), 2)


@pytest.mark.parametrize("m, expected", [(-1, 15), (-2, 27), (-3, 43)])
def test_series_c_dimension(m, expected):
    p = params("C", "X2", 1, m)
    assert series_dim(p) == fibration_dim(p) == expected
    assert fibration(p) == PROJECTIVIZATION


@pytest.mark.parametrize("m", [-1, -2, -3, -5])
def test_series_b_and_d(m):
    b = params("B", "X2", 1, m)
    assert series_dim(b) == fibration_dim(b) == 2 * m * m - 6 * m + 4
    d = params("D", "X2", 1, m)
    assert series_dim(d) == fibration_dim(d) == 2 * m * m - 8 * m + 10
    assert base_dim(b) == base_dim(d) == 4


def test_series_f_dimension():
    assert series_dim(params("F", "P3", 1, -2)) == 20
    assert fibration_dim(params("F", "P3", 1, -2)) == 20
    x4 = params("F", "X4", 1, -2)
    assert series_dim(x4) == fibration_dim(x4) == 41
    assert series_moduli(x4).rational is False


def test_series_f_on_x5_is_off_by_one_step():
    """The closed X5 formula evaluated as written equals the count one step further"""
    p = params("F", "X5", 1, -2)
    assert series_dim(p) == 85
    assert fibration_dim(p) == 50
    assert series_dim(p) == fibration_dim(p.shifted(-1))


@pytest.mark.parametrize("series, m", [("A", -2), ("A", -4), ("B", -1), ("B", -3), ("C", -2), ("D", -1), ("D", -4)])
def test_stated_ranks_are_ext1_ranks(series, m):
    p = params(series, "X2", 1, m)
    assert series_bundle_rank(p) == series_ext1_rank(p)


def test_linear_systems():
    assert [linear_system_dim("P3", k) for k in (1, 2)] == [3, 9]
    assert [linear_system_dim("X2", k) for k in (1, 2)] == [4, 13]


def test_ext2_vanishing():
    assert ext2_vanishes(params("A", "X2", 1, -2)) is True
    assert ext2_vanishes(params("A", "X2", 1, -3)) is False
    assert ext2_vanishes(params("A", "X4", 2, -2)) is False
    assert ext2_vanishes(params("C", "X2", 1, -2)) is None


@pytest.mark.parametrize("series, variety, k, m, n", [
    ("A", "X2", 1, 0, 1),
    ("A", "X2", 2, -3, 2),
    ("B", "P3", 1, -1, 1),
    ("B", "X2", 1, 0, 1),
    ("C", "X2", 1, -1, 2),
    ("D", "X2", 1, 0, 1),
    ("F", "X2", 1, -2, 1),
    ("F", "P3", 1, -1, 1),
    ("E", "X2", 1, -2, 1),
    ("A", "X2", 0, -2, 0),
])
def test_invalid_parameters(series, variety, k, m, n):
    with pytest.raises(DomainRejection):
        SeriesParams(series, variety, k, m, n)


def test_maximal_moduli_by_series():
    c_series = maximal_moduli("X2", 0, 7)
    assert (c_series.bundle_rank, c_series.dim, c_series.c3_max) == (40, 43, 25)
    assert c_series.series.series == "C"

    a_series = maximal_moduli("X2", -1, 4)
    assert (a_series.dim, a_series.bundle_rank, a_series.base) == (18, 9, "P4")
    assert a_series.fibration == GRASSMANNIZATION

    b_series = maximal_moduli("X2", -1, 3)
    assert (b_series.dim, b_series.bundle_rank, b_series.base) == (12, 6, "Gr(2,4)")

    d_series = maximal_moduli("X2", 0, 6)
    assert (d_series.dim, d_series.bundle_rank) == (34, 31)
    assert d_series.c3_max == c3_max("X2", 0, 6).c3_max == 18


def test_special_moduli():
    assert maximal_moduli("X2", -1, 1).dim == 0
    assert maximal_moduli("X2", 0, 0).fine is False
    assert maximal_moduli("X2", -1, 2).base == "Gr(2,5)"
    singular = maximal_moduli("X2", 0, 2)
    assert (singular.dim, singular.smooth, singular.rational) == (9, False, None)
    union = maximal_moduli("X2", 0, 4)
    assert len(union.components) == 2
    assert union.rational is None
    assert union.components[0].series.series == "D"


def test_maximal_moduli_rejections():
    for c1, c2 in [(-1, 0), (0, 1)]:
        with pytest.raises(DomainRejection):
            maximal_moduli("X2", c1, c2)
    with pytest.raises(DomainRejection):
        maximal_moduli("P3", 0, 4)


@pytest.mark.parametrize("c, d", all_rank_two_cases())
def test_series_realise_the_extremal_character(c, d):
    p = series_for_extremal(c, d)
    if p is None:
        return
    assert series_chern(p) == extremal_case(c, d).character()


def test_series_for_extremal():
    assert series_for_extremal(-1, Fraction(-3, 2)).m == -2
    assert series_for_extremal(-1, -1).series == "B"
    assert series_for_extremal(0, Fraction(-3, 2)).series == "C"
    assert series_for_extremal(0, -3) == params("D", "X2", 1, -2)
    assert series_for_extremal(0, -1) is None
    with pytest.raises(DomainRejection):
        series_for_extremal(1, 0)


def test_variety_alias():
    assert params("F", "X1", 1, -2).variety == VarietyId.P3


if __name__ == "__main__":
    print("🧪 Testing moduli series")
    raise SystemExit(pytest.main([__file__, "-v"]))
