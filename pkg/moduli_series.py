#!/usr/bin/env python3
"""
Infinite series of moduli components built from extensions of a sheaf
supported on a surface S in |O(k)| by a rank-two or split bundle

Series:
    A  0 -> O(-n)^2 -> E -> O_S(m) -> 0
    B  0 -> O(-1)^2 -> E -> I(l,S)(m) -> 0     (quadric, S a hyperplane section)
    C  0 -> S(-n) -> E -> O_S(m) -> 0          (quadric, S the spinor bundle)
    D  0 -> S(-1) -> E -> I(l,S)(m) -> 0       (quadric)
    F  0 -> F(-n) -> E -> O_S(m) -> 0          (P3, X4, X5)
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Tuple

from bounds_classify import c3_max
from chern_calculus import (
    ChernCharacter,
    ChernClasses,
    Number,
    as_rational,
    chi_rr,
    euler_pairing,
    line_bundle,
    line_ideal_sheaf,
    spinor_bundle,
    surface_sheaf,
    tensor_line_bundle,
    third_series_sheaf,
    to_chern_classes,
)
from varieties import DomainRejection, VarietyId, get_variety, parse_variety_id

logger = logging.getLogger(__name__)

SERIES = ("A", "B", "C", "D", "F")

# dimension of the family of third-series sheaves F
_F_FAMILY_DIM = {VarietyId.P3: 3, VarietyId.X4: 1, VarietyId.X5: 0}

GRASSMANNIZATION = "grassmannization"
PROJECTIVIZATION = "projectivization"


@dataclass(frozen=True)
class SeriesParams:
    series: str
    variety: VarietyId
    k: int
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "series", str(self.series).upper())
        object.__setattr__(self, "variety", parse_variety_id(self.variety))
        validate(self)

    def shifted(self, dm: int) -> "SeriesParams":
        return SeriesParams(self.series, self.variety, self.k, self.m + dm, self.n)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainRejection(message)


def validate(p: SeriesParams) -> None:
    s, X, k, m, n = p.series, p.variety, p.k, p.m, p.n
    _require(s in SERIES, f"unknown series '{s}'; expected one of {', '.join(SERIES)}")
    _require(k >= 1, f"k must be positive, got {k}")
    if s == "A":
        _require(n == (k + 1) // 2, f"series A needs n = ceil(k/2) = {(k + 1) // 2}, got {n}")
        _require(m + n < 0, f"series A needs m + n < 0, got m = {m}, n = {n}")
        return
    if s in ("B", "C", "D"):
        _require(X == VarietyId.X2, f"series {s} lives on X2, got {X.value}")
    if s == "B":
        _require(k == 1 and n == 1, f"series B needs k = n = 1, got k = {k}, n = {n}")
        _require(m < 0, f"series B needs m < 0, got {m}")
    elif s == "C":
        _require(n == k // 2 + 1, f"series C needs n = floor(k/2) + 1 = {k // 2 + 1}, got {n}")
        _require(m <= -n, f"series C needs m <= -n, got m = {m}, n = {n}")
    elif s == "D":
        _require(k == 1 and n == 1, f"series D needs k = n = 1, got k = {k}, n = {n}")
        _require(m <= -1, f"series D needs m <= -1, got {m}")
    else:
        _require(X in _F_FAMILY_DIM, f"series F lives on P3, X4 or X5, got {X.value}")
        _require(n == k // 2 + 1, f"series F needs n = floor(k/2) + 1 = {k // 2 + 1}, got {n}")
        _require(m < -n, f"series F needs m < -n, got m = {m}, n = {n}")


# --- characters --------------------------------------------------------------

def sub_summand(p: SeriesParams) -> ChernCharacter:
    """One summand of the subsheaf: O(-n), S(-n) or F(-n)"""
    if p.series in ("A", "B"):
        return line_bundle(p.variety, -p.n)
    if p.series in ("C", "D"):
        return spinor_bundle(-p.n)
    return tensor_line_bundle(third_series_sheaf(p.variety), -p.n)


def quotient(p: SeriesParams) -> ChernCharacter:
    if p.series in ("B", "D"):
        return line_ideal_sheaf(p.variety, p.m)
    return surface_sheaf(p.variety, p.k, p.m)


def series_chern(p: SeriesParams) -> ChernCharacter:
    summand = sub_summand(p)
    sub = 2 * summand if p.series in ("A", "B") else summand
    return sub + quotient(p)


def series_a_classes(p: SeriesParams) -> ChernClasses:
    if p.series != "A":
        raise DomainRejection(f"closed-form classes are for series A, got {p.series}")
    deg = get_variety(p.variety).degree
    k, m, n = p.k, p.m, p.n
    return ChernClasses(p.variety, k - 2 * n, deg * ((k - n) ** 2 - k * m), deg * k * (m + n - k) ** 2)


# --- dimensions --------------------------------------------------------------

def _binom(a: int, b: int) -> int:
    if a < b or b < 0:
        return 0
    return math.comb(a, b)


def _dim_a(X: VarietyId, k: int, t: int, s: int):
    if X == VarietyId.P3:
        return 2 * _binom(t + 3, 3) - 2 * _binom(s + 3, 3) + _binom(k + 3, 3) - 5
    if X == VarietyId.X2:
        return (2 * _binom(t + 4, 4) - 2 * _binom(t + 2, 4) - 2 * _binom(s + 4, 4) + 2 * _binom(s + 2, 4)
                + _binom(k + 4, 4) - _binom(k + 2, 4) - 5)
    if X == VarietyId.X4:
        return (2 * _binom(t + 5, 5) - 4 * _binom(t + 3, 5) + 2 * _binom(t + 1, 5)
                - 2 * _binom(s + 5, 5) + 4 * _binom(s + 3, 5) - 2 * _binom(s + 1, 5)
                + _binom(k + 5, 5) - 2 * _binom(k + 3, 5) + _binom(k + 1, 5) - 5)

    def cubic(x):
        return Fraction(5, 3) * x ** 3 + 5 * x ** 2 + Fraction(16, 3) * x

    return cubic(t) - cubic(s) + Fraction(5, 6) * k ** 3 + Fraction(5, 2) * k ** 2 + Fraction(8, 3) * k - 4


def _dim_f(X: VarietyId, k: int, t: int, s: int):
    if X == VarietyId.P3:
        return (_binom(k + 3, 3) + 3 * _binom(s + k + 3, 3) - _binom(s + k + 2, 3)
                - 3 * _binom(s + 3, 3) + _binom(s + 2, 3) + 1)
    if X == VarietyId.X4:
        return (4 * (_binom(t + 4, 4) - _binom(t + 2, 4) - _binom(s + 4, 4) + _binom(s + 2, 4))
                + Fraction(2, 3) * k ** 3 + 2 * k ** 2 + Fraction(7, 3) * k)

    def cubic(x):
        return Fraction(5, 3) * x ** 3 + Fraction(15, 2) * x ** 2 + Fraction(65, 6) * x

    return cubic(t + 1) - cubic(s + 1) + Fraction(5, 6) * k ** 3 + Fraction(5, 2) * k ** 2 + Fraction(8, 3) * k - 1


def series_dim(p: SeriesParams) -> int:
    """Closed dimension formula of the series component, evaluated as written"""
    k, m, n = p.k, p.m, p.n
    t, s = k - m - n, -m - n
    if p.series == "A":
        value = _dim_a(p.variety, k, t, s)
    elif p.series == "B":
        value = 2 * m * m - 6 * m + 4
    elif p.series == "C":
        value = 4 * _binom(t + 3, 3) - 4 * _binom(s + 3, 3) + _binom(k + 4, 4) - _binom(k + 2, 4) - 2
    elif p.series == "D":
        value = 2 * m * m - 8 * m + 10
    else:
        value = _dim_f(p.variety, k, t, s)
    value = Fraction(value)
    if value.denominator != 1:
        raise DomainRejection(f"closed dimension formula is not integral for {p}: {value}")
    return value.numerator


def series_bundle_rank(p: SeriesParams) -> Optional[int]:
    """Rank of the extension bundle where a closed form is known, else None"""
    if p.variety != VarietyId.X2:
        return None
    m = p.m
    if p.series == "A" and p.k == 1:
        return (1 - m) ** 2
    if p.series == "B":
        return (1 - m) * (2 - m)
    if p.series == "C" and p.k == 1:
        return 2 * (1 - m) * (2 - m)
    if p.series == "D":
        return 2 * m * m - 8 * m + 7
    return None


def series_ext1_rank(p: SeriesParams) -> int:
    """ext^1(quotient, summand) = -chi(quotient, summand); hom and ext^2 vanish"""
    value = -euler_pairing(quotient(p), sub_summand(p))
    if value.denominator != 1:
        raise DomainRejection(f"non-integral Euler pairing {value} for {p}")
    return value.numerator


def linear_system_dim(variety, k: int) -> int:
    """dim |O(k)| = chi(O(k)) - 1"""
    return int(chi_rr(line_bundle(variety, k))) - 1


def base_dim(p: SeriesParams) -> int:
    if p.series in ("B", "D"):
        # pairs (line, hyperplane section through it)
        return 4
    N = linear_system_dim(p.variety, p.k)
    if p.series == "F":
        return _F_FAMILY_DIM[p.variety] + N
    return N


def fibration(p: SeriesParams) -> str:
    return GRASSMANNIZATION if p.series in ("A", "B") else PROJECTIVIZATION


def fibration_dim(p: SeriesParams) -> int:
    """Base dimension plus fibre dimension, with the fibre rank from Riemann-Roch"""
    rank = series_ext1_rank(p)
    if fibration(p) == GRASSMANNIZATION:
        return base_dim(p) + 2 * (rank - 2)
    return base_dim(p) + rank - 1


def ext2_vanishes(p: SeriesParams) -> Optional[bool]:
    """Whether the component has the expected dimension; only decided for series A"""
    if p.series != "A":
        return None
    index = get_variety(p.variety).index
    return p.k < index and p.m > p.k - p.n - index


# --- descriptors -------------------------------------------------------------

@dataclass(frozen=True)
class ModuliDescriptor:
    variety: VarietyId
    c1: int
    c2: int
    c3_max: Optional[int]
    dim: int
    fibration: Optional[str]
    base: Optional[str]
    base_dim: Optional[int]
    bundle_rank: Optional[int]
    fine: bool
    smooth: bool
    rational: Optional[bool]
    note: str = ""
    components: Tuple["ModuliDescriptor", ...] = ()
    series: Optional[SeriesParams] = None


def _base_name(p: SeriesParams) -> str:
    if p.series in ("B", "D"):
        return "Gr(2,4)"
    N = linear_system_dim(p.variety, p.k)
    if p.series == "F":
        return f"W x P{N}"
    return f"P{N}"


def series_moduli(p: SeriesParams) -> ModuliDescriptor:
    """The component swept out by one series"""
    E = series_chern(p)
    classes = to_chern_classes(E)
    rank = series_bundle_rank(p)
    if rank is None:
        rank = series_ext1_rank(p)
    return ModuliDescriptor(
        variety=p.variety,
        c1=classes.c1,
        c2=classes.c2,
        c3_max=classes.c3,
        dim=fibration_dim(p),
        fibration=fibration(p),
        base=_base_name(p),
        base_dim=base_dim(p),
        bundle_rank=rank,
        fine=True,
        smooth=True,
        # the F-series component on X4 is irrational
        rational=not (p.series == "F" and p.variety == VarietyId.X4),
        note=f"series {p.series} with k = {p.k}, m = {p.m}, n = {p.n}",
        series=p,
    )


def _point(c1: int, c2: int, c3: int, what: str, fine: bool) -> ModuliDescriptor:
    return ModuliDescriptor(VarietyId.X2, c1, c2, c3, 0, None, None, None, None,
                            fine=fine, smooth=True, rational=True, note=f"a point [{what}]")


def _special_moduli(c1: int, c2: int, c3: int) -> Optional[ModuliDescriptor]:
    if (c1, c2) == (-1, 1):
        return _point(c1, c2, c3, "S(-1)", fine=True)
    if (c1, c2) == (0, 0):
        return _point(c1, c2, c3, "O^2", fine=False)
    if (c1, c2) == (-1, 2):
        return ModuliDescriptor(VarietyId.X2, c1, c2, c3, 6, None, "Gr(2,5)", 6, None,
                                fine=True, smooth=True, rational=True, note="isomorphic to Gr(2,5)")
    if (c1, c2) == (0, 2):
        return ModuliDescriptor(VarietyId.X2, c1, c2, c3, 9, None, None, None, None,
                                fine=False, smooth=False, rational=None,
                                note="irreducible of dimension 9, not smooth")
    if (c1, c2) == (0, 4):
        first = series_moduli(SeriesParams("D", VarietyId.X2, 1, -1, 1))
        first = replace(first, note="M1: stable sheaves, nonsingular along M1")
        second = ModuliDescriptor(VarietyId.X2, c1, c2, c3, 21, None, None, None, None,
                                  fine=False, smooth=False, rational=None,
                                  note="M2: polystable sheaves form a closed 12-dimensional singular locus")
        return ModuliDescriptor(VarietyId.X2, c1, c2, c3, 21, None, None, None, None,
                                fine=False, smooth=False, rational=None,
                                note="irreducible, union of two irreducible subsets M1 and M2",
                                components=(first, second))
    return None


def maximal_moduli(variety, c1: int, c2: int) -> ModuliDescriptor:
    """Moduli of semistable rank-two sheaves on the quadric with c3 = c3_max"""
    var_id = parse_variety_id(variety)
    if var_id != VarietyId.X2:
        raise DomainRejection(f"maximal-c3 moduli are described on X2, got {var_id.value}")
    if (c1, c2) in ((-1, 0), (0, 1)):
        raise DomainRejection(f"no semistable sheaves with maximal c3 for (c1, c2) = ({c1}, {c2})")
    c3 = c3_max(var_id, c1, c2).c3_max
    special = _special_moduli(c1, c2, c3)
    if special is not None:
        return special

    p = c2 // 2
    if c1 == -1 and c2 % 2 == 0:
        params = SeriesParams("A", var_id, 1, -p, 1)
    elif c1 == -1:
        params = SeriesParams("B", var_id, 1, -p, 1)
    elif c2 % 2 == 1:
        params = SeriesParams("C", var_id, 1, -p, 1)
    else:
        params = SeriesParams("D", var_id, 1, 1 - p, 1)
    descriptor = series_moduli(params)
    if descriptor.c3_max != c3:
        raise DomainRejection(f"series {params.series} gives c3 = {descriptor.c3_max}, expected {c3}")
    logger.debug("maximal moduli for (%s, %s): series %s", c1, c2, params.series)
    return descriptor


def series_for_extremal(c: int, d: Number) -> Optional[SeriesParams]:
    """Series whose general member realises the extremal ch3 for (2, c, d) on the quadric"""
    d = as_rational(d)
    X2 = VarietyId.X2
    if c == -1:
        if d.denominator != 1 and d <= Fraction(-3, 2):
            return SeriesParams("A", X2, 1, int(d - Fraction(1, 2)), 1)
        if d.denominator == 1 and d <= -1:
            return SeriesParams("B", X2, 1, int(d), 1)
        return None
    if c == 0:
        if d.denominator != 1 and d <= Fraction(-3, 2):
            return SeriesParams("C", X2, 1, int(d + Fraction(1, 2)), 1)
        if d.denominator == 1 and d <= -3:
            return SeriesParams("D", X2, 1, int(d) + 1, 1)
        return None
    raise DomainRejection(f"c must be -1 or 0, got {c}")
