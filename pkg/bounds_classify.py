#!/usr/bin/env python3
"""
Upper bounds for ch3 and c3 of semistable rank-two sheaves

The quadric bounds come from the extremal table of e_max(c, d), each row
carrying the objects that realise it. P3, X4 and X5 use closed formulas.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from chern_calculus import (
    ChernCharacter,
    ChernClasses,
    Number,
    as_rational,
    chi_rr,
    from_chern_classes,
    line_bundle,
    line_ideal_sheaf,
    spinor_bundle,
    surface_sheaf,
)
from varieties import DomainRejection, VarietyId, get_variety, parse_variety_id

logger = logging.getLogger(__name__)

WALL = "wall"
LIMIT_POINT = "limit-point"
OBJECT = "object"

REGIMES = {
    VarietyId.P3: "p3-reflexive",
    VarietyId.X2: "quadric-tilt",
    VarietyId.X4: "general-type-X4",
    VarietyId.X5: "general-type-X5",
}

X2 = VarietyId.X2


class Witness(NamedTuple):
    """An object or a sub/quotient pair whose characters add up to the extremal one"""

    label: str
    sub: ChernCharacter
    quotient: ChernCharacter
    relation: str

    def total(self) -> ChernCharacter:
        return self.sub + self.quotient


class ExtremalCase(NamedTuple):
    c: int
    d: Fraction
    e_max: Fraction
    case: str
    witnesses: Tuple[Witness, ...]

    def character(self) -> ChernCharacter:
        return ChernCharacter(X2, 2, self.c, self.d, self.e_max)


@dataclass(frozen=True)
class BoundResult:
    variety: VarietyId
    c1: int
    c2: int
    c3_max: int
    c3_bound_raw: Fraction
    e_max: Fraction
    regime: str
    witnesses: Tuple[Witness, ...] = ()
    caveats: Tuple[str, ...] = ()
    case: Optional[str] = None


def _check_rank_two_input(c: int, d: Fraction) -> None:
    if c not in (-1, 0):
        raise DomainRejection(f"c must be -1 or 0 after normalizing by a twist, got {c}")
    if d > 0:
        raise DomainRejection(f"d must be non-positive, got {d}")
    if (2 * d).denominator != 1:
        raise DomainRejection(f"2d must be an integer, got d = {d}")


def _zero() -> ChernCharacter:
    return ChernCharacter.zero(X2)


def extremal_case(c: int, d: Number) -> ExtremalCase:
    """
    Largest ch3 of a tilt-semistable ch = (2, c, d, e) on the quadric and the
    objects reaching it.
    """
    d = as_rational(d)
    _check_rank_two_input(c, d)
    integral = d.denominator == 1
    S = spinor_bundle

    def O(n: int) -> ChernCharacter:
        return line_bundle(X2, n)

    if c == -1:
        if d == 0:
            return ExtremalCase(c, d, Fraction(1, 6), "spinor", (
                Witness("S(-1)", S(-1), _zero(), OBJECT),))
        if d == Fraction(-1, 2):
            return ExtremalCase(c, d, Fraction(5, 3), "twisted-cotangent", (
                Witness("3O(-1) -> O(-2)[1]", 3 * O(-1), -O(-2), WALL),))
        if integral:
            m = d.numerator
            return ExtremalCase(c, d, d * d - 2 * d + Fraction(1, 6), "line-ideal", (
                Witness(f"2O(-1) -> I(l,Q)({m})", 2 * O(-1), line_ideal_sheaf(X2, m), WALL),))
        m = d - Fraction(1, 2)
        return ExtremalCase(c, d, d * d - 2 * d + Fraction(5, 12), "surface", (
            Witness(f"2O(-1) -> O_Q({m})", 2 * O(-1), surface_sheaf(X2, 1, int(m)), WALL),))

    if d == 0:
        return ExtremalCase(c, d, Fraction(0), "trivial", (
            Witness("O^2", 2 * O(0), _zero(), OBJECT),))
    if d == Fraction(-1, 2):
        return ExtremalCase(c, d, Fraction(-1, 2), "unwitnessed", ())
    if d == -1:
        return ExtremalCase(c, d, Fraction(1), "limit", (
            Witness("6O(-1) -> S(-2)^2[1]", 6 * O(-1), -2 * S(-2), LIMIT_POINT),))
    if not integral:
        m = d + Fraction(1, 2)
        return ExtremalCase(c, d, d * d + Fraction(1, 4), "spinor-surface", (
            Witness(f"S(-1) -> O_Q({m})", S(-1), surface_sheaf(X2, 1, int(m)), WALL),))
    if d == -2:
        return ExtremalCase(c, d, Fraction(4), "two-sided", (
            Witness("S(-1) -> I(l,Q)(-1)", S(-1), line_ideal_sheaf(X2, -1), WALL),
            Witness("I(l,Q)(-1) -> S(-1)", line_ideal_sheaf(X2, -1), S(-1), WALL),
            Witness("4O(-1) -> O(-2)^2[1]", 4 * O(-1), -2 * O(-2), WALL),
        ))
    m = d.numerator + 1
    return ExtremalCase(c, d, d * d, "spinor-line-ideal", (
        Witness(f"S(-1) -> I(l,Q)({m})", S(-1), line_ideal_sheaf(X2, m), WALL),))


def e_max(c: int, d: Number) -> Fraction:
    return extremal_case(c, d).e_max


def rank_one_e_max(y: Number) -> Fraction:
    """Bound e <= y(y + 1) for ch = (1, 0, -y, e) on the quadric"""
    y = as_rational(y)
    if y < 0 or (2 * y).denominator != 1:
        raise DomainRejection(f"y must be a non-negative half-integer, got {y}")
    return y * (y + 1)


def torsion_e_max(d: Number) -> Tuple[Fraction, Optional[ChernCharacter]]:
    """
    Bound e <= d^2 - 1/6 for ch = (0, 1, d, e) on the quadric. For integer d
    the bound is reached by I(l,Q)(d + 1).
    """
    d = as_rational(d)
    if (2 * d).denominator != 1:
        raise DomainRejection(f"2d must be an integer, got d = {d}")
    bound = d * d - Fraction(1, 6)
    extremal = line_ideal_sheaf(X2, d.numerator + 1) if d.denominator == 1 else None
    return bound, extremal


# --- c3 bounds ---------------------------------------------------------------

def _quadric_c3(c1: int, c2: int) -> Tuple[int, List[str]]:
    caveats = []
    if c2 % 2 == 0:
        bound = Fraction(c2 * c2, 2)
    elif c1 == -1:
        bound = Fraction(c2 * c2 - 1, 2)
    else:
        bound = Fraction(c2 * c2 + 1, 2)
    if (c1, c2) == (0, 1):
        bound = Fraction(-1)
        caveats.append("(c1, c2) = (0, 1): only the value -1 is attained, no sheaf with c3 >= 0")
    if (c1, c2) == (-1, 0):
        caveats.append("(c1, c2) = (-1, 0) violates the Bogomolov inequality; formula value only")
    return int(bound), caveats


def _p3_c3(c1: int, c2: int) -> Tuple[int, List[str]]:
    caveats = []
    if c1 == 0:
        bound = c2 * c2 - c2 + 2
        if c2 == 0:
            bound = 0
            caveats.append("c2 = 0 with c1 = 0: only O^2, so c3 = 0")
    else:
        bound = c2 * c2
        if c2 == 0:
            caveats.append("(c1, c2) = (-1, 0) violates the Bogomolov inequality; formula value only")
    return bound, caveats


def c3_max(variety, c1: int, c2: int, general_type: bool = False) -> BoundResult:
    var_id = parse_variety_id(variety)
    if c1 not in (-1, 0):
        raise DomainRejection(f"c1 must be -1 or 0 after normalizing by a twist, got {c1}")
    if c2 < 0:
        raise DomainRejection(f"c2 must be non-negative, got {c2}")

    caveats: List[str] = []
    witnesses: Tuple[Witness, ...] = ()
    case = None
    raw: Fraction
    if var_id == VarietyId.X2:
        bound, caveats = _quadric_c3(c1, c2)
        raw = Fraction(bound)
        d = Fraction(c1 * c1 - c2, 2)
        if d <= 0:
            extremal = extremal_case(c1, d)
            witnesses, case = extremal.witnesses, extremal.case
    elif var_id == VarietyId.P3:
        bound, caveats = _p3_c3(c1, c2)
        raw = Fraction(bound)
    else:
        if not general_type:
            raise DomainRejection(
                f"the {var_id.value} bound holds for sheaves of general type only; pass general_type")
        if c1 != 0:
            raise DomainRejection(f"the {var_id.value} bound is stated for c1 = 0, got {c1}")
        if var_id == VarietyId.X4:
            raw = Fraction(c2 * c2 - c2 + 2)
        else:
            raw = Fraction(2 * c2 * c2, 9) + (Fraction(1, 2) if c2 % 2 else 0)
        bound = math.floor(raw)

    e = from_chern_classes(ChernClasses(var_id, c1, c2, bound), 2).e
    logger.debug("c3_max %s c1=%s c2=%s -> %s", var_id.value, c1, c2, bound)
    return BoundResult(
        variety=var_id,
        c1=c1,
        c2=c2,
        c3_max=bound,
        c3_bound_raw=raw,
        e_max=e,
        regime=REGIMES[var_id],
        witnesses=witnesses,
        caveats=tuple(caveats),
        case=case,
    )


def bounds_consistency(c1: int, c2_range: range) -> List[Dict[str, object]]:
    """
    Quadric rows comparing the c3 formula with the value obtained from the
    extremal ch3 table; rows with d > 0 lie outside the table.
    """
    rows = []
    for c2 in c2_range:
        d = Fraction(c1 * c1 - c2, 2)
        row: Dict[str, object] = {"c1": c1, "c2": c2, "d": d}
        formula = c3_max(X2, c1, c2).c3_max
        row["c3_formula"] = formula
        if d > 0:
            row.update(status="not applicable", c3_from_e=None, e_max=None, chi_integral=None)
            rows.append(row)
            continue
        extremal = extremal_case(c1, d)
        v = extremal.character()
        c3_from_e = 2 * v.e - Fraction(c1 ** 3 * 2, 3) + c1 * c2
        row["e_max"] = extremal.e_max
        row["c3_from_e"] = c3_from_e
        row["chi_integral"] = chi_rr(v).denominator == 1
        row["status"] = "agree" if c3_from_e == formula and row["chi_integral"] else "disagree"
        rows.append(row)
    return rows


def c3_ratio_bound(k: int) -> Optional[Fraction]:
    """Coefficient b with c3/H^3 < b (c2/H^2)^2 for the surface-extension series; none for k = 1"""
    if k < 1:
        raise DomainRejection(f"k must be positive, got {k}")
    if k % 2 == 0:
        return Fraction(4, k)
    if k == 1:
        return None
    return Fraction(4 * k, (k - 1) ** 2)


def satisfies_ratio_bound(variety, k: int, c2: int, c3: int) -> Optional[bool]:
    bound = c3_ratio_bound(k)
    if bound is None:
        return None
    deg = get_variety(variety).degree
    return Fraction(c3, deg) < bound * Fraction(c2, deg) ** 2


def bound_table(variety, c1: int, c2_range: range, general_type: bool = False) -> List[BoundResult]:
    return [c3_max(variety, c1, c2, general_type) for c2 in c2_range]
