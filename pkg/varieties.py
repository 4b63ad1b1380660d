#!/usr/bin/env python3
"""
Numerical data for the Fano threefolds P3, X2, X4 and X5

Every cohomology class is written against the basis (1, H, [l], [pt]) with
H^2 = degree*[l], H*[l] = 1 and H^3 = degree*[pt].
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union


class DomainRejection(ValueError):
    """Raised when an input violates a mathematical precondition"""


class VarietyId(str, Enum):
    P3 = "P3"
    X2 = "X2"
    X4 = "X4"
    X5 = "X5"


# X1 is the degree-indexed name of projective space
ALIASES = {"X1": VarietyId.P3}


@dataclass(frozen=True)
class VarietyData:
    """Degree, Fano index and Todd class of one threefold"""

    id: VarietyId
    degree: int
    index: int
    c2_omega_H: int
    todd: Tuple[Fraction, Fraction, Fraction, Fraction]
    ch2_step: Fraction

    @property
    def name(self) -> str:
        return self.id.value


# (degree, index, c2(Omega_X).H)
_RAW = {
    VarietyId.P3: (1, 4, 6),
    VarietyId.X2: (2, 3, 8),
    VarietyId.X4: (4, 2, 12),
    VarietyId.X5: (5, 2, 12),
}


def _todd(degree: int, index: int, c2_omega_H: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """
    Todd coefficients in the basis (1, H, H^2, [pt]).

    td = 1 + c1/2 + (c1^2 + c2)/12 + chi(O_X)[pt] with c1(T_X) = index*H and
    c2(T_X) = (c2_omega_H/degree)*H^2 numerically. All four varieties have
    chi(O_X) = 1. For X2 this gives (1, 3/2, 13/12, 1); on X5 it reproduces
    chi(E) = 2 + c3/2 - c2 for rank 2 and c1 = 0.
    """
    t1 = Fraction(index, 2)
    t2 = (Fraction(index * index) + Fraction(c2_omega_H, degree)) / 12
    return (Fraction(1), t1, t2, Fraction(1))


def _ch2_step(var_id: VarietyId, degree: int) -> Fraction:
    # 2d in Z on P3 and X2; d*degree in Z/2 on X4 and X5
    if var_id in (VarietyId.P3, VarietyId.X2):
        return Fraction(1, 2)
    return Fraction(1, 2 * degree)


def supported_varieties() -> Tuple[VarietyId, ...]:
    return tuple(VarietyId)


def parse_variety_id(var_id: Union[str, VarietyId]) -> VarietyId:
    """Normalize a variety name; rejects anything outside the four supported ids"""
    if isinstance(var_id, VarietyId):
        return var_id
    key = str(var_id).strip().upper()
    if key in ALIASES:
        return ALIASES[key]
    try:
        return VarietyId(key)
    except ValueError:
        names = ", ".join(v.value for v in VarietyId)
        raise DomainRejection(f"unknown variety '{var_id}'; supported: {names} (X1 = P3)") from None


@lru_cache(maxsize=None)
def _load(var_id: VarietyId) -> VarietyData:
    degree, index, c2h = _RAW[var_id]
    return VarietyData(
        id=var_id,
        degree=degree,
        index=index,
        c2_omega_H=c2h,
        todd=_todd(degree, index, c2h),
        ch2_step=_ch2_step(var_id, degree),
    )


def get_variety(var_id: Union[str, VarietyId]) -> VarietyData:
    return _load(parse_variety_id(var_id))
