#!/usr/bin/env python3
"""
Exact Chern character arithmetic: class conversions, twists, discriminant,
slopes, Riemann-Roch and Hilbert polynomials
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Tuple, Union

from varieties import DomainRejection, VarietyData, VarietyId, get_variety, parse_variety_id

logger = logging.getLogger(__name__)

# Distinguished slope value; orders above every Fraction
INFINITY = math.inf

Number = Union[int, Fraction, str]


def as_rational(value: Number) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings; floats are refused"""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _as_integer(value: Number, what: str) -> int:
    q = as_rational(value)
    if q.denominator != 1:
        raise DomainRejection(f"{what} must be an integer, got {q}")
    return q.numerator


def _on_lattice(value: Fraction, step: Fraction) -> bool:
    return (value / step).denominator == 1


class Truncation(NamedTuple):
    """ch<=2 data (r, c, d) in normalized coordinates"""

    r: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, r: Number, c: Number, d: Number) -> "Truncation":
        return cls(as_rational(r), as_rational(c), as_rational(d))

    def __add__(self, other):
        return Truncation(self.r + other.r, self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return Truncation(self.r - other.r, self.c - other.c, self.d - other.d)

    def scaled(self, factor: Number) -> "Truncation":
        k = as_rational(factor)
        return Truncation(self.r * k, self.c * k, self.d * k)


class TwistedCharacter(NamedTuple):
    """Unconstrained quadruple, e.g. ch^beta for non-integral beta"""

    variety: VarietyId
    ch0: Fraction
    ch1: Fraction
    ch2: Fraction
    ch3: Fraction

    def truncation(self) -> Truncation:
        return Truncation(self.ch0, self.ch1, self.ch2)

    def to_character(self) -> "ChernCharacter":
        return ChernCharacter(self.variety, self.ch0, self.ch1, self.ch2, self.ch3)


@dataclass(frozen=True)
class ChernCharacter:
    """ch = (r, cH, dH^2, e[pt]) on one of the supported threefolds"""

    variety: VarietyId
    r: int
    c: int
    d: Fraction
    e: Fraction

    def __post_init__(self):
        var_id = parse_variety_id(self.variety)
        object.__setattr__(self, "variety", var_id)
        object.__setattr__(self, "r", _as_integer(self.r, "ch0"))
        object.__setattr__(self, "c", _as_integer(self.c, "ch1"))
        object.__setattr__(self, "d", as_rational(self.d))
        object.__setattr__(self, "e", as_rational(self.e))
        data = get_variety(var_id)
        if not _on_lattice(self.d, data.ch2_step):
            raise DomainRejection(
                f"ch2 coefficient {self.d} is not in {data.ch2_step}*Z on {var_id.value}")
        if (6 * self.e).denominator != 1:
            raise DomainRejection(f"ch3 coefficient {self.e} is not in (1/6)Z")

    @property
    def data(self) -> VarietyData:
        return get_variety(self.variety)

    def truncation(self) -> Truncation:
        return Truncation(Fraction(self.r), Fraction(self.c), self.d)

    def as_tuple(self) -> Tuple[int, int, Fraction, Fraction]:
        return (self.r, self.c, self.d, self.e)

    def _require_same(self, other: "ChernCharacter") -> None:
        if other.variety != self.variety:
            raise DomainRejection(
                f"cannot combine characters on {self.variety.value} and {other.variety.value}")

    def __add__(self, other: "ChernCharacter") -> "ChernCharacter":
        if not isinstance(other, ChernCharacter):
            return NotImplemented
        self._require_same(other)
        return ChernCharacter(self.variety, self.r + other.r, self.c + other.c,
                              self.d + other.d, self.e + other.e)

    def __sub__(self, other: "ChernCharacter") -> "ChernCharacter":
        if not isinstance(other, ChernCharacter):
            return NotImplemented
        self._require_same(other)
        return ChernCharacter(self.variety, self.r - other.r, self.c - other.c,
                              self.d - other.d, self.e - other.e)

    def __neg__(self) -> "ChernCharacter":
        return ChernCharacter(self.variety, -self.r, -self.c, -self.d, -self.e)

    def __mul__(self, n: int) -> "ChernCharacter":
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        return ChernCharacter(self.variety, n * self.r, n * self.c, n * self.d, n * self.e)

    __rmul__ = __mul__

    @classmethod
    def build(cls, variety, r: Number, c: Number, d: Number, e: Number) -> "ChernCharacter":
        return cls(parse_variety_id(variety), r, c, d, e)

    @classmethod
    def zero(cls, variety) -> "ChernCharacter":
        return cls(parse_variety_id(variety), 0, 0, Fraction(0), Fraction(0))


@dataclass(frozen=True)
class ChernClasses:
    """c(E) = (1, c1*H, c2*[l], c3*[pt])"""

    variety: VarietyId
    c1: int
    c2: int
    c3: int

    def __post_init__(self):
        object.__setattr__(self, "variety", parse_variety_id(self.variety))
        object.__setattr__(self, "c1", _as_integer(self.c1, "c1"))
        object.__setattr__(self, "c2", _as_integer(self.c2, "c2"))
        object.__setattr__(self, "c3", _as_integer(self.c3, "c3"))

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class CubicPolynomial:
    """P(m) = a3 m^3 + a2 m^2 + a1 m + a0"""

    a3: Fraction
    a2: Fraction
    a1: Fraction
    a0: Fraction

    def __call__(self, m: Number) -> Fraction:
        x = as_rational(m)
        return ((self.a3 * x + self.a2) * x + self.a1) * x + self.a0

    def coefficients(self) -> Tuple[Fraction, ...]:
        return (self.a3, self.a2, self.a1, self.a0)

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial"""
        for i, coeff in enumerate(self.coefficients()):
            if coeff != 0:
                return 3 - i
        return -1

    def reduced(self) -> "CubicPolynomial":
        """P2(m) = a3 m^2 + a2 m + a1"""
        return CubicPolynomial(Fraction(0), self.a3, self.a2, self.a1)

    def normalized(self) -> Tuple[Fraction, ...]:
        coeffs = self.coefficients()[3 - self.degree:]
        lead = coeffs[0]
        return tuple(x / lead for x in coeffs[1:])


def truncate(v) -> Truncation:
    """ch<=2 view of a character, a twisted quadruple or a plain (r, c, d[, e]) tuple"""
    if isinstance(v, Truncation):
        return v
    if isinstance(v, (ChernCharacter, TwistedCharacter)):
        return v.truncation()
    values = tuple(v)
    if len(values) not in (3, 4):
        raise DomainRejection(f"expected (r, c, d) or (r, c, d, e), got {values!r}")
    return Truncation.of(*values[:3])


# --- conversions -------------------------------------------------------------

def to_chern_classes(v: ChernCharacter) -> ChernClasses:
    deg = v.data.degree
    c = Fraction(v.c)
    c2 = deg * (c * c - 2 * v.d) / 2
    if c2.denominator != 1:
        raise DomainRejection(f"c2 = {c2} is not an integer for {describe(v)}")
    c3 = 2 * v.e - c ** 3 * deg / 3 + c * c2
    if c3.denominator != 1:
        raise DomainRejection(f"c3 = {c3} is not an integer for {describe(v)}")
    return ChernClasses(v.variety, v.c, c2.numerator, c3.numerator)


def from_chern_classes(cl: ChernClasses, rank: int) -> ChernCharacter:
    if rank < 0:
        raise DomainRejection(f"rank must be non-negative, got {rank}")
    deg = get_variety(cl.variety).degree
    c1 = Fraction(cl.c1)
    d = c1 * c1 / 2 - Fraction(cl.c2, deg)
    e = (c1 ** 3 * deg - 3 * c1 * cl.c2 + 3 * cl.c3) / 6
    return ChernCharacter(cl.variety, rank, cl.c1, d, e)


def twist(v, beta: Number) -> TwistedCharacter:
    """ch^beta = e^(-beta H) ch; for integer beta this is ch(E(-beta))"""
    b = as_rational(beta)
    if isinstance(v, TwistedCharacter):
        var_id, r, c, d, e = v
    else:
        var_id, r, c, d, e = v.variety, Fraction(v.r), Fraction(v.c), v.d, v.e
    deg = get_variety(var_id).degree
    return TwistedCharacter(
        var_id,
        r,
        c - b * r,
        d - b * c + b * b * r / 2,
        e - b * deg * d + b * b * deg * c / 2 - b ** 3 * deg * r / 6,
    )


def tensor_line_bundle(v: ChernCharacter, n: int) -> ChernCharacter:
    """ch(E(n))"""
    return twist(v, -n).to_character()


def delta(v) -> Fraction:
    t = truncate(v)
    return t.c * t.c - 2 * t.r * t.d


def slope_mu(v):
    t = truncate(v)
    if t.r == 0:
        return INFINITY
    return t.c / t.r


# --- Riemann-Roch ------------------------------------------------------------

def _chi(var_id, ch0: Fraction, ch1: Fraction, ch2: Fraction, ch3: Fraction) -> Fraction:
    data = get_variety(var_id)
    _, t1, t2, t3 = data.todd
    return ch0 * t3 + data.degree * (t2 * ch1 + t1 * ch2) + ch3


def chi_rr(v: ChernCharacter) -> Fraction:
    """Euler characteristic as the integral of ch(v).td(X)"""
    return _chi(v.variety, Fraction(v.r), Fraction(v.c), v.d, v.e)


def chi_rr_twisted(t: TwistedCharacter) -> Fraction:
    """Same integral for an unconstrained quadruple"""
    return _chi(t.variety, t.ch0, t.ch1, t.ch2, t.ch3)


def chi_from_classes(cl: ChernClasses, rank: int) -> Fraction:
    logger.debug("chi from classes %s, rank %s", cl, rank)
    return chi_rr(from_chern_classes(cl, rank))


def dual(v: ChernCharacter) -> ChernCharacter:
    return ChernCharacter(v.variety, v.r, -v.c, v.d, -v.e)


def product(v, w) -> TwistedCharacter:
    """Cup product of two characters on the same variety"""
    a = v if isinstance(v, TwistedCharacter) else twist(v, 0)
    b = w if isinstance(w, TwistedCharacter) else twist(w, 0)
    if a.variety != b.variety:
        raise DomainRejection("product of characters on different varieties")
    deg = get_variety(a.variety).degree
    return TwistedCharacter(
        a.variety,
        a.ch0 * b.ch0,
        a.ch0 * b.ch1 + a.ch1 * b.ch0,
        a.ch0 * b.ch2 + a.ch1 * b.ch1 + a.ch2 * b.ch0,
        a.ch0 * b.ch3 + a.ch3 * b.ch0 + deg * (a.ch1 * b.ch2 + a.ch2 * b.ch1),
    )


def euler_pairing(v: ChernCharacter, w: ChernCharacter) -> Fraction:
    """chi(v, w) = sum (-1)^i ext^i(v, w)"""
    return chi_rr_twisted(product(dual(v), w))


def hilbert_poly(v: ChernCharacter) -> CubicPolynomial:
    data = v.data
    deg = data.degree
    _, t1, t2, _ = data.todd
    r, c = Fraction(v.r), Fraction(v.c)
    return CubicPolynomial(
        deg * r / 6,
        deg * (t1 * r + c) / 2,
        deg * (t2 * r + t1 * c + v.d),
        chi_rr(v),
    )


def poly_compare(f: CubicPolynomial, g: CubicPolynomial) -> str:
    """Reduced asymptotic order; a lower degree sorts greater"""
    if f.degree < 0 and g.degree < 0:
        raise DomainRejection("cannot compare two zero polynomials")
    if f.degree != g.degree:
        return "greater" if f.degree < g.degree else "less"
    nf, ng = f.normalized(), g.normalized()
    if nf == ng:
        return "equal"
    return "greater" if nf > ng else "less"


# --- standard characters -----------------------------------------------------

def line_bundle(variety, n: int) -> ChernCharacter:
    var_id = parse_variety_id(variety)
    deg = get_variety(var_id).degree
    n = Fraction(n)
    return ChernCharacter(var_id, 1, n, n * n / 2, n ** 3 * deg / 6)


def spinor_bundle(n: int = -1, variety=VarietyId.X2) -> ChernCharacter:
    """ch(S(n)) for the spinor bundle S on the quadric, det S = O(1)"""
    var_id = parse_variety_id(variety)
    if var_id != VarietyId.X2:
        raise DomainRejection("the spinor bundle is only defined on X2")
    base = ChernCharacter(var_id, 2, -1, Fraction(0), Fraction(1, 6))
    return tensor_line_bundle(base, n + 1)


def surface_sheaf(variety, k: int, m: int) -> ChernCharacter:
    """O_S(m) for a surface S in |O(k)|"""
    if k < 1:
        raise DomainRejection(f"surface degree k must be positive, got {k}")
    return line_bundle(variety, m) - line_bundle(variety, m - k)


def line_sheaf(variety, m: int) -> ChernCharacter:
    """O_l(m) for a line l: ch2 = [l] and chi = m + 1"""
    data = get_variety(variety)
    return ChernCharacter(data.id, 0, 0, Fraction(1, data.degree),
                          Fraction(m + 1) - Fraction(data.index, 2))


def line_ideal_sheaf(variety, m: int, k: int = 1) -> ChernCharacter:
    """I_{l,S}(m) from 0 -> I_{l,S} -> O_S -> O_l -> 0"""
    return surface_sheaf(variety, k, m) - line_sheaf(variety, m)


def third_series_sheaf(variety) -> ChernCharacter:
    """Rank-2 sheaf F with c1 = 1 feeding the F(-n) by O_S(m) extensions"""
    var_id = parse_variety_id(variety)
    if var_id == VarietyId.P3:
        # 0 -> O(-1) -> O^3 -> F -> 0
        return 3 * line_bundle(var_id, 0) - line_bundle(var_id, -1)
    if var_id in (VarietyId.X4, VarietyId.X5):
        # spinor restriction on X4, twisted tautological bundle on X5:
        # c2 is two lines and the bundle has c3 = 0
        return from_chern_classes(ChernClasses(var_id, 1, 2, 0), 2)
    raise DomainRejection(f"no third-series sheaf on {var_id.value}; use P3, X4 or X5")


def describe(v) -> str:
    """Short human-readable form, e.g. (2,-1,0,1/6)@X2"""
    if isinstance(v, ChernCharacter):
        parts = [str(x) for x in v.as_tuple()]
        return f"({','.join(parts)})@{v.variety.value}"
    t = truncate(v)
    return "(" + ",".join(str(x) for x in t) + ")"
