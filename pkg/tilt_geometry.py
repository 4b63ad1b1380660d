#!/usr/bin/env python3
"""
Tilt slopes, lambda slopes and numerical walls in the (alpha, beta) half-plane

All wall arithmetic keeps center and radius^2, never the radius, so every
comparison stays exact.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from chern_calculus import (
    INFINITY,
    ChernCharacter,
    Number,
    Truncation,
    as_rational,
    delta,
    truncate,
    twist,
)
from report_format import format_rational
from varieties import DomainRejection, VarietyId

logger = logging.getLogger(__name__)

SEMICIRCLE = "semicircle"
VERTICAL = "vertical"
DEGENERATE = "degenerate-everywhere"
EMPTY = "empty"

# varieties where the W >= 0 inequality is established
BMT_VARIETIES = (VarietyId.X2, VarietyId.P3)


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


@dataclass(frozen=True)
class TiltPoint:
    """
    A point (alpha, beta). Slopes only depend on alpha^2, so points with an
    irrational alpha but rational alpha^2 are kept with alpha = None.
    """

    alpha: Optional[Fraction]
    beta: Fraction
    alpha_sq: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.alpha is not None:
            alpha = as_rational(self.alpha)
            if alpha < 0:
                raise DomainRejection(f"alpha must be non-negative, got {alpha}")
            object.__setattr__(self, "alpha", alpha)
            object.__setattr__(self, "alpha_sq", alpha * alpha)
            return
        if self.alpha_sq is None:
            raise DomainRejection("a tilt point needs alpha or alpha^2")
        alpha_sq = as_rational(self.alpha_sq)
        if alpha_sq < 0:
            raise DomainRejection(f"alpha^2 must be non-negative, got {alpha_sq}")
        object.__setattr__(self, "alpha_sq", alpha_sq)
        object.__setattr__(self, "alpha", _exact_sqrt(alpha_sq))

    @classmethod
    def of(cls, alpha: Number, beta: Number) -> "TiltPoint":
        return cls(as_rational(alpha), as_rational(beta))

    @classmethod
    def from_alpha_sq(cls, alpha_sq: Number, beta: Number) -> "TiltPoint":
        return cls(None, as_rational(beta), as_rational(alpha_sq))


@dataclass(frozen=True)
class Wall:
    """Numerical wall of v defined by the truncation w"""

    kind: str
    center: Optional[Fraction]
    radius_sq: Optional[Fraction]
    v: Truncation
    w: Optional[Truncation]

    @property
    def is_semicircle(self) -> bool:
        return self.kind == SEMICIRCLE

    def key(self) -> Tuple[str, Optional[Fraction], Optional[Fraction]]:
        return (self.kind, self.center, self.radius_sq)

    def alpha_sq_at(self, beta: Number) -> Fraction:
        b = as_rational(beta)
        return self.radius_sq - (b - self.center) ** 2

    def contains_beta(self, beta: Number) -> bool:
        """beta lies strictly inside the span of a semicircle"""
        return self.is_semicircle and self.alpha_sq_at(beta) > 0

    def point_at(self, beta: Number) -> TiltPoint:
        if not self.contains_beta(beta):
            raise DomainRejection(f"beta = {beta} is outside the wall")
        return TiltPoint.from_alpha_sq(self.alpha_sq_at(beta), beta)

    def top(self) -> TiltPoint:
        return TiltPoint.from_alpha_sq(self.radius_sq, self.center)


# --- slopes ------------------------------------------------------------------

def nu_at(v, alpha_sq: Number, beta: Number):
    t = truncate(v)
    a2, b = as_rational(alpha_sq), as_rational(beta)
    denominator = t.c - b * t.r
    if denominator == 0:
        return INFINITY
    return (t.d - b * t.c + (b * b - a2) * t.r / 2) / denominator


def nu(v, p: TiltPoint):
    """Tilt slope in normalized coordinates; the H^3 factors cancel"""
    return nu_at(v, p.alpha_sq, p.beta)


def big_w(v: ChernCharacter, p: TiltPoint, assume_bmt: bool = False) -> Fraction:
    """
    W = alpha^2 Delta + 4 (ch2^b)^2 - 6 ch1^b ch3^b / H^3, the quadratic form
    that is non-negative on tilt-semistable objects.
    """
    if v.variety not in BMT_VARIETIES and not assume_bmt:
        raise DomainRejection(
            f"W >= 0 is only established on X2 and P3, not {v.variety.value}; pass assume_bmt to evaluate")
    if v.variety not in BMT_VARIETIES:
        logger.debug("evaluating W on %s under the assumed BMT inequality", v.variety.value)
    tw = twist(v, p.beta)
    deg = v.data.degree
    return p.alpha_sq * delta(v) + 4 * tw.ch2 ** 2 - 6 * tw.ch1 * tw.ch3 / deg


def lambda_slope(v: ChernCharacter, p: TiltPoint, s: Number):
    s = as_rational(s)
    if s <= 0:
        raise DomainRejection(f"the lambda parameter s must be positive, got {s}")
    tw = twist(v, p.beta)
    deg = v.data.degree
    numerator = tw.ch3 - s * p.alpha_sq * deg * tw.ch1
    denominator = deg * (tw.ch2 - p.alpha_sq * tw.ch0 / 2)
    if denominator == 0:
        return INFINITY
    return numerator / denominator


# --- walls -------------------------------------------------------------------

def numerical_wall(v, w) -> Wall:
    tv, tw = truncate(v), truncate(w)
    r, c, d = tv
    r2, c2, d2 = tw
    x = r * c2 - r2 * c
    if x != 0:
        center = (d2 * r - d * r2) / x
        radius_sq = center * center + 2 * (d * c2 - d2 * c) / x
        kind = SEMICIRCLE if radius_sq > 0 else EMPTY
        return Wall(kind, center, radius_sq, tv, tw)
    rank_term = d2 * r - d * r2
    if rank_term != 0:
        return Wall(VERTICAL, (d2 * c - d * c2) / rank_term, None, tv, tw)
    if d * c2 - d2 * c == 0:
        return Wall(DEGENERATE, None, None, tv, tw)
    return Wall(EMPTY, None, None, tv, tw)


def vertical_wall(v) -> Optional[Wall]:
    """The unique vertical wall beta = mu(v); None in rank zero"""
    t = truncate(v)
    if t.r == 0:
        return None
    return numerical_wall(t, Truncation.of(0, 0, 1))


def w_wall(v: ChernCharacter) -> Wall:
    """Locus W = 0, itself the numerical wall against (2c, 4d, 6e/H^3)"""
    deg = v.data.degree
    other = Truncation(Fraction(2 * v.c), 4 * v.d, 6 * v.e / deg)
    return numerical_wall(v.truncation(), other)


def nu_zero_alpha_sq(v, beta: Number) -> Optional[Fraction]:
    t = truncate(v)
    if t.r == 0:
        return None
    b = as_rational(beta)
    alpha_sq = b * b + 2 * (t.d - b * t.c) / t.r
    if alpha_sq < 0:
        return None
    return alpha_sq


def radius_bound(v, rank_F: int) -> Fraction:
    """Largest radius^2 of a wall induced by a factor of rank rank_F > ch0(v) >= 0"""
    t = truncate(v)
    rank = as_rational(rank_F)
    if t.r < 0 or rank <= t.r:
        raise DomainRejection(
            f"radius bound needs ch0(F) > ch0(E) >= 0, got ch0(F) = {rank}, ch0(E) = {t.r}")
    return delta(t) / (4 * rank * (rank - t.r))


def wall_relation(first: Wall, second: Wall) -> str:
    """'coincide', 'disjoint' or 'cross' for two semicircles"""
    if not (first.is_semicircle and second.is_semicircle):
        raise DomainRejection("wall_relation compares two semicircular walls")
    s1, q1 = first.center, first.radius_sq
    s2, q2 = second.center, second.radius_sq
    if s1 == s2:
        return "coincide" if q1 == q2 else "disjoint"
    beta = (q1 - q2 + s2 * s2 - s1 * s1) / (2 * (s2 - s1))
    alpha_sq = q1 - (beta - s1) ** 2
    return "cross" if alpha_sq > 0 else "disjoint"


def walls_intersect(first: Wall, second: Wall) -> bool:
    """True when two distinct semicircles meet inside the upper half-plane"""
    return wall_relation(first, second) == "cross"


def sample_wall(wall: Wall, samples: int = 64, alpha_max: float = 4.0) -> List[Tuple[float, float]]:
    """Approximate (beta, alpha) pairs along a wall, for external plotting only"""
    if samples < 2:
        raise DomainRejection("at least two samples are needed")
    if wall.kind == VERTICAL:
        beta = float(wall.center)
        return [(beta, alpha_max * i / (samples - 1)) for i in range(samples)]
    if not wall.is_semicircle:
        return []
    center = float(wall.center)
    rho = math.sqrt(float(wall.radius_sq))
    points = []
    for i in range(samples):
        # t in [-1, 1] keeps both endpoints exactly on the beta axis
        t = 2 * i / (samples - 1) - 1
        points.append((center + rho * t, rho * math.sqrt(max(0.0, 1 - t * t))))
    return points


def _truncation_list(t: Optional[Truncation]) -> Optional[List[str]]:
    if t is None:
        return None
    return [format_rational(x) for x in t]


def wall_to_dict(wall: Wall) -> Dict[str, Any]:
    return {
        "kind": wall.kind,
        "center": format_rational(wall.center),
        "radius_sq": format_rational(wall.radius_sq),
        "v": _truncation_list(wall.v),
        "w": _truncation_list(wall.w),
    }
