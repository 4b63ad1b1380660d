#!/usr/bin/env python3
"""
Search for numerical walls of a character that can carry a destabilizing
subobject or quotient, and the exact checks behind the rank-two ch3 table
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from bounds_classify import LIMIT_POINT, OBJECT, WALL, extremal_case
from chern_calculus import (
    ChernCharacter,
    Number,
    Truncation,
    as_rational,
    delta,
    describe,
    line_bundle,
    spinor_bundle,
    twist,
)
from tilt_geometry import EMPTY, Wall, nu_at, numerical_wall, radius_bound
from varieties import DomainRejection, VarietyId

logger = logging.getLogger(__name__)

Window = Tuple[Fraction, Fraction]

SUB = "sub"
QUOTIENT = "quotient"
EITHER = "either"

VERIFY_RANK_MAX = 4


@dataclass(frozen=True)
class DestabilizerCandidate:
    w: Truncation
    complement: Truncation
    wall: Wall
    side: str
    satisfied_constraints: Tuple[str, ...]
    witnesses: Tuple[Tuple[Truncation, str], ...]


@dataclass(frozen=True)
class CaseReport:
    c: int
    d: Fraction
    e_max: Fraction
    witnesses: Tuple[Dict[str, Any], ...]
    destabilizers: Tuple[DestabilizerCandidate, ...]
    window: Window
    exhaustive: bool
    ok: bool


def parse_window(window: Sequence[Number]) -> Window:
    lo, hi = window
    return (as_rational(lo), as_rational(hi))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def check_candidate(v: Truncation, w: Truncation, window: Window, min_radius_sq: Fraction,
                    step: Fraction) -> Optional[Tuple[Wall, Tuple[str, ...]]]:
    """
    The full destabilizer predicate for one truncation w; returns the wall and
    the names of the satisfied constraints, or None.
    """
    if (w.d / step).denominator != 1:
        return None
    u = v - w
    dv, dw, du = delta(v), delta(w), delta(u)
    if dw < 0 or du < 0:
        return None
    if dw + du >= dv:
        return None
    wall = numerical_wall(v, w)
    if not wall.is_semicircle or wall.radius_sq < min_radius_sq:
        return None
    s, rho_sq = wall.center, wall.radius_sq
    lo, hi = window
    beta_star = min(max(s, lo), hi)
    if (beta_star - s) ** 2 >= rho_sq:
        return None
    sigma = _sign(v.c - s * v.r)
    if sigma == 0:
        return None
    constraints = ["lattice", "delta-w", "delta-u", "delta-sum", "semicircle", "window"]
    for name, part in (("heart-w", w), ("heart-u", u)):
        offset = part.c - s * part.r
        if sigma * offset < 0 or offset * offset < part.r * part.r * rho_sq:
            return None
        constraints.append(name)
    if w.r > v.r:
        if rho_sq > radius_bound(v, w.r):
            return None
        constraints.append("radius-bound")
    return wall, tuple(constraints)


def _side(v: Truncation, w: Truncation, wall: Wall) -> str:
    # compare just inside the wall, straight below its top
    alpha_sq, beta = wall.radius_sq / 4, wall.center
    return SUB if nu_at(w, alpha_sq, beta) > nu_at(v, alpha_sq, beta) else QUOTIENT


def _d_interval(v: Truncation, R: int, C: int) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    """Bounds on D from Delta(w) >= 0, Delta(v - w) >= 0 and the Delta sum"""
    r, c, d = v
    uppers: List[Fraction] = []
    lowers: List[Fraction] = []
    if R > 0:
        uppers.append(Fraction(C * C, 2 * R))
    if r - R > 0:
        lowers.append(d - (c - C) ** 2 / (2 * (r - R)))
    elif r - R < 0:
        uppers.append(d + (c - C) ** 2 / (2 * (R - r)))
    k = r - 2 * R
    rhs = c * C - C * C - R * d
    if k > 0:
        uppers.append(rhs / k)
    elif k < 0:
        lowers.append(rhs / k)
    return (max(lowers) if lowers else None, min(uppers) if uppers else None)


def _c_range(v: Truncation, R: int, window: Window) -> range:
    r, c, _ = v
    lo, hi = window
    values = [b * R for b in (lo, hi)] + [c + b * (R - r) for b in (lo, hi)]
    return range(math.ceil(min(values)), math.floor(max(values)) + 1)


def _lattice_range(lo: Fraction, hi: Fraction, step: Fraction) -> Iterable[Fraction]:
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    return (k * step for k in range(first, last + 1))


def _scan_cell(v: Truncation, R: int, C: int, window: Window, min_radius_sq: Fraction,
               step: Fraction) -> Tuple[bool, List[Tuple[Truncation, Wall, Tuple[str, ...]]]]:
    if v.r * C - R * v.c == 0:
        return True, []
    lo, hi = _d_interval(v, R, C)
    if lo is None or hi is None:
        return False, []
    hits = []
    for D in _lattice_range(lo, hi, step):
        w = Truncation(Fraction(R), Fraction(C), D)
        found = check_candidate(v, w, window, min_radius_sq, step)
        if found is not None:
            hits.append((w, found[0], found[1]))
    return True, hits


def _scan_cell_at(v: Truncation, window: Window, min_radius_sq: Fraction, step: Fraction,
                  cell: Tuple[int, int]) -> Tuple[bool, List[Tuple[Truncation, Wall, Tuple[str, ...]]]]:
    return _scan_cell(v, cell[0], cell[1], window, min_radius_sq, step)


def _group(v: Truncation, hits: Iterable[Tuple[Truncation, Wall, Tuple[str, ...]]],
           rank_max: int) -> List[DestabilizerCandidate]:
    """Merge hits on the same wall and order walls from largest to smallest"""
    by_wall: Dict[Tuple[Fraction, Fraction], List[Tuple[Truncation, Wall, Tuple[str, ...]]]] = {}
    for hit in hits:
        wall = hit[1]
        by_wall.setdefault((wall.center, wall.radius_sq), []).append(hit)

    candidates = []
    for members in by_wall.values():
        members.sort(key=lambda hit: tuple(hit[0]))
        sides = [_side(v, w, wall) for w, wall, _ in members]
        index = sides.index(SUB) if SUB in sides else 0
        w, wall, constraints = members[index]
        complement = v - w
        side = sides[index]
        if 0 <= complement.r <= rank_max and any(m[0] == complement for m in members):
            side = EITHER
        candidates.append(DestabilizerCandidate(
            w=w,
            complement=complement,
            wall=wall,
            side=side,
            satisfied_constraints=constraints,
            witnesses=tuple((m[0], s) for m, s in zip(members, sides)),
        ))
    candidates.sort(key=lambda cand: (-cand.wall.radius_sq, tuple(cand.w)))
    return candidates


def _prepare(v: ChernCharacter, rank_max: int, beta_window, min_radius_sq) -> Tuple[Truncation, Window, Fraction]:
    t = v.truncation()
    if t.r < 0:
        raise DomainRejection(f"wall search needs ch0 >= 0, got {describe(v)}")
    if delta(t) < 0:
        raise DomainRejection(f"Delta < 0 for {describe(v)}: no semistable objects")
    if rank_max < 0:
        raise DomainRejection(f"rank_max must be non-negative, got {rank_max}")
    return t, parse_window(beta_window), as_rational(min_radius_sq)


def scan_walls(v: ChernCharacter, rank_max: int, beta_window, min_radius_sq: Number = 0,
               workers: int = 1) -> Tuple[List[DestabilizerCandidate], bool]:
    """enumerate_walls plus whether every scanned cell had a finite D range"""
    t, window, min_rsq = _prepare(v, rank_max, beta_window, min_radius_sq)
    if window[0] > window[1]:
        return [], True
    if workers < 1:
        raise DomainRejection(f"workers must be at least 1, got {workers}")
    step = v.data.ch2_step
    cells = [(R, C) for R in range(rank_max + 1) for C in _c_range(t, R, window)]
    logger.debug("scanning %d cells for %s on %s", len(cells), describe(v), window)

    run = partial(_scan_cell_at, t, window, min_rsq, step)
    if workers > 1:
        # map keeps the cell order
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        results = [run(cell) for cell in cells]

    exhaustive = all(bounded for bounded, _ in results)
    hits = [hit for _, cell_hits in results for hit in cell_hits]
    candidates = _group(t, hits, rank_max)
    logger.info("%s: %d hits on %d walls", describe(v), len(hits), len(candidates))
    return candidates, exhaustive


def enumerate_walls(v: ChernCharacter, rank_max: int, beta_window, min_radius_sq: Number = 0,
                    workers: int = 1) -> List[DestabilizerCandidate]:
    return scan_walls(v, rank_max, beta_window, min_radius_sq, workers)[0]


def brute_force_walls(v: ChernCharacter, rank_max: int, beta_window, min_radius_sq: Number,
                      c_box: Tuple[int, int], d_box: Tuple[Number, Number]) -> List[DestabilizerCandidate]:
    """Same predicate over a plain box of (R, C, D); independent of the grid bounds"""
    t, window, min_rsq = _prepare(v, rank_max, beta_window, min_radius_sq)
    if window[0] > window[1]:
        return []
    step = v.data.ch2_step
    d_lo, d_hi = as_rational(d_box[0]), as_rational(d_box[1])
    hits = []
    for R in range(rank_max + 1):
        for C in range(c_box[0], c_box[1] + 1):
            if t.r * C - R * t.c == 0:
                continue
            for D in _lattice_range(d_lo, d_hi, step):
                w = Truncation(Fraction(R), Fraction(C), D)
                found = check_candidate(t, w, window, min_rsq, step)
                if found is not None:
                    hits.append((w, found[0], found[1]))
    return _group(t, hits, rank_max)


# --- the rank-two table on the quadric ---------------------------------------

def verification_window(c: int, d: Fraction) -> Window:
    """
    Hull of [(c - k - 1)/2, (c - k)/2], k = floor(sqrt(Delta)), and the
    reference line. The bracket contains the limit point of the nested left walls.
    """
    k = math.isqrt(int(c * c - 4 * d))
    reference = Fraction(-3, 2) if c == -1 else Fraction(-1)
    lo, hi = Fraction(c - k - 1, 2), Fraction(c - k, 2)
    return (min(lo, reference), max(hi, reference))


def _confirm(v: ChernCharacter, witness, found_keys) -> Dict[str, Any]:
    record: Dict[str, Any] = {"label": witness.label, "relation": witness.relation}
    adds_up = witness.total() == v
    confirmed = False
    how = "characters do not add up"
    if adds_up:
        if witness.relation == OBJECT:
            confirmed = witness.sub == v and witness.quotient == ChernCharacter.zero(v.variety)
            how = "the object itself"
        else:
            wall = numerical_wall(v, witness.sub)
            if witness.relation == WALL:
                confirmed = wall.is_semicircle and (wall.center, wall.radius_sq) in found_keys
                how = "wall found by the enumeration"
            elif witness.relation == LIMIT_POINT:
                confirmed = wall.kind == EMPTY and wall.radius_sq == 0
                how = f"limit point at beta = {wall.center}"
        record["wall"] = {"center": wall.center, "radius_sq": wall.radius_sq} if witness.relation != OBJECT else None
    record.update(confirmed=confirmed, how=how)
    return record


def verify_rank_two_case(c: int, d: Number, workers: int = 1) -> CaseReport:
    """Check every named extremal witness of (2, c, d, e_max) on the quadric"""
    extremal = extremal_case(c, d)
    v = extremal.character()
    window = verification_window(extremal.c, extremal.d)
    destabilizers, exhaustive = scan_walls(v, VERIFY_RANK_MAX, window, 0, workers)
    found_keys = {(cand.wall.center, cand.wall.radius_sq) for cand in destabilizers}
    records = tuple(_confirm(v, witness, found_keys) for witness in extremal.witnesses)
    ok = exhaustive and all(r["confirmed"] for r in records)
    if not ok:
        logger.warning("case (c, d) = (%s, %s) failed: %s", c, d, records)
    return CaseReport(
        c=extremal.c,
        d=extremal.d,
        e_max=extremal.e_max,
        witnesses=records,
        destabilizers=tuple(destabilizers),
        window=window,
        exhaustive=exhaustive,
        ok=ok,
    )


def all_rank_two_cases() -> List[Tuple[int, Fraction]]:
    """Representative (c, d) covering every row shape of the table"""
    c_minus_one = [0, Fraction(-1, 2), -1, -2, -3, Fraction(-3, 2), Fraction(-5, 2)]
    c_zero = [0, Fraction(-1, 2), -1, Fraction(-3, 2), Fraction(-5, 2), -2, -3, -4]
    return [(-1, Fraction(d)) for d in c_minus_one] + [(0, Fraction(d)) for d in c_zero]


# --- exceptional collection --------------------------------------------------

def _collection_matrix() -> sympy.Matrix:
    X2 = VarietyId.X2
    columns = [-line_bundle(X2, -1), spinor_bundle(-1), -line_bundle(X2, 0), line_bundle(X2, 1)]
    return sympy.Matrix([[sympy.Rational(str(getattr(col, attr))) for col in columns]
                         for attr in ("r", "c", "d", "e")])


def exceptional_decomposition(v: ChernCharacter, twist_by: int = 1) -> Dict[str, Any]:
    """
    Solve ch(E(twist_by)) = -a O(-1) + b S(-1) - c O + d O(1) on the quadric.

    Returns:
        {
            "status": "DECOMPOSED" | "NON_INTEGRAL" | "SIGN_MIXED",
            "details": "...",
            "coefficients": (a, b, c, d) as Fractions
        }
    """
    if v.variety != VarietyId.X2:
        raise DomainRejection(f"the exceptional collection is on X2, got {v.variety.value}")
    target = twist(v, -twist_by)
    rhs = sympy.Matrix([sympy.Rational(str(x)) for x in target[1:]])
    solution = _collection_matrix().LUsolve(rhs)
    coefficients = tuple(Fraction(int(x.p), int(x.q)) for x in solution)

    if any(x.denominator != 1 for x in coefficients):
        return {"status": "NON_INTEGRAL",
                "details": f"non-integral coefficients {[str(x) for x in coefficients]}",
                "coefficients": coefficients}
    if any(x > 0 for x in coefficients) and any(x < 0 for x in coefficients):
        return {"status": "SIGN_MIXED",
                "details": "coefficients of both signs; no single complex in the collection",
                "coefficients": coefficients}
    return {"status": "DECOMPOSED",
            "details": f"ch(E({twist_by})) decomposed in (-O(-1), S(-1), -O, O(1))",
            "coefficients": coefficients}
