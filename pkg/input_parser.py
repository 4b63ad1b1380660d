#!/usr/bin/env python3
"""
Parsing and validation of command-line input and configuration values
"""

import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from chern_calculus import ChernCharacter
from moduli_series import SeriesParams
from varieties import parse_variety_id
from wall_search import all_rank_two_cases


class ParseError(ValueError):
    """Raised for malformed command-line input"""


DEFAULTS = {
    "TILT_RANK_MAX": "4",
    "TILT_BETA_WINDOW": "-4:4",
    "TILT_MIN_RADIUS_SQ": "0",
    "TILT_PLOT_SAMPLES": "64",
    "TILT_WORKERS": "1",
    "TILT_LOG_LEVEL": "WARNING",
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str, what: str = "value") -> Fraction:
    token = str(text).strip()
    if not _RATIONAL.match(token):
        raise ParseError(f"{what} must be an integer or p/q, got '{text}'")
    return Fraction(token)


def parse_integer(text: str, what: str = "value") -> int:
    value = parse_rational(text, what)
    if value.denominator != 1:
        raise ParseError(f"{what} must be an integer, got '{text}'")
    return value.numerator


def parse_character(text: str) -> ChernCharacter:
    """'r,c,d,e@X2' -> ChernCharacter; lattice violations raise DomainRejection"""
    body, sep, variety = str(text).partition("@")
    if not sep:
        raise ParseError(f"expected r,c,d,e@VARIETY, got '{text}'")
    parts = body.strip().strip("()").split(",")
    if len(parts) != 4:
        raise ParseError(f"expected four comma-separated entries before '@', got '{body}'")
    r, c, d, e = (parse_rational(p, name) for p, name in zip(parts, ("ch0", "ch1", "ch2", "ch3")))
    return ChernCharacter.build(parse_variety_id(variety), r, c, d, e)


def parse_window(text: str) -> Tuple[Fraction, Fraction]:
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise ParseError(f"expected a beta window lo:hi, got '{text}'")
    return parse_rational(lo, "window start"), parse_rational(hi, "window end")


def parse_range(text: str) -> range:
    """Inclusive integer range 'a:b'"""
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise ParseError(f"expected an integer range a:b, got '{text}'")
    a, b = parse_integer(lo, "range start"), parse_integer(hi, "range end")
    if a > b:
        raise ParseError(f"empty range '{text}'")
    return range(a, b + 1)


def _default_n(series: str, k: int) -> int:
    if series == "A":
        return (k + 1) // 2
    if series in ("B", "D"):
        return 1
    return k // 2 + 1


def parse_series(target: str, assignments: Sequence[str]) -> SeriesParams:
    """'A@X2' plus ['k=1', 'm=-2', 'n=1']; n defaults to the value the series forces"""
    series, sep, variety = str(target).partition("@")
    if not sep or not series:
        raise ParseError(f"expected SERIES@VARIETY, got '{target}'")
    values: Dict[str, int] = {}
    for item in assignments:
        key, eq, raw = item.partition("=")
        key = key.strip().lower()
        if not eq or key not in ("k", "m", "n"):
            raise ParseError(f"expected k=.., m=.. or n=.., got '{item}'")
        values[key] = parse_integer(raw, key)
    series = series.strip().upper()
    k = values.get("k", 1)
    if "m" not in values:
        raise ParseError("m=.. is required")
    n = values.get("n", _default_n(series, k))
    return SeriesParams(series, parse_variety_id(variety), k, values["m"], n)


def parse_lemma(text: str) -> List[Tuple[int, Fraction]]:
    """'all' or 'c,d'"""
    token = str(text).strip().lower()
    if token == "all":
        return all_rank_two_cases()
    c, sep, d = token.partition(",")
    if not sep:
        raise ParseError(f"expected 'all' or c,d, got '{text}'")
    return [(parse_integer(c, "c"), parse_rational(d, "d"))]


def validate_settings(values: Mapping[str, Optional[str]]) -> Dict[str, Any]:
    """
    Validate configuration values layered over DEFAULTS

    Returns:
        {
            "status": "VALID" | "INVALID",
            "details": "first problem found, or a summary",
            "settings": dict of parsed values, or None
        }
    """
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in values.items() if k in DEFAULTS and v not in (None, "")})
    try:
        settings = {
            "rank_max": parse_integer(merged["TILT_RANK_MAX"], "TILT_RANK_MAX"),
            "beta_window": parse_window(merged["TILT_BETA_WINDOW"]),
            "min_radius_sq": parse_rational(merged["TILT_MIN_RADIUS_SQ"], "TILT_MIN_RADIUS_SQ"),
            "plot_samples": parse_integer(merged["TILT_PLOT_SAMPLES"], "TILT_PLOT_SAMPLES"),
            "workers": parse_integer(merged["TILT_WORKERS"], "TILT_WORKERS"),
            "log_level": merged["TILT_LOG_LEVEL"].strip().upper(),
        }
    except ParseError as e:
        return {"status": "INVALID", "details": str(e), "settings": None}

    if settings["rank_max"] < 0:
        return {"status": "INVALID", "details": "TILT_RANK_MAX must be non-negative", "settings": None}
    if settings["plot_samples"] < 2:
        return {"status": "INVALID", "details": "TILT_PLOT_SAMPLES must be at least 2", "settings": None}
    if settings["workers"] < 1:
        return {"status": "INVALID", "details": "TILT_WORKERS must be at least 1", "settings": None}
    if settings["log_level"] not in LOG_LEVELS:
        return {"status": "INVALID",
                "details": f"TILT_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}", "settings": None}
    return {"status": "VALID", "details": "configuration accepted", "settings": settings}
