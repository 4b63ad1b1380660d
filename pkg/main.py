#!/usr/bin/env python3
"""
Command-line entry point: tilt walls, c3 bounds, moduli series and the
rank-two verification on the quadric
"""

from dotenv import dotenv_values, load_dotenv
load_dotenv()  # Load TILT_* settings from .env file

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

from bounds_classify import bound_table, bounds_consistency, c3_max
from chern_calculus import describe, to_chern_classes
from input_parser import (
    DEFAULTS,
    ParseError,
    parse_character,
    parse_integer,
    parse_lemma,
    parse_range,
    parse_rational,
    parse_series,
    parse_window,
    validate_settings,
)
from moduli_series import (
    base_dim,
    ext2_vanishes,
    fibration_dim,
    maximal_moduli,
    series_bundle_rank,
    series_chern,
    series_dim,
    series_ext1_rank,
    series_moduli,
)
from report_format import build_envelope, dump_json, plot_csv, write_csv
from tilt_geometry import BMT_VARIETIES, sample_wall, vertical_wall, w_wall, wall_to_dict
from varieties import DomainRejection, VarietyId, parse_variety_id
from wall_search import DestabilizerCandidate, CaseReport, scan_walls, verify_rank_two_case

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

LOG_FORMAT = '%(name)s:%(levelname)s:%(message)s'


def status(message: str) -> None:
    """Human-facing progress goes to stderr; stdout carries only the report"""
    print(message, file=sys.stderr)


def load_settings(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Environment, then the optional config file, validated over the defaults"""
    values = {key: os.getenv(key) for key in DEFAULTS}
    if config_path:
        if not os.path.isfile(config_path):
            raise ParseError(f"config file not found: {config_path}")
        values.update({k: v for k, v in dotenv_values(config_path).items() if v is not None})
    result = validate_settings(values)
    if result["status"] != "VALID":
        raise ParseError(result["details"])
    return result["settings"]


def _worker_count(args, settings) -> int:
    workers = args.workers if args.workers is not None else settings["workers"]
    if workers < 1:
        raise ParseError(f"--workers must be at least 1, got {workers}")
    return workers


def _candidate_dict(cand: DestabilizerCandidate) -> Dict[str, Any]:
    return {
        "w": list(cand.w),
        "complement": list(cand.complement),
        "wall": wall_to_dict(cand.wall),
        "side": cand.side,
        "satisfied_constraints": list(cand.satisfied_constraints),
        "witnesses": [{"w": list(w), "side": side} for w, side in cand.witnesses],
    }


def _case_dict(report: CaseReport) -> Dict[str, Any]:
    return {
        "c": report.c,
        "d": report.d,
        "e_max": report.e_max,
        "window": list(report.window),
        "exhaustive": report.exhaustive,
        "ok": report.ok,
        "witnesses": list(report.witnesses),
        "destabilizers": [_candidate_dict(c) for c in report.destabilizers],
    }


# --- subcommands -------------------------------------------------------------

def run_walls(args, settings) -> Tuple[str, int]:
    v = parse_character(args.character)
    rank_max = args.rank_max if args.rank_max is not None else settings["rank_max"]
    window = parse_window(args.beta_window) if args.beta_window else settings["beta_window"]
    min_radius_sq = (parse_rational(args.min_radius_sq, "min radius^2")
                     if args.min_radius_sq is not None else settings["min_radius_sq"])
    workers = _worker_count(args, settings)
    samples = args.samples if args.samples is not None else settings["plot_samples"]
    if samples < 2:
        raise ParseError(f"--samples must be at least 2, got {samples}")

    status(f"🔍 Scanning walls of {describe(v)} for ranks 0..{rank_max}")
    candidates, exhaustive = scan_walls(v, rank_max, window, min_radius_sq, workers)
    status(f"✅ {len(candidates)} walls found")

    if args.format == "plot":
        return plot_csv((i, sample_wall(c.wall, samples)) for i, c in enumerate(candidates)), EXIT_OK
    if args.format == "csv":
        rows = [[i, c.wall.center, c.wall.radius_sq, *c.w, c.side, len(c.witnesses)]
                for i, c in enumerate(candidates)]
        header = ["wall_id", "center", "radius_sq", "R", "C", "D", "side", "witnesses"]
        return write_csv(header, rows), EXIT_OK

    warnings: List[str] = []
    if v.variety not in BMT_VARIETIES:
        warnings.append(f"W >= 0 is not established on {v.variety.value}; the W-wall is numerical only")
    if not exhaustive:
        warnings.append("some cells had an unbounded ch2 range and were skipped")
    vertical = vertical_wall(v)
    inputs = {
        "character": list(v.as_tuple()),
        "variety": v.variety,
        "rank_max": rank_max,
        "beta_window": list(window),
        "min_radius_sq": min_radius_sq,
    }
    results = {
        "walls": [_candidate_dict(c) for c in candidates],
        "exhaustive": exhaustive,
        "vertical_wall": wall_to_dict(vertical) if vertical else None,
        "w_wall": wall_to_dict(w_wall(v)),
    }
    return dump_json(build_envelope("walls", inputs, results, warnings)), EXIT_OK


def run_c3max(args, settings) -> Tuple[str, int]:
    variety = parse_variety_id(args.variety)
    c1 = parse_integer(args.c1, "c1")
    c2_range = parse_range(args.c2_range)
    status(f"🔍 c3 bounds on {variety.value} for c1 = {c1}, c2 in {c2_range.start}..{c2_range.stop - 1}")
    rows = bound_table(variety, c1, c2_range, args.general_type)

    if args.format == "csv":
        header = ["variety", "c1", "c2", "c3_max", "c3_bound_raw", "e_max", "regime", "witness", "case", "caveats"]
        table = [[r.variety.value, r.c1, r.c2, r.c3_max, r.c3_bound_raw, r.e_max, r.regime,
                  "; ".join(w.label for w in r.witnesses), r.case, "; ".join(r.caveats)] for r in rows]
        return write_csv(header, table), EXIT_OK

    warnings = [caveat for r in rows for caveat in r.caveats]
    results = {
        "bounds": rows,
        "consistency": bounds_consistency(c1, c2_range) if variety == VarietyId.X2 else None,
    }
    inputs = {"variety": variety, "c1": c1, "c2_range": [c2_range.start, c2_range.stop - 1],
              "general_type": args.general_type}
    return dump_json(build_envelope("c3max", inputs, results, warnings)), EXIT_OK


def run_dim(args, settings) -> Tuple[str, int]:
    p = parse_series(args.series, args.params)
    status(f"🔍 Series {p.series} on {p.variety.value}: k = {p.k}, m = {p.m}, n = {p.n}")
    E = series_chern(p)
    closed = series_dim(p)
    counted = fibration_dim(p)
    warnings = []
    if closed != counted:
        warnings.append(f"closed dimension formula gives {closed}, Riemann-Roch count gives {counted}")
        status(f"⚠️  {warnings[-1]}")
    results = {
        "character": list(E.as_tuple()),
        "classes": list(to_chern_classes(E).as_tuple()),
        "series_dim": closed,
        "fibration_dim": counted,
        "base_dim": base_dim(p),
        "bundle_rank": series_bundle_rank(p),
        "ext1_rank": series_ext1_rank(p),
        "ext2_vanishes": ext2_vanishes(p),
        "moduli": series_moduli(p),
    }
    return dump_json(build_envelope("dim", {"params": p}, results, warnings)), EXIT_OK


def run_classify(args, settings) -> Tuple[str, int]:
    variety = parse_variety_id(args.variety.lstrip("@"))
    c1 = parse_integer(args.c1, "c1")
    c2 = parse_integer(args.c2, "c2")
    status(f"🔍 Maximal-c3 moduli on {variety.value} for (c1, c2) = ({c1}, {c2})")
    results = {"bound": c3_max(variety, c1, c2), "moduli": maximal_moduli(variety, c1, c2)}
    inputs = {"variety": variety, "c1": c1, "c2": c2}
    return dump_json(build_envelope("classify", inputs, results)), EXIT_OK


def run_verify(args, settings) -> Tuple[str, int]:
    cases = parse_lemma(args.lemma)
    workers = _worker_count(args, settings)
    reports = []
    for c, d in cases:
        report = verify_rank_two_case(c, d, workers)
        mark = "✅" if report.ok else "❌"
        status(f"{mark} (c, d) = ({c}, {d}): e_max = {report.e_max}, {len(report.destabilizers)} walls")
        reports.append(report)
    failed = [r for r in reports if not r.ok]
    warnings = [f"case (c, d) = ({r.c}, {r.d}) failed verification" for r in failed]
    results = {"cases": [_case_dict(r) for r in reports], "ok": not failed}
    output = dump_json(build_envelope("verify", {"lemma": args.lemma}, results, warnings))
    return output, EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Tilt stability walls and moduli of rank-two sheaves on P3, X2, X4 and X5')
    parser.add_argument('--config', help='key=value file overriding TILT_* environment settings')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')
    sub = parser.add_subparsers(dest='command', required=True)

    walls = sub.add_parser('walls', help='Enumerate numerical walls with destabilizing candidates')
    walls.add_argument('character', help='Chern character r,c,d,e@VARIETY, e.g. 2,0,-2,4@X2')
    walls.add_argument('--rank-max', type=int, help='Largest rank of a candidate (TILT_RANK_MAX)')
    walls.add_argument('--beta-window', help='lo:hi window for beta (TILT_BETA_WINDOW)')
    walls.add_argument('--min-radius-sq', help='Smallest radius^2 reported (TILT_MIN_RADIUS_SQ)')
    walls.add_argument('--format', choices=['json', 'csv', 'plot'], default='json')
    walls.add_argument('--samples', type=int, help='Samples per wall for plot output (TILT_PLOT_SAMPLES)')
    walls.add_argument('--workers', type=int, help='Worker processes scanning grid cells (TILT_WORKERS)')
    walls.set_defaults(handler=run_walls)

    c3 = sub.add_parser('c3max', help='Upper bound for c3 of semistable rank-two sheaves')
    c3.add_argument('variety', help='P3 (or X1), X2, X4 or X5')
    c3.add_argument('c1', help='-1 or 0')
    c3.add_argument('--c2-range', default='0:10', help='Inclusive range a:b')
    c3.add_argument('--general-type', action='store_true', help='Required on X4 and X5')
    c3.add_argument('--format', choices=['json', 'csv'], default='json')
    c3.set_defaults(handler=run_c3max)

    dim = sub.add_parser('dim', help='Dimension of a series component')
    dim.add_argument('series', help='SERIES@VARIETY, e.g. A@X2')
    dim.add_argument('params', nargs='+', help='k=.. m=.. [n=..]')
    dim.set_defaults(handler=run_dim)

    classify = sub.add_parser('classify', help='Moduli space with maximal c3 on the quadric')
    classify.add_argument('c1')
    classify.add_argument('c2')
    classify.add_argument('variety', nargs='?', default='@X2')
    classify.set_defaults(handler=run_classify)

    verify = sub.add_parser('verify', help='Check the rank-two ch3 table on the quadric')
    verify.add_argument('--lemma', default='all', help="'all' or c,d")
    verify.add_argument('--workers', type=int, help='Worker processes per case (TILT_WORKERS)')
    verify.set_defaults(handler=run_verify)
    return parser


def main(argv=None) -> int:
    """Main application entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.config)
        level = logging.DEBUG if args.verbose else getattr(logging, settings["log_level"])
        logging.basicConfig(format=LOG_FORMAT, level=level)
        output, code = args.handler(args, settings)
    except ParseError as e:
        status(f"❌ Parse error: {e}")
        return EXIT_PARSE
    except DomainRejection as e:
        status(f"❌ Rejected: {e}")
        return EXIT_DOMAIN

    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
