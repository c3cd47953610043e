"""Command-line front end.

Subcommands: ``leq``, ``interval``, ``graph``, ``maximizers``, ``verify``,
and ``scan``.  Structured output is a canonical JSON document (sorted
keys, rank-ordered arrays, integers only) so byte-level comparison across
runs and worker counts is meaningful; elapsed time is only attached when
``--timing`` is requested, keeping the default output deterministic.

Exit codes: 0 success (and true for ``leq``), 1 false for ``leq``,
2 usage or limit error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from .enumerator import (
    CacheFormatError,
    OrderCache,
    VerificationFailure,
    build_order_cache,
    load_cache,
    save_cache,
    scan_max_gap,
    verify_coatom_maximizers,
    verify_floor_inequality,
    verify_gap_maximizers,
    verify_max_coatom_count,
    verify_max_gap,
    verify_maximizer_top_form,
    verify_partition_agreement,
)
from .extremal import gap_bound_report, opt_top_provenance
from .graphs import atom_graph, coatom_graph, components, to_dot
from .order import Interval, atom_labels, bruhat_leq, coatom_labels
from .perm import length, parse_permutation

SCHEMA_VERSION = "1"
CACHE_DIR_ENV = "BRUHATKIT_CACHE_DIR"
CHECK_NAMES = ("a", "b", "p21", "p29", "p410", "corollary", "lemma")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3


class UsageError(Exception):
    """Bad arguments or out-of-limit request; maps to exit code 2."""


def _emit_document(command: str, payload, timing_ms: Optional[int] = None) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "payload": payload}
    if timing_ms is not None:
        doc["timing_ms"] = timing_ms
    # Canonical form: sorted keys, no whitespace, integers only; output is
    # byte-stable across runs and worker counts.
    print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def _parse_perm(text: str):
    try:
        return parse_permutation(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_interval(u_text: str, v_text: str) -> Interval:
    u = _parse_perm(u_text)
    v = _parse_perm(v_text)
    try:
        return Interval(u, v)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cache_path(n: int, cache_arg: Optional[str]) -> Optional[Path]:
    if cache_arg:
        return Path(cache_arg)
    env_dir = os.environ.get(CACHE_DIR_ENV)
    if env_dir:
        return Path(env_dir) / f"s{n}.bruhatcache"
    return None


def _obtain_cache(n: int, cache_arg: Optional[str], allow_large: bool) -> OrderCache:
    if n > 7 and not allow_large:
        raise UsageError(
            f"degree {n} needs --allow-large (each bitmatrix takes hundreds of MB)"
        )
    path = _cache_path(n, cache_arg)
    if path is not None and path.exists():
        return load_cache(path, expect_n=n, allow_large=allow_large)
    cache = build_order_cache(n, allow_large=allow_large)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        save_cache(cache, path)
    return cache


def cmd_leq(args) -> int:
    u = _parse_perm(args.u)
    v = _parse_perm(args.v)
    if u.n != v.n:
        raise UsageError(f"degree mismatch: {u.n} vs {v.n}")
    result = bruhat_leq(u, v)
    print("true" if result else "false")
    return EXIT_OK if result else EXIT_FALSE


def cmd_interval(args) -> int:
    start = time.perf_counter()
    interval = _parse_interval(args.u, args.v)
    atoms = atom_labels(interval).sorted()
    coatoms = coatom_labels(interval).sorted()
    report = gap_bound_report(interval)
    blocks = components(atom_graph(interval)).blocks
    payload = {
        "n": interval.n,
        "u": str(interval.u),
        "v": str(interval.v),
        "length_u": length(interval.u),
        "length_v": length(interval.v),
        "atoms": [[t.a, t.b] for t in atoms],
        "coatoms": [[t.a, t.b] for t in coatoms],
        "atom_count": len(atoms),
        "coatom_count": len(coatoms),
        "gap": report.gap,
        "components": [list(b) for b in blocks],
        "coatom_bound": report.coatom_bound,
        "atom_bound": report.atom_lower_bound,
    }
    timing = int((time.perf_counter() - start) * 1000) if args.timing else None
    if args.format == "text":
        print(f"interval [{payload['u']}, {payload['v']}] in S_{payload['n']}")
        print(f"length: {payload['length_u']} -> {payload['length_v']}")
        print(
            f"atoms ({payload['atom_count']}):",
            " ".join(f"({t.a} {t.b})" for t in atoms),
        )
        print(
            f"coatoms ({payload['coatom_count']}):",
            " ".join(f"({t.a} {t.b})" for t in coatoms),
        )
        print(f"gap: {payload['gap']}")
        print(
            "components:",
            " ".join("{" + ",".join(map(str, b)) + "}" for b in blocks),
        )
        print(f"coatom bound: {payload['coatom_bound']}")
        print(f"atom bound: {payload['atom_bound']}")
        if timing is not None:
            print(f"elapsed: {timing} ms")
    else:
        _emit_document("interval", payload, timing)
    return EXIT_OK


def cmd_graph(args) -> int:
    interval = _parse_interval(args.u, args.v)
    graph = atom_graph(interval) if args.side == "atom" else coatom_graph(interval)
    sys.stdout.write(to_dot(graph, args.side))
    return EXIT_OK


def cmd_maximizers(args) -> int:
    start = time.perf_counter()
    if args.n < 2:
        raise UsageError(f"maximizers require degree >= 2, got {args.n}")
    entries = opt_top_provenance(args.n)
    payload = {
        "n": args.n,
        "count": len(entries),
        "expected_count": args.n if args.n % 2 else args.n // 2,
        "maximizers": [
            {"perm": str(v), "mt": [[m, t] for m, t in mts]} for v, mts in entries
        ],
    }
    timing = int((time.perf_counter() - start) * 1000) if args.timing else None
    _emit_document("maximizers", payload, timing)
    return EXIT_OK


def _verify_applicable(check: str, n: int) -> Optional[str]:
    """Reason the check cannot run at this degree, or None if it can."""
    if check in ("b", "corollary") and n < 4:
        return "requires n >= 4"
    return None


def cmd_verify(args) -> int:
    start = time.perf_counter()
    if args.check == "all":
        checks = list(CHECK_NAMES)
        explicit = False
    else:
        checks = [args.check]
        explicit = True
    if args.n < 1:
        raise UsageError(f"degree must be >= 1, got {args.n}")
    needs_cache = [c for c in checks if c != "lemma"]
    if needs_cache and args.n < 2:
        raise UsageError(f"check(s) {needs_cache} need degree >= 2, got {args.n}")
    for check in checks:
        reason = _verify_applicable(check, args.n)
        if reason and explicit:
            raise UsageError(f"check {check!r} {reason}, got n={args.n}")

    cache = None
    if needs_cache:
        cache = _obtain_cache(args.n, args.cache, args.allow_large)
    scan = None

    def shared_scan():
        nonlocal scan
        if scan is None:
            scan = scan_max_gap(args.n, cache, jobs=args.jobs)
        return scan

    entries = []
    all_pass = True
    for check in checks:
        reason = _verify_applicable(check, args.n)
        if reason:
            entries.append({"check": check, "status": "skip", "reason": reason})
            continue
        if check == "a":
            report = verify_max_gap(args.n, cache, scan=shared_scan())
        elif check == "b":
            report = verify_gap_maximizers(args.n, cache, scan=shared_scan())
        elif check == "p21":
            report = verify_max_coatom_count(args.n, cache)
        elif check == "p29":
            report = verify_coatom_maximizers(args.n, cache)
        elif check == "p410":
            mode = "exhaustive" if args.n <= 5 else "sample"
            report = verify_partition_agreement(
                args.n, cache, mode=mode, count=args.sample, seed=args.seed
            )
        elif check == "corollary":
            report = verify_maximizer_top_form(args.n, cache, scan=shared_scan())
        else:
            report = verify_floor_inequality()
        entry = report.as_payload()
        entry["status"] = "pass" if report.passed else "fail"
        entries.append(entry)
        all_pass = all_pass and report.passed
    payload = {"n": args.n, "passed": all_pass, "checks": entries}
    timing = int((time.perf_counter() - start) * 1000) if args.timing else None
    _emit_document("verify", payload, timing)
    return EXIT_OK if all_pass else EXIT_VERIFICATION


def cmd_scan(args) -> int:
    start = time.perf_counter()
    if args.n < 2:
        raise UsageError(f"scan requires degree >= 2, got {args.n}")
    cache = _obtain_cache(args.n, args.cache, args.allow_large)
    result = scan_max_gap(args.n, cache, jobs=args.jobs)
    if args.format == "csv":
        print("gap,count")
        for gap in sorted(result.histogram):
            print(f"{gap},{result.histogram[gap]}")
        return EXIT_OK
    payload = {
        "n": result.n,
        "max_gap": result.max_gap,
        "intervals_scanned": result.intervals_scanned,
        "witnesses": [[str(u), str(v)] for u, v in result.maximizing_intervals],
        "histogram": [[gap, result.histogram[gap]] for gap in sorted(result.histogram)],
    }
    timing = int((time.perf_counter() - start) * 1000) if args.timing else None
    _emit_document("scan", payload, timing)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bruhatkit",
        description=(
            "Atoms, coatoms, and the extremal coatom/atom gap of Bruhat "
            "intervals of the symmetric group."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("leq", help="compare two permutations in Bruhat order")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_leq)

    p = sub.add_parser("interval", help="atom/coatom statistics of an interval")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("graph", help="emit a cover-label graph as DOT")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--side", choices=("atom", "coatom"), required=True)
    p.add_argument("--format", choices=("dot",), default="dot")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser(
        "maximizers", help="tops whose lower interval attains floor(n^2/4) coatoms"
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_maximizers)

    p = sub.add_parser("verify", help="run the named exhaustive checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", choices=CHECK_NAMES + ("all",), default="all")
    p.add_argument("--sample", type=int, default=100_000,
                   help="sampled intervals for the partition check at n >= 6")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", help="order cache file path")
    p.add_argument("--allow-large", action="store_true",
                   help="permit degree 8 (hundreds of MB)")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="scan every interval for the coatom/atom gap")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", help="order cache file path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--allow-large", action="store_true",
                   help="permit degree 8 (hundreds of MB)")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (CacheFormatError, ValueError, OSError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
