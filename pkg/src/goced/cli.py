"""``goced`` command line: convert, validate, derive, snapshot, export.

Exit status: 0 success, 1 violations found, 2 bad input, 3 bad usage.
Diagnostics go to stderr, at the level named by ``GOCED_LOG`` (debug, info, warn).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import GocedError
from .export import from_canonical_json, from_turtle, to_canonical_json, to_turtle
from .ingestion import ekg_to_goced, ocel_to_goced, parse_ekg, parse_event_table, parse_ocel2
from .model import GocedGraph, format_time, parse_time
from .temporal import directly_follows, event_allen, hd_closure, snapshot
from .validation import ValidationConfig, validate, write_jsonl

log = logging.getLogger("goced")

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3

INPUT_FORMATS = ("ocel2", "table", "ekg", "goced-json", "goced-ttl")
OUTPUT_FORMATS = ("goced-json", "goced-ttl")
DEFAULT_BASE_IRI = "https://example.org/goced/"
_BY_SUFFIX = {".json": "ocel2", ".csv": "table", ".ttl": "goced-ttl"}
_OUT_BY_SUFFIX = {".json": "goced-json", ".ttl": "goced-ttl"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def infer_input_format(path: Path) -> str:
    if path.is_dir():
        return "ekg"
    try:
        return _BY_SUFFIX[path.suffix.lower()]
    except KeyError:
        raise UsageError(f"cannot infer the format of {path}; pass --format") from None


def load_graph(path: str, fmt: Optional[str], min_mediation: int = 2) -> GocedGraph:
    p = Path(path)
    fmt = fmt or infer_input_format(p)
    if fmt == "ekg":
        if not p.is_dir():
            raise UsageError("ekg input must be a directory holding nodes.csv and edges.csv")
        dump = parse_ekg((p / "nodes.csv").read_bytes(), (p / "edges.csv").read_bytes())
        return ekg_to_goced(dump, min_mediation)
    data = p.read_bytes()
    if fmt == "ocel2":
        from .ingestion import MappingConfig

        return ocel_to_goced(parse_ocel2(data), MappingConfig(min_mediation=min_mediation))
    if fmt == "table":
        return parse_event_table(data, min_mediation)
    if fmt == "goced-json":
        return from_canonical_json(data, min_mediation)
    return from_turtle(data.decode("utf-8"), min_mediation)


def serialize(graph: GocedGraph, fmt: str, base_iri: str) -> bytes:
    if fmt == "goced-ttl":
        return to_turtle(graph, base_iri).encode("utf-8")
    return to_canonical_json(graph) + b"\n"


def _emit(data: bytes, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(output).write_bytes(data)


def _json(obj) -> bytes:
    return (json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n").encode()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="goced", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt_flags=("--format",)):
        p.add_argument(*fmt_flags, dest="format", choices=INPUT_FORMATS, help="input format")
        p.add_argument("--min-mediation", type=int, default=2)

    p = sub.add_parser("convert", help="parse, lift, validate and export")
    p.add_argument("input")
    p.add_argument("output", nargs="?", default="-")
    common(p, ("--from", "--format"))
    p.add_argument("--to", choices=OUTPUT_FORMATS)
    p.add_argument("--force", action="store_true", help="export despite violations")
    p.add_argument("--rules", default="default")
    p.add_argument("--base-iri", default=DEFAULT_BASE_IRI)

    p = sub.add_parser("validate", help="print violations as JSON lines")
    p.add_argument("input")
    common(p)
    p.add_argument("--rules", default="default", help="'all', 'default' or a comma list of codes")

    p = sub.add_parser("derive", help="print derived relations as JSON")
    p.add_argument("input")
    common(p)
    p.add_argument("--what", required=True, choices=("df", "allen", "hd-closure"))
    p.add_argument("--object")
    p.add_argument("--events", nargs=2, metavar="ID")
    p.add_argument("--point-policy", choices=("coarse", "reject"), default="coarse")

    p = sub.add_parser("snapshot", help="attribute values of an endurant at an instant")
    p.add_argument("input")
    common(p)
    p.add_argument("--endurant", required=True)
    p.add_argument("--at", required=True)

    p = sub.add_parser("export", help="serialize without validating")
    p.add_argument("input")
    common(p)
    p.add_argument("--to", required=True, choices=OUTPUT_FORMATS)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--base-iri", default=DEFAULT_BASE_IRI)
    return parser


def _configure_logging() -> None:
    level = {"debug": logging.DEBUG, "info": logging.INFO, "warn": logging.WARNING}.get(
        os.environ.get("GOCED_LOG", "warn").lower(), logging.WARNING
    )
    logging.basicConfig(level=level, stream=sys.stderr, format="goced %(levelname)s: %(message)s", force=True)


def run(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"goced: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GocedError, OSError, UnicodeDecodeError) as exc:
        print(f"goced: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _config(args) -> ValidationConfig:
    try:
        return ValidationConfig.parse_rules(args.rules, args.min_mediation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dispatch(args) -> int:
    if args.min_mediation < 1:
        raise UsageError("--min-mediation must be at least 1")

    if args.command == "convert":
        config = _config(args)
        out_fmt = args.to or _OUT_BY_SUFFIX.get(Path(args.output).suffix.lower())
        if out_fmt is None:
            raise UsageError("cannot infer the output format; pass --to")
        graph = load_graph(args.input, args.format, args.min_mediation)
        violations = validate(graph, config)
        if violations and not args.force:
            sys.stderr.write(write_jsonl(violations))
            log.error("%d violation(s); not exporting (use --force)", len(violations))
            return EXIT_VIOLATIONS
        _emit(serialize(graph, out_fmt, args.base_iri), args.output)
        if violations:
            sidecar = write_jsonl(violations).encode("utf-8")
            if args.output == "-":
                sys.stderr.buffer.write(sidecar)
            else:
                Path(args.output + ".violations.jsonl").write_bytes(sidecar)
        return EXIT_OK

    if args.command == "validate":
        config = _config(args)
        violations = validate(load_graph(args.input, args.format, args.min_mediation), config)
        _emit(write_jsonl(violations).encode("utf-8"), None)
        return EXIT_VIOLATIONS if violations else EXIT_OK

    if args.command == "derive":
        if args.what == "df" and not args.object:
            raise UsageError("--what df needs --object")
        if args.what == "allen" and not args.events:
            raise UsageError("--what allen needs --events ID1 ID2")
        graph = load_graph(args.input, args.format, args.min_mediation)
        if args.what == "df":
            result = {"object": args.object, "pairs": [list(p) for p in directly_follows(graph, args.object)]}
        elif args.what == "allen":
            a, b = args.events
            result = {"events": [a, b], "relation": event_allen(graph, a, b, args.point_policy).value}
        else:
            result = {"pairs": sorted(list(p) for p in hd_closure(graph))}
        _emit(_json(result), None)
        return EXIT_OK

    if args.command == "snapshot":
        try:
            at = parse_time(args.at)
        except GocedError as exc:
            raise UsageError(str(exc)) from None
        graph = load_graph(args.input, args.format, args.min_mediation)
        snap = snapshot(graph, args.endurant, at)
        log.info("snapshot of %s at %s", snap.endurant, format_time(snap.at))
        _emit(_json(dict(snap.values)), None)
        return EXIT_OK

    graph = load_graph(args.input, args.format, args.min_mediation)
    _emit(serialize(graph, args.to, args.base_iri), args.output)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
