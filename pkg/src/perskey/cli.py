"""Command-line interface: ``perskey {segment,analyze,extract,df-build,eval}``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data or config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .analyzer import AnalyzerConfig, DfFormatError, DfTable, EmptyCorpus, analyze_page, build_df_table
from .dom import EmptyPage, SegConfig, parse_document, read_document, segment_page, strip_text
from .evaluation import (
    EmptyStats,
    MalformedRow,
    RowError,
    aggregate_means,
    load_manifest,
    read_stats_csv,
    run_eval,
    write_stats_csv,
)
from .fusion import ExtractionConfig, extract_keywords
from .profile import InvalidTerm, read_profile

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3
HTML_SUFFIXES = (".html", ".htm", ".xhtml")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    return data.decode("utf-8", errors="replace")


def _load_doc(path: str):
    try:
        return read_document(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _load_df(path: str | None) -> DfTable | None:
    if path is None:
        return None
    try:
        return DfTable.from_tsv(_read_text(path))
    except DfFormatError as exc:
        raise CliError(EXIT_DATA, f"{path}: {exc}") from None


def _analyzer_cfg(args) -> AnalyzerConfig:
    try:
        return AnalyzerConfig(top_k=args.top_k) if args.top_k is not None else AnalyzerConfig()
    except ValueError as exc:
        raise CliError(EXIT_DATA, str(exc)) from None


def _extraction_cfg(args) -> ExtractionConfig:
    try:
        return ExtractionConfig(threshold=args.threshold, analyzer=_analyzer_cfg(args))
    except ValueError as exc:
        raise CliError(EXIT_DATA, str(exc)) from None


def _write(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from None


# ---------------------------------------------------------------------------


def cmd_segment(args) -> int:
    doc = _load_doc(args.page)
    try:
        segments = segment_page(parse_document(doc), SegConfig(min_segment_chars=args.min_chars))
    except EmptyPage:
        segments = []
    if args.json:
        payload = [
            {"id": s.id, "path": s.path, "char_count": s.char_count, "text": s.text}
            for s in segments
        ]
        sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        return EXIT_OK
    if not segments:
        print("0 segments")
        return EXIT_OK
    for s in segments:
        preview = s.text if len(s.text) <= 60 else s.text[:57] + "..."
        print(f"{s.id}\t{s.path}\t{s.char_count}\t{preview}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    doc = _load_doc(args.page)
    cfg = _analyzer_cfg(args)
    df = _load_df(args.df)
    try:
        segments = segment_page(parse_document(doc))
    except EmptyPage:
        segments = []
    results = analyze_page(segments, df, cfg)
    if args.json:
        payload = [
            {"segment_id": r.segment_id, "terms": [{"term": t.term, "weight": round(t.weight, 6)} for t in r.terms]}
            for r in results
        ]
        sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    else:
        for r in results:
            terms = ", ".join(f"{t.term}:{t.weight:.3f}" for t in r.terms)
            print(f"{r.segment_id}\t{terms}")
    return EXIT_OK


def cmd_extract(args) -> int:
    cfg = _extraction_cfg(args)
    try:
        user_id = os.path.splitext(os.path.basename(args.profile))[0]
        profile = read_profile(args.profile, user_id, cfg.analyzer)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.profile}: {exc.strerror or exc}") from None
    except InvalidTerm as exc:
        raise CliError(EXIT_DATA, f"{args.profile}: {exc}") from None
    df = _load_df(args.df)
    doc = _load_doc(args.page)
    result = extract_keywords(doc, profile, df, cfg)
    text = {"json": result.to_json, "csv": result.to_csv, "text": result.to_text}[args.format]()
    sys.stdout.write(text)
    return EXIT_OK


def _corpus_files(inputs: Sequence[str]) -> tuple[list[str], list[str]]:
    files, missing = [], []
    for path in inputs:
        if os.path.isdir(path):
            for dirpath, dirnames, filenames in os.walk(path):
                dirnames.sort()
                files.extend(os.path.join(dirpath, f) for f in sorted(filenames))
        elif os.path.isfile(path):
            files.append(path)
        else:
            missing.append(path)
    return files, missing


def cmd_df_build(args) -> int:
    files, missing = _corpus_files(args.inputs)
    for path in missing:
        print(f"warning: no such file or directory: {path}", file=sys.stderr)
    if missing and not files:
        raise CliError(EXIT_IO, "no readable inputs")
    docs = []
    for path in files:
        try:
            text = _read_text(path)
        except CliError as exc:
            print(f"warning: {exc}", file=sys.stderr)
            continue
        if path.lower().endswith(HTML_SUFFIXES):
            tree = parse_document(text)
            text = strip_text(tree.start[0])
        docs.append(text)
    if files and not docs:
        raise CliError(EXIT_IO, "no readable inputs")
    try:
        table = build_df_table(docs)
    except EmptyCorpus as exc:
        raise CliError(EXIT_DATA, str(exc)) from None
    _write(args.out, table.to_tsv())
    return EXIT_OK


def _print_means(stats) -> None:
    terms, keywords = aggregate_means(stats)
    print(f"mean_initial_profile_terms\t{terms:.2f}")
    print(f"mean_personalized_keywords\t{keywords:.2f}")


def cmd_eval(args) -> int:
    if (args.manifest is None) == (args.fixture is None):
        raise CliError(EXIT_USAGE, "exactly one of --manifest or --fixture is required")
    try:
        if args.fixture is not None:
            stats = read_stats_csv(_read_text(args.fixture))
            _print_means(stats)
            return EXIT_OK
        cfg = _extraction_cfg(args)
        rows = load_manifest(_read_text(args.manifest))
        base = os.path.dirname(os.path.abspath(args.manifest)) if args.manifest != "-" else None
        stats = run_eval(rows, cfg, _load_df(args.df), base_dir=base)
    except MalformedRow as exc:
        raise CliError(EXIT_DATA, str(exc)) from None
    except RowError as exc:
        raise CliError(EXIT_IO, str(exc)) from None
    except InvalidTerm as exc:
        raise CliError(EXIT_DATA, str(exc)) from None
    except EmptyStats as exc:
        raise CliError(EXIT_DATA, str(exc)) from None
    _write(args.out, write_stats_csv(stats))
    if stats:
        _print_means(stats)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perskey", description="Personalized keyword extraction from HTML pages.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("segment", help="split a page into segments")
    p.add_argument("page", help="HTML file, or '-' for stdin")
    p.add_argument("--json", action="store_true")
    p.add_argument("--min-chars", type=int, default=SegConfig.min_segment_chars)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("analyze", help="print significant terms per segment")
    p.add_argument("page")
    p.add_argument("--df", help="DF table TSV; page-local statistics when omitted")
    p.add_argument("--top-k", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("extract", help="extract personalized keywords")
    p.add_argument("page")
    p.add_argument("--profile", required=True)
    p.add_argument("--threshold", type=float, default=ExtractionConfig.threshold)
    p.add_argument("--df")
    p.add_argument("--top-k", type=int)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("df-build", help="build a document-frequency table")
    p.add_argument("inputs", nargs="+", help="files or directories; .html/.htm are stripped first")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_df_build)

    p = sub.add_parser("eval", help="per-group statistics over a manifest or a stats fixture")
    p.add_argument("--manifest")
    p.add_argument("--fixture")
    p.add_argument("--out")
    p.add_argument("--threshold", type=float, default=ExtractionConfig.threshold)
    p.add_argument("--df")
    p.add_argument("--top-k", type=int)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"perskey {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
