"""Command-line entry point: ``kizuki <command> ...``.

Exit codes: 0 success, 1 internal error, 2 audit score below threshold,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analytics import analyze_pages, build_report, emit_reports
from .audit import KizukiPolicy, Mode, audit_page, load_weights
from .corpus import (
    STORE_ENV,
    FetchConfig,
    FetchError,
    InvalidURLError,
    SnapshotStore,
    default_store_dir,
    fetch_page,
    load_page,
)
from .extract import ElementKind, extract_all
from .filters import FilterDictionaries, classify_text
from .lang import UnknownLanguageError, get_script_table, load_script_tables
from .selftest import format_matrix, run_matrix

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BELOW_THRESHOLD = 2
EXIT_USAGE = 64

log = logging.getLogger("kizuki")

EPILOG = f"""\
flags shared across commands:
  --lang CODE        target language (hi bn ar arz ru ja zh yue ko th el he, or from --tables)
  --store DIR        snapshot store directory (default: ${STORE_ENV} or ./kizuki-store)
  --out DIR          report output directory (analyze)
  --mode MODE        baseline | kizuki (audit, matrix-selftest)
  --scope KINDS      image-alt (default), all, or comma-separated kinds (audit, analyze)
  --mixed-as-native  count mixed-language texts as native in mismatch fractions (analyze)
  --weights FILE     JSON kind->weight map for scoring (audit, analyze)
  --dicts DIR        directory with filter dictionary JSON files (filter-debug, analyze)
  --jobs N           parallel workers (fetch, analyze)
  --threshold SCORE  minimum score for exit code 0 (audit)
  --dominance R      native-dominance threshold, default 0.5 (audit, analyze)
  --mix R            mixed-language threshold, default 0.2 (audit, analyze)
"""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by the pipeline commands."""

    target_language: Optional[str] = None
    store_dir: Path = field(default_factory=default_store_dir)
    out_dir: Path = Path("kizuki-report")
    mode: Mode = Mode.KIZUKI
    scope: frozenset = frozenset({ElementKind.IMAGE_ALT})
    native_dominance: float = 0.5
    mix: float = 0.2
    weight_file: Optional[Path] = None
    dict_dir: Optional[Path] = None

    def __post_init__(self):
        if not 0 < self.native_dominance <= 1:
            raise UsageError(f"dominance threshold must be in (0, 1], got {self.native_dominance}")
        if not 0 < self.mix <= 0.5:
            raise UsageError(f"mix threshold must be in (0, 0.5], got {self.mix}")
        if not self.scope or not set(self.scope) <= set(ElementKind):
            raise UsageError("scope must be a non-empty set of element kinds")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        store = getattr(args, "store_path", None) or getattr(args, "store", None)
        return cls(
            target_language=getattr(args, "lang", None),
            store_dir=Path(store) if store else default_store_dir(),
            out_dir=Path(getattr(args, "out", None) or "kizuki-report"),
            mode=Mode(getattr(args, "mode", Mode.KIZUKI.value)),
            scope=frozenset(getattr(args, "scope", None) or {ElementKind.IMAGE_ALT}),
            native_dominance=getattr(args, "dominance", 0.5),
            mix=getattr(args, "mix", 0.2),
            weight_file=getattr(args, "weights", None),
            dict_dir=getattr(args, "dicts", None),
        )

    def weights(self):
        return load_weights(self.weight_file) if self.weight_file else None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scope(value: str) -> frozenset[ElementKind]:
    if value == "all":
        return frozenset(ElementKind)
    try:
        return frozenset(ElementKind(v.strip()) for v in value.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="kizuki",
        description="Language-aware accessibility audits for multilingual web pages.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lang_opts(sp, required=False):
        sp.add_argument("--lang", required=required, help="target language code")
        sp.add_argument("--tables", type=Path, help="JSON file with extra script tables")

    def threshold_opts(sp):
        sp.add_argument("--dominance", type=float, default=0.5, help="native fraction that makes a page native-dominant")
        sp.add_argument("--mix", type=float, default=0.2, help="fraction at which a text counts as mixed")

    f = sub.add_parser("fetch", help="download pages into the snapshot store")
    f.add_argument("url_list", help="file with one URL per line, or - for stdin")
    lang_opts(f, required=True)
    f.add_argument("--country", default="", help="country tag stored with each snapshot")
    f.add_argument("--store", type=Path, help="store directory")
    f.add_argument("--jobs", type=int, default=1)
    f.add_argument("--timeout", type=float, default=20.0)
    f.add_argument("--max-bytes", type=int, default=10 * 1024 * 1024)
    f.add_argument("--delay", type=float, default=0.0, help="seconds to wait between requests (jobs=1)")

    a = sub.add_parser("audit", help="audit one page and print the report as JSON")
    a.add_argument("target", help="http(s) URL or local HTML file")
    lang_opts(a)
    a.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.KIZUKI.value)
    a.add_argument("--scope", type=_scope, default=frozenset({ElementKind.IMAGE_ALT}))
    a.add_argument("--weights", type=Path)
    a.add_argument("--threshold", type=float, default=0.0)
    a.add_argument("--mixed-fails", action="store_true", help="fail mixed-language names too")
    a.add_argument("--strict", type=float, metavar="TAU", help="fail names with native fraction below TAU")
    threshold_opts(a)

    z = sub.add_parser("analyze", help="write corpus report files from a snapshot store")
    z.add_argument("store_path", nargs="?", type=Path, help="store directory")
    z.add_argument("--store", type=Path, help="store directory (alternative to the positional)")
    lang_opts(z)
    z.add_argument("--out", type=Path, default=Path("kizuki-report"))
    z.add_argument("--scope", type=_scope, default=frozenset({ElementKind.IMAGE_ALT}))
    z.add_argument("--mixed-as-native", action="store_true")
    z.add_argument("--weights", type=Path)
    z.add_argument("--dicts", type=Path)
    z.add_argument("--jobs", type=int, default=1)
    threshold_opts(z)

    d = sub.add_parser("filter-debug", help="classify one accessibility text")
    d.add_argument("text")
    lang_opts(d)
    d.add_argument("--dicts", type=Path)

    m = sub.add_parser("matrix-selftest", help="check the behavior matrix on 36 generated pages")
    m.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.BASELINE.value)
    return p


def _table(args, required: bool):
    if not args.lang:
        if required:
            raise UsageError("--lang is required")
        return None
    extra = load_script_tables(args.tables) if args.tables else None
    return get_script_table(args.lang, extra)


def cmd_fetch(args) -> int:
    store = SnapshotStore(args.store or default_store_dir())
    source = sys.stdin if args.url_list == "-" else open(args.url_list, encoding="utf-8")
    with source:
        urls = [line.strip() for line in source if line.strip() and not line.startswith("#")]
    config = FetchConfig(timeout=args.timeout, max_bytes=args.max_bytes)

    def fetch(url):
        try:
            return fetch_page(url, config, args.lang, args.country)
        except (FetchError, InvalidURLError) as exc:
            log.warning("%s", exc)
            return None

    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            results = list(pool.map(fetch, urls))
    else:
        results = []
        for i, url in enumerate(urls):
            if i and args.delay:
                time.sleep(args.delay)
            results.append(fetch(url))
    stored = 0
    for snap in results:
        if snap is not None:
            store.append(snap)
            stored += 1
    print(f"stored {stored}/{len(urls)} snapshots in {store.path}")
    return EXIT_OK


def _load_target(target: str, lang: str):
    if target.startswith(("http://", "https://")):
        return fetch_page(target, target_language=lang)
    return load_page(target, lang)


def cmd_audit(args) -> int:
    config = RunConfig.from_args(args)
    table = _table(args, required=config.mode is Mode.KIZUKI)
    snap = _load_target(args.target, args.lang or "")
    visible, records = extract_all(snap)
    policy = KizukiPolicy(config.native_dominance, config.mix, args.strict, args.mixed_fails)
    report = audit_page(
        snap, records, visible, table, mode=config.mode, scope=config.scope, weights=config.weights(), policy=policy
    )
    print(report.to_json())
    return EXIT_OK if report.score(config.mode) >= args.threshold else EXIT_BELOW_THRESHOLD


def cmd_analyze(args) -> int:
    config = RunConfig.from_args(args)
    store = SnapshotStore(config.store_dir)
    if not store.path.exists():
        raise UsageError(f"no snapshot store at {store.path}")
    snapshots = list(store)
    extra = load_script_tables(args.tables) if args.tables else None
    pages = analyze_pages(
        snapshots,
        language=config.target_language,
        tables=extra,
        jobs=args.jobs,
        dicts=FilterDictionaries.load(config.dict_dir),
        mix_threshold=config.mix,
        scope=config.scope,
        weights=config.weights(),
        policy=KizukiPolicy(config.native_dominance, config.mix),
    )
    report = build_report(pages, mixed_as_native=args.mixed_as_native)
    written = emit_reports(report, config.out_dir)
    if store.corrupt_lines:
        log.warning("skipped %d corrupt store lines", store.corrupt_lines)
    print(f"analyzed {len(pages)} pages; wrote {len(written)} files to {config.out_dir}")
    return EXIT_OK


def cmd_filter_debug(args) -> int:
    table = _table(args, required=False)
    verdict = classify_text(args.text, table, FilterDictionaries.load(args.dicts))
    print(json.dumps(verdict.to_dict(), ensure_ascii=False))
    return EXIT_OK


def cmd_matrix_selftest(args) -> int:
    rows = run_matrix(Mode(args.mode))
    print(format_matrix(rows))
    return EXIT_OK if all(got is want for _, got, want in rows) else EXIT_ERROR


COMMANDS = {
    "fetch": cmd_fetch,
    "audit": cmd_audit,
    "analyze": cmd_analyze,
    "filter-debug": cmd_filter_debug,
    "matrix-selftest": cmd_matrix_selftest,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnknownLanguageError) as exc:
        msg = f"unknown language {exc.args[0]!r}" if isinstance(exc, UnknownLanguageError) else str(exc)
        print(f"kizuki: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"kizuki: error: file not found: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"kizuki: internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
