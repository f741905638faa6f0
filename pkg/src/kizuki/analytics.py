"""Corpus-level measurement: presence rates, discard reasons, language mix.

Per-element rates are computed per page first and then summarised across
pages (median, mean, population std); pooled figures are exported next to
them. Only texts that survive the discard filter enter the language
statistics.
"""

from __future__ import annotations

import csv
import json
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .audit import Condition, KizukiPolicy, Mode, audit_page, classify_condition, filter_missing_alt_pages
from .corpus import PageSnapshot
from .extract import AccessibilityRecord, ElementKind, extract_all, records_to_jsonl
from .filters import FilterCategory, FilterDictionaries, classify_text, default_dictionaries, record_text
from .lang import (
    LangLabel,
    ScriptTable,
    UnknownLanguageError,
    cjk_letter_count,
    get_script_table,
    is_cjk_text,
    label_text,
    script_profile,
)

KIND_STATS_HEADER = [
    "kind",
    "missing_median", "missing_mean", "missing_std",
    "empty_median", "empty_mean", "empty_std",
    "len_median", "len_mean", "len_std",
    "wc_median", "wc_mean", "wc_std",
]
POOLED_HEADER = [
    "kind", "instances", "missing_pct", "empty_pct",
    "len_median", "len_mean", "len_std",
    "wc_median", "wc_mean", "wc_std",
]
MISMATCH_HEADER = ["url", "visible_native_fraction", "accessibility_native_fraction"]
FILTER_HEADER = ["scope", "category", "count", "percent"]
LANG_HEADER = ["scope", "label", "count", "percent"]
SCORES_HEADER = ["url", "baseline_score", "kizuki_score", "page_native_dominant", "missing_alt_excluded"]
CDF_THRESHOLDS = tuple(round(0.1 * i, 1) for i in range(1, 11))
DISTRIBUTION_LABELS = (LangLabel.NATIVE, LangLabel.ENGLISH, LangLabel.MIXED, LangLabel.OTHER)


@dataclass(frozen=True)
class Summary:
    median: float
    mean: float
    std: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "Summary":
        return cls(statistics.median(values), statistics.fmean(values), statistics.pstdev(values))


@dataclass(frozen=True)
class KindStats:
    kind: ElementKind
    missing_pct: Summary
    empty_pct: Summary
    text_length: Optional[Summary]
    word_count: Optional[Summary]


@dataclass(frozen=True)
class PooledKindStats:
    kind: ElementKind
    instances: int
    missing_pct: float
    empty_pct: float
    text_length: Optional[Summary]
    word_count: Optional[Summary]


@dataclass(frozen=True)
class TextResult:
    kind: ElementKind
    text: str
    category: FilterCategory
    label: LangLabel


@dataclass
class PageAnalysis:
    url: str
    country_tag: str
    target_language: str
    visible_native_fraction: float
    records: list[AccessibilityRecord]
    texts: list[TextResult]
    baseline_score: float = 100.0
    kizuki_score: float = 100.0
    page_native_dominant: bool = False
    missing_alt_excluded: bool = False

    @property
    def useful(self) -> list[TextResult]:
        return [t for t in self.texts if t.category is FilterCategory.USEFUL]


@dataclass(frozen=True)
class MismatchPoint:
    url: str
    visible_native_fraction: float
    accessibility_native_fraction: float


@dataclass
class LangDistribution:
    counts: dict[LangLabel, int] = field(default_factory=lambda: {label: 0 for label in LangLabel})

    @property
    def fractions(self) -> Optional[dict[LangLabel, float]]:
        total = sum(self.counts[label] for label in DISTRIBUTION_LABELS)
        if not total:
            return None
        return {label: self.counts[label] / total for label in DISTRIBUTION_LABELS}


def word_count(text: str) -> int:
    """Whitespace tokens; CJK text has no spaces, so its letters are counted instead."""
    if is_cjk_text(text):
        return cjk_letter_count(text)
    return len(text.split())


def _present_text(rec: AccessibilityRecord, use_fallback: bool) -> str:
    if classify_condition(rec, use_fallback) is not Condition.PRESENT:
        return ""
    return record_text(rec, use_fallback)


def _text_summaries(texts: list[str]) -> tuple[Optional[Summary], Optional[Summary]]:
    if not texts:
        return None, None
    return Summary.of([len(t) for t in texts]), Summary.of([word_count(t) for t in texts])


def _page_kind_rates(page: PageAnalysis, use_fallback: bool):
    """kind -> (missing%, empty%, mean length, mean word count) for one page."""
    by_kind: dict[ElementKind, list[AccessibilityRecord]] = {}
    for rec in page.records:
        by_kind.setdefault(rec.kind, []).append(rec)
    out = {}
    for kind, recs in by_kind.items():
        conds = [classify_condition(r, use_fallback) for r in recs]
        texts = [t for t in (_present_text(r, use_fallback) for r in recs) if t]
        out[kind] = (
            100.0 * conds.count(Condition.MISSING) / len(recs),
            100.0 * conds.count(Condition.EMPTY) / len(recs),
            statistics.fmean(len(t) for t in texts) if texts else None,
            statistics.fmean(word_count(t) for t in texts) if texts else None,
        )
    return out


def kind_stats(pages: Iterable[PageAnalysis], use_fallback: bool = False) -> list[KindStats]:
    """Per-page rates summarised across the pages that contain each kind."""
    columns: dict[ElementKind, tuple[list, list, list, list]] = {}
    for page in pages:
        for kind, rates in _page_kind_rates(page, use_fallback).items():
            cols = columns.setdefault(kind, ([], [], [], []))
            for col, value in zip(cols, rates):
                if value is not None:
                    col.append(value)
    stats = []
    for kind in ElementKind:
        if kind not in columns:
            continue
        missing, empty, lengths, words = columns[kind]
        stats.append(
            KindStats(
                kind,
                Summary.of(missing),
                Summary.of(empty),
                Summary.of(lengths) if lengths else None,
                Summary.of(words) if words else None,
            )
        )
    return stats


def kind_stats_pooled(pages: Iterable[PageAnalysis], use_fallback: bool = False) -> list[PooledKindStats]:
    recs_by_kind: dict[ElementKind, list[AccessibilityRecord]] = {}
    for page in pages:
        for rec in page.records:
            recs_by_kind.setdefault(rec.kind, []).append(rec)
    out = []
    for kind in ElementKind:
        recs = recs_by_kind.get(kind)
        if not recs:
            continue
        conds = Counter(classify_condition(r, use_fallback) for r in recs)
        texts = [t for t in (_present_text(r, use_fallback) for r in recs) if t]
        lengths, words = _text_summaries(texts)
        out.append(
            PooledKindStats(
                kind,
                len(recs),
                100.0 * conds[Condition.MISSING] / len(recs),
                100.0 * conds[Condition.EMPTY] / len(recs),
                lengths,
                words,
            )
        )
    return out


def lang_distribution(texts: Iterable[str], table: ScriptTable, mix_threshold: float = 0.2) -> LangDistribution:
    dist = LangDistribution()
    for text in texts:
        dist.counts[label_text(text, table, mix_threshold)] += 1
    return dist


def page_accessibility_native_fraction(
    labels: Iterable[LangLabel], mixed_as_native: bool = False
) -> Optional[float]:
    native = total = 0
    for label in labels:
        if label not in DISTRIBUTION_LABELS:
            continue
        total += 1
        if label is LangLabel.NATIVE or (mixed_as_native and label is LangLabel.MIXED):
            native += 1
    return native / total if total else None


def mismatch_points(
    pages: Iterable[PageAnalysis], mixed_as_native: bool = False
) -> tuple[list[MismatchPoint], int]:
    """Points for pages with useful text, plus the number of pages without any."""
    points, skipped = [], 0
    for page in pages:
        frac = page_accessibility_native_fraction((t.label for t in page.useful), mixed_as_native)
        if frac is None:
            skipped += 1
            continue
        points.append(MismatchPoint(page.url, page.visible_native_fraction, frac))
    return points, skipped


def cdf(values: Sequence[float], thresholds: Iterable[float]) -> list[float]:
    """Fraction of values strictly below each threshold."""
    n = len(values)
    return [sum(1 for v in values if v < t) / n if n else 0.0 for t in thresholds]


def _table_for(language: str, tables: Optional[Mapping[str, ScriptTable]]) -> Optional[ScriptTable]:
    try:
        return get_script_table(language, tables)
    except UnknownLanguageError:
        return None


def analyze_page(
    snapshot: PageSnapshot,
    table: Optional[ScriptTable] = None,
    dicts: Optional[FilterDictionaries] = None,
    mix_threshold: float = 0.2,
    use_fallback: bool = False,
    scope: Iterable[ElementKind] = (ElementKind.IMAGE_ALT,),
    weights: Optional[Mapping[ElementKind, float]] = None,
    policy: KizukiPolicy = KizukiPolicy(),
) -> PageAnalysis:
    table = table or _table_for(snapshot.meta.target_language, None)
    if table is None:
        raise UnknownLanguageError(snapshot.meta.target_language)
    dicts = dicts or default_dictionaries()
    visible, records = extract_all(snapshot)
    texts = []
    for rec in records:
        text = record_text(rec, use_fallback)
        if not text:
            continue
        verdict = classify_text(text, table, dicts)
        label = label_text(verdict.normalized_text, table, mix_threshold)
        texts.append(TextResult(rec.kind, verdict.normalized_text, verdict.category, label))
    report = audit_page(snapshot, records, visible, table, mode=Mode.KIZUKI, scope=scope, weights=weights, policy=policy)
    return PageAnalysis(
        url=snapshot.url,
        country_tag=snapshot.meta.country_tag,
        target_language=table.language_code,
        visible_native_fraction=script_profile(visible.text, table).native_fraction,
        records=records,
        texts=texts,
        baseline_score=report.baseline_score,
        kizuki_score=report.kizuki_score,
        page_native_dominant=report.page_native_dominant,
        missing_alt_excluded=not filter_missing_alt_pages([report]),
    )


def _analyze_task(args):
    snapshot, table, kwargs = args
    return analyze_page(snapshot, table, **kwargs)


def analyze_pages(
    snapshots: Iterable[PageSnapshot],
    language: Optional[str] = None,
    tables: Optional[Mapping[str, ScriptTable]] = None,
    jobs: int = 1,
    **kwargs,
) -> list[PageAnalysis]:
    """Analyze every snapshot; output order equals input order for any ``jobs``.

    ``language`` overrides each snapshot's own target language.
    """
    kwargs.setdefault("dicts", default_dictionaries())
    tasks = []
    for snap in snapshots:
        code = language or snap.meta.target_language
        table = _table_for(code, tables)
        if table is None:
            raise UnknownLanguageError(code)
        tasks.append((snap, table, kwargs))
    if jobs <= 1:
        return [_analyze_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_analyze_task, tasks, chunksize=8))


@dataclass
class CorpusReport:
    pages: list[PageAnalysis]
    kind_stats: list[KindStats]
    kind_stats_fallback: list[KindStats]
    kind_stats_pooled: list[PooledKindStats]
    filter_counts: dict[str, dict[FilterCategory, int]]
    lang_counts: dict[str, LangDistribution]
    points: list[MismatchPoint]
    pages_without_useful_text: int
    mixed_as_native: bool = False


def _scopes(pages: Sequence[PageAnalysis]) -> dict[str, list[PageAnalysis]]:
    scopes = {"all": list(pages)}
    for tag in sorted({p.country_tag for p in pages if p.country_tag}):
        scopes[tag] = [p for p in pages if p.country_tag == tag]
    return scopes


def build_report(pages: Sequence[PageAnalysis], mixed_as_native: bool = False) -> CorpusReport:
    filter_counts, lang_counts = {}, {}
    for scope, members in _scopes(pages).items():
        counts = {c: 0 for c in FilterCategory}
        dist = LangDistribution()
        for page in members:
            for t in page.texts:
                counts[t.category] += 1
                if t.category is FilterCategory.USEFUL:
                    dist.counts[t.label] += 1
        filter_counts[scope] = counts
        lang_counts[scope] = dist
    points, skipped = mismatch_points(pages, mixed_as_native)
    return CorpusReport(
        pages=list(pages),
        kind_stats=kind_stats(pages),
        kind_stats_fallback=kind_stats(pages, use_fallback=True),
        kind_stats_pooled=kind_stats_pooled(pages),
        filter_counts=filter_counts,
        lang_counts=lang_counts,
        points=points,
        pages_without_useful_text=skipped,
        mixed_as_native=mixed_as_native,
    )


def _f2(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.2f}"


def _f6(x: float) -> str:
    return f"{x:.6f}"


def _summary_cells(s: Optional[Summary]) -> list[str]:
    if s is None:
        return ["", "", ""]
    return [_f2(s.median), _f2(s.mean), _f2(s.std)]


def _write_csv(path: Path, header: list[str], rows: Iterable[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _kind_rows(stats: list[KindStats]):
    for s in stats:
        yield [s.kind.value, *_summary_cells(s.missing_pct), *_summary_cells(s.empty_pct),
               *_summary_cells(s.text_length), *_summary_cells(s.word_count)]


def _share(values: Sequence[float], pred) -> float:
    return 100.0 * sum(1 for v in values if pred(v)) / len(values) if values else 0.0


def summary_dict(report: CorpusReport) -> dict:
    kept = [p for p in report.pages if not p.missing_alt_excluded]
    base = [p.baseline_score for p in kept]
    kiz = [p.kizuki_score for p in kept]
    vis = [p.visible_native_fraction for p in report.points]
    acc = [p.accessibility_native_fraction for p in report.points]
    return {
        "pages": len(report.pages),
        "pages_with_useful_text": len(report.points),
        "pages_without_useful_text": report.pages_without_useful_text,
        "texts_classified": sum(report.filter_counts["all"].values()),
        "useful_texts": report.filter_counts["all"][FilterCategory.USEFUL],
        "mixed_as_native": report.mixed_as_native,
        "cdf_thresholds": list(CDF_THRESHOLDS),
        "visible_native_cdf": [round(v, 6) for v in cdf(vis, CDF_THRESHOLDS)],
        "accessibility_native_cdf": [round(v, 6) for v in cdf(acc, CDF_THRESHOLDS)],
        "scores": {
            "pages_scored": len(kept),
            "pages_excluded_missing_alt": len(report.pages) - len(kept),
            "baseline_above_90_pct": round(_share(base, lambda s: s > 90), 2),
            "kizuki_above_90_pct": round(_share(kiz, lambda s: s > 90), 2),
            "baseline_perfect_pct": round(_share(base, lambda s: s >= 100), 2),
            "kizuki_perfect_pct": round(_share(kiz, lambda s: s >= 100), 2),
        },
    }


def emit_reports(report: CorpusReport, out_dir: str | Path) -> list[Path]:
    """Write the CSV/JSON report set; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def target(name):
        written.append(out / name)
        return out / name

    _write_csv(target("kind_stats.csv"), KIND_STATS_HEADER, _kind_rows(report.kind_stats))
    _write_csv(target("kind_stats_fallback.csv"), KIND_STATS_HEADER, _kind_rows(report.kind_stats_fallback))
    _write_csv(
        target("kind_stats_pooled.csv"),
        POOLED_HEADER,
        (
            [s.kind.value, s.instances, _f2(s.missing_pct), _f2(s.empty_pct),
             *_summary_cells(s.text_length), *_summary_cells(s.word_count)]
            for s in report.kind_stats_pooled
        ),
    )

    filter_rows = []
    for scope, counts in report.filter_counts.items():
        total = sum(counts.values())
        for cat in FilterCategory:
            filter_rows.append([scope, cat.value, counts[cat], _f2(100.0 * counts[cat] / total if total else 0.0)])
    _write_csv(target("filter_distribution.csv"), FILTER_HEADER, filter_rows)

    lang_rows = []
    for scope, dist in report.lang_counts.items():
        fractions = dist.fractions or {}
        for label in LangLabel:
            pct = _f2(100.0 * fractions[label]) if label in fractions else ""
            lang_rows.append([scope, label.value, dist.counts[label], pct])
    _write_csv(target("lang_distribution.csv"), LANG_HEADER, lang_rows)

    _write_csv(
        target("mismatch_points.csv"),
        MISMATCH_HEADER,
        ([p.url, _f6(p.visible_native_fraction), _f6(p.accessibility_native_fraction)] for p in report.points),
    )
    _write_csv(
        target("scores.csv"),
        SCORES_HEADER,
        (
            [p.url, _f2(p.baseline_score), _f2(p.kizuki_score), int(p.page_native_dominant), int(p.missing_alt_excluded)]
            for p in report.pages
        ),
    )
    with open(target("records.jsonl"), "w", encoding="utf-8") as f:
        for page in report.pages:
            f.write(records_to_jsonl(page.records))
    with open(target("summary.json"), "w", encoding="utf-8") as f:
        json.dump(summary_dict(report), f, ensure_ascii=False, indent=2)
        f.write("\n")
    return written
