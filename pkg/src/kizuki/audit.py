"""Per-page accessibility audit in baseline and language-aware modes.

Baseline mode replays how Lighthouse was observed to treat each element
kind when its name is missing, empty or in the wrong language. The
language-aware mode keeps those verdicts and additionally fails present
names that contain no native-script letters on pages whose visible text
is dominated by the native script.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import PageSnapshot
from .extract import AccessibilityRecord, ElementKind, VisibleText
from .lang import LangLabel, ScriptTable, label_profile, page_native_dominant, script_profile


class ConsistencyError(ValueError):
    """Records were not extracted from the snapshot being audited."""


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


class Condition(str, enum.Enum):
    MISSING = "missing"
    EMPTY = "empty"
    PRESENT = "present"


class Mode(str, enum.Enum):
    BASELINE = "baseline"
    KIZUKI = "kizuki"


@dataclass(frozen=True)
class KindBehavior:
    on_missing: Verdict
    on_empty: Verdict
    on_wrong_language: Verdict

    def for_condition(self, condition: Condition) -> Verdict:
        if condition is Condition.MISSING:
            return self.on_missing
        if condition is Condition.EMPTY:
            return self.on_empty
        # Lighthouse cannot tell a wrong-language name from a right one
        return self.on_wrong_language


BehaviorMatrix = Mapping[ElementKind, KindBehavior]

_P, _F = Verdict.PASS, Verdict.FAIL
_DEFAULT_MATRIX = {
    ElementKind.BUTTON_NAME: (_F, _P, _P),
    ElementKind.DOCUMENT_TITLE: (_P, _F, _P),
    ElementKind.FRAME_TITLE: (_F, _F, _P),
    ElementKind.IMAGE_ALT: (_F, _P, _P),
    ElementKind.INPUT_BUTTON_NAME: (_P, _F, _P),
    ElementKind.INPUT_IMAGE_ALT: (_F, _F, _P),
    ElementKind.LABEL: (_P, _P, _P),
    ElementKind.LINK_NAME: (_F, _F, _P),
    ElementKind.OBJECT_ALT: (_F, _F, _P),
    ElementKind.SELECT_NAME: (_F, _F, _P),
    ElementKind.SUMMARY_NAME: (_P, _P, _P),
    ElementKind.SVG_IMG_ALT: (_P, _P, _P),
}


def default_behavior_matrix() -> dict[ElementKind, KindBehavior]:
    return {kind: KindBehavior(*cells) for kind, cells in _DEFAULT_MATRIX.items()}


def classify_condition(record: AccessibilityRecord, use_fallback: bool = True) -> Condition:
    """Missing, empty or present.

    Missing means no dedicated source and no usable fallback text. Empty
    means a source exists but trims to nothing. With ``use_fallback=False``
    only the dedicated sources are considered.
    """
    fallback = (record.fallback_text or "").strip() if use_fallback else ""
    if record.explicit_text is None:
        return Condition.PRESENT if fallback else Condition.MISSING
    if record.explicit_text.strip() or fallback:
        return Condition.PRESENT
    return Condition.EMPTY


@dataclass(frozen=True)
class KizukiPolicy:
    """Knobs for the language check.

    The default predicate fails a name only when it has letters and none of
    them are native. ``strict_threshold`` instead fails any name whose native
    fraction is below it. ``mixed_fails`` also fails names labelled mixed.
    """

    dominance_threshold: float = 0.5
    mix_threshold: float = 0.2
    strict_threshold: Optional[float] = None
    mixed_fails: bool = False

    def mismatched(self, text: str, table: ScriptTable) -> bool:
        profile = script_profile(text, table)
        label = label_profile(profile, self.mix_threshold)
        if label is LangLabel.NONTEXTUAL:
            return False
        if self.strict_threshold is not None:
            return profile.native_fraction < self.strict_threshold
        if label is LangLabel.MIXED:
            return self.mixed_fails
        return label in (LangLabel.ENGLISH, LangLabel.OTHER) and profile.native_letters == 0


@dataclass(frozen=True)
class InstanceOutcome:
    record: AccessibilityRecord
    condition: Condition
    verdict: Verdict
    mode: Mode
    language_ok: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "dom_path": self.record.dom_path,
            "source": self.record.source.value if self.record.source else None,
            "text": self.record.name_text,
            "condition": self.condition.value,
            "language_ok": self.language_ok,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class KindResult:
    instances: tuple[InstanceOutcome, ...]

    @property
    def kind_verdict(self) -> Verdict:
        if not self.instances:
            return Verdict.NOT_APPLICABLE
        if any(i.verdict is Verdict.FAIL for i in self.instances):
            return Verdict.FAIL
        return Verdict.PASS


@dataclass(frozen=True)
class Score:
    value: float
    vacuous: bool = False


def load_weights(path: str | Path) -> dict[ElementKind, float]:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    weights = {ElementKind(k): float(v) for k, v in raw.items()}
    if any(w < 0 for w in weights.values()):
        raise ValueError("weights must be non-negative")
    return weights


def score_page(
    kind_verdicts: Mapping[ElementKind, Verdict],
    weights: Optional[Mapping[ElementKind, float]] = None,
) -> Score:
    """Weighted share of applicable kinds that pass, on a 0-100 scale.

    Kinds absent from ``weights`` weigh 1. A page with nothing applicable
    scores 100 and is flagged vacuous.
    """
    weights = weights or {}
    num = den = 0.0
    for kind, verdict in kind_verdicts.items():
        if verdict is Verdict.NOT_APPLICABLE:
            continue
        w = weights.get(kind, 1.0)
        den += w
        if verdict is Verdict.PASS:
            num += w
    if den == 0:
        return Score(100.0, vacuous=True)
    return Score(100.0 * num / den)


@dataclass(frozen=True)
class AuditReport:
    url: str
    mode: Mode
    per_kind: Mapping[ElementKind, KindResult]
    baseline_verdicts: Mapping[ElementKind, Verdict]
    kizuki_verdicts: Mapping[ElementKind, Verdict]
    baseline_score: float
    kizuki_score: float
    page_native_dominant: bool
    visible_native_fraction: float = 0.0
    target_language: str = ""
    vacuous: bool = False

    def score(self, mode: Optional[Mode] = None) -> float:
        mode = mode or self.mode
        return self.kizuki_score if mode is Mode.KIZUKI else self.baseline_score

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "target_language": self.target_language,
            "mode": self.mode.value,
            "page_native_dominant": self.page_native_dominant,
            "visible_native_fraction": round(self.visible_native_fraction, 6),
            "baseline_score": round(self.baseline_score, 2),
            "kizuki_score": round(self.kizuki_score, 2),
            "vacuous": self.vacuous,
            "per_kind": {
                kind.value: {
                    "kind_verdict": res.kind_verdict.value,
                    "baseline_verdict": self.baseline_verdicts[kind].value,
                    "kizuki_verdict": self.kizuki_verdicts[kind].value,
                    "instances": [i.to_dict() for i in res.instances],
                }
                for kind, res in self.per_kind.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def audit_page(
    snapshot: Optional[PageSnapshot],
    records: Sequence[AccessibilityRecord],
    visible: VisibleText | str,
    table: Optional[ScriptTable] = None,
    matrix: Optional[BehaviorMatrix] = None,
    mode: Mode | str = Mode.KIZUKI,
    scope: Iterable[ElementKind] = (ElementKind.IMAGE_ALT,),
    weights: Optional[Mapping[ElementKind, float]] = None,
    policy: KizukiPolicy = KizukiPolicy(),
) -> AuditReport:
    """Audit one page in both modes; ``mode`` picks which instances are reported.

    Without a ``table`` the language check cannot run, so the kizuki
    verdicts equal the baseline ones (only allowed in baseline mode).
    """
    mode = Mode(mode)
    if mode is Mode.KIZUKI and table is None:
        raise ValueError("kizuki mode requires a ScriptTable")
    url = snapshot.url if snapshot is not None else ""
    if snapshot is not None:
        stray = [r for r in records if r.url and r.url != url]
        if stray:
            raise ConsistencyError(f"record from {stray[0].url!r} audited against {url!r}")
    matrix = matrix or default_behavior_matrix()
    scope = frozenset(ElementKind(k) for k in scope)
    text = visible if isinstance(visible, str) else visible.text
    native_fraction = script_profile(text, table).native_fraction if table else 0.0
    dominant = table is not None and page_native_dominant(text, table, policy.dominance_threshold)

    grouped: dict[ElementKind, dict[Mode, list[InstanceOutcome]]] = {
        kind: {Mode.BASELINE: [], Mode.KIZUKI: []} for kind in ElementKind
    }
    for rec in records:
        condition = classify_condition(rec)
        base = matrix[rec.kind].for_condition(condition)
        grouped[rec.kind][Mode.BASELINE].append(InstanceOutcome(rec, condition, base, Mode.BASELINE))
        language_ok = None
        verdict = base
        if condition is Condition.PRESENT and table is not None:
            language_ok = not policy.mismatched(rec.name_text, table)
            if dominant and rec.kind in scope and not language_ok:
                verdict = Verdict.FAIL
        grouped[rec.kind][Mode.KIZUKI].append(InstanceOutcome(rec, condition, verdict, Mode.KIZUKI, language_ok))

    results = {m: {k: KindResult(tuple(v[m])) for k, v in grouped.items()} for m in Mode}
    baseline_verdicts = {k: r.kind_verdict for k, r in results[Mode.BASELINE].items()}
    kizuki_verdicts = {k: r.kind_verdict for k, r in results[Mode.KIZUKI].items()}
    baseline = score_page(baseline_verdicts, weights)
    kizuki = score_page(kizuki_verdicts, weights)
    return AuditReport(
        url=url,
        mode=mode,
        per_kind=results[mode],
        baseline_verdicts=baseline_verdicts,
        kizuki_verdicts=kizuki_verdicts,
        baseline_score=baseline.value,
        kizuki_score=kizuki.value,
        page_native_dominant=dominant,
        visible_native_fraction=native_fraction,
        target_language=table.language_code if table else "",
        vacuous=baseline.vacuous,
    )


def filter_missing_alt_pages(reports: Iterable[AuditReport]) -> list[AuditReport]:
    """Drop pages whose baseline image-alt audit fails (i.e. some alt is missing)."""
    keep = (Verdict.PASS, Verdict.NOT_APPLICABLE)
    return [r for r in reports if r.baseline_verdicts[ElementKind.IMAGE_ALT] in keep]
