"""Rule-based discard filter for uninformative accessibility text.

Rules run in a fixed order and the first match wins; text that survives
every rule is ``useful``. Word lists live in JSON files (one per
category, keyed by language) so they can be extended without code.
"""

from __future__ import annotations

import enum
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence

import emoji

from .lang import ScriptTable, is_cjk_text, is_unspaced_text


class FilterCategory(str, enum.Enum):
    EMOJI = "emoji"
    TOO_SHORT = "too_short"
    FILE_NAME = "file_name"
    URL_OR_PATH = "url_or_path"
    GENERIC_ACTION = "generic_action"
    PLACEHOLDER = "placeholder"
    DEV_LABEL = "dev_label"
    LABEL_NUMBER_PATTERN = "label_number_pattern"
    SINGLE_WORD = "single_word"
    MIXED_ALNUM = "mixed_alnum"
    ORDINAL_PHRASE = "ordinal_phrase"
    USEFUL = "useful"


DISCARD_ORDER: tuple[FilterCategory, ...] = tuple(c for c in FilterCategory if c is not FilterCategory.USEFUL)

DICT_FILES = (
    "generic_actions",
    "placeholders",
    "label_nouns",
    "ordinal_words",
    "component_stems",
    "asset_extensions",
    "allowlist",
)

CJK_SHORT_LIMIT = 1
SHORT_LIMIT = 2

_WS = re.compile(r"\s+")
_URL = re.compile(r"^(?:[a-z][a-z0-9+.\-]*://|(?:mailto|tel|data|javascript|file):|www\.|\.{0,2}/)", re.I)
_DASHED = re.compile(r"^[^\W_]+(?:[-_][^\W_]+)+$")
_MIXED_ALNUM = re.compile(r"^[^\W\d_]+\d+[^\W_]*$")


def normalize_text(text: str) -> str:
    return _WS.sub(" ", unicodedata.normalize("NFC", text)).strip()


def fold(text: str) -> str:
    return normalize_text(text).casefold()


def letter_count(text: str) -> int:
    return sum(1 for ch in text if unicodedata.category(ch)[0] in "LM")


def content_count(text: str) -> int:
    """Letters, marks and digits; whitespace, punctuation and symbols don't count."""
    return sum(1 for ch in text if unicodedata.category(ch)[0] in "LMN")


@dataclass(frozen=True)
class FilterDictionaries:
    """Per-language word lists, case-folded on construction."""

    generic_actions: Mapping[str, frozenset[str]] = field(default_factory=dict)
    placeholders: Mapping[str, frozenset[str]] = field(default_factory=dict)
    label_nouns: Mapping[str, frozenset[str]] = field(default_factory=dict)
    ordinal_words: Mapping[str, frozenset[str]] = field(default_factory=dict)
    component_stems: Mapping[str, frozenset[str]] = field(default_factory=dict)
    asset_extensions: Mapping[str, frozenset[str]] = field(default_factory=dict)
    allowlist: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        for name in DICT_FILES:
            raw = getattr(self, name)
            object.__setattr__(
                self, name, {lang: frozenset(fold(w) for w in words) for lang, words in raw.items()}
            )

    def entries(self, name: str, lang: Optional[str] = None) -> frozenset[str]:
        """English plus ``lang`` entries, or every language when ``lang`` is None."""
        table: Mapping[str, frozenset[str]] = getattr(self, name)
        if lang is None:
            return frozenset().union(*table.values())
        return frozenset().union(*(table.get(k, frozenset()) for k in ("en", "any", lang)))

    def with_entries(self, name: str, lang: str, words: Iterable[str]) -> "FilterDictionaries":
        data = {n: dict(getattr(self, n)) for n in DICT_FILES}
        data[name][lang] = data[name].get(lang, frozenset()) | frozenset(words)
        return FilterDictionaries(**data)

    @classmethod
    def load(cls, dict_dir: str | Path | None = None) -> "FilterDictionaries":
        """Read ``<category>.json`` files; missing files fall back to the shipped ones."""
        data = {}
        shipped = resources.files("kizuki").joinpath("data/dicts")
        for name in DICT_FILES:
            path = Path(dict_dir) / f"{name}.json" if dict_dir else None
            if path is not None and path.exists():
                data[name] = json.loads(path.read_text("utf-8"))
            else:
                data[name] = json.loads(shipped.joinpath(f"{name}.json").read_text("utf-8"))
        return cls(**data)


_DEFAULT_DICTS: FilterDictionaries | None = None


def default_dictionaries() -> FilterDictionaries:
    global _DEFAULT_DICTS
    if _DEFAULT_DICTS is None:
        _DEFAULT_DICTS = FilterDictionaries.load()
    return _DEFAULT_DICTS


@dataclass(frozen=True)
class FilterVerdict:
    category: FilterCategory
    matched_rule_detail: str
    normalized_text: str

    @property
    def useful(self) -> bool:
        return self.category is FilterCategory.USEFUL

    def to_dict(self) -> dict:
        return {
            "category": self.category.value,
            "matched_rule_detail": self.matched_rule_detail,
            "normalized_text": self.normalized_text,
        }


def _short_limit(text: str) -> int:
    return CJK_SHORT_LIMIT if is_cjk_text(text) else SHORT_LIMIT


def _single_token(text: str) -> bool:
    return bool(text) and " " not in text


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start])[0] in "PS":
        start += 1
    while end > start and unicodedata.category(token[end - 1])[0] in "PS":
        end -= 1
    return token[start:end]


# Each rule returns a detail string on match, None otherwise.
Rule = Callable[[str, FilterDictionaries, Optional[str]], Optional[str]]


def _rule_emoji(t, d, lang):
    found = emoji.emoji_list(t)
    if not found:
        return None
    rest = emoji.replace_emoji(t, "")
    if content_count(rest) <= _short_limit(rest):
        return f"emoji {found[0]['emoji']}"
    return None


def _rule_too_short(t, d, lang):
    limit = _short_limit(t)
    n = content_count(t)
    if n <= limit:
        return f"{n} chars <= {limit} ({'cjk' if limit == CJK_SHORT_LIMIT else 'default'} limit)"
    return None


def _rule_file_name(t, d, lang):
    if not _single_token(t) or "/" in t or "\\" in t:
        return None
    low = t.casefold()
    for ext in sorted(d.entries("asset_extensions")):
        if low.endswith(ext) and len(low) > len(ext):
            return f"extension {ext}"
    return None


def _rule_url_or_path(t, d, lang):
    m = _URL.match(t)
    if m:
        return f"prefix {m.group(0)}"
    if "://" in t:
        return "contains ://"
    return None


def _dict_rule(name: str) -> Rule:
    def rule(t, d, lang):
        key = t.casefold()
        if key in d.entries(name, lang):
            return f"{name} entry {key!r}"
        return None

    return rule


def _rule_dev_label(t, d, lang):
    if not _single_token(t):
        return None
    if _DASHED.match(t):
        return "joined identifier"
    low = t.casefold()
    for stem in sorted(d.entries("component_stems", lang), key=len, reverse=True):
        if low.startswith(stem) and low[len(stem):].isdigit():
            return f"component stem {stem!r} + digits"
    return None


def _rule_label_number(t, d, lang):
    parts = t.casefold().rsplit(" ", 1)
    if len(parts) == 2 and parts[1].isdigit() and parts[1].isascii():
        if parts[0] in d.entries("label_nouns", lang):
            return f"label noun {parts[0]!r} + number"
    return None


def _rule_single_word(t, d, lang):
    if not _single_token(t) or is_unspaced_text(t):
        return None
    word = _strip_punct(t)
    if not word or not all(unicodedata.category(ch)[0] in "LM" or ch in "'’" for ch in word):
        return None
    if word.casefold() in d.entries("allowlist", lang):
        return None
    return "single word"


def _rule_mixed_alnum(t, d, lang):
    if _single_token(t) and _MIXED_ALNUM.match(t):
        return "letters followed by digits"
    return None


def _rule_ordinal(t, d, lang):
    words = sorted(d.entries("ordinal_words", lang), key=len, reverse=True)
    if not words:
        return None
    sep = "|".join(re.escape(w) for w in words)
    m = re.fullmatch(rf"(\d+)\s*({sep})\s*(\d+)", t.casefold())
    if m:
        return f"number {m.group(2)!r} number"
    return None


RULES: dict[FilterCategory, Rule] = {
    FilterCategory.EMOJI: _rule_emoji,
    FilterCategory.TOO_SHORT: _rule_too_short,
    FilterCategory.FILE_NAME: _rule_file_name,
    FilterCategory.URL_OR_PATH: _rule_url_or_path,
    FilterCategory.GENERIC_ACTION: _dict_rule("generic_actions"),
    FilterCategory.PLACEHOLDER: _dict_rule("placeholders"),
    FilterCategory.DEV_LABEL: _rule_dev_label,
    FilterCategory.LABEL_NUMBER_PATTERN: _rule_label_number,
    FilterCategory.SINGLE_WORD: _rule_single_word,
    FilterCategory.MIXED_ALNUM: _rule_mixed_alnum,
    FilterCategory.ORDINAL_PHRASE: _rule_ordinal,
}


def classify_text(
    text: str,
    table: Optional[ScriptTable] = None,
    dicts: Optional[FilterDictionaries] = None,
    order: Sequence[FilterCategory] = DISCARD_ORDER,
) -> FilterVerdict:
    """First matching discard rule, or ``useful``.

    With a ``table``, dictionary lookups use English plus that table's
    language; without one, every shipped language is consulted.
    """
    dicts = dicts or default_dictionaries()
    lang = table.language_code if table is not None else None
    norm = normalize_text(text)
    for category in order:
        detail = RULES[category](norm, dicts, lang)
        if detail is not None:
            return FilterVerdict(category, detail, norm)
    return FilterVerdict(FilterCategory.USEFUL, "", norm)


@dataclass
class CorpusVerdicts:
    counts: dict[FilterCategory, int]
    verdicts: list[tuple[object, FilterVerdict]]

    def fractions(self) -> dict[FilterCategory, float]:
        total = sum(self.counts.values())
        return {c: (n / total if total else 0.0) for c, n in self.counts.items()}


def record_text(record, use_fallback: bool = False) -> str:
    """Text of a record that counts for filtering, or "" when missing/empty."""
    text = record.explicit_text or ""
    if not text.strip() and use_fallback:
        text = record.fallback_text or ""
    return text.strip()


def classify_corpus(
    records: Iterable,
    table: Optional[ScriptTable] = None,
    dicts: Optional[FilterDictionaries] = None,
    use_fallback: bool = False,
) -> CorpusVerdicts:
    """Classify every record that carries non-empty text; others are skipped."""
    counts: Counter = Counter({c: 0 for c in FilterCategory})
    verdicts = []
    for rec in records:
        text = record_text(rec, use_fallback)
        if not text:
            continue
        verdict = classify_text(text, table, dicts)
        counts[verdict.category] += 1
        verdicts.append((rec, verdict))
    return CorpusVerdicts(dict(counts), verdicts)
