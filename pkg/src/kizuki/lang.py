"""Unicode script profiling and language labels for short texts.

Classification is codepoint based: every character is looked up in the
target language's native ranges, then in the Latin blocks, and letters
that fall in neither count as "other". Latin letters stand in for English.
"""

from __future__ import annotations

import bisect
import enum
import json
import unicodedata
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

# Basic Latin, Latin-1 Supplement, Latin Extended-A/B, Latin Extended
# Additional/C/D/E and the fullwidth Latin letters.
LATIN_RANGES: tuple[tuple[int, int], ...] = (
    (0x0000, 0x024F),
    (0x1E00, 0x1EFF),
    (0x2C60, 0x2C7F),
    (0xA720, 0xA7FF),
    (0xAB30, 0xAB6F),
    (0xFF21, 0xFF3A),
    (0xFF41, 0xFF5A),
)

# Hangul, kana, bopomofo and Han.
CJK_RANGES: tuple[tuple[int, int], ...] = (
    (0x1100, 0x11FF),
    (0x3005, 0x3007),
    (0x3040, 0x30FF),
    (0x3100, 0x318F),
    (0x31A0, 0x31FF),
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xA960, 0xA97F),
    (0xAC00, 0xD7FF),
    (0xF900, 0xFAFF),
    (0xFF66, 0xFFDC),
    (0x20000, 0x2A6DF),
)

# Scripts written without spaces between words.
UNSPACED_RANGES: tuple[tuple[int, int], ...] = CJK_RANGES + (
    (0x0E00, 0x0E7F),  # Thai
    (0x0E80, 0x0EFF),  # Lao
    (0x1000, 0x109F),  # Myanmar
    (0x1780, 0x17FF),  # Khmer
)


class UnknownLanguageError(KeyError):
    """Raised when no script table exists for a language code."""


class LangLabel(str, enum.Enum):
    NATIVE = "native"
    ENGLISH = "english"
    MIXED = "mixed"
    OTHER = "other"
    NONTEXTUAL = "nontextual"


def _in_ranges(cp: int, starts: list[int], ranges: tuple[tuple[int, int], ...]) -> bool:
    i = bisect.bisect_right(starts, cp) - 1
    return i >= 0 and cp <= ranges[i][1]


def _sorted_ranges(ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(ranges))


_LATIN_STARTS = [lo for lo, _ in LATIN_RANGES]
_CJK = _sorted_ranges(CJK_RANGES)
_CJK_STARTS = [lo for lo, _ in _CJK]
_UNSPACED = _sorted_ranges(UNSPACED_RANGES)
_UNSPACED_STARTS = [lo for lo, _ in _UNSPACED]


def is_latin(cp: int) -> bool:
    return _in_ranges(cp, _LATIN_STARTS, LATIN_RANGES)


def is_cjk(cp: int) -> bool:
    return _in_ranges(cp, _CJK_STARTS, _CJK)


def is_letter(ch: str) -> bool:
    return unicodedata.category(ch)[0] == "L"


def is_mark(ch: str) -> bool:
    return unicodedata.category(ch)[0] == "M"


@dataclass(frozen=True)
class ScriptTable:
    """Native codepoint ranges for one language.

    ``native_ranges`` are inclusive, sorted and non-overlapping.
    ``extra_chars`` holds single codepoints outside those ranges that still
    count as native.
    """

    language_code: str
    native_ranges: tuple[tuple[int, int], ...]
    extra_chars: frozenset[int] = frozenset()
    name: str = ""

    def __post_init__(self):
        ranges = _sorted_ranges(self.native_ranges)
        for lo, hi in ranges:
            if lo > hi:
                raise ValueError(f"empty interval {lo:04X}..{hi:04X}")
        for (_, hi), (lo, _) in zip(ranges, ranges[1:]):
            if lo <= hi:
                raise ValueError(f"overlapping intervals in table {self.language_code!r}")
        object.__setattr__(self, "native_ranges", ranges)
        object.__setattr__(self, "extra_chars", frozenset(self.extra_chars))

    @cached_property
    def _starts(self) -> list[int]:
        return [lo for lo, _ in self.native_ranges]

    def is_native(self, cp: int) -> bool:
        return cp in self.extra_chars or _in_ranges(cp, self._starts, self.native_ranges)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ScriptTable":
        return cls(
            language_code=data["language_code"],
            native_ranges=tuple((int(lo, 16), int(hi, 16)) for lo, hi in data["ranges"]),
            extra_chars=frozenset(int(c, 16) for c in data.get("extra_chars", [])),
            name=data.get("name", ""),
        )

    def to_dict(self) -> dict:
        return {
            "language_code": self.language_code,
            "name": self.name,
            "ranges": [[f"{lo:04X}", f"{hi:04X}"] for lo, hi in self.native_ranges],
            "extra_chars": [f"{c:04X}" for c in sorted(self.extra_chars)],
        }


@dataclass(frozen=True)
class ScriptProfile:
    native_letters: int = 0
    latin_letters: int = 0
    other_letters: int = 0

    @property
    def total_letters(self) -> int:
        return self.native_letters + self.latin_letters + self.other_letters

    @property
    def native_fraction(self) -> float:
        total = self.total_letters
        return self.native_letters / total if total else 0.0

    @property
    def latin_fraction(self) -> float:
        total = self.total_letters
        return self.latin_letters / total if total else 0.0

    def __add__(self, other: "ScriptProfile") -> "ScriptProfile":
        return ScriptProfile(
            self.native_letters + other.native_letters,
            self.latin_letters + other.latin_letters,
            self.other_letters + other.other_letters,
        )


def _load_table_entries(data) -> list[ScriptTable]:
    if isinstance(data, Mapping):
        data = [data]
    return [ScriptTable.from_dict(entry) for entry in data]


def load_script_tables(path: str | Path) -> dict[str, ScriptTable]:
    """Load one table object, or a list of them, from a JSON config file."""
    with open(path, encoding="utf-8") as f:
        tables = _load_table_entries(json.load(f))
    return {t.language_code: t for t in tables}


_BUILTIN: dict[str, ScriptTable] | None = None


def builtin_script_tables() -> dict[str, ScriptTable]:
    global _BUILTIN
    if _BUILTIN is None:
        raw = resources.files("kizuki").joinpath("data/script_tables.json").read_text("utf-8")
        _BUILTIN = {t.language_code: t for t in _load_table_entries(json.loads(raw))}
    return dict(_BUILTIN)


def get_script_table(code: str, extra: Mapping[str, ScriptTable] | None = None) -> ScriptTable:
    tables = builtin_script_tables()
    if extra:
        tables.update(extra)
    try:
        return tables[code]
    except KeyError:
        raise UnknownLanguageError(code) from None


def script_profile(text: str, table: ScriptTable) -> ScriptProfile:
    native = latin = other = 0
    for ch in text:
        cat = unicodedata.category(ch)[0]
        if cat not in "LM":
            continue
        cp = ord(ch)
        if table.is_native(cp):
            native += 1
        elif cat == "M":
            # marks only count inside the native blocks
            continue
        elif is_latin(cp):
            latin += 1
        else:
            other += 1
    return ScriptProfile(native, latin, other)


def label_text(text: str, table: ScriptTable, mix_threshold: float = 0.2) -> LangLabel:
    if not 0 < mix_threshold <= 0.5:
        raise ValueError("mix_threshold must be in (0, 0.5]")
    return label_profile(script_profile(text, table), mix_threshold)


def label_profile(profile: ScriptProfile, mix_threshold: float = 0.2) -> LangLabel:
    if profile.total_letters == 0:
        return LangLabel.NONTEXTUAL
    nf, lf = profile.native_fraction, profile.latin_fraction
    if min(nf, lf) >= mix_threshold:
        return LangLabel.MIXED
    if nf > lf and nf > 0:
        return LangLabel.NATIVE
    if lf >= nf and lf > 0:
        return LangLabel.ENGLISH
    return LangLabel.OTHER


def page_native_dominant(visible, table: ScriptTable, threshold: float = 0.5) -> bool:
    """True when at least ``threshold`` of the visible letters are native.

    ``visible`` may be a ``VisibleText`` or a plain string.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    text = visible if isinstance(visible, str) else visible.text
    return script_profile(text, table).native_fraction >= threshold


def cjk_letter_count(text: str) -> int:
    return sum(1 for ch in text if is_letter(ch) and is_cjk(ord(ch)))


def is_cjk_text(text: str) -> bool:
    """Majority of the letters are Han, kana or Hangul."""
    letters = [ch for ch in text if is_letter(ch)]
    if not letters:
        return False
    cjk = sum(1 for ch in letters if is_cjk(ord(ch)))
    return cjk * 2 >= len(letters)


def is_unspaced_text(text: str) -> bool:
    """Majority of the letters belong to scripts without word spacing."""
    letters = [ch for ch in text if is_letter(ch)]
    if not letters:
        return False
    n = sum(1 for ch in letters if _in_ranges(ord(ch), _UNSPACED_STARTS, _UNSPACED))
    return n * 2 >= len(letters)
