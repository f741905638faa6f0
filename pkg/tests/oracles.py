"""Brute-force reference implementations used by the tests.

Nothing here imports from kizuki; each helper is deliberately naive.
"""

import math
import unicodedata

# (block name, first, last) from the Unicode block charts
BLOCKS = [
    ("Basic Latin", 0x0000, 0x007F),
    ("Latin-1 Supplement", 0x0080, 0x00FF),
    ("Latin Extended-A", 0x0100, 0x017F),
    ("Latin Extended-B", 0x0180, 0x024F),
    ("IPA Extensions", 0x0250, 0x02AF),
    ("Spacing Modifier Letters", 0x02B0, 0x02FF),
    ("Combining Diacritical Marks", 0x0300, 0x036F),
    ("Greek and Coptic", 0x0370, 0x03FF),
    ("Cyrillic", 0x0400, 0x04FF),
    ("Cyrillic Supplement", 0x0500, 0x052F),
    ("Armenian", 0x0530, 0x058F),
    ("Hebrew", 0x0590, 0x05FF),
    ("Arabic", 0x0600, 0x06FF),
    ("Devanagari", 0x0900, 0x097F),
    ("Bengali", 0x0980, 0x09FF),
    ("Tamil", 0x0B80, 0x0BFF),
    ("Thai", 0x0E00, 0x0E7F),
    ("Georgian", 0x10A0, 0x10FF),
    ("Hangul Jamo", 0x1100, 0x11FF),
    ("Latin Extended Additional", 0x1E00, 0x1EFF),
    ("Greek Extended", 0x1F00, 0x1FFF),
    ("General Punctuation", 0x2000, 0x206F),
    ("Hiragana", 0x3040, 0x309F),
    ("Katakana", 0x30A0, 0x30FF),
    ("Hangul Compatibility Jamo", 0x3130, 0x318F),
    ("CJK Unified Ideographs Extension A", 0x3400, 0x4DBF),
    ("CJK Unified Ideographs", 0x4E00, 0x9FFF),
    ("Hangul Syllables", 0xAC00, 0xD7AF),
    ("Emoticons", 0x1F600, 0x1F64F),
]

LATIN_BLOCKS = {
    "Basic Latin",
    "Latin-1 Supplement",
    "Latin Extended-A",
    "Latin Extended-B",
    "Latin Extended Additional",
}

NATIVE_BLOCKS = {
    "th": {"Thai"},
    "ko": {"Hangul Jamo", "Hangul Compatibility Jamo", "Hangul Syllables"},
    "ja": {"Hiragana", "Katakana", "CJK Unified Ideographs Extension A", "CJK Unified Ideographs"},
    "zh": {"CJK Unified Ideographs Extension A", "CJK Unified Ideographs"},
    "yue": {"CJK Unified Ideographs Extension A", "CJK Unified Ideographs"},
    "ru": {"Cyrillic", "Cyrillic Supplement"},
    "el": {"Greek and Coptic", "Greek Extended"},
    "he": {"Hebrew"},
    "hi": {"Devanagari"},
    "bn": {"Bengali"},
}


def block_of(cp):
    for name, lo, hi in BLOCKS:
        if lo <= cp <= hi:
            return name
    return None


def oracle_counts(text, lang):
    """(native, latin, other) letter counts by per-codepoint block lookup."""
    native = latin = other = 0
    for ch in text:
        cat = unicodedata.category(ch)
        block = block_of(ord(ch))
        if cat.startswith("L"):
            if block in NATIVE_BLOCKS[lang]:
                native += 1
            elif block in LATIN_BLOCKS:
                latin += 1
            else:
                other += 1
        elif cat.startswith("M") and block in NATIVE_BLOCKS[lang]:
            native += 1
    return native, latin, other


def oracle_label(text, lang, mix=0.2):
    n, l, o = oracle_counts(text, lang)
    total = n + l + o
    if total == 0:
        return "nontextual"
    nf, lf = n / total, l / total
    if nf >= mix and lf >= mix:
        return "mixed"
    if nf > lf:
        return "native"
    if lf > 0:
        return "english"
    return "other"


def median(values):
    s = sorted(values)
    n = len(s)
    mid = n // 2
    return s[mid] if n % 2 else (s[mid - 1] + s[mid]) / 2


def mean(values):
    return sum(values) / len(values)


def pstd(values):
    m = mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / len(values))
