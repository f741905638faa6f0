import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kizuki.extract import AccessibilityRecord, ElementKind
from kizuki.filters import (
    DISCARD_ORDER,
    FilterCategory,
    FilterDictionaries,
    classify_corpus,
    classify_text,
    default_dictionaries,
    normalize_text,
)
from kizuki.lang import get_script_table

C = FilterCategory
TH = get_script_table("th")


def category(text, table=None, dicts=None):
    return classify_text(text, table, dicts).category


def rec(text, kind=ElementKind.IMAGE_ALT):
    return AccessibilityRecord(kind, text, None, None, "/html[1]/body[1]/img[1]")


def test_eleven_discard_categories():
    assert len(DISCARD_ORDER) == 11
    assert DISCARD_ORDER[0] is C.EMOJI and DISCARD_ORDER[-1] is C.ORDINAL_PHRASE
    assert C.USEFUL not in DISCARD_ORDER


@pytest.mark.parametrize(
    "text,want",
    [
        ("👍", C.EMOJI),
        ("👍 ok", C.EMOJI),
        ("a", C.TOO_SHORT),
        ("42", C.TOO_SHORT),
        ("ก", C.TOO_SHORT),
        ("PHOTO.PNG", C.FILE_NAME),
        ("./assets/logo", C.URL_OR_PATH),
        ("www.example.com", C.URL_OR_PATH),
        ("mailto:info@example.com", C.URL_OR_PATH),
        ("Close", C.GENERIC_ACTION),
        ("  SEARCH  ", C.GENERIC_ACTION),
        ("ปิด", C.GENERIC_ACTION),
        ("Image", C.PLACEHOLDER),
        ("carousel3", C.DEV_LABEL),
        ("hero-banner-left", C.DEV_LABEL),
        ("Slide 12", C.LABEL_NUMBER_PATTERN),
        ("Bangkok", C.SINGLE_WORD),
        ("don't", C.SINGLE_WORD),
        ("abc123def", C.MIXED_ALNUM),
        ("3 จาก 5", C.ORDINAL_PHRASE),
        ("Beautiful sunrise over the sea", C.USEFUL),
        ("พระอาทิตย์ขึ้นเหนือทะเล", C.USEFUL),
        ("日本の朝日", C.USEFUL),
    ],
)
def test_rule_examples(text, want):
    assert category(text) is want


def test_cjk_short_limit():
    assert category("图") is C.TOO_SHORT
    assert category("图片库") is not C.TOO_SHORT


def test_submit_depends_on_dictionary():
    # shipped generic actions contain "submit", which fires before single_word
    assert category("submit") is C.GENERIC_ACTION
    bare = FilterDictionaries()
    assert category("submit", dicts=bare) is C.SINGLE_WORD
    assert category("photo", dicts=bare) is C.SINGLE_WORD


def test_table_scopes_dictionary_languages():
    # Korean "close" is only a generic action when Korean entries are consulted
    assert category("닫기", get_script_table("ko")) is C.GENERIC_ACTION
    assert category("닫기", TH) is not C.GENERIC_ACTION
    assert category("닫기") is C.GENERIC_ACTION


def test_allowlist_rescues_single_word(tmp_path):
    (tmp_path / "allowlist.json").write_text(json.dumps({"en": ["bangkok"]}), encoding="utf-8")
    dicts = FilterDictionaries.load(tmp_path)
    assert category("Bangkok", dicts=dicts) is C.USEFUL
    # other lists still come from the shipped files
    assert category("close", dicts=dicts) is C.GENERIC_ACTION


def test_verdict_detail_and_dict():
    v = classify_text("  Close   ")
    assert v.normalized_text == "Close"
    assert "close" in v.matched_rule_detail
    assert v.to_dict() == {"category": "generic_action", "matched_rule_detail": v.matched_rule_detail, "normalized_text": "Close"}
    useful = classify_text("Beautiful sunrise over the sea")
    assert useful.useful and useful.matched_rule_detail == ""


def test_custom_order():
    assert classify_text("submit", order=(C.SINGLE_WORD, C.GENERIC_ACTION)).category is C.SINGLE_WORD


def test_classify_corpus_counts():
    result = classify_corpus([rec("go"), rec("photo"), rec("good morning view")])
    nonzero = {c: n for c, n in result.counts.items() if n}
    assert nonzero == {C.TOO_SHORT: 1, C.SINGLE_WORD: 1, C.USEFUL: 1}
    assert len(result.verdicts) == 3


def test_classify_corpus_empty():
    result = classify_corpus([])
    assert set(result.counts) == set(FilterCategory)
    assert all(n == 0 for n in result.counts.values())
    assert all(f == 0 for f in result.fractions().values())


def test_classify_corpus_all_icon():
    result = classify_corpus([rec("icon")] * 7)
    assert result.counts[C.PLACEHOLDER] == 7


def test_classify_corpus_skips_missing_and_empty():
    result = classify_corpus([rec(None), rec("  "), rec("Close")])
    assert sum(result.counts.values()) == 1


def test_classify_corpus_fallback():
    button = AccessibilityRecord(ElementKind.BUTTON_NAME, None, "Send message now", None, "/html[1]/body[1]/button[1]")
    assert sum(classify_corpus([button]).counts.values()) == 0
    assert classify_corpus([button], use_fallback=True).counts[C.USEFUL] == 1


def test_dictionaries_are_casefolded():
    d = FilterDictionaries(generic_actions={"en": ["CLOSE", "Straße"]})
    assert d.entries("generic_actions") == frozenset({"close", "strasse"})
    assert category("STRASSE", dicts=d) is C.GENERIC_ACTION


TEXTS = st.one_of(
    st.sampled_from(["go", "photo", "submit", "icon", "img123", "slide 3", "2 of 10", "Close", "hello world", "ปิด"]),
    st.text(alphabet=st.sampled_from(list("abcxyz ABC 0123 _-./ กขค 图 👍")), max_size=20),
)


@settings(max_examples=300, deadline=None)
@given(TEXTS)
def test_idempotent_under_normalization(text):
    v = classify_text(text)
    again = classify_text(v.normalized_text)
    assert again == v
    assert normalize_text(v.normalized_text) == v.normalized_text


@settings(max_examples=300, deadline=None)
@given(TEXTS, st.sampled_from(["hello", "photo", "abc", "hello world", "slide 3"]))
def test_monotone_dictionary_growth(text, word):
    base = default_dictionaries()
    grown = base.with_entries("generic_actions", "en", [word])
    before, after = category(text, dicts=base), category(text, dicts=grown)
    if before is not after:
        order = list(DISCARD_ORDER) + [C.USEFUL]
        assert after is C.GENERIC_ACTION
        assert order.index(before) > order.index(C.GENERIC_ACTION)


@settings(max_examples=200, deadline=None)
@given(TEXTS)
def test_exactly_one_category_deterministic(text):
    assert classify_text(text) == classify_text(text)
    assert isinstance(classify_text(text).category, FilterCategory)
