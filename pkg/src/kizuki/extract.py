"""Visible text and accessible-name records from HTML.

Parsing goes through html5lib, which implements the error-recovering
HTML5 tree construction algorithm, so malformed markup never raises.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Iterator, Optional
from xml.etree.ElementTree import Element

import html5lib

from .corpus import PageSnapshot

NONRENDERED_TAGS = frozenset({"script", "style", "template", "noscript"})
EXCLUDED_TAGS = NONRENDERED_TAGS | {"head", "title"}
# subtrees whose elements are inert and never produce records
INERT_TAGS = frozenset({"template", "noscript"})
FORM_CONTROL_TAGS = frozenset({"input", "select", "textarea", "button"})
UNLABELLED_INPUT_TYPES = frozenset({"hidden", "button", "submit", "reset", "image"})

_WS = re.compile(r"\s+")


class ElementKind(str, enum.Enum):
    BUTTON_NAME = "button-name"
    DOCUMENT_TITLE = "document-title"
    FRAME_TITLE = "frame-title"
    IMAGE_ALT = "image-alt"
    INPUT_BUTTON_NAME = "input-button-name"
    INPUT_IMAGE_ALT = "input-image-alt"
    LABEL = "label"
    LINK_NAME = "link-name"
    OBJECT_ALT = "object-alt"
    SELECT_NAME = "select-name"
    SUMMARY_NAME = "summary-name"
    SVG_IMG_ALT = "svg-img-alt"


class Source(str, enum.Enum):
    ARIA_LABEL = "aria-label"
    ARIA_LABELLEDBY = "aria-labelledby"
    ALT = "alt"
    TITLE_ATTR = "title-attr"
    TITLE_ELEMENT = "title-element"
    LABEL_ELEMENT = "label-element"
    VALUE_ATTR = "value-attr"
    INNER_TEXT = "inner-text"
    SVG_TITLE = "svg-title"


@dataclass(frozen=True)
class KindRule:
    selector: str
    sources: tuple[Source, ...]
    fallback: bool


def kind_selector_table() -> dict[ElementKind, KindRule]:
    """Which nodes each kind covers and where their names come from, in order."""
    K, S = ElementKind, Source
    return {
        K.BUTTON_NAME: KindRule("button", (S.ARIA_LABEL, S.ARIA_LABELLEDBY, S.TITLE_ATTR), True),
        K.DOCUMENT_TITLE: KindRule("head > title", (S.TITLE_ELEMENT,), False),
        K.FRAME_TITLE: KindRule("iframe, frame", (S.TITLE_ATTR, S.ARIA_LABEL), False),
        K.IMAGE_ALT: KindRule("img", (S.ALT, S.ARIA_LABEL, S.ARIA_LABELLEDBY, S.TITLE_ATTR), False),
        K.INPUT_BUTTON_NAME: KindRule(
            "input[type=button], input[type=submit], input[type=reset]",
            (S.VALUE_ATTR, S.ARIA_LABEL, S.TITLE_ATTR),
            False,
        ),
        K.INPUT_IMAGE_ALT: KindRule("input[type=image]", (S.ALT, S.ARIA_LABEL, S.TITLE_ATTR), False),
        K.LABEL: KindRule(
            "input:not([type=hidden|button|submit|reset|image]), textarea",
            (S.LABEL_ELEMENT, S.ARIA_LABEL, S.ARIA_LABELLEDBY, S.TITLE_ATTR),
            False,
        ),
        K.LINK_NAME: KindRule("a[href]", (S.ARIA_LABEL, S.ARIA_LABELLEDBY, S.TITLE_ATTR), True),
        K.OBJECT_ALT: KindRule("object", (S.ARIA_LABEL, S.TITLE_ATTR), True),
        K.SELECT_NAME: KindRule("select", (S.LABEL_ELEMENT, S.ARIA_LABEL, S.TITLE_ATTR), False),
        K.SUMMARY_NAME: KindRule("summary", (S.ARIA_LABEL,), True),
        K.SVG_IMG_ALT: KindRule("svg[role=img], svg[aria-label]", (S.SVG_TITLE, S.ARIA_LABEL, S.ARIA_LABELLEDBY), False),
    }


@dataclass(frozen=True)
class AccessibilityRecord:
    """One language-sensitive element and the text that names it.

    ``explicit_text`` comes from the first dedicated source that is present
    (an attribute, an associated label, a title element) and is
    whitespace-normalised; ``raw_value`` keeps that source as authored.
    ``fallback_text`` is the element's own visible text, only for kinds
    where assistive technology falls back to it.
    """

    kind: ElementKind
    explicit_text: Optional[str]
    fallback_text: Optional[str]
    source: Optional[Source]
    dom_path: str
    raw_value: str = ""
    url: str = ""

    @property
    def name_text(self) -> str:
        """The text a screen reader would announce."""
        if self.explicit_text:
            return self.explicit_text
        return self.fallback_text or ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["source"] = self.source.value if self.source else None
        return {k: d[k] for k in ("url", "kind", "explicit_text", "fallback_text", "source", "dom_path", "raw_value")}

    @classmethod
    def from_dict(cls, d: dict) -> "AccessibilityRecord":
        return cls(
            kind=ElementKind(d["kind"]),
            explicit_text=d.get("explicit_text"),
            fallback_text=d.get("fallback_text"),
            source=Source(d["source"]) if d.get("source") else None,
            dom_path=d["dom_path"],
            raw_value=d.get("raw_value", ""),
            url=d.get("url", ""),
        )


@dataclass(frozen=True)
class VisibleText:
    text: str
    node_count: int


def normalize_ws(s: str) -> str:
    return _WS.sub(" ", s).strip()


def tag_name(el: Element) -> Optional[str]:
    """Local tag name, or None for comments and processing instructions."""
    if not isinstance(el.tag, str):
        return None
    return el.tag.rsplit("}", 1)[-1].lower()


def _style_hides(style: str) -> bool:
    compact = re.sub(r"\s+", "", style).lower()
    return "display:none" in compact or "visibility:hidden" in compact


def is_hidden(el: Element) -> bool:
    """Hidden by this element's own markup (ancestors not considered)."""
    if tag_name(el) in EXCLUDED_TAGS:
        return True
    if "hidden" in el.attrib:
        return True
    if el.get("aria-hidden", "").strip().lower() == "true":
        return True
    return _style_hides(el.get("style", ""))


class Document:
    """Parsed page with parent links, id lookup and stable node paths."""

    def __init__(self, html: str):
        self.root: Element = html5lib.parse(html, treebuilder="etree", namespaceHTMLElements=False)
        self.parent: dict[Element, Element] = {}
        self.paths: dict[Element, str] = {}
        self.by_id: dict[str, Element] = {}
        self.order: list[Element] = []
        self._index(self.root, "/" + (tag_name(self.root) or "html") + "[1]")

    def _index(self, el: Element, path: str) -> None:
        self.paths[el] = path
        self.order.append(el)
        ident = el.get("id")
        if ident and ident not in self.by_id:
            self.by_id[ident] = el
        seen: dict[str, int] = {}
        for child in el:
            name = tag_name(child)
            if name is None:
                continue
            self.parent[child] = el
            seen[name] = seen.get(name, 0) + 1
            self._index(child, f"{path}/{name}[{seen[name]}]")

    def elements(self) -> Iterator[Element]:
        return iter(self.order)

    def ancestors(self, el: Element) -> Iterator[Element]:
        while el in self.parent:
            el = self.parent[el]
            yield el

    def resolve(self, path: str) -> Optional[Element]:
        for el, p in self.paths.items():
            if p == path:
                return el
        return None


def _collect_text(
    el: Element,
    out: list[str],
    skip: Callable[[Element], bool],
    alt_images: bool = False,
) -> None:
    # el itself is assumed to be visible; its tail belongs to the parent
    if el.text:
        out.append(el.text)
    for child in el:
        name = tag_name(child)
        if name is not None and not skip(child):
            if alt_images and name == "img" and child.get("alt"):
                out.append(child.get("alt"))
            _collect_text(child, out, skip, alt_images)
        if child.tail:
            out.append(child.tail)


def inner_text(el: Element, skip: Callable[[Element], bool] = is_hidden, alt_images: bool = False) -> str:
    parts: list[str] = []
    _collect_text(el, parts, skip, alt_images)
    return normalize_ws(" ".join(parts))


def visible_text_from_document(doc: Document) -> VisibleText:
    parts: list[str] = []
    root = doc.root
    if not is_hidden(root):
        _collect_text(root, parts, is_hidden)
    chunks = [p for p in parts if p.strip()]
    return VisibleText(text=normalize_ws(" ".join(chunks)), node_count=len(chunks))


def extract_visible_text(snapshot: PageSnapshot | str) -> VisibleText:
    return visible_text_from_document(_document(snapshot))


def _document(snapshot: PageSnapshot | str) -> Document:
    return Document(snapshot if isinstance(snapshot, str) else snapshot.text)


def _input_type(el: Element) -> str:
    return (el.get("type") or "text").strip().lower()


def _matches(kind: ElementKind, el: Element, doc: Document) -> bool:
    name = tag_name(el)
    K = ElementKind
    if kind is K.BUTTON_NAME:
        return name == "button"
    if kind is K.DOCUMENT_TITLE:
        parent = doc.parent.get(el)
        return name == "title" and parent is not None and tag_name(parent) == "head"
    if kind is K.FRAME_TITLE:
        return name in ("iframe", "frame")
    if kind is K.IMAGE_ALT:
        return name == "img"
    if kind is K.INPUT_BUTTON_NAME:
        return name == "input" and _input_type(el) in ("button", "submit", "reset")
    if kind is K.INPUT_IMAGE_ALT:
        return name == "input" and _input_type(el) == "image"
    if kind is K.LABEL:
        return (name == "input" and _input_type(el) not in UNLABELLED_INPUT_TYPES) or name == "textarea"
    if kind is K.LINK_NAME:
        return name == "a" and "href" in el.attrib
    if kind is K.OBJECT_ALT:
        return name == "object"
    if kind is K.SELECT_NAME:
        return name == "select"
    if kind is K.SUMMARY_NAME:
        return name == "summary"
    if kind is K.SVG_IMG_ALT:
        return name == "svg" and (el.get("role", "").strip().lower() == "img" or "aria-label" in el.attrib)
    raise ValueError(kind)


def _skip_controls(el: Element) -> bool:
    return is_hidden(el) or tag_name(el) in FORM_CONTROL_TAGS


def _associated_labels(el: Element, doc: Document, label_index: dict[str, list[Element]]) -> list[Element]:
    labels: list[Element] = []
    ident = el.get("id")
    if ident:
        labels.extend(label_index.get(ident, ()))
    for anc in doc.ancestors(el):
        if tag_name(anc) == "label" and anc not in labels and "for" not in anc.attrib:
            labels.append(anc)
            break
    return labels


def _source_value(
    source: Source,
    el: Element,
    doc: Document,
    label_index: dict[str, list[Element]],
) -> Optional[str]:
    """Raw text for one source, or None when the source is absent."""
    if source is Source.ARIA_LABEL:
        return el.get("aria-label")
    if source is Source.TITLE_ATTR:
        return el.get("title")
    if source is Source.ALT:
        return el.get("alt")
    if source is Source.VALUE_ATTR:
        return el.get("value")
    if source is Source.ARIA_LABELLEDBY:
        ids = el.get("aria-labelledby")
        if ids is None:
            return None
        parts = []
        for ref in ids.split():
            target = doc.by_id.get(ref)
            if target is not None:
                parts.append(inner_text(target, skip=lambda e: tag_name(e) in NONRENDERED_TAGS))
        return " ".join(p for p in parts if p)
    if source is Source.TITLE_ELEMENT:
        return "".join(el.itertext())
    if source is Source.LABEL_ELEMENT:
        labels = _associated_labels(el, doc, label_index)
        if not labels:
            return None
        return " ".join(inner_text(lab, skip=_skip_controls) for lab in labels)
    if source is Source.SVG_TITLE:
        for child in el:
            if tag_name(child) == "title":
                return "".join(child.itertext())
        return None
    raise ValueError(source)


def _fallback(kind: ElementKind, el: Element) -> str:
    return inner_text(el, alt_images=kind is ElementKind.LINK_NAME)


def records_from_document(doc: Document, url: str = "") -> list[AccessibilityRecord]:
    table = kind_selector_table()
    label_index: dict[str, list[Element]] = {}
    for el in doc.elements():
        if tag_name(el) == "label" and el.get("for"):
            label_index.setdefault(el.get("for"), []).append(el)

    records = []
    for el in doc.elements():
        if any(tag_name(a) in INERT_TAGS for a in doc.ancestors(el)):
            continue
        for kind, rule in table.items():
            if not _matches(kind, el, doc):
                continue
            explicit = source = None
            raw = ""
            for src in rule.sources:
                value = _source_value(src, el, doc, label_index)
                if value is not None:
                    explicit, source, raw = normalize_ws(value), src, value
                    break
            fallback = _fallback(kind, el) if rule.fallback else None
            if source is None and fallback:
                source, raw = Source.INNER_TEXT, fallback
            records.append(
                AccessibilityRecord(
                    kind=kind,
                    explicit_text=explicit,
                    fallback_text=fallback,
                    source=source,
                    dom_path=doc.paths[el],
                    raw_value=raw,
                    url=url,
                )
            )
    return records


def extract_records(snapshot: PageSnapshot | str) -> list[AccessibilityRecord]:
    url = "" if isinstance(snapshot, str) else snapshot.url
    return records_from_document(_document(snapshot), url)


def extract_all(snapshot: PageSnapshot | str) -> tuple[VisibleText, list[AccessibilityRecord]]:
    """Parse once, return both products."""
    doc = _document(snapshot)
    url = "" if isinstance(snapshot, str) else snapshot.url
    return visible_text_from_document(doc), records_from_document(doc, url)


def records_to_jsonl(records: Iterable[AccessibilityRecord]) -> str:
    return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in records)
