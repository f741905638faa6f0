"""Isolated single-element pages for checking the behavior matrix.

Every page carries the same Thai paragraph so that it is native-dominant
under the ``th`` table; the element under test is the only one of its kind.
"""

from __future__ import annotations

from dataclasses import dataclass

from .audit import AuditReport, Mode, Verdict, audit_page, default_behavior_matrix
from .corpus import make_snapshot
from .extract import ElementKind, extract_all
from .lang import get_script_table

FIXTURE_LANGUAGE = "th"
NATIVE_PARAGRAPH = (
    "ยินดีต้อนรับสู่เว็บไซต์ของเรา อ่านข่าวสารล่าสุด บริการต่างๆ "
    "และกิจกรรมของชุมชนได้ที่หน้านี้ทุกวัน"
)
CONDITIONS = ("missing", "empty", "wrong-language")

K = ElementKind
# kind -> (missing, empty, wrong-language) markup
_ELEMENTS: dict[ElementKind, tuple[str, str, str]] = {
    K.BUTTON_NAME: ("<button></button>", '<button aria-label=""></button>', "<button>Close</button>"),
    K.DOCUMENT_TITLE: ("", "<title></title>", "<title>Welcome</title>"),
    K.FRAME_TITLE: (
        '<iframe src="map.html"></iframe>',
        '<iframe src="map.html" title=""></iframe>',
        '<iframe src="map.html" title="Map"></iframe>',
    ),
    K.IMAGE_ALT: (
        '<img src="sunrise.jpg">',
        '<img src="sunrise.jpg" alt="">',
        '<img src="sunrise.jpg" alt="Beautiful sunrise">',
    ),
    K.INPUT_BUTTON_NAME: (
        '<input type="submit">',
        '<input type="submit" value="">',
        '<input type="submit" value="Send">',
    ),
    K.INPUT_IMAGE_ALT: (
        '<input type="image" src="go.png">',
        '<input type="image" src="go.png" alt="">',
        '<input type="image" src="go.png" alt="Search">',
    ),
    K.LABEL: (
        '<input id="f" type="text">',
        '<label for="f"></label><input id="f" type="text">',
        '<label for="f">Your name</label><input id="f" type="text">',
    ),
    K.LINK_NAME: (
        '<a href="/news"></a>',
        '<a href="/news" aria-label=""></a>',
        '<a href="/news">Read more</a>',
    ),
    K.OBJECT_ALT: (
        '<object data="player.swf"></object>',
        '<object data="player.swf" aria-label=""></object>',
        '<object data="player.swf" aria-label="Video player"></object>',
    ),
    K.SELECT_NAME: (
        '<select id="s"><option>1</option></select>',
        '<select id="s" aria-label=""><option>1</option></select>',
        '<select id="s" aria-label="Province"><option>1</option></select>',
    ),
    K.SUMMARY_NAME: (
        "<details><summary></summary><p>1</p></details>",
        '<details><summary aria-label=""></summary><p>1</p></details>',
        "<details><summary>More details</summary><p>1</p></details>",
    ),
    K.SVG_IMG_ALT: (
        '<svg role="img"></svg>',
        '<svg role="img" aria-label=""></svg>',
        '<svg role="img"><title>Company logo</title></svg>',
    ),
}


@dataclass(frozen=True)
class Fixture:
    kind: ElementKind
    condition: str
    html: str

    @property
    def url(self) -> str:
        return f"fixture://{self.kind.value}/{self.condition}"


def _page(element: str) -> str:
    head = element if element.startswith("<title") else ""
    body = "" if head else element
    return (
        f'<!DOCTYPE html><html lang="{FIXTURE_LANGUAGE}"><head><meta charset="utf-8">{head}</head>'
        f"<body><p>{NATIVE_PARAGRAPH}</p>{body}</body></html>"
    )


def isolated_fixtures() -> list[Fixture]:
    """36 pages: 12 kinds x (missing, empty, wrong-language)."""
    return [
        Fixture(kind, cond, _page(markup))
        for kind, variants in _ELEMENTS.items()
        for cond, markup in zip(CONDITIONS, variants)
    ]


def audit_fixture(fixture: Fixture, mode: Mode = Mode.BASELINE, scope=tuple(ElementKind)) -> AuditReport:
    snap = make_snapshot(fixture.url, fixture.html, FIXTURE_LANGUAGE)
    visible, records = extract_all(snap)
    return audit_page(
        snap, records, visible, get_script_table(FIXTURE_LANGUAGE), default_behavior_matrix(), mode, scope
    )


def cell_verdict(report: AuditReport, kind: ElementKind, mode: Mode) -> Verdict:
    """Pass/Fail for one matrix cell; an absent element counts as passing."""
    verdicts = report.kizuki_verdicts if mode is Mode.KIZUKI else report.baseline_verdicts
    v = verdicts[kind]
    return Verdict.PASS if v is Verdict.NOT_APPLICABLE else v


def expected_cell(kind: ElementKind, condition: str, mode: Mode) -> Verdict:
    behavior = default_behavior_matrix()[kind]
    cell = {"missing": behavior.on_missing, "empty": behavior.on_empty, "wrong-language": behavior.on_wrong_language}
    if mode is Mode.KIZUKI and condition == "wrong-language":
        return Verdict.FAIL
    return cell[condition]


def run_matrix(mode: Mode = Mode.BASELINE) -> list[tuple[Fixture, Verdict, Verdict]]:
    """(fixture, observed, expected) for every cell."""
    out = []
    for fx in isolated_fixtures():
        report = audit_fixture(fx, mode)
        out.append((fx, cell_verdict(report, fx.kind, mode), expected_cell(fx.kind, fx.condition, mode)))
    return out


def format_matrix(rows: list[tuple[Fixture, Verdict, Verdict]]) -> str:
    mark = {Verdict.PASS: "pass", Verdict.FAIL: "FAIL"}
    cells: dict[ElementKind, dict[str, str]] = {}
    for fx, got, want in rows:
        flag = "" if got is want else "!"
        cells.setdefault(fx.kind, {})[fx.condition] = mark[got] + flag
    lines = [f"{'rule':<20}{'missing':<10}{'empty':<10}{'wrong-language':<16}"]
    for kind, row in cells.items():
        lines.append(f"{kind.value:<20}" + "".join(f"{row[c]:<{w}}" for c, w in zip(CONDITIONS, (10, 10, 16))))
    ok = sum(got is want for _, got, want in rows)
    lines.append(f"{ok}/{len(rows)} cells match")
    return "\n".join(lines)
