"""Seeded generator for small Thai/English test pages."""

import html
import random

from kizuki.corpus import make_snapshot

THAI_SENTENCES = [
    "ชาวบ้านร่วมกันปลูกต้นไม้ริมแม่น้ำ",
    "ตลาดนัดเปิดทุกวันเสาร์ตอนเช้า",
    "โรงเรียนจัดงานกีฬาสีประจำปี",
    "ร้านอาหารใหม่เปิดใกล้สถานีรถไฟ",
]
ENGLISH_SENTENCES = [
    "Read the latest news from our city",
    "Opening hours and contact details",
    "Subscribe to the weekly newsletter",
    "Terms of service and privacy policy",
]
NATIVE_ALTS = ["พระอาทิตย์ขึ้นเหนือทะเล", "ตลาดน้ำยามเช้า", "แผนที่การเดินทางไปโรงเรียน", "นักเรียนในพิธีเปิดงาน"]
ENGLISH_ALTS = ["Beautiful sunrise over the sea", "Floating market in the morning", "Students at the ceremony", "Map"]
MIXED_ALTS = ["ตลาดน้ำ Floating market", "แผนที่ Bangkok", "โลโก้ Company"]
NOISE_ALTS = ["icon", "img123", "slide 3", "banner_img123.jpg"]
LINK_TEXTS = ["อ่านต่อ", "Read more", "", "หน้าแรกของเว็บไซต์"]


def page_html(paragraphs, alts, links=(), buttons=()):
    """``alts`` entries: None for a missing alt attribute, otherwise the alt value."""
    parts = ['<!DOCTYPE html><html lang="th"><head><meta charset="utf-8"><title>t</title></head><body>']
    parts += [f"<p>{html.escape(p)}</p>" for p in paragraphs]
    for i, alt in enumerate(alts):
        attr = "" if alt is None else f' alt="{html.escape(alt, quote=True)}"'
        parts.append(f'<img src="p{i}.jpg"{attr}>')
    for text in links:
        parts.append(f'<a href="/x">{html.escape(text)}</a>')
    for text in buttons:
        parts.append(f"<button>{html.escape(text)}</button>")
    parts.append("</body></html>")
    return "".join(parts)


def random_page(rng, index, allow_missing=True, country_tag=""):
    n_thai = rng.randint(0, 4)
    n_eng = rng.randint(0 if n_thai else 1, 4)
    paragraphs = rng.sample(THAI_SENTENCES, n_thai) + rng.sample(ENGLISH_SENTENCES, n_eng)
    rng.shuffle(paragraphs)
    pools = [NATIVE_ALTS, ENGLISH_ALTS, MIXED_ALTS, NOISE_ALTS, [""]]
    if allow_missing:
        pools.append([None])
    alts = [rng.choice(rng.choice(pools)) for _ in range(rng.randint(1, 5))]
    links = [rng.choice(LINK_TEXTS) for _ in range(rng.randint(0, 3))]
    buttons = rng.sample(["ส่ง", "Send", ""], rng.randint(0, 2))
    url = f"https://site{index}.example/"
    snap = make_snapshot(url, page_html(paragraphs, alts, links, buttons), "th", 200, country_tag)
    return snap, alts


def random_corpus(n, seed, allow_missing=True, tags=("", )):
    rng = random.Random(seed)
    return [random_page(rng, i, allow_missing, tags[i % len(tags)]) for i in range(n)]
