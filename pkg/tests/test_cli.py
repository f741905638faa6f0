import json
import subprocess
import sys
import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from synth import random_corpus
from kizuki.cli import EXIT_BELOW_THRESHOLD, EXIT_USAGE, RunConfig, run
from kizuki.corpus import SnapshotStore, iterate_snapshots

THAI_PAGE = (
    '<html lang="th"><body><p>ชาวบ้านร่วมกันปลูกต้นไม้ริมแม่น้ำในเช้าวันอาทิตย์</p>'
    '<img src="a.jpg" alt="Beautiful sunrise"></body></html>'
)


@pytest.fixture
def thai_page(tmp_path):
    path = tmp_path / "page.html"
    path.write_text(THAI_PAGE, encoding="utf-8")
    return path


def test_filter_debug(capsys):
    assert run(["filter-debug", "닫기", "--lang", "ko"]) == 0
    assert json.loads(capsys.readouterr().out)["category"] == "generic_action"


def test_matrix_selftest(capsys):
    assert run(["matrix-selftest"]) == 0
    assert "36/36 cells match" in capsys.readouterr().out
    assert run(["matrix-selftest", "--mode", "kizuki"]) == 0


def test_audit_below_threshold(thai_page, capsys):
    assert run(["audit", str(thai_page), "--lang", "th", "--mode", "kizuki", "--threshold", "90"]) == EXIT_BELOW_THRESHOLD
    report = json.loads(capsys.readouterr().out)
    assert report["baseline_score"] == 100 and report["kizuki_score"] == 0


def test_audit_baseline_passes(thai_page, capsys):
    assert run(["audit", str(thai_page), "--mode", "baseline", "--threshold", "90"]) == 0


def test_audit_requires_language_in_kizuki_mode(thai_page):
    assert run(["audit", str(thai_page)]) == EXIT_USAGE


def test_audit_missing_file(tmp_path):
    assert run(["audit", str(tmp_path / "nope.html"), "--lang", "th"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["audit", "x.html", "--bogus"],
        ["nonsense"],
        [],
        ["filter-debug", "x", "--lang", "xx"],
        ["audit", "x.html", "--scope", "not-a-kind"],
    ],
)
def test_usage_errors(argv):
    assert run(argv) == EXIT_USAGE


def test_bad_threshold_is_usage_error(thai_page):
    assert run(["audit", str(thai_page), "--lang", "th", "--dominance", "1.5"]) == EXIT_USAGE


def test_help_lists_flags():
    out = subprocess.run([sys.executable, "-m", "kizuki", "--help"], capture_output=True, text=True).stdout
    for flag in ("--lang", "--store", "--out", "--mode", "--scope", "--mixed-as-native", "--weights", "--dicts", "--jobs", "--threshold", "KIZUKI_STORE"):
        assert flag in out


def test_run_config_validation():
    with pytest.raises(Exception):
        RunConfig(mix=0.9)
    with pytest.raises(Exception):
        RunConfig(scope=frozenset())
    assert RunConfig().native_dominance == 0.5


def _store(tmp_path, n=6):
    store = SnapshotStore(tmp_path / "store")
    for snap, _ in random_corpus(n, seed=4, tags=("TH",)):
        store.append(snap)
    return store.store_dir


def test_analyze_writes_reports_deterministically(tmp_path, capsys):
    store = _store(tmp_path)
    assert run(["analyze", str(store), "--out", str(tmp_path / "r1")]) == 0
    assert run(["analyze", "--store", str(store), "--out", str(tmp_path / "r2"), "--jobs", "2"]) == 0
    for name in ("kind_stats.csv", "filter_distribution.csv", "lang_distribution.csv", "mismatch_points.csv", "summary.json"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()


def test_analyze_uses_store_env(tmp_path, monkeypatch):
    store = _store(tmp_path, 3)
    monkeypatch.setenv("KIZUKI_STORE", str(store))
    assert run(["analyze", "--out", str(tmp_path / "r"), "--scope", "all", "--mixed-as-native"]) == 0
    assert json.loads((tmp_path / "r" / "summary.json").read_text(encoding="utf-8"))["mixed_as_native"] is True


def test_analyze_missing_store(tmp_path):
    assert run(["analyze", str(tmp_path / "none")]) == EXIT_USAGE


def test_fetch_populates_store(tmp_path):
    site = tmp_path / "site"
    site.mkdir()
    (site / "index.html").write_text(THAI_PAGE, encoding="utf-8")

    class Quiet(SimpleHTTPRequestHandler):
        def log_message(self, *args):
            pass

    httpd = ThreadingHTTPServer(("127.0.0.1", 0), partial(Quiet, directory=str(site)))
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    try:
        base = f"http://127.0.0.1:{httpd.server_address[1]}"
        urls = tmp_path / "urls.txt"
        urls.write_text(f"{base}/index.html\n# comment\n{base}/missing.html\nnot a url\n", encoding="utf-8")
        store = tmp_path / "store"
        code = run(["fetch", str(urls), "--lang", "th", "--country", "TH", "--store", str(store), "--jobs", "2"])
    finally:
        httpd.shutdown()
    assert code == 0
    snaps = list(iterate_snapshots(store))
    assert [s.meta.http_status for s in snaps] == [200, 404]
    assert snaps[0].meta.target_language == "th" and snaps[0].meta.country_tag == "TH"
    assert Path(snaps[0].url).name == "index.html"
