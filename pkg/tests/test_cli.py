import io
import json

import pytest

from biinterp import suites
from biinterp.cli import main
from biinterp.errors import ConfigError
from biinterp.groups import QuotientKind
from biinterp.interp import SL2Interpretation
from biinterp.report import SuiteReport, emit
from biinterp.suites import CATALOG, SuiteConfig, run, run_suite

KEYS = ["suite", "ring", "quotient", "status", "checked", "failures", "expected_negative", "elapsed_ms"]


def _run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_catalog_names():
    assert len(CATALOG) == 17 and len(set(CATALOG)) == 17
    assert len(suites.GROUPS["all"]) == 12


def test_list():
    code, text = _run(["--list"])
    assert code == 0 and text.split() == list(CATALOG)


def test_emit_empty(tmp_path):
    out = io.StringIO()
    path = tmp_path / "r.jsonl"
    emit([], path, out)
    assert path.read_text() == "" and "0 suites" in out.getvalue()


def test_emit_one(tmp_path):
    path = tmp_path / "r.jsonl"
    emit([SuiteReport("s-lemma", "5", "-", "pass", checked=5)], path, io.StringIO())
    (line,) = path.read_text().splitlines()
    rec = json.loads(line)
    assert list(rec) == KEYS and rec["status"] == "pass"


def test_skipped_status_text():
    rec = SuiteReport("hdef", "3", "sl2", "skipped", reason="char-3 component 3 excluded").to_record()
    assert rec["status"] == "skipped(char-3 component 3 excluded)"


@pytest.mark.parametrize(
    "argv",
    [["--ring", "4"], ["--ring", "5,,7"], ["--ring", "5", "--suite", "nope"], ["--ring", "5", "--sample", "0"],
     ["--ring", "5", "--jobs", "0"], ["--ring", "5,7", "--suite", "sl3-klemma"]],
)
def test_config_errors_exit_2(argv, capsys):
    code, _ = _run(argv)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_unwritable_report(tmp_path):
    code, _ = _run(["--ring", "5", "--suite", "s-lemma", "--report", str(tmp_path / "missing" / "r.jsonl")])
    assert code == 2


def test_pass_run_writes_report_and_figure(tmp_path):
    path = tmp_path / "r.jsonl"
    code, text = _run(["--ring", "5", "--suite", "theta-sl2", "--suite", "s-lemma", "--report", str(path)])
    assert code == 0
    recs = [json.loads(x) for x in path.read_text().splitlines()]
    assert [r["suite"] for r in recs] == ["theta-sl2", "s-lemma"]
    assert recs[0]["checked"] == 120 and recs[0]["status"] == "pass"
    assert all(list(r) == KEYS for r in recs)
    assert (tmp_path / "r.summary.png").stat().st_size > 0
    assert "2 suites: 2 passed" in text


def test_width_figure(tmp_path):
    path = tmp_path / "w.jsonl"
    code, _ = _run(["--ring", "5", "--suite", "sl3-width", "--sample", "50", "--report", str(path)])
    assert code == 0 and (tmp_path / "w.width.png").exists()


def test_no_figures(tmp_path):
    path = tmp_path / "r.jsonl"
    _run(["--ring", "5", "--suite", "s-lemma", "--report", str(path), "--no-figures"])
    assert not (tmp_path / "r.summary.png").exists()


def test_negative_control_ring():
    r = run_suite(SuiteConfig("3^2", suites=["hdef-negative"]), "hdef-negative")
    assert r.status == "pass" and r.expected_negative and r.failures == []
    r = run_suite(SuiteConfig("5,7", suites=["hdef-negative"]), "hdef-negative")
    assert r.ring == "3^2" and r.status == "pass"


def test_skips_for_excluded_components():
    r = run_suite(SuiteConfig("3"), "hdef")
    assert r.status == "skipped" and "char-3" in r.reason
    r = run_suite(SuiteConfig("5,3^2"), "theta-sl2")
    assert r.status == "skipped"


def test_failing_suite_exit_1(tmp_path):
    path = tmp_path / "r.jsonl"
    code, _ = _run(["--ring", "5,7", "--quotient", "psl2", "--suite", "hdef", "--report", str(path), "--no-figures"])
    assert code == 1
    rec = json.loads(path.read_text())
    assert rec["status"] == "fail" and rec["failures"] and not rec["expected_negative"]


def test_corrupted_star_gives_theta_witness(monkeypatch):
    real = SL2Interpretation._star

    def corrupted(self, y1, y2):
        r = real(self, y1, y2)
        g = self.ctx
        return r * g.u if (y1, y2) == (g.make_u(2), g.make_u(3)) else r

    suites.interpretation.cache_clear()
    monkeypatch.setattr(SL2Interpretation, "_star", corrupted)
    try:
        rep = run_suite(SuiteConfig("5"), "theta-sl2")
    finally:
        suites.interpretation.cache_clear()
    assert rep.status == "fail"
    first = json.loads(rep.to_record()["failures"][0]["witness"])
    assert len(first) == 2 and all(len(row) == 2 for row in first)
    assert all(isinstance(e, list) and len(e) == 1 for row in first for e in row)


def test_deterministic_across_jobs(tmp_path):
    args = ["--ring", "5", "--suite", "s-lemma", "--suite", "hdef", "--suite", "theta-sl2",
            "--suite", "sl3-theta", "--sample", "40", "--seed", "3", "--no-timing", "--no-figures"]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert _run(args + ["--report", str(a)])[0] == 0
    assert _run(args + ["--report", str(b), "--jobs", "3"])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_samples():
    a = run_suite(SuiteConfig("5", sample_size=20, seed=1), "sl3-width")
    b = run_suite(SuiteConfig("5", sample_size=20, seed=2), "sl3-width")
    assert a.details["widths"][:20] != b.details["widths"][:20]


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig("5", suites=["everything", "bogus"])
    cfg = SuiteConfig("5", suites=["sl3", "everything"])
    assert cfg.suites[:4] == list(suites.GROUPS["sl3"]) and len(cfg.suites) == 17


def test_run_order_follows_request():
    cfg = SuiteConfig("5", suites=["rt-sets", "s-lemma"])
    assert [r.suite for r in run(cfg)] == ["rt-sets", "s-lemma"]


def test_formula_truth(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("exists x:H . $u ^ x = $u * $u * $u * $u")
    code, text = _run(["--ring", "5", "--formula", str(f), "--sort", "H=H"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "true" and lines[1].startswith("x = ")


def test_formula_defined_set(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("exists y:U . g = y ^ $w")
    code, text = _run(["--ring", "7", "--formula", str(f), "--sort", "U=U"])
    assert code == 0 and text.splitlines()[0].startswith("7 elements")


def test_formula_errors(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("g = ")
    assert _run(["--ring", "5", "--formula", str(f)])[0] == 2
    f.write_text("g = 1")
    assert _run(["--ring", "5", "--formula", str(f), "--sort", "H=Q"])[0] == 2
