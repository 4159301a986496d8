"""One check per acceptance criterion; the summary lines appear at the end of the run."""

import time

import pytest

from biinterp import suites
from biinterp.chevalley import WIDTH_BOUND
from biinterp.groups import MatrixGroup, QuotientKind
from biinterp.ring import ProductRing
from biinterp.suites import SuiteConfig, run_suite

Q = {q.value: q for q in QuotientKind}


def timed(cfg, name):
    suites.interpretation.cache_clear()
    t = time.perf_counter()
    rep = run_suite(cfg, name)
    return rep, time.perf_counter() - t


def test_c01_s_lemma(acceptance):
    t = time.perf_counter()
    bad = []
    for desc in ["5", "7", "5,7", "5,7,11,13", "3^2", "2^3", "3"]:
        rep = run_suite(SuiteConfig(desc), "s-lemma")
        if rep.status != "pass" or rep.checked != ProductRing.parse(desc).order:
            bad.append(desc)
    dt = time.perf_counter() - t
    ok = acceptance(1, "s-lemma", not bad and dt < 1, f"7 rings, failing {bad}, {dt:.2f}s")
    assert ok


@pytest.mark.parametrize("q", ["sl2", "mod-pm1", pytest.param("psl2", marks=pytest.mark.xfail(
    strict=True, reason="PSL2(F5 x F7): (w,1) centralizes h(tau) since tau^2 = -1 mod 5; see ledger"))])
def test_c02_hdef(acceptance, q):
    rep, dt = timed(SuiteConfig("5,7", Q[q]), "hdef")
    size = len(MatrixGroup(ProductRing.parse("5,7"), 2, Q[q]).enumerate())
    expected_H = 24 // (40320 // size)
    d = rep.details
    ok = rep.status == "pass" and d["computed"] == d["oracle"] == expected_H and dt < 10
    acceptance(2, f"hdef/{q}", ok, f"|G|={size}, |H| computed {d['computed']} vs {d['oracle']}, {dt:.1f}s")
    if q == "sl2":
        assert size == 40320 and d["computed"] == 24
    assert ok


def test_c02_hdef_negative(acceptance):
    rep, dt = timed(SuiteConfig("3^2"), "hdef-negative")
    w = rep.details["detected_witness"]
    ok = rep.status == "pass" and rep.expected_negative and w is not None and dt < 5
    acceptance(2, "hdef-negative/Z9", ok,
               f"|C| {rep.details['computed']} > |h(R*)| {rep.details['oracle']}, witness {w}, {dt:.1f}s")
    assert ok
    assert [[[1], [3]], [[0], [1]]] in [g.residue_rows() for g in suites.interpretation("3^2", QuotientKind.TRIVIAL).H_list]


def test_c03_u_v_w(acceptance):
    cfg = SuiteConfig("5,7")
    suites.interpretation.cache_clear()
    t = time.perf_counter()
    reps = [run_suite(cfg, s) for s in ("u-def", "v-def", "w-def")]
    dt = time.perf_counter() - t
    sizes = [r.details["computed"] for r in reps]
    ok = all(r.status == "pass" for r in reps) and sizes == [35, 35, 4] and dt < 5
    acceptance(3, "u/v/w-def", ok, f"sizes {sizes}, {dt:.1f}s")
    assert ok


def test_c04_mult_formula(acceptance):
    rep, dt = timed(SuiteConfig("5,7"), "mult-formula")
    d = rep.details
    ok = rep.status == "pass" and d["relation"] == d["graph"] == 1225 and dt < 30
    acceptance(4, "mult-formula", ok, f"relation {d['relation']} = graph {d['graph']}, {dt:.1f}s")
    assert ok


def test_c05_gamma1(acceptance):
    rep, dt = timed(SuiteConfig("5,7"), "gamma1-vhu")
    d = rep.details
    ok = rep.status == "pass" and d["members"] == d["expected"] == 29400 and rep.checked == 29400 and dt < 10
    acceptance(5, "gamma1-vhu", ok, f"members {d['members']}, |V||H||U| {d['expected']}, {dt:.1f}s")
    assert ok


@pytest.mark.parametrize("q", ["sl2", "mod-pm1", pytest.param("psl2", marks=pytest.mark.xfail(
    strict=True, reason="the torus is not definable by its centralizer in PSL2(F5 x F7); see ledger"))])
def test_c06_theta_roundtrip(acceptance, q):
    cfg = SuiteConfig("5,7", Q[q])
    suites.interpretation.cache_clear()
    t = time.perf_counter()
    theta = run_suite(cfg, "theta-sl2")
    rt = run_suite(cfg, "roundtrip")
    dt = time.perf_counter() - t
    n = len(MatrixGroup(ProductRing.parse("5,7"), 2, Q[q]).enumerate())
    ok = theta.status == rt.status == "pass" and theta.checked == n and rt.checked == n + 35 and dt < 60
    first = (theta.failures or rt.failures or [{}])[0]
    acceptance(6, f"theta+roundtrip/{q}", ok,
               f"{theta.checked}/{n} elements, {len(theta.failures)}+{len(rt.failures)} failures shown"
               + (f", first {first}" if first else "") + f", {dt:.1f}s")
    assert ok


def test_c07_quotients(acceptance):
    rep, dt = timed(SuiteConfig("5,7"), "quotient-interp")
    sizes = rep.details["class_sizes"]
    ok = rep.status == "pass" and sizes == {"mod-pm1": [2], "psl2": [4]} and dt < 5
    acceptance(7, "quotient-interp", ok, f"class sizes {sizes}, u injective, {dt:.1f}s")
    assert ok


def test_c08_klemma(acceptance):
    rep, dt = timed(SuiteConfig("5"), "sl3-klemma")
    ok = rep.status == "pass" and rep.details["A1"] == 120 and dt < 30
    acceptance(8, "sl3-klemma", ok, f"|product set| {rep.details['A1']} = |K_a1|, {dt:.1f}s")
    assert ok


def test_c09_centralizer(acceptance):
    rep, dt = timed(SuiteConfig("5"), "sl3-centralizer")
    d = rep.details
    ok = rep.status == "pass" and d["centre_of_centralizer"] == d["oracle"] == 5 and dt < 120
    acceptance(9, "sl3-centralizer", ok, f"|Z(C)| {d['centre_of_centralizer']}, {d['note']}, {dt:.1f}s")
    assert ok


def test_c10_width(acceptance):
    rep, dt = timed(SuiteConfig("5"), "sl3-width")
    d = rep.details
    ok = rep.status == "pass" and rep.checked == 20000 and d["max_width"] <= WIDTH_BOUND and dt < 60
    acceptance(10, "sl3-width", ok, f"2x10^4 elements, observed max width {d['max_width']} <= {WIDTH_BOUND}, {dt:.1f}s")
    assert ok


def test_c11_theta3(acceptance):
    rep, dt = timed(SuiteConfig("5"), "sl3-theta")
    ok = rep.status == "pass" and rep.checked == 1000 and dt < 60
    acceptance(11, "sl3-theta", ok, f"{rep.checked} samples, {dt:.1f}s")
    assert ok


def test_c12_parser(acceptance):
    rep, dt = timed(SuiteConfig("5"), "parser-roundtrip")
    ok = rep.status == "pass" and rep.checked == 20000 and dt < 30
    acceptance(12, "parser-roundtrip", ok, f"10^4 ASTs + 10^4 evaluations, {dt:.1f}s")
    assert ok
