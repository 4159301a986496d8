"""The fixed catalog of verification suites and the batch runner."""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from biinterp import fo
from biinterp.chevalley import (
    WIDTH_BOUND,
    RootA2,
    SL3Interpretation,
    sl3,
    verify_centralizer_identity,
    verify_klemma,
    width_decompose,
)
from biinterp.errors import ConfigError, VerifierError
from biinterp.fo.evaluate import _existential_prefix
from biinterp.fo.reference import naive_eval, random_formula
from biinterp.groups import MatrixGroup, QuotientKind
from biinterp.interp import U_FORMULA, V_FORMULA, W_FORMULA, SL2Interpretation
from biinterp.report import SuiteReport, witness
from biinterp.ring import ProductRing, build_S, decompose_square_diff, rt_member
from biinterp.sl2 import GroupCtx, quotient_equiv

EXHAUSTIVE_LIMIT = 10**5
RING_EXHAUSTIVE_LIMIT = 10**4
CROSS_CHECK_LIMIT = 2 * 10**5
FALSE_INSTANCE_LIMIT = 2 * 10**4
NEGATIVE_CONTROL_RING = "3^2"
RT_FAMILIES = ((0, 1), (0, 1, -1), (0, 2), (1, 2, 3))

SL2_SUITES = (
    "s-lemma", "rt-sets", "hdef", "hdef-negative", "u-def", "v-def", "w-def",
    "mult-formula", "gamma1-vhu", "theta-sl2", "roundtrip", "quotient-interp",
)
SL3_SUITES = ("sl3-klemma", "sl3-centralizer", "sl3-width", "sl3-theta")
CATALOG = SL2_SUITES + SL3_SUITES + ("parser-roundtrip",)
GROUPS = {
    "all": SL2_SUITES,
    "sl3": SL3_SUITES,
    "everything": CATALOG,
}


@dataclass
class SuiteConfig:
    ring: str
    quotient: QuotientKind = QuotientKind.TRIVIAL
    suites: list[str] = field(default_factory=lambda: ["all"])
    sample_size: int | None = None
    seed: int = 0
    jobs: int = 1
    report_path: str | None = None

    def __post_init__(self):
        if self.sample_size is not None and self.sample_size < 1:
            raise ConfigError("sample size must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        ProductRing.parse(self.ring)
        self.suites = expand_suites(self.suites)

    def sample(self, default: int) -> int:
        return default if self.sample_size is None else self.sample_size

    def rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.seed}:{suite}")


def expand_suites(names) -> list[str]:
    out = []
    for name in names:
        members = GROUPS.get(name, (name,))
        for m in members:
            if m not in CATALOG:
                raise ConfigError(f"unknown suite {m!r}; choose from {', '.join(CATALOG)} or all/sl3/everything")
            if m not in out:
                out.append(m)
    return out


@lru_cache(maxsize=8)
def interpretation(ring: str, quotient: QuotientKind) -> SL2Interpretation:
    return SL2Interpretation(GroupCtx(ProductRing.parse(ring), quotient))


class _Run:
    """Accumulates one suite's outcome."""

    def __init__(self, cfg: SuiteConfig, suite: str, ring: str | None = None, quotient: str | None = None):
        self.cfg = cfg
        self.suite = suite
        self.ring = ring or cfg.ring
        self.quotient = quotient or str(cfg.quotient)
        self.checked = 0
        self.failures: list[dict] = []
        self.details: dict = {}
        self.started = time.perf_counter()

    def fail(self, obj, **info):
        if len(self.failures) < 10:
            rec = witness(obj)
            rec.update({k: str(v) for k, v in info.items()})
            self.failures.append(rec)

    def report(self, *, negative: bool = False, detected: bool | None = None) -> SuiteReport:
        if negative:
            # a negative control passes exactly when the claim is seen to fail
            status = "pass" if detected else "fail"
            if not detected and not self.failures:
                self.failures.append({"witness": "null", "reason": "equality held; failure not detected"})
            if detected:
                self.failures = []
        else:
            status = "fail" if self.failures else "pass"
        return SuiteReport(
            self.suite,
            self.ring,
            self.quotient,
            status,
            self.checked,
            self.failures,
            expected_negative=negative,
            elapsed_ms=int((time.perf_counter() - self.started) * 1000),
            details=self.details,
        )

    def skip(self, reason: str) -> SuiteReport:
        return SuiteReport(self.suite, self.ring, self.quotient, "skipped", reason=reason, details=self.details)


def _field_reason(ring: ProductRing) -> str | None:
    for c in ring.components:
        if c.prime in (2, 3):
            return f"char-{c.prime} component {c} excluded"
        if not c.is_field:
            return f"non-field component {c} (truncation) excluded"
    return None


def _sampled(seq, k, rng):
    seq = list(seq)
    if len(seq) <= k:
        return seq
    return rng.sample(seq, k)


SUITES: dict[str, Callable[[SuiteConfig], SuiteReport]] = {}


def suite(name):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


# --- ring level -----------------------------------------------------------------


@suite("s-lemma")
def run_s_lemma(cfg):
    run = _Run(cfg, "s-lemma", quotient="-")
    ring = ProductRing.parse(cfg.ring)
    S = build_S(ring)
    elems = ring.elements()
    if len(elems) > RING_EXHAUSTIVE_LIMIT:
        elems = _sampled(elems, cfg.sample(RING_EXHAUSTIVE_LIMIT), cfg.rng("s-lemma"))
    for a in elems:
        run.checked += 1
        try:
            wit = decompose_square_diff(a, S)
        except VerifierError as exc:
            run.fail(a, error=exc)
            continue
        # recompute componentwise on plain residues
        ok = wit.s in S and wit.xi.is_unit() and wit.eta.is_unit()
        for m, x, e, s, t in zip(ring.moduli, wit.xi.residues, wit.eta.residues, wit.s.residues, a.residues):
            ok &= (x * x - e * e + s - t) % m == 0
        if not ok:
            run.fail(a)
    run.details["S"] = [list(s.residues) for s in S]
    return run.report()


@suite("rt-sets")
def run_rt_sets(cfg):
    run = _Run(cfg, "rt-sets", quotient="-")
    ring = ProductRing.parse(cfg.ring)
    elems = ring.elements()
    if len(elems) > RING_EXHAUSTIVE_LIMIT:
        elems = _sampled(elems, cfg.sample(RING_EXHAUSTIVE_LIMIT), cfg.rng("rt-sets"))
    used = []
    for T in RT_FAMILIES:
        # f(r) = 0 characterises R_T only where differences of T are units
        if any((s - t) % c.prime == 0 for s, t in itertools.combinations(T, 2) for c in ring.components):
            continue
        used.append(list(T))
        for r in elems:
            run.checked += 1
            direct = all(
                any((x - t) % m == 0 for t in T) for x, m in zip(r.residues, ring.moduli)
            )
            if rt_member(r, T) != direct:
                run.fail(r, T=T)
    run.details["families"] = used
    return run.report()


# --- SL2 interpretation --------------------------------------------------------------


def _sl2_interp(cfg, run):
    ring = ProductRing.parse(cfg.ring)
    reason = _field_reason(ring)
    if reason:
        return None, reason
    return interpretation(cfg.ring, cfg.quotient), None


@suite("hdef")
def run_hdef(cfg):
    run = _Run(cfg, "hdef")
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    computed, oracle = I.compute_H(), I.oracle_H()
    run.checked = len(I.ctx.enumerate())
    for g in sorted(computed ^ oracle, key=lambda g: g.sort_key()):
        run.fail(g, side="extra" if g in computed else "missing")
    run.details.update(computed=len(computed), oracle=len(oracle))
    return run.report()


@suite("hdef-negative")
def run_hdef_negative(cfg):
    ring = ProductRing.parse(cfg.ring)
    truncated = [c for c in ring.components if not c.is_field]
    desc = cfg.ring if truncated else NEGATIVE_CONTROL_RING
    run = _Run(cfg, "hdef-negative", ring=desc)
    ctx = GroupCtx(ProductRing.parse(desc), cfg.quotient)
    I = SL2Interpretation(ctx)
    computed, oracle = I.compute_H(), I.oracle_H()
    run.checked = len(ctx.enumerate())
    extra = sorted(computed - oracle, key=lambda g: g.sort_key())
    run.details.update(computed=len(computed), oracle=len(oracle),
                       detected_witness=extra[0].residue_rows() if extra else None)
    return run.report(negative=True, detected=bool(extra) and oracle <= computed)


def _set_suite(cfg, name, computed_fn, oracle_fn, formula=None):
    run = _Run(cfg, name)
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    try:
        computed = computed_fn(I)
    except VerifierError as exc:
        run.fail(None, error=exc)
        return run.report()
    oracle = oracle_fn(I)
    run.checked = len(computed | oracle)
    for g in sorted(computed ^ oracle, key=lambda g: g.sort_key()):
        run.fail(g, side="extra" if g in computed else "missing")
    run.details.update(computed=len(computed), oracle=len(oracle))
    if formula is not None:
        _cross_check(run, I, *formula(I))
    return run.report()


def _cross_check(run, I, f, sorts):
    """Image and filter strategies must agree, when the filter pass is affordable."""
    tuples = 1
    binders, _ = _existential_prefix(f)
    for _, s in binders:
        tuples *= len(sorts[s])
    cands = I.ctx.enumerate()
    if tuples * len(cands) > CROSS_CHECK_LIMIT:
        run.details["strategy_cross_check"] = "skipped (cost)"
        return
    image = fo.define_set(f, "g", cands, sorts, I.params, strategy="image")
    filt = fo.define_set(f, "g", cands, sorts, I.params, strategy="filter")
    run.details["strategy_cross_check"] = image == filt
    for g in image ^ filt:
        run.fail(g, side="strategy mismatch")


@suite("u-def")
def run_u_def(cfg):
    return _set_suite(cfg, "u-def", lambda I: I.compute_U(), lambda I: I.oracle_U(),
                      lambda I: (fo.parse(U_FORMULA), I.sorts()))


@suite("v-def")
def run_v_def(cfg):
    return _set_suite(cfg, "v-def", lambda I: I.compute_V(), lambda I: I.oracle_V(),
                      lambda I: (fo.parse(V_FORMULA), {"U": I.U_list}))


@suite("w-def")
def run_w_def(cfg):
    return _set_suite(cfg, "w-def", lambda I: I.compute_W(), lambda I: I.oracle_W(),
                      lambda I: (fo.parse(W_FORMULA), {"U01": I.U01_list}))


@suite("mult-formula")
def run_mult_formula(cfg):
    run = _Run(cfg, "mult-formula")
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    try:
        rep = I.verify_P_formula()
    except VerifierError as exc:
        run.fail(None, error=exc)
        return run.report()
    run.checked = rep.checked
    for triple in rep.counterexamples:
        run.fail(triple, note=rep.note)
    if not rep.equal and not run.failures:
        run.fail(None, note=rep.note)
    run.details.update(relation=rep.computed_set_size, graph=rep.oracle_set_size)
    if rep.equal:
        # the same relation through the logic engine: true instances are cheap,
        # a false instance costs a full scan of H^4 x S^2 and runs only on small carriers
        rng = cfg.rng("mult-formula")
        U = I.U_list
        R = I.interpreted_ring
        cost = len(I.H_list) ** 4 * len(I.S_list) ** 2
        n = 3
        for _ in range(n):
            y1, y2 = rng.choice(U), rng.choice(U)
            targets = [R.mul(y1, y2)]
            if cost <= FALSE_INSTANCE_LIMIT:
                targets.append(rng.choice(U))
            for target in targets:
                run.checked += 1
                if I.p_holds(y1, y2, target) != (target == R.mul(y1, y2)):
                    run.fail((y1, y2, target), note="formula evaluation disagrees")
    return run.report()


@suite("gamma1-vhu")
def run_gamma1(cfg):
    run = _Run(cfg, "gamma1-vhu")
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    try:
        members = [g for g in I.ctx.enumerate() if I.gamma1_member(g)]
        expected = len(I.V_list) * len(I.H_list) * len(I.U_list)
        products = {v * h * u for v in I.V_list for h in I.H_list for u in I.U_list}
    except VerifierError as exc:
        run.fail(None, error=exc)
        return run.report()
    run.details.update(members=len(members), expected=expected, vhu=len(products))
    if len(members) != expected or products != set(members):
        run.fail(None, members=len(members), expected=expected, vhu=len(products))
    for g in members:
        run.checked += 1
        try:
            I.vhu_decompose(g)
        except VerifierError as exc:
            run.fail(g, error=exc)
    rng = cfg.rng("gamma1-vhu")
    for g in _sampled(members, cfg.sample(300), rng):
        xs, ys, zs = I.vhu_definable(g)
        v, h, u = I.vhu_decompose(g)
        if (xs, zs, ys) != ([v], [h], [u]):
            run.fail(g, note="definable characterisation disagrees")
    return run.report()


def _group_sample(cfg, I, suite_name):
    elems = I.ctx.enumerate()
    if len(elems) <= EXHAUSTIVE_LIMIT:
        return elems
    return _sampled(elems, cfg.sample(10**4), cfg.rng(suite_name))


@suite("theta-sl2")
def run_theta(cfg):
    run = _Run(cfg, "theta-sl2")
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    for g in _group_sample(cfg, I, "theta-sl2"):
        run.checked += 1
        try:
            ok = I.theta_agrees(g)
        except VerifierError as exc:
            run.fail(g, error=exc)
            continue
        if not ok:
            run.fail(g)
    return run.report()


@suite("roundtrip")
def run_roundtrip(cfg):
    run = _Run(cfg, "roundtrip")
    I, reason = _sl2_interp(cfg, run)
    if I is None:
        return run.skip(reason)
    for r in I.ring.elements():
        run.checked += 1
        try:
            back = I.roundtrip_ring(r)
        except VerifierError as exc:
            run.fail(r, error=exc)
            continue
        if back != r:
            run.fail(r)
    for g in _group_sample(cfg, I, "roundtrip"):
        run.checked += 1
        try:
            back = I.roundtrip_group(g)
        except VerifierError as exc:
            run.fail(g, error=exc)
            continue
        if back != g:
            run.fail(g)
    return run.report()


@suite("quotient-interp")
def run_quotient(cfg):
    run = _Run(cfg, "quotient-interp", quotient="all")
    ring = ProductRing.parse(cfg.ring)
    plain = MatrixGroup(ring, 2)
    elems = plain.enumerate()
    rng = cfg.rng("quotient-interp")
    sizes = {}
    for q in (QuotientKind.PLUS_MINUS_ONE, QuotientKind.FULL_CENTRE):
        Gq = GroupCtx(ring, q)
        expected = len(Gq.scalars)
        fibres: dict = {}
        for A in elems:
            fibres.setdefault(Gq.canonical(A.codes), []).append(A)
        bad = [k for k, v in fibres.items() if len(v) != expected]
        run.checked += len(elems)
        sizes[str(q)] = sorted({len(v) for v in fibres.values()})
        for k in bad[:3]:
            run.fail(Gq.element(k), quotient=q, note="class size")
        # the relation B = AZ agrees with the fibres, on sampled pairs
        reps = list(fibres.values())
        for cls in _sampled(reps, 200, rng):
            A = cls[0].rep
            for B in cls:
                if not quotient_equiv(A, B.rep, q):
                    run.fail(B, quotient=q, note="same class, not equivalent")
            other = rng.choice(reps)
            if other is not cls and quotient_equiv(A, other[0].rep, q):
                run.fail(other[0], quotient=q, note="different classes, equivalent")
        images = {Gq.make_u(r) for r in ring.elements()}
        if len(images) != ring.order:
            run.fail(None, quotient=q, note="u is not injective")
    run.details["class_sizes"] = sizes
    return run.report()


# --- SL3 ----------------------------------------------------------------------------


def _sl3_ring(cfg, run):
    ring = ProductRing.parse(cfg.ring)
    if any(c.prime in (2, 3) for c in ring.components):
        return None, "char-2/3 components excluded"
    if not ring.is_product_of_fields:
        return None, "non-field component excluded"
    return ring, None


@suite("sl3-klemma")
def run_sl3_klemma(cfg):
    run = _Run(cfg, "sl3-klemma", quotient="sl3")
    ring, reason = _sl3_ring(cfg, run)
    if ring is None:
        return run.skip(reason)
    G = sl3(ring)
    for alpha in (RootA2.A1, RootA2.A2, RootA2.A1A2):
        rep = verify_klemma(G, alpha)
        run.checked += rep.checked
        for g in rep.counterexamples:
            run.fail(g, root=alpha.name)
        run.details[alpha.name] = rep.computed_set_size
    return run.report()


@suite("sl3-centralizer")
def run_sl3_centralizer(cfg):
    run = _Run(cfg, "sl3-centralizer", quotient="sl3")
    ring, reason = _sl3_ring(cfg, run)
    if ring is None:
        return run.skip(reason)
    rep = verify_centralizer_identity(sl3(ring), RootA2.A1)
    run.checked = rep.checked
    for g in rep.counterexamples:
        run.fail(g)
    run.details.update(centre_of_centralizer=rep.computed_set_size, oracle=rep.oracle_set_size, note=rep.note)
    return run.report()


@suite("sl3-width")
def run_sl3_width(cfg):
    run = _Run(cfg, "sl3-width", quotient="sl3")
    ring, reason = _sl3_ring(cfg, run)
    if ring is None:
        return run.skip(reason)
    G = sl3(ring)
    elems = G.enumerate()
    rng = cfg.rng("sl3-width")
    k = cfg.sample(10**4)
    batch = _sampled(elems, k, rng) + list(elems[:k])
    widths = []
    for g in batch:
        run.checked += 1
        try:
            dec = width_decompose(g)
        except VerifierError as exc:
            run.fail(g, error=exc)
            continue
        widths.append(len(dec))
        if len(dec) > WIDTH_BOUND or dec.product(G) != g:
            run.fail(g, width=len(dec))
    run.details.update(max_width=max(widths, default=0), bound=WIDTH_BOUND, widths=widths)
    return run.report()


@suite("sl3-theta")
def run_sl3_theta(cfg):
    run = _Run(cfg, "sl3-theta", quotient="sl3")
    ring, reason = _sl3_ring(cfg, run)
    if ring is None:
        return run.skip(reason)
    I = SL3Interpretation(ring)
    for g in _sampled(I.G.enumerate(), cfg.sample(10**3), cfg.rng("sl3-theta")):
        run.checked += 1
        try:
            ok = I.theta3_definable(g) == I.theta3_direct(g)
        except VerifierError as exc:
            run.fail(g, error=exc)
            continue
        if not ok:
            run.fail(g)
    return run.report()


# --- logic engine ----------------------------------------------------------------------


@suite("parser-roundtrip")
def run_parser(cfg):
    run = _Run(cfg, "parser-roundtrip", ring="5", quotient="sl2")
    rng = cfg.rng("parser-roundtrip")
    n = cfg.sample(10**4)
    for _ in range(n):
        f = random_formula(rng, 4, ["g", "k"], ["u", "h", "w"], ["H", "U", "W"])
        run.checked += 1
        text = str(f)
        try:
            back = fo.parse(text)
        except fo.ParseError as exc:
            run.fail(text, error=exc)
            continue
        if back != f:
            run.fail(text, note="round trip changed the AST")
    I = interpretation("5", QuotientKind.TRIVIAL)
    G = I.ctx
    sorts = {"H": I.H_list, "U": I.U_list, "W": I.W_list}
    params = {"u": G.u, "h": G.h_tau, "w": G.w}
    elems = G.enumerate()
    for _ in range(n):
        f = random_formula(rng, 3, ["g", "k"], list(params), list(sorts), term_depth=2)
        free = {v: rng.choice(elems) for v in ("g", "k")}
        run.checked += 1
        fast = fo.eval_formula(f, sorts, params, {v: free[v] for v in fo.free_vars(f)}, group=G)
        slow = naive_eval(f, sorts, params, free, G)
        if fast != slow:
            run.fail(str(f), note="evaluator disagrees with reference")
    return run.report()


# --- runner ------------------------------------------------------------------------------


def run_suite(cfg: SuiteConfig, name: str) -> SuiteReport:
    return SUITES[name](cfg)


def _worker(args):
    cfg, name = args
    return run_suite(cfg, name)


def run(cfg: SuiteConfig) -> list[SuiteReport]:
    """Run the configured suites; results come back in catalog request order."""
    if cfg.jobs == 1 or len(cfg.suites) == 1:
        return [run_suite(cfg, name) for name in cfg.suites]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(_worker, [(cfg, name) for name in cfg.suites]))
