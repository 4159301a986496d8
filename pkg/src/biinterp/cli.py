"""Command line entry point: ``verifier``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from biinterp import fo
from biinterp.errors import ConfigError, TooLargeError, VerifierError
from biinterp.fo.evaluate import _image_plan
from biinterp.groups import QuotientKind
from biinterp.report import emit, witness
from biinterp.ring import ProductRing
from biinterp.suites import CATALOG, GROUPS, SuiteConfig, interpretation, run

CARRIERS = ("G", "H", "U", "V", "W", "US", "U01", "Z")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="verifier",
        description="Brute-force checks of the ring/group interpretations over finite rings.",
    )
    p.add_argument("--ring", default="5,7", help='comma-separated p or p^k, e.g. "5,7" or "3^2"')
    p.add_argument("--quotient", default="sl2", choices=[q.value for q in QuotientKind])
    p.add_argument("--suite", action="append", dest="suites", metavar="NAME",
                   help=f"suite name or group ({', '.join(GROUPS)}); repeatable, default all")
    p.add_argument("--sample", type=int, default=None, metavar="N", help="override per-suite sample sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", metavar="PATH", help="write JSON lines here, figures next to it")
    p.add_argument("--no-timing", action="store_true", help="record elapsed_ms as 0 (reproducible bytes)")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--list", action="store_true", help="print the suite catalog and exit")
    p.add_argument("--formula", metavar="FILE", help="evaluate a formula instead of running suites")
    p.add_argument("--sort", action="append", default=[], metavar="NAME=CARRIER",
                   help=f"bind a sort name to one of {', '.join(CARRIERS)}")
    return p


def _carrier(name: str, ring: str, q: QuotientKind):
    I = interpretation(ring, q)
    ctx = I.ctx
    table = {
        "G": lambda: list(ctx.enumerate()),
        "H": lambda: I.H_list,
        "U": lambda: I.U_list,
        "V": lambda: I.V_list,
        "W": lambda: I.W_list,
        "US": lambda: I.u_of_S,
        "U01": lambda: I.U01_list,
        "Z": lambda: ctx.central_elements(),
    }
    return table[name]()


def evaluate_formula(args, out) -> int:
    try:
        text = Path(args.formula).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read formula file: {exc}") from exc
    f = fo.parse(text)
    q = QuotientKind.from_name(args.quotient)
    I = interpretation(args.ring, q)
    sorts = {}
    for binding in args.sort:
        name, sep, carrier = binding.partition("=")
        if not sep or carrier not in CARRIERS:
            raise ConfigError(f"bad --sort {binding!r}; expected NAME=CARRIER with CARRIER in {CARRIERS}")
        sorts[name] = _carrier(carrier, args.ring, q)
    params = I.params
    free = sorted(fo.free_vars(f))
    if len(free) == 1:
        # without an image plan the formula is filtered over the whole group
        cands = None if _image_plan(f, free[0]) else _carrier("G", args.ring, q)
        defined = fo.define_set(f, free[0], cands, sorts, params, group=I.ctx)
        out.write(f"{len(defined)} elements satisfy the formula in {free[0]}\n")
        for g in sorted(defined, key=lambda g: g.sort_key()):
            out.write(witness(g)["witness"] + "\n")
        return 0
    if free:
        # several free variables: read them as existential over the whole group
        sorts.setdefault("G", _carrier("G", args.ring, q))
        f = fo.Exists(tuple((v, "G") for v in free), f)
    truth = fo.eval_formula(f, sorts, params, group=I.ctx)
    out.write(f"{str(truth).lower()}\n")
    if truth and isinstance(f, fo.Exists):
        found = fo.find_witness(f, sorts, params, group=I.ctx)
        for var, g in found.items():
            out.write(f"{var} = {witness(g)['witness']}\n")
    return 0


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    if args.list:
        out.write("\n".join(CATALOG) + "\n")
        return 0
    try:
        ProductRing.parse(args.ring)
        if args.formula:
            return evaluate_formula(args, out)
        cfg = SuiteConfig(
            ring=args.ring,
            quotient=QuotientKind.from_name(args.quotient),
            suites=args.suites or ["all"],
            sample_size=args.sample,
            seed=args.seed,
            jobs=args.jobs,
            report_path=args.report,
        )
        if cfg.report_path and not Path(cfg.report_path).resolve().parent.is_dir():
            raise OSError(f"report directory does not exist: {Path(cfg.report_path).parent}")
        reports = run(cfg)
        if args.no_timing:
            for r in reports:
                r.elapsed_ms = 0
        emit(reports, cfg.report_path, out)
        if cfg.report_path and not args.no_figures:
            from biinterp.plotting import write_figures

            write_figures(reports, cfg.report_path)
    except (ConfigError, TooLargeError, fo.ParseError) as exc:
        print(f"verifier: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"verifier: I/O error: {exc}", file=sys.stderr)
        return 2
    except VerifierError as exc:
        print(f"verifier: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 1 if any(r.status == "fail" for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
