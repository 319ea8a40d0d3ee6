"""Command line entry point: gamma-affine check|examples|verify|build."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .examples import example_path, list_examples, load_example
from .report import Report

VERIFY = {
    "lie-axioms": "lie-axioms",
    "jacobi": "affine",
    "fixed-point": "fixed-point",
    "quotient-iso": "quotient-iso",
    "module-relations": "module",
    "commutator": "fields",
    "quasi-jacobi": "fields",
    "locality": "fields",
    "closure": "permutation",
    "conformal": "conformal",
    "loop-jacobi": "conformal",
}


def _load(target: str):
    if Path(target).exists():
        return load_config(target)
    try:
        example_path(target)
    except KeyError:
        raise ConfigError([(0, f"no such config file or bundled example: {target}")])
    return load_example(target)


def _emit(rep: Report, args) -> int:
    text = rep.render(timing=not args.no_timing)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return 0 if rep.passed else 1


def cmd_check(args) -> int:
    from .suites import run_suite

    cfg = _load(args.config)
    rep = run_suite(cfg, args.suite, window=args.window, depth=args.depth)
    return _emit(rep, args)


def cmd_verify(args) -> int:
    from .suites import run_suite

    cfg = _load(args.config)
    rep = run_suite(cfg, VERIFY[args.what], window=args.window, depth=args.depth)
    return _emit(rep, args)


def cmd_examples(args) -> int:
    from .suites import run_suite

    exs = list_examples()
    if not args.run:
        for e in exs:
            print(f"example={e.name} expect={e.expect} suites={','.join(e.suites)} "
                  f"anchor=\"{e.anchor}\"")
        return 0
    ok = True
    for e in exs:
        rep = run_suite(load_example(e.name), "default")
        got = "pass" if rep.passed else "fail"
        good = got == e.expect
        ok &= good
        n = rep.counts()
        print(f"example={e.name} expect={e.expect} got={got} "
              f"pass={n['pass']} fail={n['fail']} skipped={n['skipped']} {'ok' if good else 'MISMATCH'}")
    return 0 if ok else 1


def cmd_build(args) -> int:
    from .affine import AffineElement, TwistedAffine
    from .conformal import LoopAlgebra, TwistedLoop

    cfg = _load(args.config)
    M = args.window or 2
    rep = Report(f"{cfg.name} build={args.what}")
    rep.echo.update(cfg.echo())
    if args.what == "affine":
        ta = TwistedAffine(cfg.presentation)
        for m in range(-M, M + 1):
            rep.record(f"degree[{m}]", True, f"[-{M},{M}]",
                       basis=" ".join(str(k) for k in ta.degree_basis(m)) or "-")
    elif args.what == "module":
        from .vacuum import build_basis

        D = args.depth or cfg.depth or 4
        mod = build_basis(TwistedAffine(cfg.presentation), D, cfg.level)
        rep.record("dims", True, f"depth={D}", dims=",".join(map(str, mod.dims())),
                   level=str(cfg.level))
    elif args.what in ("loop", "twisted-loop"):
        c = cfg.conformal_presentation
        if c is None:
            raise ConfigError([(0, "config has no [conformal] section")])
        L = LoopAlgebra(c) if args.what == "loop" else TwistedLoop(c)
        basis = L.basis_window(M)
        for x in basis:
            for y in basis:
                b = L.bracket(x, y)
                if not b.is_zero():
                    rep.record(f"[{x},{y}]", True, f"[-{M},{M}]", value=str(b))
    return _emit(rep, args)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gamma-affine",
                                 description="Exact verification of twisted affine and conformal structures.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--window", type=int, default=None, help="mode window M")
        p.add_argument("--depth", type=int, default=None, help="vacuum module depth D")
        p.add_argument("--report", default=None, help="also write the report to this file")
        p.add_argument("--no-timing", action="store_true", help="omit wall times (stable output)")

    p = sub.add_parser("check", help="run a suite on a config file or bundled example")
    p.add_argument("config")
    p.add_argument("--suite", default="default")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("verify", help="run one family of checks")
    p.add_argument("what", choices=sorted(VERIFY))
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("build", help="print bases or brackets of a construction")
    p.add_argument("what", choices=["affine", "module", "loop", "twisted-loop"])
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("examples", help="list bundled examples (or run them with --run)")
    p.add_argument("--run", action="store_true")
    p.set_defaults(fn=cmd_examples)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        for n, msg in e.errors:
            where = f"line {n}: " if n else ""
            print(f"config error: {where}{msg}", file=sys.stderr)
        return 2
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
