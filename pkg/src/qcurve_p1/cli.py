"""Command-line interface: ``qcurve-p1 compute ...`` and ``qcurve-p1 verify ...``.

Exit codes: 0 success, 1 a check failed, 2 bad usage or parameters,
3 internal arithmetic inconsistency (including a corrupted cache).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .errors import DomainError, InternalConsistencyError, QCurveError
from .render import (
    coeff_json,
    coeff_latex,
    laurent_latex,
    mlaurent_latex,
    mlaurent_text,
    x_form_latex,
    x_form_text,
    zpoly_json,
    zpoly_text,
)

CACHE_ENV = "QCURVE_P1_CACHE"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

TARGETS = ("w", "f-open", "s", "p", "free-energy", "painleve")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    from .verify.suite import SUITES

    parser = argparse.ArgumentParser(
        prog="qcurve-p1",
        description="Exact topological recursion and WKB data for y^2 = 4(x - q0)^2 (x + 2 q0).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="compute and print one object")
    comp.add_argument("target", choices=TARGETS)
    comp.add_argument("--g", type=_nonneg, help="genus")
    comp.add_argument("--n", type=_nonneg, help="number of variables")
    comp.add_argument("--m", type=_nonneg, help="hbar order of S_m or P_m")
    comp.add_argument("--order", type=_nonneg, default=4, help="hbar truncation for painleve (default 4)")
    comp.add_argument("--format", choices=("text", "json", "latex"), default="text")
    comp.add_argument("--coord", choices=("z", "x"), default="z",
                      help="print S_m and P_m in z or through x = z^2 - 2 q0")
    comp.add_argument("--cache", help=f"W-cache JSON file (default: ${CACHE_ENV})")

    ver = sub.add_parser("verify", help="run verification checks")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--order", type=_nonneg, default=8, help="hbar order N (default 8)")
    ver.add_argument("--euler-max", type=_nonneg, default=4, help="largest 2g-2+n for multivariate checks")
    ver.add_argument("--gmax", type=_nonneg, help="largest genus for the tau check (default order/2)")
    ver.add_argument("--jobs", type=_nonneg, default=1, help="worker threads")
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.add_argument("--out", help="write the JSON report to this path")
    ver.add_argument("--cache", help=f"W-cache JSON file (default: ${CACHE_ENV})")
    ver.add_argument("--audit", action="store_true", help="recompute every cache entry before running")
    ver.add_argument("-v", "--verbose", action="store_true", help="include timings")
    return parser


def _cache(path: Optional[str]):
    from .toprec import WCache

    path = path or os.environ.get(CACHE_ENV) or None
    return WCache(path)


def _save(cache) -> None:
    if cache.path and cache.dirty:
        cache.save()


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError(f"{args.target} needs {' '.join(missing)}")


def _stable_table(args, obj_m, form: bool) -> str:
    if args.format == "latex":
        return mlaurent_latex(obj_m, form)
    return mlaurent_text(obj_m)


def _single(args, poly) -> str:
    if args.format == "json":
        return json.dumps({"coord": "z", "terms": zpoly_json(poly)}, indent=2, sort_keys=True)
    if args.coord == "x":
        return x_form_latex(poly) if args.format == "latex" else x_form_text(poly)
    return laurent_latex(poly) if args.format == "latex" else zpoly_text(poly)


def cmd_compute(args) -> int:
    from . import openfe, toprec, wkb

    cache = _cache(args.cache)
    t = args.target
    if t in ("w", "f-open"):
        _require(args, "g", "n")
        if t == "w":
            obj = toprec.compute_W(args.g, args.n, cache)
            data = obj.to_json()
        else:
            obj = openfe.open_F(args.g, args.n, cache)
            data = [{"k": [str(k) for k in key], "coeff": coeff_json(c)} for key, c in sorted(obj.terms.items())]
        if args.format == "json":
            out = json.dumps({"g": args.g, "n": args.n, "terms": data}, indent=2, sort_keys=True)
        else:
            out = _stable_table(args, obj.to_mlaurent(), t == "w")
    elif t == "s":
        _require(args, "m")
        s = openfe.principal_special(args.m, cache)
        if args.m == 1:
            if args.format == "json":
                out = json.dumps({"m": 1, "log": {"coeff": str(s.log_coeff), "arg": "z"}}, sort_keys=True)
            elif args.coord == "x":
                out = "-\\frac{1}{4}\\log(x+2q_0)" if args.format == "latex" else "-1/4 * log(x + 2*q0)"
            else:
                out = "-\\frac{1}{2}\\log z" if args.format == "latex" else "-1/2 * log(z)"
        else:
            out = _single(args, s.value)
    elif t == "p":
        _require(args, "m")
        hP = wkb.riccati_P(args.m)
        out = _single(args, hP[args.m].as_laurent())
    elif t == "free-energy":
        _require(args, "g")
        f = toprec.closed_F(args.g, cache)
        if args.format == "json":
            doc = {"g": args.g}
            if f.is_log():
                doc["log"] = {"coeff": str(f.log_coeff), "arg": coeff_json(f.log_arg)}
            else:
                doc["value"] = coeff_json(f.value)
            out = json.dumps(doc, indent=2, sort_keys=True)
        elif args.format == "latex":
            if f.is_log():
                out = f"-\\frac{{1}}{{24}}\\log({coeff_latex(f.log_arg)})"
            else:
                out = coeff_latex(f.value)
        else:
            out = f.text()
    else:  # painleve
        ps = wkb.painleve_series(args.order)
        rows = [("q", ps.q_coeffs, 0), ("p", ps.p_coeffs, 1), ("sigma", ps.sigma_coeffs, 0)]
        if args.format == "json":
            out = json.dumps({name: {str(2 * i + off): coeff_json(c) for i, c in enumerate(lst)}
                              for name, lst, off in rows}, indent=2, sort_keys=True)
        else:
            lines = []
            for name, lst, off in rows:
                for i, c in enumerate(lst):
                    body = coeff_latex(c) if args.format == "latex" else c.text()
                    lines.append(f"{name}_{2 * i + off} = {body}")
            out = "\n".join(lines)
    print(out)
    _save(cache)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify.suite import run_all

    cache = _cache(args.cache)
    if args.audit:
        bad = cache.audit()
        if bad:
            print(f"cache audit failed for {bad}", file=sys.stderr)
            return EXIT_INTERNAL
    report = run_all(args.order, args.euler_max, cache, jobs=max(args.jobs, 1), gmax=args.gmax,
                     suite=args.suite)
    _save(cache)
    body = report.to_json(include_timings=args.verbose)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body + "\n")
    if args.format == "json":
        print(body)
    else:
        print(report.text())
        if args.verbose:
            for c in report.checks:
                print(f"  {c.check_id}: {c.elapsed:.3f}s")
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_verify(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except QCurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
