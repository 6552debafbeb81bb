"""Command line front-end: ``verify``, ``report`` and ``constants``.

Exit codes: 0 all checks pass, 1 a tolerance failure, 2 bad configuration
or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .ensembles import SpecError, WishartSpec
from .identities import constants as K
from .integrator import DivergenceError
from .report import FIELDS
from .suite import IDENTITIES, Task, default_grid, run_tasks

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# verify defaults per identity; flags override
VERIFY_DEFAULTS = {
    "bessel_eigen": dict(d=2, beta=2),
    "calibration": dict(beta=2, a=1, d=1),
    "circular": dict(beta=2, d=1, a=2),
    "constants": dict(beta=2, a=1, c=1, d=1),
    "corollary2": dict(beta=2, a=1, b=1, c=1, d=0, F="exp"),
    "duality": dict(beta=2, a=2, b=1, c=2, d=1),
    "equivalence61": dict(beta=2, a=2, c=1, d=2),
    "gaussian_vector": dict(beta=2, a=1, c=1, d=0),
    "ingham_siegel": dict(a=1, rho=1.0),
    "laguerre_selberg": dict(d=2, beta=2, xi=0),
    "s_operator": dict(),
    "split": dict(beta=2, a=1, b=1, c=1, d=1),
    "theorem1": dict(beta=2, a=1, c=1, d=1, F="one"),
    "theorem2": dict(beta=2, a=1, c=1, d=1, F="one"),
    "theorem4": dict(beta=2, a=1, b=0, c=2, d=1, e=1, F="one"),
}

SPEC_KEYS = ("beta", "a", "b", "c", "d", "e")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key=value file; flags given on the command line win")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", type=Path, help="report file (default: standard output)")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--timings", action="store_true", help="record wall-clock runtime_ms")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superwishart", description="Verify supersymmetric Wishart integral identities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one identity check")
    v.add_argument("identity", choices=IDENTITIES)
    for k in SPEC_KEYS:
        v.add_argument(f"--{k}", type=int)
    v.add_argument("--m-max", dest="m_max", type=int)
    v.add_argument("--F", dest="F", choices=("one", "str", "str2", "exp"))
    v.add_argument("--eps", type=float)
    v.add_argument("--psi", type=float)
    v.add_argument("--nodes", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--scheme", choices=("gauss_hermite_tensor", "monte_carlo"))
    v.add_argument("--rho", type=float)
    v.add_argument("--xi", type=int)
    v.add_argument("--draws", type=int)
    v.add_argument("--form", choices=("modulus", "signed"))
    v.add_argument("--max-degree", dest="max_degree", type=int)
    _common(v)

    r = sub.add_parser("report", help="run the verification grid")
    r.add_argument("--all", action="store_true", help="run every identity of the grid")
    r.add_argument("--only", help="comma-separated identity ids")
    _common(r)

    c = sub.add_parser("constants", help="print the normalization constants")
    c.add_argument("--beta", type=int, action="append", help="repeatable; default 1, 2 and 4")
    c.add_argument("--max-diff", type=int, default=3, help="largest a - c")
    c.add_argument("--max-d", type=int, default=2)
    c.add_argument("--max-c", type=int, default=2)
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.add_argument("--out", type=Path)
    return parser


def read_config(path: Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(parser, action_map, key, value):
    action = action_map.get(key)
    if action is None:
        raise ValueError(f"unknown config key {key!r}")
    if action.type is not None:
        return action.type(value)
    if isinstance(action, argparse._StoreTrueAction):
        return value.lower() in ("1", "true", "yes", "on")
    return value


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg_path = getattr(args, "config", None)
    if cfg_path is not None:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        for key, raw in read_config(cfg_path).items():
            if getattr(args, key, None) in (None, False):
                setattr(args, key, _coerce(sub, actions, key, raw))
    return args


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text)


def render(reports, fmt: str, seed) -> str:
    records = [r.to_dict() for r in reports]
    passed = sum(r.passed for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(FIELDS)
        for rec in records:
            w.writerow([_csv_cell(rec[k]) for k in FIELDS])
        return buf.getvalue()
    doc = {
        "version": __version__,
        "seed": seed,
        "checks": records,
        "summary": {"pass": passed, "fail": len(reports) - passed},
    }
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(v):
    if isinstance(v, list):
        return complex(*(float(x) for x in v))
    if v is None:
        return ""
    return v


def _summary(reports) -> str:
    passed = sum(r.passed for r in reports)
    return f"{passed} passed, {len(reports) - passed} failed, {len(reports)} checks"


def cmd_verify(args) -> int:
    params = dict(VERIFY_DEFAULTS[args.identity])
    for key in SPEC_KEYS + ("m_max", "F", "eps", "psi", "nodes", "samples", "scheme", "rho", "xi",
                             "draws", "form", "max_degree", "seed", "tol"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    ident = args.identity
    if ident == "laguerre_selberg":
        params["beta_tilde"] = params.pop("beta")
    if ident == "bessel_eigen":
        params["beta_over"] = 4 // params.pop("beta")
    if ident == "duality" and "m_max" not in params:
        params["m_max"] = 4
    seed = params.setdefault("seed", 0)
    reports = run_tasks([Task.make(ident, **params)], timings=args.timings)
    for r in reports:
        print(r.line(), file=sys.stderr if args.out is None and args.format else sys.stdout)
    if args.format or args.out:
        _emit(render(reports, args.format or "json", seed), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_report(args) -> int:
    only = [s.strip() for s in args.only.split(",") if s.strip()] if args.only is not None else None
    if not args.all and only is None:
        print("report: pass --all or --only", file=sys.stderr)
        return EXIT_CONFIG
    if only:
        unknown = sorted(set(only) - set(IDENTITIES))
        if unknown:
            print(f"report: unknown identity {', '.join(unknown)}", file=sys.stderr)
            return EXIT_CONFIG
    seed = args.seed if args.seed is not None else 0
    tasks = default_grid(seed, only)
    if not tasks:
        print("no checks selected", file=sys.stderr)
        return EXIT_CONFIG
    reports = run_tasks(tasks, jobs=args.jobs or 1, timings=args.timings)
    _emit(render(reports, args.format or "json", seed), args.out)
    for r in reports:
        if not r.passed:
            print(r.line(), file=sys.stderr)
    print(_summary(reports), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def constants_table(betas, max_diff: int, max_c: int, max_d: int) -> list[dict]:
    rows = []
    for beta in betas:
        for c in range(max_c + 1):
            for diff in range(max_diff + 1):
                for d in range(max_d + 1):
                    spec = WishartSpec(beta, c + diff, 0, c, d)
                    C, Ct = K.numeric(K.constant_C(spec)), K.numeric(K.constant_Ctilde(spec))
                    rows.append({
                        "beta": beta, "a": spec.a, "c": c, "d": d,
                        "C": [C.real, C.imag], "C_tilde": [Ct.real, Ct.imag],
                        "ratio": str(K.constant_ratio(spec)),
                    })
    return rows


def cmd_constants(args) -> int:
    rows = constants_table(args.beta or [1, 2, 4], args.max_diff, args.max_c, args.max_d)
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["beta", "a", "c", "d", "C", "C_tilde", "ratio"])
        for r in rows:
            w.writerow([r["beta"], r["a"], r["c"], r["d"], complex(*r["C"]), complex(*r["C_tilde"]), r["ratio"]])
        text = buf.getvalue()
    else:
        lines = [f"{'beta':>4} {'a':>2} {'c':>2} {'d':>2}  {'C':>26}  {'C_tilde':>26}  ratio"]
        for r in rows:
            lines.append(
                f"{r['beta']:>4} {r['a']:>2} {r['c']:>2} {r['d']:>2}  {_cfmt(r['C']):>26}  "
                f"{_cfmt(r['C_tilde']):>26}  {r['ratio']}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _cfmt(z) -> str:
    re, im = z
    return f"{re:.10g}" if abs(im) < 1e-14 * max(1.0, abs(re)) else f"{re:.6g}{im:+.6g}j"


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    except (OSError, ValueError) as exc:
        print(f"superwishart: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    handlers = {"verify": cmd_verify, "report": cmd_report, "constants": cmd_constants}
    try:
        return handlers[args.command](args)
    except (SpecError, DivergenceError, ValueError, ArithmeticError) as exc:
        print(f"superwishart: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"superwishart: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
