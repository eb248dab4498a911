"""Command-line interface.

Exit codes: 0 success, 2 usage or parse error, 3 domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError, UnknownCheck, WprojError
from .forms import TwoForm
from .hvec import ChartCoords, ChartId, HomPoint, canonical_matrix, to_chart, transition
from .symplectic import (ReductionContext, hamiltonian, normalize_to_level, omega_formula,
                         omega_in_chart, omega_oracle)
from .verify import CHECK_NAMES, CheckConfig, config_dict, decode_complex, run_all

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Deterministic JSON with floats printed to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(x) for x in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def cplx(x) -> list:
    x = complex(x)
    return [x.real, x.imag]


def encode_form(form: TwoForm) -> dict:
    C = form.coeff
    entries = [[int(i), int(j), cplx(C[i, j])]
               for i in range(C.shape[0]) for j in range(i + 1, C.shape[1]) if C[i, j] != 0]
    return {"basis": form.frame.labels(), "coeff": entries}


def encode_coords(c: ChartCoords) -> dict:
    return {"chart": str(c.chart), "u": [cplx(x) for x in c.u], "fiber": [cplx(x) for x in c.fiber]}


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _decode_vec(data, key: str, allow_empty: bool = False) -> np.ndarray:
    try:
        vec = decode_complex(data[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"field {key!r} must be a list of [re, im] pairs") from exc
    if vec.size == 0 and not allow_empty:
        raise UsageError(f"field {key!r} must be nonempty")
    return vec


def load_point(path: str) -> HomPoint:
    data = _load_json(path)
    return HomPoint(_decode_vec(data, "v"), _decode_vec(data, "w"))


def load_coords(path: str, chart: ChartId | None) -> ChartCoords:
    data = _load_json(path)
    if chart is None:
        if "chart" not in data:
            raise UsageError("no chart given in file or via --from")
        chart = _parse_chart(data["chart"])
    return ChartCoords(chart, _decode_vec(data, "u", allow_empty=True), _decode_vec(data, "fiber"))


def _parse_chart(text: str) -> ChartId:
    try:
        return ChartId.parse(text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad chart label {text!r}; expected e.g. V0 or W1") from exc


def cmd_eval(args) -> int:
    p = load_point(args.point)
    ctx = ReductionContext.for_point(p, alpha=args.alpha, beta=args.beta)
    chart = _parse_chart(args.chart) if args.chart else None
    if args.what == "hamiltonian":
        out = hamiltonian(ctx, p)
    elif args.what == "lambda0":
        out = normalize_to_level(ctx, p)
    elif args.what == "matrix":
        out = [[cplx(x) for x in row] for row in canonical_matrix(p)]
    elif args.what == "omega":
        if chart is not None:
            out = encode_form(omega_in_chart(to_chart(p, chart)))
        else:
            out = encode_form(omega_formula(p))
    else:
        out = encode_form(omega_oracle(p, args.h, ctx))
    print(dumps(out))
    return EXIT_OK


def cmd_transition(args) -> int:
    source = _parse_chart(args.from_chart) if args.from_chart else None
    c = load_coords(args.coords, source)
    target = _parse_chart(args.to_chart)
    n, m = c.dims
    target.check_dims(n, m)
    print(dumps(encode_coords(transition(c, target))))
    return EXIT_OK


def _parse_tol(items) -> dict:
    tol = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            tol[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad tolerance {value!r}") from exc
    return tol


def _default_seed() -> int:
    raw = os.environ.get("WPROJ_DEFAULT_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"WPROJ_DEFAULT_SEED must be an integer, got {raw!r}") from exc


def _table(results) -> str:
    lines = [f"{'check':<28} {'max_abs_err':>12} {'tol':>10} {'trials':>6}  status"]
    for r in results:
        lines.append(f"{r.name:<28} {r.max_abs_err:>12.3e} {r.tol:>10.1e} {r.trials:>6}  "
                     f"{'PASS' if r.passed else 'FAIL'}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        cfg = CheckConfig(n=args.n, m=args.m, trials=args.trials, seed=seed, h=args.h, tol=_parse_tol(args.tol))
    except (ValueError, UnknownCheck) as exc:
        raise UsageError(str(exc)) from exc
    if args.check and args.check not in CHECK_NAMES:
        raise UsageError(f"unknown check {args.check!r}")
    results = run_all(cfg, [args.check] if args.check else None)
    ok = all(r.passed for r in results)
    report = {"config": config_dict(cfg), "results": [r.to_dict() for r in results],
              "all_passed": ok, "version": __version__}
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text if args.json else _table(results))
    return EXIT_OK if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wproj", description="Weighted projective space P_{+1,-1}(V+W) toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a quantity at a point")
    ev.add_argument("--point", required=True, help='JSON file {"v": [[re,im],...], "w": [...]}')
    ev.add_argument("--what", required=True, choices=["hamiltonian", "lambda0", "matrix", "omega", "omega-oracle"])
    ev.add_argument("--alpha", type=float, default=1.0)
    ev.add_argument("--beta", type=float, default=0.0)
    ev.add_argument("--chart", help="chart label such as V0 or W1 (omega only)")
    ev.add_argument("--h", type=float, default=1e-5, help="finite-difference step for omega-oracle")
    ev.set_defaults(func=cmd_eval)

    ve = sub.add_parser("verify", help="run the property checks")
    ve.add_argument("--n", type=int, default=2)
    ve.add_argument("--m", type=int, default=2)
    ve.add_argument("--trials", type=int, default=200)
    ve.add_argument("--seed", type=int, default=None, help="defaults to $WPROJ_DEFAULT_SEED or 42")
    ve.add_argument("--h", type=float, default=1e-5)
    ve.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override (repeatable)")
    ve.add_argument("--check", help="run a single named check")
    ve.add_argument("--out", help="write the JSON report here")
    ve.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    ve.set_defaults(func=cmd_verify)

    tr = sub.add_parser("transition", help="change chart coordinates")
    tr.add_argument("--coords", required=True, help='JSON file {"chart": "V0", "u": [...], "fiber": [...]}')
    tr.add_argument("--from", dest="from_chart", help="source chart (overrides the file)")
    tr.add_argument("--to", dest="to_chart", required=True)
    tr.set_defaults(func=cmd_transition)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except WprojError as exc:
        # DimMismatch and friends: malformed input rather than a domain failure.
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
