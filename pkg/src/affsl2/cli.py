"""Command-line front end: verify suites, apply operator expressions, and
solve for eigenvector kernels.

Exit codes: 0 all checks pass, 1 some check fails, 2 configuration or
usage error.  Output is JSON by default; --pretty switches to aligned
plain text.
"""

import argparse
import json
import re
import sys

from .exact import QONE, format_rational, parse_rational
from .harness import RunConfig, module_from_params, run_suites
from .quadratic import L_mode, T_mode
from .whittaker import TruncationBox, whittaker_vector_solver

_TOKEN = re.compile(r"\S+")
_OP = re.compile(r"^([A-Za-z]+)\((-?\d+)\)$")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

_FAMILIES = ("e", "f", "h", "L", "T", "phi", "a", "ainv", "astar")


class UsageError(Exception):
    pass


def parse_expression(text):
    """Split an operator expression into (scalar, symbol list).

    The grammar is a whitespace-separated product of factors: rational
    literals and operator tokens e(n) f(n) h(n) L(n) T(n) d phi(n) a(n)
    ainv(n) astar(n).  Scalars multiply the whole product.
    """
    scalar = QONE
    word = []
    for m in _TOKEN.finditer(text):
        token = m.group()
        if _RATIONAL.match(token):
            scalar *= parse_rational(token)
            continue
        if token == "d":
            word.append(("d", 0))
            continue
        op = _OP.match(token)
        if op and op.group(1) in _FAMILIES:
            word.append((op.group(1), int(op.group(2))))
            continue
        raise UsageError(
            f"parse error at position {m.start()}: unrecognized token {token!r}"
        )
    return scalar, tuple(word)


def _load_params(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read params file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"params file is not valid JSON: {exc}") from exc


def _parse_box(text):
    try:
        w, l = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--box wants W,L with integers, got {text!r}") from exc
    if w < 0 or l < 0:
        raise UsageError("--box wants nonnegative bounds")
    return (w, l)


# ---------------------------------------------------------------------------
# vector rendering


def _label_str(label):
    """Basis label as a product string; the cyclic vector prints as w."""
    if label == () or label == ((), (), ()) or label == (0, (), ()):
        return "w"
    if (
        isinstance(label, tuple)
        and len(label) == 3
        and all(
            isinstance(p, tuple) and all(isinstance(x, int) for x in p)
            for p in label
        )
    ):
        a, s, b = label
        factors = [f"a({-v})" for v in a]
        factors += [f"astar({1 - u})" for u in s]
        factors += [f"b({-v})" for v in b]
        return "·".join(factors + ["w"])
    if isinstance(label, tuple) and len(label) == 3 and isinstance(label[0], int):
        d0, cpart, dpart = label
        factors = []
        if d0 == 1:
            factors.append("d(0)")
        elif d0 > 1:
            factors.append(f"d(0)^{d0}")
        factors += [f"c({-v})" for v in cpart]
        factors += [f"d({-v})" for v in dpart]
        return "·".join(factors + ["w"])
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], int):
        d_power, inner = label
        head = [] if not d_power else (["d"] if d_power == 1 else [f"d^{d_power}"])
        tail = _label_str(inner)
        return "·".join(head + [tail]) if head else tail
    return "·".join(f"{fam}({n})" for fam, n in label) + "·w"


def _vector_json(v):
    return {
        _label_str(lbl): format_rational(c)
        for lbl, c in sorted(v.items(), key=lambda kv: _label_str(kv[0]))
    }


def _vector_pretty(v):
    if not v:
        return "0"
    parts = []
    for lbl, c in sorted(v.items(), key=lambda kv: _label_str(kv[0])):
        text = format_rational(abs(c))
        term = f"{text}·{_label_str(lbl)}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args):
    config = RunConfig(
        suite=args.suite,
        params=_load_params(args.params) if args.params else None,
        box=_parse_box(args.box),
        mode_bound=args.mode_bound,
        seed=args.seed,
        out=args.out,
        pretty=args.pretty,
    )
    try:
        report = run_suites(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    if args.pretty:
        width = max(len(c.description) for c in report.checks)
        for c in report.checks:
            print(f"{c.description:<{width}}  {c.status:>4}  {c.seconds:8.3f}s")
        print(f"{'all checks pass' if report.ok else 'FAILURES PRESENT'}")
    else:
        print(payload)
    return 0 if report.ok else 1


def _apply_symbol(handle, sym, v):
    """Apply one operator token, reaching for the quadratic fields when the
    module alphabet has no native symbol for them."""
    try:
        return handle.act(sym, v)
    except ValueError as exc:
        fam, n = sym
        try:
            if fam == "L":
                return L_mode(n, handle, v)
            if fam == "T":
                return T_mode(n, handle, v)
        except ValueError as inner:
            raise UsageError(f"token not supported by this module: {inner}") from inner
        raise UsageError(f"token not supported by this module: {exc}") from exc


def cmd_act(args):
    params = _load_params(args.params)
    try:
        handle = module_from_params(params)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid module parameters: {exc}") from exc
    scalar, word = parse_expression(args.expr)
    v = handle.cyclic()
    for g in reversed(word):
        v = _apply_symbol(handle, g, v)
    if scalar != QONE:
        v = {lbl: c * scalar for lbl, c in v.items()}
    if args.pretty:
        print(_vector_pretty(v))
    else:
        print(
            json.dumps(
                {"expr": args.expr, "module": params.get("module"),
                 "vector": _vector_json(v)},
                indent=2,
                sort_keys=True,
            )
        )
    return 0


def cmd_kernel(args):
    params = _load_params(args.params)
    try:
        handle = module_from_params(params)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid module parameters: {exc}") from exc
    if not hasattr(handle, "creator_symbols"):
        raise UsageError("the kernel solver needs a module with a sorted-word basis")
    w, l = _parse_box(args.box)
    if args.eta:
        try:
            lam, mu = (parse_rational(part) for part in args.eta.split(","))
        except ValueError as exc:
            raise UsageError(f"--eta wants lam,mu rationals, got {args.eta!r}") from exc
    else:
        lam, mu = handle.lam, handle.mu
    try:
        basis = whittaker_vector_solver(handle, lam, mu, TruncationBox(w, l))
    except ValueError as exc:
        raise UsageError(f"module does not support the solver: {exc}") from exc
    payload = {
        "module": params.get("module"),
        "box": [w, l],
        "eta": [format_rational(lam), format_rational(mu)],
        "dimension": len(basis),
        "basis": [_vector_json(v) for v in basis],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.pretty:
        print(f"kernel dimension {len(basis)} in box({w},{l})")
        for v in basis:
            print("  " + _vector_pretty(v))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="affsl2",
        description="exact verification suites for Whittaker-type modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--params", default=None)
    p.add_argument("--box", default="4,4")
    p.add_argument("--mode-bound", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("act", help="apply an operator expression to the cyclic vector")
    p.add_argument("--expr", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("kernel", help="solve for eigenvectors inside a box")
    p.add_argument("--params", required=True)
    p.add_argument("--box", default="4,4")
    p.add_argument("--eta", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_kernel)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return 0 if not exc.code else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
