"""Command-line interface: ``covergroup verify|mul|act|sample|center``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for
configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cover_group as cg
from . import einstein as es
from .errors import CoverGroupError
from .pseudo_orthogonal import random_element
from .suites import SUITES, SuiteConfig, UnknownSuite, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("COVERGROUP_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"COVERGROUP_SEED must be an integer, got {raw!r}") from None


def _parse_tol(items: list[str]) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise ConfigError(f"--tol {name}: {value!r} is not a number") from None
    return out


def _load_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covergroup", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run seeded property suites")
    v.add_argument("--suite", default="all", help=f"one of: {', '.join([*SUITES, 'all'])}")
    v.add_argument("--n", type=int, default=2, help="dimension n of R x S^n (default: 2)")
    v.add_argument("--samples", type=int, default=200, help="trials per check (default: 200)")
    v.add_argument("--seed", type=int, default=None, help="master seed (default: $COVERGROUP_SEED or 0)")
    v.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="override a check tolerance")
    v.add_argument("--json", action="store_true", help="print the full JSON report")
    v.add_argument("--verbose", action="store_true", help="include full inputs of failed trials")

    m = sub.add_parser("mul", help="covering-group product of two element records")
    m.add_argument("a", help="JSON file with a cover element ('-' for stdin)")
    m.add_argument("b", help="JSON file with a cover element")

    a = sub.add_parser("act", help="act with a cover element on an Einstein point")
    a.add_argument("element", help="JSON file with a cover element")
    a.add_argument("point", help="JSON file with {tau, y}")

    s = sub.add_parser("sample", help="random cover element")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--branch", type=int, default=0)

    c = sub.add_parser("center", help="k-th power of the generator of the center")
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--k", type=int, default=1)
    return parser


def _verify(args) -> int:
    config = SuiteConfig(
        suite=args.suite,
        n=args.n,
        samples=args.samples,
        seed=_default_seed() if args.seed is None else args.seed,
        tol=_parse_tol(args.tol),
        verbose=args.verbose,
    )
    report = run_suite(config)
    if args.json:
        _emit(report)
    else:
        for check in report["checks"]:
            status = "PASS" if not check["failures"] else f"FAIL ({len(check['failures'])})"
            print(f"{check['suite']:>20} {check['name']:<32} n={check['n']} "
                  f"max={check['max_residual']:.2e} tol={check['tol']:.0e} {status}")
        print(f"{'passed' if report['passed'] else 'FAILED'} in {report['wall_time']:.1f}s")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _dispatch(args) -> int:
    if args.command == "verify":
        return _verify(args)
    if args.command == "mul":
        a = cg.from_record(_load_json(args.a))
        b = cg.from_record(_load_json(args.b))
        _emit(cg.to_record(cg.star(a, b)))
    elif args.command == "act":
        a = cg.from_record(_load_json(args.element))
        p = es.from_record(_load_json(args.point))
        _emit(es.to_record(es.act_cover(a, p)))
    elif args.command == "sample":
        seed = _default_seed() if args.seed is None else args.seed
        _emit(cg.to_record(cg.lift(random_element(args.n, seed), args.branch)))
    elif args.command == "center":
        _emit(cg.to_record(cg.center(args.n, args.k).element))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, UnknownSuite, ValueError, CoverGroupError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownSuite) and exc.args else exc
        prefix = "unknown suite: " if isinstance(exc, UnknownSuite) else ""
        print(f"covergroup: error: {prefix}{msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
