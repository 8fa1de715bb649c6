"""Command line interface: solve, scan, locus, verify, fit, catalog.

Exit codes: 0 success, 1 a verification reported "fail", 2 invalid
configuration, 3 truncation error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import __version__
from .exact import Q, fmt_q, parse_rational
from .fibers import TruncationError

SCHEMA_VERSION = "1"
MAX_GRID = 100_000


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_weight(text: str, n: int | None = None) -> tuple[Fraction, ...]:
    try:
        parts = tuple(parse_rational(p) for p in text.split(",") if p.strip() != "")
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid weight {text!r}: {exc}") from None
    if not parts:
        raise ConfigError(f"invalid weight {text!r}")
    if n is not None and len(parts) != n:
        raise ConfigError(f"weight {text!r} has {len(parts)} coordinates, expected {n}")
    return parts


def parse_grid(text: str) -> list[Fraction]:
    """"start:stop:step" (inclusive, exact) or a comma separated list."""
    from .solver import rational_range
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (parse_rational(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be positive")
            return rational_range(start, stop, step)
        return [parse_rational(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid grid {text!r}: {exc}") from None


def parse_params(items: Sequence[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"invalid parameter {item!r}, expected name=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _jobs(args) -> int:
    if getattr(args, "jobs", None) is not None:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        return args.jobs
    from .solver import default_jobs
    return default_jobs()


def _qs(ws) -> list[str]:
    return [fmt_q(Q(x)) for x in ws]


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> tuple[dict, list[list[str]]]:
    from .fixtures import n1_fixture_ids, n2_fixture_ids
    from .solver import solve_point
    n = args.n
    if n < 1:
        raise ConfigError("--n must be >= 1")
    if args.degree < 0:
        raise ConfigError("--degree must be >= 0")
    if args.weights is not None:
        if n != 1:
            raise ConfigError("--weights is the n=1 shorthand l,m; use --w1/--w2 for n>1")
        l, m = parse_weight(args.weights, 2)
        w1, w2 = (l,), (m,)
    else:
        if args.w1 is None or args.w2 is None:
            raise ConfigError("give --weights (n=1) or both --w1 and --w2")
        w1, w2 = parse_weight(args.w1, n), parse_weight(args.w2, n)
    nu = parse_weight(args.nu, n) if args.nu is not None else None
    res = solve_point(n, w1, w2, args.degree, nu, args.generators, args.nu_policy,
                      args.truncation, args.s_max)
    result = res.to_json()
    result["kernel_dim"] = res.kernel_dim()
    if n == 1:
        fixtures = n1_fixture_ids(args.degree, w1[0], w2[0])
    elif n == 2:
        fixtures = n2_fixture_ids(w1, w2, args.degree, nu)
    else:
        fixtures = []
    result["fixtures"] = fixtures
    rows = [["nu", "kernel_dim"]] + [[",".join(_qs(r.nu)), str(r.kernel_dim)] for r in res.results]
    return result, rows


def _scan_grid(args) -> list:
    n = args.n
    pairs = []
    if args.pair:
        for item in args.pair:
            if "/" in item and item.count("/") == 1 and "|" not in item:
                raise ConfigError("write pairs as W1|W2, e.g. 0,-1|3,1")
            if "|" not in item:
                raise ConfigError(f"invalid pair {item!r}, expected W1|W2")
            a, b = item.split("|", 1)
            pairs.append((parse_weight(a, n), parse_weight(b, n)))
    if args.grid:
        values = parse_grid(args.grid)
        count = len(values) ** (2 * n)
        if count + len(pairs) > MAX_GRID and not args.allow_large_grid:
            raise ConfigError(f"grid has {count} points, more than {MAX_GRID}; "
                              "pass --allow-large-grid to run it anyway")
        import itertools
        for combo in itertools.product(values, repeat=2 * n):
            pairs.append((tuple(combo[:n]), tuple(combo[n:])))
    if not pairs:
        raise ConfigError("scan needs --grid or at least one --pair")
    if len(pairs) > MAX_GRID and not args.allow_large_grid:
        raise ConfigError(f"{len(pairs)} points exceed {MAX_GRID}")
    return pairs


def cmd_scan(args):
    from .fixtures import n1_fixture_ids, n2_fixture_ids
    from .solver import scan
    if args.degree < 0:
        raise ConfigError("--degree must be >= 0")
    grid = _scan_grid(args)
    rep = scan(args.n, args.degree, grid, args.nu_policy, args.generators, _jobs(args), args.s_max)
    points = []
    rows = [["w1", "w2", "kernel_dim", "error"]]
    for p in rep.points:
        item = p.to_json(with_basis=args.basis)
        item["kernel_dim"] = p.kernel_dim()
        if args.n == 1:
            item["fixtures"] = n1_fixture_ids(args.degree, p.w1[0], p.w2[0])
        elif args.n == 2:
            item["fixtures"] = n2_fixture_ids(p.w1, p.w2, args.degree)
        else:
            item["fixtures"] = []
        points.append(item)
        rows.append([",".join(_qs(p.w1)), ",".join(_qs(p.w2)), str(p.kernel_dim()), p.error or ""])
    nonzero = sum(1 for p in rep.points if p.kernel_dim())
    errors = sum(1 for p in rep.points if p.error)
    result = {"n": args.n, "degree": args.degree, "count": len(points), "nonzero": nonzero,
              "errors": errors, "points": points}
    return result, rows


def cmd_locus(args):
    from .fixtures import N1_LOCI, n1_fixture_ids
    from .solver import n1_parametric_locus
    if not 1 <= args.degree <= 6:
        raise ConfigError("locus supports 1 <= --degree <= 6")
    loc = n1_parametric_locus(args.degree)
    result = loc.to_json()
    fixtures = []
    if loc.locus.whole_plane:
        fixtures.append(f"n1.d{args.degree}.plane")
    for ln in loc.locus.lines:
        w = ln.witness()
        fixtures += [f for f in n1_fixture_ids(args.degree, *w) if ".line" in f]
    for p in loc.locus.points:
        fixtures += [f for f in n1_fixture_ids(args.degree, *p) if ".point" in f]
    result["fixtures"] = fixtures
    expected = N1_LOCI[args.degree]
    result["matches_reference"] = (
        loc.locus.whole_plane == expected["whole_plane"]
        and sorted((ln.a, ln.b, ln.c) for ln in loc.locus.lines)
        == sorted((Q(a), Q(b), Q(c)) for a, b, c in expected["lines"])
        and sorted(loc.locus.points) == sorted(expected["points"])
        and not loc.locus.curves and not loc.locus.residual)
    rows = [["component", "value"]]
    if loc.locus.whole_plane:
        rows.append(["plane", "all"])
    rows += [["line", str(ln)] for ln in loc.locus.lines]
    rows += [["point", f"{fmt_q(p[0])},{fmt_q(p[1])}"] for p in loc.locus.points]
    rows += [["curve", str(c)] for c in loc.locus.curves]
    rows += [["residual", ";".join(str(p) for p in comp)] for comp in loc.locus.residual]
    return result, rows


def cmd_verify(args):
    from .catalog import get_operator
    from .verify import verify
    params = parse_params(args.param)
    try:
        op = get_operator(args.op, args.n, **params)
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    rep = verify(op, Dmax=args.dmax, K=args.k, algebra=args.algebra, mode=args.mode)
    result = rep.to_json()
    result["formula"] = op.formula
    rows = [["op", "n", "verdict", "checked"],
            [result["op"], str(op.n), result["verdict"], str(rep.checked)]]
    return result, rows


def cmd_fit(args):
    from .verify import density_pair_template, describe_t2, fit_coefficients
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    if args.degree < 0:
        raise ConfigError("--degree must be >= 0")
    tpl = density_pair_template(a, b, args.degree)
    basis = fit_coefficients(tpl, args.dmax, args.k)
    result = {"template": "density", "n": 1, "a": fmt_q(a), "b": fmt_q(b), "degree": args.degree,
              "terms": tpl.labels, "dimension": len(basis),
              "basis": [[fmt_q(x) for x in v] for v in basis]}
    if args.degree == 3 and a == b == Fraction(-2, 3):
        result["matches_printed"] = describe_t2(basis)["matches"]
    rows = [tpl.labels] + [[fmt_q(x) for x in v] for v in basis]
    return result, rows


def cmd_catalog(args):
    from .catalog import FIXTURE_TAGS, TAGS, get_operator, supported
    ns = [int(x) for x in args.n.split(",")]
    ops = []
    tags = TAGS + (FIXTURE_TAGS if args.fixtures else ())
    for tag in tags:
        for n in ns:
            if supported(tag, n):
                o = get_operator(tag, n)
                item = o.to_json()
                item["invariant"] = o.invariant
                ops.append(item)
    rows = [["id", "n", "order", "signature"]] + \
        [[o["id"], str(o["n"]), str(o["order"]), o["signature"]] for o in ops]
    return {"operators": ops}, rows


COMMANDS = {"solve": cmd_solve, "scan": cmd_scan, "locus": cmd_locus, "verify": cmd_verify,
            "fit": cmd_fit, "catalog": cmd_catalog}


# ---------------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invbilin",
                                description="Invariant bilinear differential operators: "
                                            "singular vectors, loci and invariance checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "tsv"), default="json")
        sp.add_argument("--timing", action="store_true",
                        help="include wall-clock seconds (makes reports non-reproducible)")

    def solver_opts(sp):
        sp.add_argument("--generators", choices=("minimal", "full", "svect"), default="minimal")
        sp.add_argument("--nu-policy", choices=("all", "balanced"), default="all")
        sp.add_argument("--s-max", type=int, default=None,
                        help="largest s for n=2 when a fiber is infinite")

    s = sub.add_parser("solve", help="singular vectors at one weight pair")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--weights", help="n=1 shorthand: l,m")
    s.add_argument("--w1")
    s.add_argument("--w2")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--nu", help="target weight; default: every realizable one")
    s.add_argument("--truncation", type=int, default=None)
    solver_opts(s)
    common(s)

    s = sub.add_parser("scan", help="kernel dimensions over a weight grid")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--grid", help="start:stop:step (inclusive) or a list, for every coordinate")
    s.add_argument("--pair", action="append", help="explicit pair W1|W2, repeatable")
    s.add_argument("--allow-large-grid", action="store_true")
    s.add_argument("--basis", action="store_true", help="include kernel bases")
    s.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: $INVBILIN_JOBS or 1)")
    solver_opts(s)
    common(s)

    s = sub.add_parser("locus", help="n=1 parametric classification in one degree")
    s.add_argument("--degree", type=int, required=True)
    common(s)

    s = sub.add_parser("verify", help="invariance check of a catalog operator")
    s.add_argument("--op", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--param", action="append", help="operator parameter name=value, repeatable")
    s.add_argument("--dmax", type=int, default=3)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--algebra", choices=("vect", "svect"), default="vect")
    s.add_argument("--mode", choices=("reduced", "exhaustive"), default="reduced")
    common(s)

    s = sub.add_parser("fit", help="invariant members of the n=1 density template")
    s.add_argument("--a", required=True, help="density weight of the first argument")
    s.add_argument("--b", required=True, help="density weight of the second argument")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--dmax", type=int, default=3)
    s.add_argument("--k", type=int, default=None)
    common(s)

    s = sub.add_parser("catalog", help="list the operators")
    s.add_argument("--n", default="1,2,3", help="comma separated dimensions")
    s.add_argument("--fixtures", action="store_true", help="include control fixtures")
    common(s)
    return p


def _config(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out", "format", "timing"):
            continue
        cfg[k] = v
    if "jobs" in cfg:
        # parallelism does not change results; keep reports identical
        cfg.pop("jobs")
    return cfg


def render(report: dict, rows: list[list[str]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return "".join("\t".join(r) + "\n" for r in rows)


_VALUE_OPTS = {"--weights", "--w1", "--w2", "--nu", "--grid", "--pair", "--a", "--b", "--param"}


def _glue_negative(argv: Sequence[str]) -> list[str]:
    """Let "--nu -2,-3" through: argparse would read -2,-3 as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] in "/:"):
                out.append(f"{tok}={nxt}")
            else:
                out += [tok, nxt]
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        result, rows = COMMANDS[args.command](args)
    except TruncationError as exc:
        print(f"error: {exc} (needed truncation: {exc.needed})", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": args.command,
              "config": _config(args), "result": result}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    text = render(report, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and result["verdict"] != "pass":
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
