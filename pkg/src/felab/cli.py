"""Command-line front end: parse expressions, run checkers, emit tables or JSON.

Exit codes follow the verdict contract (0 proved, 1 refuted, 2 bounded);
errors map to 3 (input/parse/inapplicable), 4 (resource), 5 (precision).
All JSON output is sorted and timestamp-free, so identical invocations
produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

from . import arith, constructions, embed, largeness
from .errors import FelabError, InapplicableError, InputError
from .setlang import EvalConfig, LazySet, evaluate, parse, unparse
from .setlang import nodes
from .verdicts import Verdict


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation settings shared by every subcommand."""

    horizon: int = 100_000
    fmt: str = "table"
    cache: str | None = None

    def __post_init__(self):
        if self.horizon < 1:
            raise InputError(f"horizon must be >= 1, got {self.horizon}")
        if self.fmt not in ("table", "json"):
            raise InputError(f"format must be table or json, got {self.fmt!r}")

    @property
    def eval_config(self) -> EvalConfig:
        return EvalConfig(horizon=self.horizon)


def _run_config(args) -> RunConfig:
    horizon = args.horizon if args.horizon is not None else 100_000
    fmt = "json" if getattr(args, "json", False) else args.fmt
    cache = args.cache if args.cache is not None else os.environ.get("FELAB_CACHE")
    rc = RunConfig(horizon, fmt, cache or None)
    if rc.cache:
        arith.set_cache_dir(rc.cache)
    return rc


# ---------------------------------------------------------------------------
# expression input, including @file explicit-set loading
# ---------------------------------------------------------------------------

def read_set_file(path: str) -> tuple[int, ...]:
    """Explicit set file: one decimal natural per line, sorted, '#' comments."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read set file {path}: {exc}") from exc
    values: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if not text.isdigit():
            raise InputError(f"{path}:{lineno}: expected a decimal natural, got {text!r}")
        values.append(int(text))
    if not values:
        raise InputError(f"set file {path} holds no values")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InputError(f"set file {path} must be strictly increasing")
    if values[0] < 1:
        raise InputError(f"set file {path} must hold naturals >= 1")
    return tuple(values)


def _expr_node(text: str) -> nodes.SetExpr:
    text = text.strip()
    if text.startswith("@"):
        return nodes.Explicit(read_set_file(text[1:]))
    return parse(text)


def _eval_expr(text: str, rc: RunConfig) -> tuple[nodes.SetExpr, LazySet]:
    node = _expr_node(text)
    return node, evaluate(node, rc.eval_config)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    return str(value)


def _kv_lines(obj, indent: int = 0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val:
                yield f"{pad}{key}:"
                yield from _kv_lines(val, indent + 1)
            else:
                yield f"{pad}{key}: {_scalar(val) if not isinstance(val, (dict, list)) else json.dumps(val)}"
    elif isinstance(obj, list):
        if all(isinstance(v, (int, str, bool, type(None))) for v in obj):
            yield f"{pad}{' '.join(_scalar(v) for v in obj)}"
        else:
            for val in obj:
                if isinstance(val, (dict, list)) and val:
                    yield f"{pad}-"
                    yield from _kv_lines(val, indent + 1)
                else:
                    yield f"{pad}- {_scalar(val) if not isinstance(val, (dict, list)) else json.dumps(val)}"


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _print_jsonl(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _print_verdict_table(head: list[str], verdict: Verdict) -> None:
    for line in head:
        print(line)
    v = verdict.to_json()
    print(f"status: {v['status']}")
    if "direction" in v:
        print(f"direction: {v['direction']}")
    if v["certificate"]:
        print("certificate:")
        for line in _kv_lines(v["certificate"], 1):
            print(line)
    if v["bounds"]:
        print("bounds:")
        for line in _kv_lines(v["bounds"], 1):
            print(line)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def _add_funcs(h_max: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (tuple(range(1, h_max + 1)), tuple(2 * i for i in range(1, h_max + 1)))


def _check_runners(args, horizon: int, config: EvalConfig):
    d = largeness.PropertyParams()
    n = args.n if args.n is not None else d.run_length
    t = args.t if args.t is not None else d.t_max
    L = args.L if args.L is not None else d.ip_len
    h_max = args.h_max if args.h_max is not None else d.j_h_max
    s = args.s if args.s is not None else d.antichain_s
    N = args.N if args.N is not None else d.divisor_n
    j_a = args.a_max if args.a_max is not None else d.j_a_max
    star_a = args.a_max if args.a_max is not None else d.star_a_max
    return {
        "a-thick": lambda A: largeness.a_thick_check(A, n, horizon, config),
        "m-thick": lambda A: embed.mthick_check(A, n, horizon, config),
        "a-pcws": lambda A: largeness.a_pcws_check(A, t, n, horizon, config),
        "m-pcws": lambda A: largeness.m_pcws_check(A, t, n, horizon, config),
        "a-ip": lambda A: largeness.ip_search(A, L, horizon, "additive", config),
        "m-ip": lambda A: largeness.ip_search(A, L, horizon, "multiplicative", config),
        "a-ip*": lambda A: largeness.ip_star_check(A, L, horizon, config),
        "a-j": lambda A: largeness.j_check(A, _add_funcs(h_max), j_a, h_max, "additive"),
        "m-j": lambda A: largeness.j_check(
            A, constructions.gen_mj_funcs(h_max), j_a, h_max, "multiplicative"),
        "max": lambda A: largeness.max_check(A, N, horizon, config),
        "nmax": lambda A: largeness.nmax_refute(A, s, horizon, config),
        "max*": lambda A: largeness.maxstar_check(A, star_a, horizon, config),
        "nmax*": lambda A: largeness.nmaxstar_check(A, s, horizon, config),
    }


def _batch_lines(path: str) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read batch file {path}: {exc}") from exc
    lines = [ln.strip() for ln in raw]
    return [ln for ln in lines if ln and not ln.startswith("#")]


def _one_expression(args) -> str:
    if args.batch is not None:
        if args.expression is not None:
            raise InputError("give either an expression or --batch, not both")
        return ""
    if args.expression is None:
        raise InputError("an expression is required (or use --batch FILE)")
    return args.expression


def cmd_check(args) -> int:
    rc = _run_config(args)
    _one_expression(args)
    runners = _check_runners(args, rc.horizon, rc.eval_config)
    prop = args.property.lower()
    if prop not in runners:
        raise InputError(
            "unknown property %r; choose from: %s" % (args.property, " ".join(sorted(runners))))

    def run_one(text: str) -> tuple[dict, Verdict]:
        node, A = _eval_expr(text, rc)
        verdict = runners[prop](A)
        payload = {
            "command": "check",
            "property": prop,
            "expression": unparse(node),
            "horizon": rc.horizon,
            "verdict": verdict.to_json(),
            "exit": verdict.exit_code,
        }
        return payload, verdict

    if args.batch is not None:
        return _run_batch(args.batch, lambda text: _with_code(run_one(text)))
    payload, verdict = run_one(args.expression)
    if rc.fmt == "json":
        _print_json(payload)
    else:
        _print_verdict_table(
            [f"property: {prop}", f"expression: {payload['expression']}"], verdict)
    return verdict.exit_code


def _with_code(pair: tuple[dict, Verdict]) -> tuple[dict, int]:
    payload, verdict = pair
    return payload, verdict.exit_code


def _run_batch(path: str, run_one) -> int:
    worst = 0
    for text in _batch_lines(path):
        try:
            payload, code = run_one(text)
        except FelabError as exc:
            payload = {"expression": text, "error": str(exc), "exit": exc.exit_code}
            code = exc.exit_code
        _print_jsonl(payload)
        worst = max(worst, code)
    return worst


# ---------------------------------------------------------------------------
# fe / me
# ---------------------------------------------------------------------------

def cmd_fe(args) -> int:
    rc = _run_config(args)
    node_a, A = _eval_expr(args.expr_a, rc)
    node_b, B = _eval_expr(args.expr_b, rc)
    verdict = embed.fe_prefix_check(A, B, args.prefix, args.kmax, rc.eval_config)

    fam = embed._prefix_of(A, args.prefix, rc.eval_config)
    # cross-check the two decision routes; cap the probe so a certificate
    # refutation is not followed by a full-length scan, and treat matching
    # errors as agreement
    probe_kmax = min(args.kmax, rc.horizon)

    def _route(fn):
        try:
            return ("witness", fn(fam, B, probe_kmax).to_json())
        except FelabError as exc:
            return (type(exc).__name__, str(exc))

    agreement = _route(embed.fe_witness) == _route(embed.fe_fip_oracle)

    refuters: dict[str, object] = {}
    try:
        hit = embed.fe_refute_level(A, B, rc.horizon, rc.eval_config)
        refuters["level"] = hit.to_json() if hit is not None else None
    except InapplicableError as exc:
        refuters["level"] = {"inapplicable": str(exc)}
    hit = embed.fe_refute_residue(fam, B)
    refuters["residue"] = hit.to_json() if hit is not None else None

    payload = {
        "command": "fe",
        "A": unparse(node_a),
        "B": unparse(node_b),
        "horizon": rc.horizon,
        "verdict": verdict.to_json(),
        "oracle_agreement": agreement,
        "refuters": refuters,
        "exit": verdict.exit_code,
    }
    if rc.fmt == "json":
        _print_json(payload)
    else:
        _print_verdict_table([f"A: {payload['A']}", f"B: {payload['B']}"], verdict)
        print(f"oracle agreement: {'yes' if agreement else 'NO'}")
        print("refuters:")
        for line in _kv_lines(refuters, 1):
            print(line)
    return verdict.exit_code


def cmd_me(args) -> int:
    rc = _run_config(args)
    node_a, A = _eval_expr(args.expr_a, rc)
    node_b, B = _eval_expr(args.expr_b, rc)
    verdict = embed.me_check(A, B, args.m, rc.horizon, args.kmax, rc.eval_config)
    payload = {
        "command": "me",
        "A": unparse(node_a),
        "B": unparse(node_b),
        "m": args.m,
        "horizon": rc.horizon,
        "verdict": verdict.to_json(),
        "exit": verdict.exit_code,
    }
    if rc.fmt == "json":
        _print_json(payload)
    else:
        _print_verdict_table(
            [f"A: {payload['A']}", f"B: {payload['B']}", f"m: {args.m}"], verdict)
    return verdict.exit_code


# ---------------------------------------------------------------------------
# diagram
# ---------------------------------------------------------------------------

def _diagram_params(args, horizon: int) -> largeness.PropertyParams:
    overrides = {}
    for value, name in ((args.n, "run_length"), (args.t, "t_max"), (args.L, "ip_len"),
                        (args.N, "divisor_n"), (args.s, "antichain_s"),
                        (args.a_max, "j_a_max"), (args.h_max, "j_h_max"),
                        (args.star_a_max, "star_a_max")):
        if value is not None:
            overrides[name] = value
    return largeness.PropertyParams(horizon=horizon, **overrides)


def cmd_diagram(args) -> int:
    rc = _run_config(args)
    _one_expression(args)
    params = _diagram_params(args, rc.horizon)

    def run_one(text: str) -> tuple[dict, int]:
        node, A = _eval_expr(text, rc)
        report = largeness.diagram_report(A, params, rc.eval_config)
        payload = {
            "command": "diagram",
            "expression": unparse(node),
            "report": report.to_json(),
            "exit": 0,
        }
        return payload, 0

    if args.batch is not None:
        return _run_batch(args.batch, run_one)
    payload, _ = run_one(args.expression)
    if rc.fmt == "json":
        _print_json(payload)
    else:
        print(f"expression: {payload['expression']}")
        print(f"horizon: {params.horizon}")
        for row in payload["report"]["properties"]:
            status = row["verdict"]
            extra = ""
            if status in ("proved", "refuted", "bounded"):
                tail = {k: v for k, v in row.items() if k not in ("name", "verdict")}
                extra = " " + json.dumps(tail, sort_keys=True, separators=(",", ":"))
            elif "reason" in row:
                extra = " " + json.dumps(row["reason"])
            print(f"{row['name']:<10} {status}{extra}")
        for audit in payload["report"]["audits"]:
            print(f"audit [{audit['implication']}]: {audit['status']} "
                  + json.dumps(audit["detail"], sort_keys=True, separators=(",", ":")))
    return 0


# ---------------------------------------------------------------------------
# construct / chain / atlas / parse
# ---------------------------------------------------------------------------

def _emit_set_file(path: str, expr_text: str, horizon: int, values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {expr_text} horizon={horizon}\n")
        for v in values:
            fh.write(f"{v}\n")


def cmd_construct(args) -> int:
    rc = _run_config(args)
    expr_text = "construct(%s)" % ",".join([args.name] + list(args.params))
    node, A = _eval_expr(expr_text, rc)
    members = A.elements()
    payload: dict[str, object] = {
        "command": "construct",
        "name": args.name,
        "params": list(args.params),
        "expression": unparse(node),
        "count": len(members),
        "members": list(members),
        "exit": 0,
    }
    if args.name == "thick_nonmaxstar":
        n_max = int(args.params[0]) if args.params else constructions.thick_auto_nmax(rc.horizon)
        fx = constructions.gen_thick_nonmaxstar(n_max)
        payload["blocks"] = [list(b) for b in fx.blocks]
        payload["avoided"] = list(fx.avoided)
    if args.emit is not None:
        _emit_set_file(args.emit, payload["expression"], rc.horizon, members)
        payload["emitted"] = args.emit
    if rc.fmt == "json":
        _print_json(payload)
    else:
        if args.emit is not None:
            print(f"wrote {len(members)} values to {args.emit}")
        else:
            print(" ".join(str(m) for m in members))
        if "blocks" in payload:
            for n, block in enumerate(payload["blocks"], start=1):
                print(f"block {n}: {' '.join(str(x) for x in block)}")
            print("avoided: " + " ".join(str(x) for x in payload["avoided"]))
    return 0


def cmd_chain(args) -> int:
    rc = _run_config(args)
    result = embed.decreasing_chain(args.depth, args.per_level)
    verified = None
    if args.verify:
        verified = 0
        for level, ref in zip(result.levels[1:], result.refutations):
            target = evaluate(nodes.Explicit(tuple(level)), rc.eval_config)
            res = embed.fe_witness(ref.family, target, args.kmax)
            if not isinstance(res, embed.FeRefutation) or not res.exact:
                print(f"re-check failed for pair {list(ref.family)} at level "
                      f"{verified + 1}", file=sys.stderr)
                return 1
            verified += 1
    payload = {
        "command": "chain",
        "depth": args.depth,
        "per_level": args.per_level,
        "result": result.to_json(),
        "verified_refutations": verified,
        "exit": 0,
    }
    if rc.fmt == "json":
        _print_json(payload)
    else:
        for n, level in enumerate(result.levels):
            print(f"A_{n}: {' '.join(str(x) for x in level)}")
        for n, (pair, ref) in enumerate(zip(result.blocked, result.refutations)):
            print(f"A_{n + 1} dodges pair {{{pair[0]},{pair[1]}}}: "
                  + json.dumps(ref.to_json(), sort_keys=True, separators=(",", ":")))
        if verified is not None:
            print(f"verified {verified}/{len(result.refutations)} refutations")
    return 0


def cmd_atlas(args) -> int:
    rc = _run_config(args)
    report = largeness.poset_atlas(args.n, exhaustive=True if args.exhaustive else None)
    payload = {"command": "atlas", "report": report.to_json(),
               "exit": 0 if not report.violations else 1}
    if rc.fmt == "json":
        _print_json(payload)
    else:
        for line in _kv_lines(report.to_json()):
            print(line)
        print("duality check: " + ("PASS" if not report.violations else "FAIL"))
    return 0 if not report.violations else 1


def _ast_json(node) -> object:
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        out: dict[str, object] = {"kind": type(node).__name__}
        for f in dataclasses.fields(node):
            out[f.name] = _ast_json(getattr(node, f.name))
        return out
    if isinstance(node, tuple):
        return [_ast_json(x) for x in node]
    return node


def _ast_lines(node, indent: int = 0):
    pad = "  " * indent
    scalars = []
    children = []
    for f in dataclasses.fields(node):
        val = getattr(node, f.name)
        if dataclasses.is_dataclass(val):
            children.append(val)
        elif isinstance(val, tuple) and val and dataclasses.is_dataclass(val[0]):
            children.extend(val)
        else:
            scalars.append(f"{f.name}={val if not isinstance(val, tuple) else list(val)}")
    head = type(node).__name__
    yield pad + head + ((" " + " ".join(scalars)) if scalars else "")
    for child in children:
        yield from _ast_lines(child, indent + 1)


def cmd_parse(args) -> int:
    rc = _run_config(args)
    node = _expr_node(args.expression)
    payload = {"command": "parse", "text": unparse(node), "ast": _ast_json(node), "exit": 0}
    if rc.fmt == "json":
        _print_json(payload)
    else:
        print(f"text: {payload['text']}")
        for line in _ast_lines(node):
            print(line)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=int, default=None,
                        help="evaluation horizon (default 100000)")
    common.add_argument("--format", dest="fmt", choices=("table", "json"),
                        default="table", help="output format")
    common.add_argument("--json", action="store_true",
                        help="shorthand for --format json")
    common.add_argument("--cache", default=None,
                        help="sieve cache directory (FELAB_CACHE supplies a default)")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--n", type=int, default=None, help="run length")
    bounds.add_argument("--t", type=int, default=None, help="largest shift")
    bounds.add_argument("--L", type=int, default=None, help="generator count")
    bounds.add_argument("--N", type=int, default=None, help="divisor count")
    bounds.add_argument("--s", type=int, default=None, help="antichain size")
    bounds.add_argument("--a-max", dest="a_max", type=int, default=None,
                        help="largest base value scanned")
    bounds.add_argument("--h-max", dest="h_max", type=int, default=None,
                        help="largest index for function tables")

    top = argparse.ArgumentParser(
        prog="felab",
        description="Bounded-scale deciders for dilation-based set embeddability "
                    "and largeness properties of sets of naturals.")
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", parents=[common, bounds],
                       help="run one largeness property checker")
    p.add_argument("property")
    p.add_argument("expression", nargs="?", default=None)
    p.add_argument("--batch", default=None,
                   help="file of expressions, one per line; prints JSON lines")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fe", parents=[common],
                       help="dilation embeddability of A's prefix into B")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.add_argument("--prefix", type=int, default=16, help="prefix length of A")
    p.add_argument("--kmax", type=int, default=1_000_000, help="largest dilation tried")
    p.set_defaults(func=cmd_fe)

    p = sub.add_parser("me", parents=[common],
                       help="embed every m-subset of A into B")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.add_argument("--m", type=int, required=True, help="subset cardinality")
    p.add_argument("--kmax", type=int, default=1_000_000, help="largest dilation tried")
    p.set_defaults(func=cmd_me)

    p = sub.add_parser("diagram", parents=[common, bounds],
                       help="full largeness report for one set")
    p.add_argument("expression", nargs="?", default=None)
    p.add_argument("--star-a-max", dest="star_a_max", type=int, default=None,
                   help="largest generator for the starred divisor check")
    p.add_argument("--batch", default=None,
                   help="file of expressions, one per line; prints JSON lines")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("construct", parents=[common],
                       help="list a catalog fixture")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.add_argument("--emit", default=None, help="write an explicit set file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("chain", parents=[common],
                       help="strictly decreasing embeddability chain")
    p.add_argument("depth", type=int)
    p.add_argument("per_level", type=int)
    p.add_argument("--verify", action="store_true",
                   help="re-check every logged refutation")
    p.add_argument("--kmax", type=int, default=1_000_000, help="largest dilation tried")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("atlas", parents=[common],
                       help="exact divisor-poset audit on {1..n}")
    p.add_argument("n", type=int)
    p.add_argument("--exhaustive", action="store_true",
                   help="audit all 2^n subsets regardless of size")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("parse", parents=[common],
                       help="dump the syntax tree of an expression")
    p.add_argument("expression")
    p.set_defaults(func=cmd_parse)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
