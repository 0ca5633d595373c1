"""Command line surface: ``abelexp <subcommand> [options]``.

Successful commands print their JSON payload on stdout (sorted keys, so
identical invocations give identical bytes). Notices go to stderr. Errors
print ``{"status": "error", "diagnostics": [...]}`` and exit 2 (domain) or
3 (parse); usage problems exit 1.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import lab
from .cyclotomic import Cyclotomic, default_order, format_cyclotomic
from .dsl import format_expopoly, parse, required_root_orders
from .errors import AbelexpError, ParseError, PreconditionError, StructuralError
from .expopoly import DifferenceOperator, Exponential, ExpoPoly, apply_diff_op, compose_functional, evaluate, translate
from .fourier import (
    Measure,
    Table,
    characters,
    convolve,
    fourier_coefficient,
    measure_convolve,
    synthesize,
)
from .groups import GroupElement, GroupSpec, parse_element, parse_group
from .serialize import (
    cyclotomic_to_json,
    diffop_from_json,
    dumps,
    expopoly_from_json,
    expopoly_to_json,
    measure_from_json,
    table_from_json,
    table_to_json,
)
from .structure import (
    FunctionOracle,
    check_genpoly_blackbox,
    classify,
    degree,
    degree_certificate,
    extract_components_ops,
    extract_components_solve,
    homogeneous_parts,
    n_of_f_bounds,
    polarize,
    spectral_set,
    translate_span,
    unlift,
    lift,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PARSE = 0, 1, 2, 3


@dataclass
class CommandResult:
    status: str  # "ok" | "error"
    payload: Any = None
    diagnostics: list[dict] = field(default_factory=list)
    exit_code: int = EXIT_OK


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which we reserve for domain errors
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# -- inputs ---------------------------------------------------------------------


@dataclass
class Session:
    group: GroupSpec
    order: int
    notices: list[dict]


def _session(args, texts: Sequence[str]) -> Session:
    group = parse_group(args.group)
    notices = args.notices
    needed = [n for t in texts if t for n in required_root_orders(t)]
    base = default_order(group.torsion_orders)
    if args.order is None:
        order = default_order(group.torsion_orders, needed)
        if order != base:
            notices.append({"level": "notice", "message": f"cyclotomic order raised to {order} for zeta({', '.join(map(str, sorted(set(needed))))})"})
    else:
        order = args.order
        if order % group.exponent_lcm:
            raise StructuralError(f"--order {order} must be a multiple of the torsion exponent {group.exponent_lcm}")
        raised = math.lcm(order, *needed) if needed else order
        if raised != order:
            notices.append({"level": "notice", "message": f"cyclotomic order raised from {order} to {raised} for zeta(n) literals"})
            order = raised
    return Session(group, order, notices)


def _file_json(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _load_function(args, extra_texts: Sequence[str] = ()) -> tuple[ExpoPoly, Session]:
    if args.expr is not None and args.file is not None:
        raise UsageError("give either --expr or --file, not both")
    if args.expr is not None:
        sess = _session(args, [args.expr, *extra_texts])
        return parse(args.expr, sess.group, sess.order), sess
    if args.file is not None:
        d = _file_json(args.file)
        if "expr" in d:
            args.group = d.get("group", args.group)
            if args.order is None and d.get("order") is not None:
                args.order = int(d["order"])
            sess = _session(args, [d["expr"], *extra_texts])
            return parse(d["expr"], sess.group, sess.order), sess
        f = expopoly_from_json(d)
        args.group = str(f.group)
        args.order = f.order
        sess = _session(args, list(extra_texts))
        if sess.order != f.order:
            f = f.to_order(sess.order)
        return f, sess
    raise UsageError("an input function is required: --expr TEXT or --file PATH")


def _load_table(args) -> tuple[Table, Session]:
    if args.file is not None and args.expr is None:
        d = _file_json(args.file)
        if "values" in d:
            t = table_from_json(d)
            return t, Session(t.group, t.order, args.notices)
    f, sess = _load_function(args)
    return Table.from_expopoly(f), sess


def _split_top(text: str) -> list[str]:
    """Split on commas outside brackets/parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_exponentials(text: str, sess: Session) -> list[Exponential]:
    out = []
    for piece in _split_top(text):
        h = parse(piece, sess.group, sess.order)
        if h.vector_dim != 1 or len(h.terms) != 1 or h.terms[0][1].degree != 0:
            raise PreconditionError(f"{piece!r} is not a single exponential")
        out.append(h.terms[0][0])
    return out


def _element(text: str, group: GroupSpec) -> GroupElement:
    try:
        return parse_element(text, group)
    except ValueError as exc:
        if isinstance(exc, AbelexpError):
            raise
        raise StructuralError(f"bad group element {text!r}: expected e.g. '1,2;3'") from None


# -- outputs --------------------------------------------------------------------


def _fn(f: ExpoPoly) -> dict:
    return {"text": format_expopoly(f), "expopoly": expopoly_to_json(f)}


def _vec(v: Sequence[Cyclotomic]) -> dict:
    return {"text": [format_cyclotomic(c) for c in v], "exact": [cyclotomic_to_json(c) for c in v]}


def _exp_text(m: Exponential) -> str:
    fv = ", ".join(format_cyclotomic(v) for v in m.free_values)
    tv = ", ".join(format_cyclotomic(v) for v in m.torsion_values)
    return f"exp[{fv}; {tv}]" if tv else f"exp[{fv};]"


# -- subcommands ----------------------------------------------------------------


def cmd_fmt(args):
    f, sess = _load_function(args)
    return {"text": format_expopoly(f), "group": str(sess.group), "order": sess.order}, sess


def cmd_eval(args):
    f, sess = _load_function(args)
    if not args.at:
        raise UsageError("eval needs at least one --at point")
    out = []
    for p in args.at:
        v = evaluate(f, _element(p, sess.group))
        out.append({"point": p, **_vec(v), "complex": [[c.to_complex().real, c.to_complex().imag] for c in v]})
    return {"values": out}, sess


def cmd_translate(args):
    f, sess = _load_function(args)
    g = _element(args.by, sess.group)
    return _fn(translate(f, g)), sess


def cmd_diff(args):
    f, sess = _load_function(args)
    if args.op_file:
        d = diffop_from_json(_file_json(args.op_file))
        if d.group != sess.group:
            raise StructuralError("difference operator lives on another group")
        if d.order != sess.order:
            raise StructuralError("difference operator uses another cyclotomic order")
    else:
        if not args.by:
            raise UsageError("diff needs --by g (repeatable) or --op-file")
        d = DifferenceOperator.identity(sess.group, sess.order)
        for b in args.by:
            d = DifferenceOperator.delta(_element(b, sess.group), sess.order) @ d
    return _fn(apply_diff_op(d, f)), sess


def cmd_degree(args):
    f, sess = _load_function(args)
    return {"degree": degree(f)}, sess


def cmd_classify(args):
    f, sess = _load_function(args)
    out = classify(f).to_dict()
    if args.bounds:
        out["n_of_f_bounds"] = list(n_of_f_bounds(f, seed=args.seed)) if out["is_generalized"] else None
    return out, sess


def cmd_dim(args):
    f, sess = _load_function(args)
    span = translate_span(f)
    out = {"dim": span.dim}
    if args.basis:
        out["basis"] = [format_expopoly(b) for b in span.basis]
    return out, sess


MAX_EXPONENTIALS, MAX_S = 4, 5


def _desk_limits(n: int, s: int) -> None:
    # operator sets grow exponentially in s
    if n > MAX_EXPONENTIALS or s > MAX_S:
        raise PreconditionError(f"decompose is limited to n <= {MAX_EXPONENTIALS} exponentials and s <= {MAX_S}; got n = {n}, s = {s}")


def cmd_decompose(args):
    f, sess = _load_function(args, [args.ms])
    ms = _parse_exponentials(args.ms, sess)
    _desk_limits(len(ms), args.s)
    src = FunctionOracle.from_expopoly(f) if args.oracle else f
    fn = extract_components_ops if args.method == "ops" else extract_components_solve
    comps = fn(src, ms, args.s)
    return {
        "method": args.method,
        "exponentials": [_exp_text(m) for m in ms],
        "components": [_fn(c) for c in comps],
    }, sess


def cmd_spectral(args):
    f, sess = _load_function(args)
    return {
        "spectral_set": [
            {"exponential": _exp_text(m), "basis": [_vec(e) for e in basis]} for m, basis in spectral_set(f)
        ]
    }, sess


def cmd_certificate(args):
    f, sess = _load_function(args)
    u = degree_certificate(f)
    return {"u": _vec(u), "degree": degree(f), "degree_u_f": degree(compose_functional(f, u))}, sess


def cmd_homog(args):
    f, sess = _load_function(args)
    n = args.n if args.n is not None else degree(f)
    x = _element(args.at, sess.group)
    parts = homogeneous_parts(f, n, x)
    return {"n": n, "point": args.at, "parts": [_vec(p) for p in parts]}, sess


def cmd_polarize(args):
    f, sess = _load_function(args)
    n = degree(f)
    i = args.i
    if not 0 <= i <= max(n, 0):
        raise PreconditionError(f"slot count {i} outside 0..{n}")
    part = FunctionOracle(f.group, f.vector_dim, f.order, lambda x: homogeneous_parts(f, n, x)[i])
    xs = [_element(p, sess.group) for p in (args.at or [])]
    return {"i": i, "points": list(args.at or []), "value": _vec(polarize(part, i, xs))}, sess


def cmd_lift(args):
    f, sess = _load_function(args, [args.g])
    g = parse(args.g, sess.group, sess.order)
    return _fn(lift(f, g)), sess


def cmd_unlift(args):
    F, sess = _load_function(args)
    fs, g = unlift(F, args.k)
    return {"fs": _fn(fs), "g": _fn(g)}, sess


def cmd_synth(args):
    t, sess = _load_table(args)
    s = synthesize(t)
    coeffs = []
    for gamma in characters(t.group, t.order):
        e = fourier_coefficient(t, gamma)
        if any(e):
            coeffs.append({"dual_index": list(gamma.dual_index), "e": _vec(e)})
    inversion = all(tuple(evaluate(s, x)) == tuple(t(x)) for x in t.group.elements())
    return {"synthesis": _fn(s), "coefficients": coeffs, "exact_inversion": inversion}, sess


def cmd_conv(args):
    t, sess = _load_table(args)
    if args.measure_file:
        mu = measure_from_json(_file_json(args.measure_file))
        return {"table": table_to_json(measure_convolve(mu, t))}, sess
    if args.with_expr is None:
        raise UsageError("conv needs --with EXPR or --measure-file PATH")
    g = Table.from_expopoly(parse(args.with_expr, sess.group, sess.order))
    return {"table": table_to_json(convolve(t, g))}, sess


def cmd_lab_sweep(args):
    lams = [complex(v.replace("i", "j")) for v in _split_top(args.lambdas)]
    targets = [int(v) for v in _split_top(args.targets)]
    inst = lab.build_counterexample(args.depth, lab.required_window(args.max_translates))
    reports = [
        lab.residual_sweep(inst, lam, lab.unit(args.depth, n), args.max_translates) for lam in lams for n in targets
    ]
    if args.csv:
        Path(args.csv).write_text(lab.reports_to_csv(reports), encoding="utf-8")
    return {"reports": [r.to_dict() for r in reports]}, Session(GroupSpec(1, ()), 4, args.notices)


def run_checks(f: ExpoPoly, seed: int = 0) -> dict[str, bool]:
    """Invariant suite on one function; names map to pass/fail."""
    rng = random.Random(seed)
    G = f.group
    checks: dict[str, bool] = {}

    def rand_el(box=3):
        return G.element([rng.randint(-box, box) for _ in range(G.free_rank)], [rng.randrange(n) for n in G.torsion_orders])

    checks["print_parse_roundtrip"] = parse(format_expopoly(f), G, f.order) == f
    checks["json_roundtrip"] = expopoly_from_json(json.loads(dumps(f))) == f
    ok = True
    for _ in range(5):
        g, x = rand_el(), rand_el()
        ok &= tuple(evaluate(translate(f, g), x)) == tuple(evaluate(f, x + g))
    checks["translate_pointwise"] = ok
    rep = classify(f)  # asserts the implication chain on construction
    checks["classification_chain"] = len({rep.is_generalized, rep.is_polynomial, rep.is_w_polynomial, rep.is_local_polynomial}) == 1
    span = translate_span(f)
    checks["translate_span_closed"] = all(span.contains(translate(f, rand_el(5))) for _ in range(3))
    if f.is_generalized_polynomial():
        d = degree(f)
        checks["blackbox_degree"] = check_genpoly_blackbox(f, max(d, 0), trials=10, box=4, seed=seed)
        ok = True
        for _ in range(3):
            x = rand_el()
            parts = homogeneous_parts(f, max(d, 0), x)
            tot = [sum((p[j] for p in parts), Cyclotomic.zero(f.order)) for j in range(f.vector_dim)]
            ok &= tuple(tot) == tuple(evaluate(f, x))
        checks["homogeneous_reassembly"] = ok
        if not f.is_zero():
            checks["deg_below_dim"] = d < span.dim
            u = degree_certificate(f)
            checks["certificate"] = degree(compose_functional(f, u)) == d
    ms = f.exponentials()
    s = sum(p.degree for _, p in f.terms)
    if ms and len(ms) <= MAX_EXPONENTIALS and s <= MAX_S:
        ops = extract_components_ops(f, ms, s)
        sol = extract_components_solve(f, ms, s)
        checks["decompose_backends_agree"] = ops == sol
        checks["decompose_reassembles"] = sum(ops[1:], ops[0]) == f
    if ms:
        checks["spectral_nonempty"] = all(basis for _, basis in spectral_set(f))
    if G.is_finite:
        t = Table.from_expopoly(f)
        s = synthesize(t)
        checks["finite_synthesis"] = all(tuple(evaluate(s, x)) == tuple(t(x)) for x in G.elements())
    return checks


def cmd_check(args):
    f, sess = _load_function(args)
    checks = run_checks(f, args.seed)
    ok = all(checks.values())
    return {"checks": checks, "ok": ok, "seed": args.seed}, sess


COMMANDS = {
    "eval": cmd_eval,
    "translate": cmd_translate,
    "diff": cmd_diff,
    "degree": cmd_degree,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "dim": cmd_dim,
    "spectral": cmd_spectral,
    "certificate": cmd_certificate,
    "homog": cmd_homog,
    "polarize": cmd_polarize,
    "lift": cmd_lift,
    "unlift": cmd_unlift,
    "synth": cmd_synth,
    "conv": cmd_conv,
    "lab-sweep": cmd_lab_sweep,
    "fmt": cmd_fmt,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abelexp", description="Exact exponential polynomials on finitely generated abelian groups.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="SUBCOMMAND")

    def cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        if name != "lab-sweep":
            sp.add_argument("--expr", help="function in the expression syntax")
            sp.add_argument("--file", help="JSON input (ExpoPoly, Table, or {\"expr\", \"group\", \"order\"})")
            sp.add_argument("--group", default="Z", help='group literal such as "Z^2xZ4" (default Z)')
            sp.add_argument("--order", type=int, default=None, help="cyclotomic order N (default lcm(4, torsion))")
        return sp

    cmd("fmt", "print the canonical form")
    cmd("eval", "evaluate at points").add_argument("--at", action="append", help="group element, e.g. '1,2;3'")
    cmd("translate", "translate by a group element").add_argument("--by", required=True)
    sp = cmd("diff", "apply Delta_{g1}...Delta_{gk} or a JSON difference operator")
    sp.add_argument("--by", action="append")
    sp.add_argument("--op-file")
    cmd("degree", "degree of a generalized polynomial")
    sp = cmd("classify", "classification flags, degree and dim L_f")
    sp.add_argument("--bounds", action="store_true", help="also report bounds on N(f)")
    sp.add_argument("--seed", type=int, default=0)
    cmd("dim", "dimension of the translate span").add_argument("--basis", action="store_true")
    sp = cmd("decompose", "split f into its p_i m_i components")
    sp.add_argument("--ms", required=True, help='exponentials, e.g. "exp[1;],exp[2;]"')
    sp.add_argument("--s", type=int, required=True, help="bound on the sum of component degrees")
    sp.add_argument("--method", choices=["ops", "solve"], default="ops")
    sp.add_argument("--oracle", action="store_true", help="treat f as a black box")
    cmd("spectral", "exponential monomials m e inside the translate span")
    cmd("certificate", "coordinate functional u with deg(u o f) = deg f")
    sp = cmd("homog", "homogeneous parts f_0(x)..f_n(x)")
    sp.add_argument("--n", type=int)
    sp.add_argument("--at", required=True)
    sp = cmd("polarize", "symmetric multi-additive form of the degree-i part")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--at", action="append")
    cmd("lift", "F(t, x) = sum t_j f_j(x) + g(x)").add_argument("--g", default="0")
    cmd("unlift", "recover (f, g) from a lifted F").add_argument("--k", type=int, required=True)
    cmd("synth", "finite Fourier synthesis")
    sp = cmd("conv", "convolution with a scalar function or a measure")
    sp.add_argument("--with", dest="with_expr")
    sp.add_argument("--measure-file")
    sp = cmd("lab-sweep", "residual sweep for the factorial counterexample")
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--lambdas", default="1,2,-1")
    sp.add_argument("--targets", default="1,3", help="basis indices n of the targets u_n")
    sp.add_argument("--max-translates", type=int, default=6)
    sp.add_argument("--csv")
    sp = cmd("check", "run the invariant suite on one input")
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv: Sequence[str]) -> CommandResult:
    parser = build_parser()
    notices: list[dict] = []
    try:
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as exc:  # --help
            return CommandResult("ok", None, [], EXIT_OK if not exc.code else EXIT_USAGE)
        args.notices = notices
        if args.command is None:
            raise UsageError(parser.format_usage() + "abelexp: error: a subcommand is required")
        payload, sess = COMMANDS[args.command](args)
    except UsageError as exc:
        return CommandResult("error", None, notices + [{"level": "error", "message": str(exc)}], EXIT_USAGE)
    except ParseError as exc:
        return CommandResult(
            "error", None, notices + [{"level": "error", "message": exc.message, "line": exc.line, "column": exc.column}], EXIT_PARSE
        )
    except (AbelexpError, ValueError, ZeroDivisionError) as exc:
        return CommandResult("error", None, notices + [{"level": "error", "message": str(exc), "kind": type(exc).__name__}], EXIT_DOMAIN)
    except OSError as exc:
        return CommandResult("error", None, notices + [{"level": "error", "message": str(exc), "kind": type(exc).__name__}], EXIT_DOMAIN)
    code = EXIT_OK
    if args.command == "check" and not payload["ok"]:
        code = EXIT_DOMAIN
    return CommandResult("ok" if code == EXIT_OK else "error", payload, notices, code)


def main(argv: Sequence[str] | None = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    for d in res.diagnostics:
        if d.get("level") == "notice":
            print(f"notice: {d['message']}", file=sys.stderr)
    if res.payload is not None:
        sys.stdout.write(dumps(res.payload))
    elif res.status == "error":
        errors = [d for d in res.diagnostics if d.get("level") == "error"]
        sys.stdout.write(dumps({"status": "error", "diagnostics": res.diagnostics}))
        for d in errors:
            where = f" (line {d['line']}, column {d['column']})" if "line" in d else ""
            print(f"error: {d['message']}{where}", file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
