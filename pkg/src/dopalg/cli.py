"""Command-line front end.

Exit codes: 0 success, 1 syntax error, 2 semantic error (a precondition
fails, or the derivation is not integrable), 3 verification failure.
"""

import argparse
import json
import sys

from . import randgen
from .automorphisms import NotIntegrable, generator_check, one_param_group
from .derivations import (
    D1Derivation,
    DDerivation,
    Divergence,
    SDerivation,
    check_derivation_property,
    normalize_d,
    normalize_s,
    square_map,
)
from .errors import DopalgError, ParseError
from .flows import AffineMap, FlowField, div_flow_integral, div_of_flow, flow_at, jacobian_cocycle
from .lemma1 import VARIANTS, lemma1_bruteforce
from .scalar import Mode, format_scalar, parse_scalar
from .symbols import ClosedOneForm, poisson_bracket
from .tables import verify_commutation_tables
from .textio import infer_dim, read_matrix, read_oneform, read_operator, read_symbol, read_vector
from .weyl import conjugation, full_symbol, quantize_standard, symbol_of_order, weyl_commutator

EXIT_OK, EXIT_SYNTAX, EXIT_SEMANTIC, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; here 2 means a semantic error
    def error(self, message):
        raise UsageError(message)


class Outcome:
    def __init__(self, result, code=EXIT_OK, witnesses=None):
        self.result = result
        self.code = code
        self.witnesses = witnesses or []


# helpers


def _mode(args):
    return Mode.APPROX if args.approx else Mode.EXACT


def _texts(args, names):
    out = []
    for name in names:
        v = getattr(args, name, None)
        if isinstance(v, str):
            out.append(v)
        elif isinstance(v, (list, tuple)):
            out.extend(s for s in v if isinstance(s, str))
    return out


_EXPR_ARGS = ("symbols", "operators", "expr", "Y", "P", "omega", "weight", "on", "field")


def _dim(args):
    return infer_dim(_texts(args, _EXPR_ARGS), args.dim)


def _scalar(text, mode):
    try:
        return parse_scalar(text, mode)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _derivation(args, n, mode):
    fam = args.family
    omega = read_oneform(args.omega, n, mode) if args.omega else ClosedOneForm.zero(n, mode)
    kappa = _scalar(args.kappa, mode)
    if fam == "d1":
        weight = read_symbol(args.weight, n, mode) if args.weight else None
        div = Divergence(weight) if weight is not None else Divergence.standard(n, mode)
        return D1Derivation(read_operator(args.Y or "0", n, mode), kappa, _scalar(args.lam, mode), omega, div)
    if fam == "s":
        return SDerivation(read_symbol(args.P or "0", n, mode), kappa, omega)
    if fam == "d":
        return DDerivation(read_operator(args.P or "0", n, mode), omega)
    raise ParseError(f"unknown family {fam!r}")


def describe(c):
    """Structured text record of a derivation: family tag plus named fields."""
    if isinstance(c, D1Derivation):
        return (f"d1: Y = {c.Y}; kappa = {format_scalar(c.kappa)}; lambda = {format_scalar(c.lam)}; "
                f"omega = {c.omega}; weight = {c.div.weight}")
    if isinstance(c, SDerivation):
        return f"s: P = {c.P}; kappa = {format_scalar(c.kappa)}; omega = {c.omega}"
    return f"d: P = {c.P}; omega = {c.omega}"


def _element(args, family, n, mode):
    if family == "s":
        return read_symbol(args.on, n, mode)
    return read_operator(args.on, n, mode)


def _probes(family, rng, n, count, mode):
    if family == "s":
        return [randgen.random_symbol(rng, n, 2, 2, mode=mode) for _ in range(count)]
    if family == "d1":
        return [randgen.random_first_order(rng, n, 2, mode=mode) for _ in range(count)]
    return [randgen.random_op(rng, n, 2, 2, mode=mode) for _ in range(count)]


# subcommands


def cmd_bracket(args):
    n, mode = _dim(args), _mode(args)
    if args.symbols:
        a, b = (read_symbol(s, n, mode) for s in args.symbols)
        return Outcome(str(poisson_bracket(a, b)))
    a, b = (read_operator(s, n, mode) for s in args.operators)
    return Outcome(str(weyl_commutator(a, b)))


def cmd_compose(args):
    n, mode = _dim(args), _mode(args)
    if args.symbols:
        a, b = (read_symbol(s, n, mode) for s in args.symbols)
    else:
        a, b = (read_operator(s, n, mode) for s in args.operators)
    return Outcome(str(a * b))


def cmd_symbol(args):
    d = read_operator(args.expr, _dim(args), _mode(args))
    if args.order is None:
        return Outcome(str(full_symbol(d)))
    return Outcome(str(symbol_of_order(d, args.order)))


def cmd_quantize(args):
    return Outcome(str(quantize_standard(read_symbol(args.expr, _dim(args), _mode(args)))))


def cmd_conjugate(args):
    return Outcome(str(conjugation(read_operator(args.expr, _dim(args), _mode(args)))))


def cmd_derive(args):
    n, mode = _dim(args), _mode(args)
    c = _derivation(args, n, mode)
    if args.on is None:
        return Outcome(describe(c))
    return Outcome(str(c.apply(_element(args, args.family, n, mode))))


def cmd_normalize(args):
    n, mode = _dim(args), _mode(args)
    c = _derivation(args, n, mode)
    if args.family == "s":
        return Outcome(describe(normalize_s(c)))
    if args.family == "d":
        return Outcome(describe(normalize_d(c)))
    return Outcome(describe(c))


def cmd_check_derivation(args):
    n = _dim(args)
    if args.family == "square":
        apply, algebra = square_map, "S"
    else:
        if args.approx:
            raise DopalgError("the derivation property is checked in exact mode only")
        c = _derivation(args, n, Mode.EXACT)
        apply, algebra = c.apply, {"d1": "D1", "s": "S", "d": "D"}[args.family]
    report = check_derivation_property(apply, algebra, args.trials, n, args.seed)
    text = f"{report.trials - report.failure_count}/{report.trials} pairs pass"
    return Outcome(text, EXIT_OK if report.passed else EXIT_VERIFY, report.failures)


def cmd_verify_tables(args):
    report = verify_commutation_tables(_dim(args), args.trials, args.seed)
    lines = [f"{'ok  ' if v == 0 else 'FAIL'} {name}" for name, v in report.results.items()]
    return Outcome("\n".join(lines), EXIT_OK if report.passed else EXIT_VERIFY, report.witnesses)


def cmd_lemma1(args):
    try:
        R, M = (int(v) for v in args.caps.split(","))
    except ValueError as exc:
        raise ParseError(f"--caps expects ORDER,DEGREE, got {args.caps!r}") from exc
    report = lemma1_bruteforce(args.variant, args.i, args.k, args.dim or 1, R, M)
    text = report.summary() + "\nexpected basis: " + ", ".join(report.expected)
    return Outcome(text, EXIT_OK if report.passed else EXIT_VERIFY, report.witnesses)


def _field(args, n, mode):
    return FlowField.from_vector_field(read_operator(args.field, n, mode))


def cmd_flow(args):
    n, mode = _dim(args), _mode(args)
    phi = flow_at(_field(args, n, mode), _scalar(args.t, mode), mode)
    return Outcome(str(phi))


def cmd_jacobian(args):
    mode = _mode(args)
    A = read_matrix(args.A, mode)
    n = len(A)
    b = read_vector(args.b, mode) if args.b else (mode.zero,) * n
    weight = read_symbol(args.weight, n, mode) if args.weight else None
    div = Divergence(weight) if weight is not None else Divergence.standard(n, mode)
    J = jacobian_cocycle(AffineMap(A, b, mode), div)
    return Outcome(f"J = exp({J.exponent}) * {format_scalar(J.scale)}; Div = {J.log()}")


def cmd_div_flow(args):
    n, mode = _dim(args), _mode(args)
    Y = _field(args, n, mode)
    t = _scalar(args.t, mode)
    weight = read_symbol(args.weight, n, mode) if args.weight else None
    div = Divergence(weight) if weight is not None else Divergence.standard(n, mode)
    lhs = div_of_flow(Y, t, div, mode).as_poly()
    rhs = div_flow_integral(Y, t, div, mode)
    ok = lhs == rhs if mode is Mode.EXACT else lhs.max_abs_diff(rhs) <= 1e-10
    text = f"Div(Exp(tY)) = {lhs}\nintegral     = {rhs}"
    witnesses = [] if ok else [{"div": str(lhs), "integral": str(rhs)}]
    return Outcome(text, EXIT_OK if ok else EXIT_VERIFY, witnesses)


def cmd_group(args):
    n, mode = _dim(args), _mode(args)
    c = _derivation(args, n, mode)
    g = one_param_group(c, _scalar(args.t, mode), mode)
    if isinstance(g, NotIntegrable):
        return Outcome(str(g), EXIT_SEMANTIC)
    if args.on is not None:
        return Outcome(str(g.apply(_element(args, args.family, n, mode))))
    return Outcome(str(g))


def cmd_generator_check(args):
    n, mode = _dim(args), _mode(args)
    c = _derivation(args, n, mode)
    speed = 2 if args.perturb else 1
    probe = one_param_group(c, 0, mode)
    if isinstance(probe, NotIntegrable):
        return Outcome(str(probe), EXIT_SEMANTIC)
    rng = randgen.make_rng(args.seed)
    probes = _probes(args.family, rng, n, args.probes, mode)
    regime = "approx" if mode is Mode.APPROX else "exact"
    report = generator_check(lambda t: one_param_group(c, speed * t, mode), c.apply, probes, regime)
    text = f"{regime}: {report.probes - len(report.failures)}/{report.probes} probes match"
    return Outcome(text, EXIT_OK if report.passed else EXIT_VERIFY, report.failures)


# argument parsing


def _add_derivation_args(p, families=("d1", "s", "d")):
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--Y", help="vector field of a d1 derivation, e.g. 'x2*d1'")
    p.add_argument("--P", help="symbol (family s) or operator (family d)")
    p.add_argument("--kappa", default="0")
    p.add_argument("--lam", "--lambda", dest="lam", default="0")
    p.add_argument("--omega", help="closed 1-form, e.g. 'x2*dx1 + x1*dx2'")
    p.add_argument("--weight", help="density weight g for e^g|dx| (family d1)")


def _add_global_args(p, default):
    def d(v):
        return v if default is None else default

    p.add_argument("--dim", type=int, default=d(None), help="dimension n (default: largest index in the input)")
    p.add_argument("--approx", action="store_true", default=d(False), help="floating point instead of exact rationals")
    p.add_argument("--json", action="store_true", default=d(False), help="structured output")
    p.add_argument("--seed", type=int, default=d(0))


def build_parser():
    top = _Parser(prog="dopalg", description="Differential operators, symbols and their derivations on R^n.")
    _add_global_args(top, None)
    # the same flags are accepted after the subcommand; SUPPRESS keeps them
    # from overwriting values given before it
    common = _Parser(add_help=False)
    _add_global_args(common, argparse.SUPPRESS)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("bracket", help="Poisson bracket of symbols or commutator of operators")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--symbols", nargs=2, metavar="S")
    g.add_argument("--operators", nargs=2, metavar="D")
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("compose", help="product of symbols or composition of operators")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--symbols", nargs=2, metavar="S")
    g.add_argument("--operators", nargs=2, metavar="D")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("symbol", help="full symbol, or the class in S_i with --order i")
    p.add_argument("expr")
    p.add_argument("--order", type=int)
    p.set_defaults(fn=cmd_symbol)

    p = sub.add_parser("quantize", help="standard (x left of d) quantization of a symbol")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_quantize)

    p = sub.add_parser("conjugate", help="formal adjoint with the sign flip, C(D) = -D^t")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_conjugate)

    p = sub.add_parser("derive", help="describe a derivation or apply it with --on")
    _add_derivation_args(p)
    p.add_argument("--on")
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("normalize", help="normalized representative of a derivation")
    _add_derivation_args(p)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("check-derivation", help="random test of C[A,B] = [CA,B] + [A,CB]")
    _add_derivation_args(p, ("d1", "s", "d", "square"))
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_check_derivation)

    p = sub.add_parser("verify-tables", help="check the commutation relations of the basic derivations")
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(fn=cmd_verify_tables)

    p = sub.add_parser("lemma1", help="truncated brute-force check of the filtration characterization")
    p.add_argument("--variant", choices=VARIANTS, default="D")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--caps", default="3,3", help="ORDER,DEGREE truncation caps")
    p.set_defaults(fn=cmd_lemma1)

    p = sub.add_parser("flow", help="Exp(tY) for an affine vector field Y")
    p.add_argument("--field", required=True)
    p.add_argument("--t", required=True)
    p.set_defaults(fn=cmd_flow)

    p = sub.add_parser("jacobian", help="Jacobian cocycle of an affine map")
    p.add_argument("--A", required=True, help="matrix, rows separated by ';'")
    p.add_argument("--b", help="offset vector")
    p.add_argument("--weight")
    p.set_defaults(fn=cmd_jacobian)

    p = sub.add_parser("div-flow", help="compare Div(Exp(tY)) with the integral of div Y along the flow")
    p.add_argument("--field", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--weight")
    p.set_defaults(fn=cmd_div_flow)

    p = sub.add_parser("group", help="one-parameter group generated by a derivation")
    _add_derivation_args(p)
    p.add_argument("--t", required=True)
    p.add_argument("--on")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("generator-check", help="check d/dt Phi_t at 0 equals the derivation")
    _add_derivation_args(p)
    p.add_argument("--probes", type=int, default=5)
    p.add_argument("--perturb", action="store_true", help="run Phi_2t instead (must fail)")
    p.set_defaults(fn=cmd_generator_check)
    return top


def _emit(args, argv, outcome, out):
    if getattr(args, "json", False):
        payload = {
            "input": {"argv": list(argv), "command": getattr(args, "command", None)},
            "result": outcome.result,
            "mode": "approx" if getattr(args, "approx", False) else "exact",
            "seed": getattr(args, "seed", None),
            "witnesses": outcome.witnesses,
            "exit": outcome.code,
        }
        print(json.dumps(payload, default=str), file=out)
    else:
        print(outcome.result, file=out)
        for w in outcome.witnesses:
            print(f"witness: {json.dumps(w, default=str)}", file=out)


def run(argv, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        outcome = args.fn(args)
    except (UsageError, ParseError) as exc:
        if args is not None and args.json:
            _emit(args, argv, Outcome(f"syntax error: {exc}", EXIT_SYNTAX), out)
        else:
            print(f"syntax error: {exc}", file=err)
        return EXIT_SYNTAX
    except (DopalgError, ZeroDivisionError) as exc:
        if args.json:
            _emit(args, argv, Outcome(f"error: {exc}", EXIT_SEMANTIC), out)
        else:
            print(f"error: {exc}", file=err)
        return EXIT_SEMANTIC
    _emit(args, argv, outcome, out)
    return outcome.code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
