"""Command-line front end.

Exit codes: 0 success, 2 not geometrically reducible, 3 no factorization at
the requested point (or no centralizer within the level cap), 4 parse or
usage error, 5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .boussinesq import Potentials, assemble_P, centralizer_basis, solve_constants
from .curvepoly import MU
from .errors import (
    BsqError,
    DivisionByZero,
    InexactDivision,
    LogarithmicPart,
    NoCentralizerFound,
    NotOnCurve,
    NotXFree,
    ParseError,
    UnboundConstant,
    ZeroDenominator,
)
from .exactfield import RatFunc
from .spectral import (
    Diagnostic,
    CurvePoint,
    Parametrization,
    planar_factor,
    rational_roots,
    spectral_curve,
    spf,
    subresultants,
    univariate_at,
    verify_spectral_factorization,
)
from .resultants import SpectralPair, diff_resultant

SCHEMA = "bsqfactor.report/1"

EXIT_OK = 0
EXIT_NOT_REDUCIBLE = 2
EXIT_NO_FACTOR = 3
EXIT_USAGE = 4
EXIT_INTERNAL = 5


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, var):
        self.text = text
        self.var = var
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}", tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "num":
                raise ParseError("exponent must be an integer", tok[2], self.text)
            return Pow(base, sign * int(tok[1]))
        return base

    def base(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return Num(int(value))
        if kind == "ident":
            return Var(value) if value == self.var else Const(value)
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos, self.text)


def parse(text: str, var: str = "x"):
    """Parse ``text`` into an expression tree; ``var`` names the free variable."""
    return _Parser(text, var).parse()


def evaluate(node, bindings=None) -> RatFunc:
    bindings = bindings or {}
    if isinstance(node, Num):
        return RatFunc(node.value)
    if isinstance(node, Var):
        return RatFunc.x()
    if isinstance(node, Const):
        if node.name not in bindings:
            raise UnboundConstant(f"constant {node.name!r} has no value; use --const {node.name}=p/q")
        return RatFunc(Fraction(bindings[node.name]))
    if isinstance(node, Neg):
        return -evaluate(node.arg, bindings)
    if isinstance(node, Pow):
        base = evaluate(node.base, bindings)
        if node.exp < 0:
            if base.is_zero():
                raise DivisionByZero("negative power of zero")
            return base.inverse() ** (-node.exp)
        return base ** node.exp
    left = evaluate(node.left, bindings)
    right = evaluate(node.right, bindings)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right.is_zero():
        raise DivisionByZero("division by zero")
    return left / right


def parse_expr(text: str, bindings=None, var: str = "x") -> RatFunc:
    return evaluate(parse(text, var), bindings)


def parse_rational(text: str) -> Fraction:
    try:
        value = parse_expr(text, var="\0")
    except UnboundConstant:
        value = None
    if value is None or not value.is_constant():
        raise ParseError(f"{text!r} is not a rational number", None, text)
    return value.constant_value()


def parse_param(text: str, bindings=None):
    """Comma separated polynomial components in the parameter ``t``."""
    comps = []
    for part in text.split(","):
        f = parse_expr(part, bindings, var="t")
        if not f.is_polynomial():
            raise ParseError(f"component {part.strip()!r} is not a polynomial in t", None, text)
        comps.append(f.num)
    return Parametrization(tuple(comps))


# -- report helpers ----------------------------------------------------------

def rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _bindings(pairs):
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ParseError(f"--const expects name=p/q, got {item!r}", None, item)
        name, value = item.split("=", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or name in ("x", "t"):
            raise ParseError(f"invalid constant name {name!r}", None, item)
        out[name] = parse_rational(value)
    return out


def _potentials(args, consts):
    using_u = args.u0 is not None or args.u1 is not None
    using_q = args.q0 is not None or args.q1 is not None
    if using_u and using_q:
        raise ParseError("give either --u0/--u1 or --q0/--q1, not both", None, None)
    if using_q:
        return Potentials.from_q(parse_expr(args.q0 or "0", consts), parse_expr(args.q1 or "0", consts))
    return Potentials.from_u(parse_expr(args.u0 or "0", consts), parse_expr(args.u1 or "0", consts))


def _input_echo(pot, consts):
    return {
        "u0": str(pot.u0),
        "u1": str(pot.u1),
        "q0": str(pot.q0),
        "q1": str(pot.q1),
        "constants": {k: rat(v) for k, v in sorted(consts.items())},
        "operator": str(pot.operator()),
    }


def _basis_doc(basis):
    return {
        "A1": {
            "operator": str(basis.A1),
            "order": basis.A1.order,
            "level": basis.n1,
            "constants": [rat(c) for c in basis.c1],
        },
        "A2": {
            "operator": str(basis.A2),
            "order": basis.A2.order,
            "level": basis.n2,
            "constants": [rat(c) for c in basis.c2],
        },
    }


def _curve_doc(curve):
    n1, n2, n3 = curve.normalized()
    return {
        "f1": str(n1),
        "f2": str(n2),
        "f3": str(n3),
        "raw": {"f1": str(curve.f1), "f2": str(curve.f2), "f3": str(curve.f3)},
        "orders": list(curve.orders),
        "verdict": curve.verdict,
        "certificate": None if curve.certificate is None else str(curve.certificate),
    }


def _point_doc(p):
    doc = {"lambda0": rat(p.lambda0), "mu0": rat(p.mu0)}
    if p.gamma0 is not None:
        doc["gamma0"] = rat(p.gamma0)
    return doc


def _result_doc(res):
    return {
        "point": _point_doc(res.point),
        "phi0": str(res.phi0),
        "right_factor": str(res.right_factor),
        "quotient": str(res.quotient),
        "verified": res.verified,
        "verification": res.checks.as_dict() if res.checks else None,
        "candidates": [_point_doc(p) for p in res.candidates],
        "caveats": list(res.caveats),
    }


# -- text rendering ----------------------------------------------------------

def _text(doc):
    lines = []

    def emit(key, value, indent=0):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list):
            if not value:
                lines.append(f"{pad}{key}: []")
            elif all(not isinstance(v, (dict, list)) for v in value):
                lines.append(f"{pad}{key}: " + ", ".join(str(v) for v in value))
            else:
                lines.append(f"{pad}{key}:")
                for v in value:
                    emit("-", v, indent + 1)
        else:
            lines.append(f"{pad}{key}: {value}")

    for k, v in doc.items():
        if k == "schema":
            continue
        emit(k, v)
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------

class _Usage(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _common(p):
    p.add_argument("--u0", help="coefficient of D^0 in L")
    p.add_argument("--u1", help="coefficient of D^1 in L")
    p.add_argument("--q0", help="potential q0 (L = D^3 + q1 D + q1'/2 + q0)")
    p.add_argument("--q1", help="potential q1")
    p.add_argument("--const", action="append", default=[], metavar="NAME=P/Q",
                   help="bind a named constant (repeatable)")
    p.add_argument("--max-level", type=int, default=5, help="highest hierarchy level searched (default 5)")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser():
    parser = _ArgParser(prog="bsqfactor", description="Spectral factorization of third order Boussinesq operators.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)
    _common(sub.add_parser("centralizer", help="commuting operators A1, A2"))
    _common(sub.add_parser("curve", help="spectral curve generators and verdict"))
    p = sub.add_parser("factor", help="spectral factorization of L - lambda0")
    _common(p)
    p.add_argument("--lambda0")
    p.add_argument("--tau0")
    p.add_argument("--param", help='curve parametrization in t, e.g. "t^3+h, t^4, t^5"')
    p = sub.add_parser("factor-planar", help="factorization from the plane curve of (L, A1)")
    _common(p)
    p.add_argument("--a1-level", type=int, help="hierarchy level of A1 (default: least solving level)")
    p.add_argument("--lambda0")
    p.add_argument("--mu0")
    p.add_argument("--tau0")
    p.add_argument("--param", help='two components in t, e.g. "h-t^3, t^4"')
    p = sub.add_parser("verify", help="re-check a JSON report")
    p.add_argument("report", help="path to a JSON report, or - for stdin")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _cmd_centralizer(args, pot, consts, doc):
    basis = centralizer_basis(pot, args.max_level)
    doc["centralizer"] = _basis_doc(basis)
    return EXIT_OK


def _cmd_curve(args, pot, consts, doc):
    basis = centralizer_basis(pot, args.max_level)
    doc["centralizer"] = _basis_doc(basis)
    doc["curve"] = _curve_doc(spectral_curve(pot.operator(), basis))
    return EXIT_OK


def _cmd_factor(args, pot, consts, doc):
    if args.lambda0 is not None:
        if args.param or args.tau0:
            raise ParseError("give either --lambda0 or --param/--tau0", None, None)
        target = {"lambda0": parse_rational(args.lambda0)}
    elif args.param and args.tau0 is not None:
        target = {"param": parse_param(args.param, consts), "tau0": parse_rational(args.tau0)}
    else:
        raise ParseError("factor needs --lambda0, or --param together with --tau0", None, None)
    res = spf(None, pot, target, args.max_level)
    if isinstance(res, Diagnostic):
        if res.basis is not None:
            doc["centralizer"] = _basis_doc(res.basis)
        if res.ideal is not None:
            doc["curve"] = _curve_doc(res.ideal)
        doc["diagnostics"] = [{"code": res.code, "message": res.message, "reasons": list(res.reasons)}]
        if res.point is not None:
            doc["point"] = _point_doc(res.point)
        return EXIT_NOT_REDUCIBLE if res.code == "not_geometrically_reducible" else EXIT_NO_FACTOR
    doc["centralizer"] = _basis_doc(res.basis)
    doc["curve"] = _curve_doc(res.ideal)
    doc["factorization"] = _result_doc(res)
    return EXIT_OK if res.verified else EXIT_INTERNAL


def _planar_A1(pot, level, cap):
    levels = [level] if level is not None else range(cap + 1)
    for n in levels:
        c = solve_constants(n, 1, pot)
        if c is not None:
            return assemble_P(3 * n + 1, pot, c), n, c
    raise NoCentralizerFound("no commuting operator of order 3n+1 within the level cap", branch=1, cap=cap)


def _cmd_factor_planar(args, pot, consts, doc):
    L = pot.operator()
    A1, n1, c1 = _planar_A1(pot, args.a1_level, args.max_level)
    doc["A1"] = {"operator": str(A1), "order": A1.order, "level": n1, "constants": [rat(c) for c in c1]}
    if args.param and args.tau0 is not None:
        param = parse_param(args.param, consts)
        if len(param.components) != 2:
            raise ParseError("factor-planar expects two parametrization components", None, args.param)
        point = (param, parse_rational(args.tau0))
    elif args.lambda0 is not None:
        lam0 = parse_rational(args.lambda0)
        if args.mu0 is not None:
            point = (lam0, parse_rational(args.mu0))
        else:
            f1 = diff_resultant(SpectralPair(L, A1, 0, 1))
            roots = rational_roots(univariate_at(f1, lam0, MU)) or []
            if not roots:
                doc["diagnostics"] = [{"code": "no_rational_point", "message": "no rational point; supply --mu0 or a parametrization", "reasons": []}]
                return EXIT_NO_FACTOR
            point = (lam0, roots[0])
    else:
        raise ParseError("factor-planar needs --lambda0 [--mu0], or --param with --tau0", None, None)
    try:
        res = planar_factor(L, A1, point)
    except ZeroDenominator as exc:
        doc["diagnostics"] = [{"code": "zero_denominator", "message": str(exc), "reasons": []}]
        return EXIT_NO_FACTOR
    doc["f1"] = str(res.planar_f1)
    doc["factorization"] = _result_doc(res)
    return EXIT_OK if res.verified else EXIT_INTERNAL


def _load_report(path):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc.msg}", exc.pos, None) from None


def _cmd_verify(args, doc):
    try:
        return _verify_report(_load_report(args.report), doc)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed report: missing or invalid field {exc}", None, None) from None


def _verify_report(rep, doc):
    if rep.get("schema") != SCHEMA:
        raise ParseError(f"unsupported report schema {rep.get('schema')!r}", None, None)
    fac = rep.get("factorization")
    if not fac:
        raise ParseError("report has no factorization to verify", None, None)
    inp = rep["input"]
    pot = Potentials.from_u(parse_expr(inp["u0"]), parse_expr(inp["u1"]))
    L = pot.operator()
    pt = fac["point"]
    point = CurvePoint(
        parse_rational(pt["lambda0"]),
        parse_rational(pt["mu0"]),
        parse_rational(pt["gamma0"]) if "gamma0" in pt else None,
    )
    phi0 = parse_expr(fac["phi0"])
    cap = rep.get("max_level", 5)
    doc["input"] = inp
    if rep.get("command") == "factor-planar":
        A1, _, _ = _planar_A1(pot, rep["A1"]["level"], cap)
        res = planar_factor(L, A1, (point.lambda0, point.mu0))
        checks = res.checks.as_dict()
        same_phi = res.phi0 == phi0
        ops_match = str(A1) == rep["A1"]["operator"]
    else:
        basis = centralizer_basis(pot, cap)
        checks = verify_spectral_factorization(L, pot, point, phi0, basis, subresultants(L, basis)).as_dict()
        same_phi = True
        ops_match = _basis_doc(basis)["A1"]["operator"] == rep["centralizer"]["A1"]["operator"] and (
            _basis_doc(basis)["A2"]["operator"] == rep["centralizer"]["A2"]["operator"]
        )
    stored = fac.get("verification") or {}
    doc["verification"] = checks
    doc["matches_report"] = checks == stored and same_phi and ops_match
    ok = doc["matches_report"] and all(v is not False for v in checks.values())
    return EXIT_OK if ok else EXIT_INTERNAL


_VALUE_OPTS = frozenset(
    ("--u0", "--u1", "--q0", "--q1", "--const", "--lambda0", "--mu0", "--tau0",
     "--param", "--max-level", "--a1-level", "--format")
)


def _attach_values(argv):
    # "--u1 -6/x^2" would otherwise be read as two options
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


@dataclass
class CommandResult:
    code: int
    report: dict | None
    message: str | None = None
    format: str = "text"


def run_command(argv) -> CommandResult:
    """Run one CLI invocation without printing anything."""
    parser = build_parser()
    doc = {"schema": SCHEMA}
    fmt = "text"
    try:
        args = parser.parse_args(_attach_values(list(argv)))
        fmt = args.format
        doc["command"] = args.command
        if args.command == "verify":
            code = _cmd_verify(args, doc)
        else:
            consts = _bindings(args.const)
            pot = _potentials(args, consts)
            doc["input"] = _input_echo(pot, consts)
            doc["max_level"] = args.max_level
            handler = {
                "centralizer": _cmd_centralizer,
                "curve": _cmd_curve,
                "factor": _cmd_factor,
                "factor-planar": _cmd_factor_planar,
            }[args.command]
            code = handler(args, pot, consts, doc)
    except _Usage as exc:
        return CommandResult(EXIT_USAGE, None, f"usage error: {exc}", fmt)
    except (ParseError, UnboundConstant, DivisionByZero, NotOnCurve, OSError) as exc:
        return CommandResult(EXIT_USAGE, None, f"error: {exc}", fmt)
    except NoCentralizerFound as exc:
        doc["diagnostics"] = [{"code": "no_centralizer", "message": str(exc), "reasons": []}]
        return CommandResult(EXIT_NO_FACTOR, doc, str(exc), fmt)
    except LogarithmicPart as exc:
        doc["diagnostics"] = [{"code": "not_boussinesq", "message": str(exc), "reasons": []}]
        return CommandResult(EXIT_NO_FACTOR, doc, str(exc), fmt)
    except (NotXFree, InexactDivision, BsqError) as exc:
        return CommandResult(EXIT_INTERNAL, doc, f"internal error: {exc}", fmt)
    message = None
    for d in doc.get("diagnostics", ()):
        message = d["message"]
    return CommandResult(code, doc, message, fmt)


def main(argv=None):
    res = run_command(sys.argv[1:] if argv is None else argv)
    if res.report is not None:
        print(json.dumps(res.report, indent=2) if res.format == "json" else _text(res.report))
    if res.message:
        print(res.message, file=sys.stderr)
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
