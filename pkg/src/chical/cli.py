"""Command line front end: ``chical <command> ...``.

Results go to stdout in canonical rendering; ``--report FILE`` also
writes a JSON report (stable key order, with a timing field).  Exit codes:
0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import cartan, coisson, gaussmanin, vertex
from .parser import ParseError, parse_connection, parse_state, parse_vector_field
from .report import Check
from .series import ExpansionDomain, expand_inverse_difference, reexpand_double_pole
from .superjet import JET_KINDS, State, render, translate
from .suites import SUITE_NAMES, SuiteParams, run_suite, spanning_forms, spanning_states

VARIABLES = {
    ExpansionDomain.D13_GT_D23: ("(z1-z3)", "(z2-z3)"),
    ExpansionDomain.D23_GT_D13: ("(z1-z3)", "(z2-z3)"),
    ExpansionDomain.D23_GT_D12: ("(z1-z2)", "(z2-z3)"),
}


class UsageError(Exception):
    pass


class Output:
    """Collects stdout lines and the JSON report for one command."""

    def __init__(self, command: str, argv: list, seed=None):
        self.lines: list = []
        self.report = {"command": command, "argv": list(argv), "inputs": {}, "results": {}, "checks": [], "seed": seed}

    def result(self, key: str, value, show: bool = True) -> None:
        text = render(value) if isinstance(value, State) else str(value)
        self.report["results"][key] = text
        if show:
            self.lines.append(text)

    def line(self, text: str) -> None:
        self.lines.append(text)

    def check(self, c: Check, label: str | None = None) -> None:
        self.report["checks"].append(c.as_dict())
        self.lines.append(f"{label or c.name}: {'pass' if c.passed else 'fail'}")
        if not c.passed and c.witness:
            for k in sorted(c.witness):
                self.lines.append(f"  {k}: {c.witness[k]}")

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.report["checks"])


# ---------------------------------------------------------------- helpers


def _state(text: str, n_dim=None, m_dim=None) -> State:
    return parse_state(text, n_dim, m_dim)


def _letter(text: str):
    s = _state(text)
    terms = list(s.terms.items())
    if len(terms) != 1 or terms[0][1] != 1 or len(terms[0][0]) != 1 or terms[0][0][0][1] != 1:
        raise UsageError(f"expected a single generator letter, got {text!r}")
    return terms[0][0][0][0]


def _read_connection(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_connection(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read connection file {path}: {exc.strerror}") from None


def _render_table(domain: ExpansionDomain, table: dict, step=None) -> str:
    """One line per term, ordered by expansion step."""
    v1, v2 = VARIABLES[domain]
    if step is None:
        step = (lambda k: k[1]) if domain is ExpansionDomain.D13_GT_D23 else (lambda k: k[0])
    return "\n".join(f"{v1}^{p} {v2}^{q}: {table[(p, q)]}" for p, q in sorted(table, key=step))


def _render_jet(e: dict) -> str:
    if not e:
        return "0"
    return " + ".join(f"d^{k}[{e[k]}]" for k in sorted(e))


# ---------------------------------------------------------------- commands


def cmd_ope(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    out.report["inputs"] = {"a": render(a), "b": render(b), "horizon": args.horizon}
    series = vertex.ope(a, b, args.horizon)
    for k in sorted(series.coeffs):
        out.report["results"][f"(z1-z2)^{k}"] = render(series.coeffs[k])
    out.line(series.render())


def cmd_nprod(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    out.report["inputs"] = {"a": render(a), "n": args.n, "b": render(b), "route": "wick" if args.wick else "recursion"}
    product = vertex.wick_nprod if args.wick else vertex.nprod
    out.result("nprod", product(a, args.n, b))


def cmd_translate(args, out: Output):
    a = _state(args.a)
    out.report["inputs"] = {"a": render(a)}
    out.result("translate", translate(a))


def cmd_contraction(args, out: Output):
    u, v = _letter(args.u), _letter(args.v)
    out.report["inputs"] = {"u": str(u), "v": str(v)}
    cv = vertex.contraction(u, v)
    if cv is None:
        out.result("contraction", 0)
    else:
        out.result("contraction", f"{cv.coefficient}*(z1-z2)^{cv.power}")


def cmd_apply_mode(args, out: Output):
    g, b = _letter(args.g), _state(args.b)
    out.report["inputs"] = {"g": str(g), "n": args.n, "b": render(b)}
    out.result("apply_mode", vertex.apply_mode(g, args.n, b))


def cmd_mode_bracket(args, out: Output):
    g, h = _letter(args.g), _letter(args.h)
    for x in (g, h):
        if x.kind not in JET_KINDS or x.jet:
            raise UsageError("mode brackets take jet-0 letters x, p, dx, pd")
    out.report["inputs"] = {"g": str(g), "n": args.n, "h": str(h), "m": args.m}
    val = vertex.gamma_bracket(vertex.ModeIndex(g, args.n), vertex.ModeIndex(h, args.m))
    out.result("bracket", render(State.scalar(val)))


def cmd_lie_bracket(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    out.report["inputs"] = {"a": render(a), "n": args.n, "b": render(b), "m": args.m}
    terms = vertex.lie_bracket((args.n, a), (args.m, b))
    text = [f"({render(s)})_({k})" for k, s in terms]
    out.result("bracket", " + ".join(text) if text else "0")


def cmd_expand(args, out: Output):
    try:
        domain = ExpansionDomain(args.domain)
    except ValueError:
        raise UsageError(f"unknown domain {args.domain!r}") from None
    out.report["inputs"] = {"domain": domain.value, "exponent": args.exponent, "order": args.order}
    table = expand_inverse_difference(domain, args.exponent, args.order)
    out.result("expansion", _render_table(domain, table))


def cmd_reexpand(args, out: Output):
    out.report["inputs"] = {"s": args.s, "t": args.t, "order": args.order}
    table = reexpand_double_pole(args.s, args.t, args.order)
    out.result("expansion", _render_table(ExpansionDomain.D13_GT_D23, table, step=lambda k: -k[0]))


def cmd_lie_ch(args, out: Output):
    xi = parse_vector_field(args.vf, args.N)
    out.report["inputs"] = {"vf": str(xi), "N": args.N}
    out.result("lie_ch", cartan.lie_ch(xi, args.N))


def cmd_iota_ch(args, out: Output):
    xi = parse_vector_field(args.vf, args.N)
    out.report["inputs"] = {"vf": str(xi)}
    out.result("iota_ch", cartan.iota_ch(xi))


def cmd_d_ch(args, out: Output):
    out.report["inputs"] = {"N": args.N}
    out.result("d_ch", cartan.d_ch(args.N))


def cmd_zero_mode(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    out.report["inputs"] = {"a": render(a), "b": render(b)}
    out.result("zero_mode", vertex.nprod(a, 0, b))


def cmd_anomaly(args, out: Output):
    xi, eta = parse_vector_field(args.xi), parse_vector_field(args.eta)
    n_dim = args.N or max(1, cartan._dims(xi, eta))
    out.report["inputs"] = {"xi": str(xi), "eta": str(eta), "N": n_dim}
    even = vertex.nprod(cartan.symbol_vector_field(xi), 1, cartan.symbol_vector_field(eta))
    chiral = vertex.nprod(cartan.lie_ch(xi, n_dim), 1, cartan.lie_ch(eta, n_dim))
    out.result("even", even, show=False)
    out.result("chiral", chiral, show=False)
    out.line(f"even: {render(even)}")
    out.line(f"chiral: {render(chiral)}")
    out.check(cartan.check_lie_ch_ope(xi, eta, n_dim))
    out.check(cartan.check_even_anomaly(xi, eta))


def cmd_filtration(args, out: Output):
    a = _state(args.a)
    out.report["inputs"] = {"a": render(a)}
    out.result("degree", coisson.filtration_degree(a))


def cmd_coisson(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    if args.n < 0:
        raise UsageError("coisson products need n >= 0")
    out.report["inputs"] = {"a": render(a), "n": args.n, "b": render(b)}
    out.result("coisson", coisson.coisson_nprod(a, args.n, b))


def cmd_quasiclassical(args, out: Output):
    a, b = _state(args.a), _state(args.b)
    out.report["inputs"] = {"a": render(a), "n": args.n, "b": render(b)}
    q = vertex.nprod(a, args.n, b)
    p = coisson.filtration_degree(a) + coisson.filtration_degree(b) - (1 if args.n >= 0 else 0)
    out.result("quantum", q, show=False)
    out.result("symbol", coisson.top_part(q, p), show=False)
    out.line(f"quantum: {render(q)}")
    out.line(f"symbol (degree {p}): {render(coisson.top_part(q, p))}")
    if args.n >= 0:
        cl = coisson.coisson_nprod(coisson.top_part(a), args.n, coisson.top_part(b))
        out.result("coisson", cl, show=False)
        out.line(f"coisson: {render(cl)}")
    out.check(coisson.check_quasiclassical(a, b, args.n))


def cmd_jet_bracket(args, out: Output):
    xi, eta = parse_vector_field(args.xi), parse_vector_field(args.eta)
    a, b = {args.da: xi}, {args.db: eta}
    out.report["inputs"] = {"xi": str(xi), "da": args.da, "eta": str(eta), "db": args.db}
    result = coisson.jet_lie_bracket(a, b)
    for n in sorted(result):
        out.result(f"n={n}", _render_jet(result[n]), show=False)
        out.line(f"({n}): {_render_jet(result[n])}")
    if not result:
        out.line("0")
    out.check(coisson.check_jet_bracket(a, b))


def cmd_check(args, out: Output):
    states = [_state(s) for s in args.states]
    ints = args.ints
    name = args.identity
    need = {"skew": (2, 0), "commutator": (3, 2), "borcherds": (3, 3), "normal-ordering": (3, 1)}[name]
    if len(states) != need[0] or len(ints) != need[1]:
        raise UsageError(f"check {name} takes {need[0]} states and {need[1]} integers")
    out.report["inputs"] = {"states": [render(s) for s in states], "ints": ints}
    if name == "skew":
        out.check(vertex.check_skew(*states))
        return
    if name == "commutator":
        lhs, rhs = vertex.commutator_sides(*states, *ints)
        c = vertex.check_commutator(*states, *ints)
    elif name == "borcherds":
        t1, t2, t3 = vertex.borcherds_residues(*states, *ints)
        eps = -1 if vertex.parity_bit(states[0]) and vertex.parity_bit(states[1]) else 1
        lhs, rhs = t1 - t2.scale(eps), t3
        c = vertex.check_borcherds(*states, *ints)
    else:
        lhs, rhs = vertex.normal_ordering_sides(*states, *ints)
        c = vertex.check_normal_ordering(*states, *ints)
    out.result("lhs", lhs, show=False)
    out.result("rhs", rhs, show=False)
    out.line(f"lhs: {render(lhs)}")
    out.line(f"rhs: {render(rhs)}")
    out.check(c)


def cmd_curvature(args, out: Output):
    c = _read_connection(args.connection)
    out.report["inputs"] = {"N": c.n_dim, "M": c.m_dim}
    for (i, j), v in sorted(gaussmanin.curvature(c).items()):
        out.result(f"R[{i},{j}]", f"R[{i},{j}] = {v}")
    out.check(gaussmanin.bianchi_check(c))


def cmd_apply_d(args, out: Output):
    c = _read_connection(args.connection)
    s = _state(args.state, c.n_dim, c.m_dim)
    out.report["inputs"] = {"state": render(s), "classical": args.classical}
    if args.classical:
        cartan.check_form(s)
    out.result("D", gaussmanin.differential(c, args.classical)(s))


def _spanning(c, max_letters: int, max_jet: int, classical: bool) -> list:
    p = SuiteParams(n_dim=c.n_dim, m_dim=c.m_dim, jet=max_jet)
    return spanning_forms(p, max_letters) if classical else spanning_states(p, max_letters)


def cmd_dsquare(args, out: Output):
    c = _read_connection(args.connection)
    samples = _spanning(c, args.max_letters, args.max_jet, args.classical)
    out.report["inputs"] = {"N": c.n_dim, "M": c.m_dim, "max_letters": args.max_letters,
                            "max_jet": args.max_jet, "classical": args.classical, "spanning_set": len(samples)}
    out.check(gaussmanin.bianchi_check(c))
    out.check(gaussmanin.check_square_zero(c, samples, args.classical))
    out.check(gaussmanin.check_degree_decomposition(c, samples, args.classical))
    if not args.classical:
        out.check(gaussmanin.check_proof_identities(c, samples))


def cmd_glue(args, out: Output):
    c1, c2 = _read_connection(args.c1), _read_connection(args.c2)
    c3 = _read_connection(args.c3) if args.c3 else None
    try:
        gaussmanin.glue(c1, c2, args.classical)
        if c3 is not None:
            gaussmanin.glue(c2, c3, args.classical)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.report["inputs"] = {"N": c1.n_dim, "M": c1.m_dim, "classical": args.classical,
                            "max_letters": args.max_letters, "max_jet": args.max_jet}
    if args.state:
        s = _state(args.state, c1.n_dim, c1.m_dim)
        out.result("G", gaussmanin.glue(c1, c2, args.classical)(s))
    samples = _spanning(c1, args.max_letters, args.max_jet, args.classical)
    out.check(gaussmanin.check_intertwine(c1, c2, samples, args.classical))
    if c3 is not None:
        out.check(gaussmanin.check_cocycle(c1, c2, c3, samples, args.classical))


def cmd_verify(args, out: Output):
    params = SuiteParams(seed=args.seed, cases=args.cases, n_dim=args.N, m_dim=args.M,
                         deg=args.deg, jet=args.jet, letters=args.letters)
    out.report["inputs"] = {"suite": args.suite, **params.as_dict()}
    for res in run_suite(args.suite, params):
        out.check(res.check, f"{res.name} ({res.cases} cases)")


# ---------------------------------------------------------------- argument parsing


def _seed_default() -> int:
    raw = os.environ.get("CHICAL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chical", description="Exact computations in the chiral de Rham vertex algebra.")
    parser.add_argument("--report", metavar="FILE", help="also write a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("ope", cmd_ope, "OPE of two states")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--horizon", type=int, default=4)

    p = add("nprod", cmd_nprod, "n-th product a_(n) b")
    p.add_argument("a")
    p.add_argument("n", type=int)
    p.add_argument("b")
    p.add_argument("--wick", action="store_true", help="use the Wick sum instead of the field recursion")

    p = add("translate", cmd_translate, "translation operator")
    p.add_argument("a")

    p = add("contraction", cmd_contraction, "contraction of two letters")
    p.add_argument("u")
    p.add_argument("v")

    p = add("apply-mode", cmd_apply_mode, "mode g_(n) of a letter applied to a state")
    p.add_argument("g")
    p.add_argument("n", type=int)
    p.add_argument("b")

    p = add("mode-bracket", cmd_mode_bracket, "central bracket [g_(n), h_(m)]")
    p.add_argument("g")
    p.add_argument("n", type=int)
    p.add_argument("h")
    p.add_argument("m", type=int)

    p = add("lie-bracket", cmd_lie_bracket, "[a_(n), b_(m)] as a sum of modes")
    p.add_argument("a")
    p.add_argument("n", type=int)
    p.add_argument("b")
    p.add_argument("m", type=int)

    p = add("expand", cmd_expand, "expansion of a power of a coordinate difference")
    p.add_argument("domain", help="D13_GT_D23, D23_GT_D13 or D23_GT_D12")
    p.add_argument("exponent", type=int)
    p.add_argument("order", type=int)

    p = add("reexpand", cmd_reexpand, "re-expansion of a double pole")
    p.add_argument("s", type=int)
    p.add_argument("t", type=int)
    p.add_argument("order", type=int)

    p = add("lie-ch", cmd_lie_ch, "chiral Lie derivative of a vector field")
    p.add_argument("vf")
    p.add_argument("--N", type=int, default=None)

    p = add("iota-ch", cmd_iota_ch, "chiral contraction of a vector field")
    p.add_argument("vf")
    p.add_argument("--N", type=int, default=None)

    p = add("d-ch", cmd_d_ch, "chiral de Rham differential")
    p.add_argument("--N", type=int, default=2)

    p = add("zero-mode", cmd_zero_mode, "a_(0) b")
    p.add_argument("a")
    p.add_argument("b")

    p = add("anomaly", cmd_anomaly, "double poles of two vector fields, even and chiral")
    p.add_argument("xi")
    p.add_argument("eta")
    p.add_argument("--N", type=int, default=None)

    p = add("filtration", cmd_filtration, "momentum filtration degree")
    p.add_argument("a")

    p = add("coisson", cmd_coisson, "coisson product a_(n) b, n >= 0")
    p.add_argument("a")
    p.add_argument("n", type=int)
    p.add_argument("b")

    p = add("quasiclassical", cmd_quasiclassical, "compare a_(n) b with its coisson limit")
    p.add_argument("a")
    p.add_argument("n", type=int)
    p.add_argument("b")

    p = add("jet-bracket", cmd_jet_bracket, "bracket of d^da xi with d^db eta")
    p.add_argument("xi")
    p.add_argument("eta")
    p.add_argument("--da", type=int, default=0)
    p.add_argument("--db", type=int, default=0)

    p = add("check", cmd_check, "check one identity on given inputs")
    p.add_argument("identity", choices=["skew", "commutator", "borcherds", "normal-ordering"])
    p.add_argument("states", nargs="+", help="states, followed by the integer mode indices")

    p = add("curvature", cmd_curvature, "curvature of a connection file")
    p.add_argument("--connection", required=True)

    p = add("apply-d", cmd_apply_d, "apply the connection differential to a state")
    p.add_argument("--connection", required=True)
    p.add_argument("state")
    p.add_argument("--classical", action="store_true")

    p = add("dsquare", cmd_dsquare, "check D^2 = 0 on the monomial spanning set")
    p.add_argument("--connection", required=True)
    p.add_argument("--max-letters", type=int, default=3)
    p.add_argument("--max-jet", type=int, default=2)
    p.add_argument("--classical", action="store_true")

    p = add("glue", cmd_glue, "gluing isomorphism between connection complexes")
    p.add_argument("--c1", required=True)
    p.add_argument("--c2", required=True)
    p.add_argument("--c3")
    p.add_argument("--state", help="also print the glued image of this state")
    p.add_argument("--max-letters", type=int, default=3)
    p.add_argument("--max-jet", type=int, default=2)
    p.add_argument("--classical", action="store_true")

    p = add("verify", cmd_verify, "run seeded verification suites")
    p.add_argument("--suite", required=True, choices=list(SUITE_NAMES) + ["all"])
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--deg", type=int, default=2)
    p.add_argument("--jet", type=int, default=2)
    p.add_argument("--letters", type=int, default=4)
    return parser


def _split_check_args(args) -> None:
    # trailing integer arguments of `check` are mode indices
    states, ints = [], []
    for tok in args.states:
        try:
            ints.append(int(tok))
        except ValueError:
            if ints:
                raise UsageError("mode indices must come after the states") from None
            states.append(tok)
    args.states, args.ints = states, ints


def run_command(argv: list) -> tuple:
    """Run one command; returns (exit code, stdout text, report dict)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.command, argv, getattr(args, "seed", None))
    start = time.perf_counter()
    try:
        if args.command == "check":
            _split_check_args(args)
        args.fn(args, out)
    except (ParseError, UsageError, ValueError) as exc:
        return 2, f"error: {exc}\n", None
    out.report["timing"] = round(time.perf_counter() - start, 6)
    code = 0 if out.ok else 1
    return code, "\n".join(out.lines) + "\n", out.report


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, text, report = run_command(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(text)
    report_path = build_parser().parse_args(argv).report
    if report and report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
