"""Seeded verification suites.

Every case draws from its own generator seeded by (seed, suite, case), so
results do not depend on execution order.
"""

from __future__ import annotations

import gc
import random
from contextlib import contextmanager
from dataclasses import dataclass, field

from . import cartan, coisson, gaussmanin, vertex
from .report import Check, CheckGroup, compare
from .sampling import (
    form_monomials,
    random_connection,
    random_form,
    random_state,
    random_vector_field,
    state_monomials,
)
from .superjet import parity_bit, render

SUITE_NAMES = (
    "oracle",
    "skew",
    "commutator",
    "borcherds",
    "normal-ordering",
    "cartan",
    "anomaly",
    "dsquare",
    "glue",
    "quasiclassical",
)


@dataclass
class SuiteParams:
    seed: int = 0
    cases: int = 20
    n_dim: int = 2
    m_dim: int = 2
    deg: int = 2
    jet: int = 2
    letters: int = 4

    def as_dict(self) -> dict:
        return {
            "seed": self.seed, "cases": self.cases, "N": self.n_dim, "M": self.m_dim,
            "deg": self.deg, "jet": self.jet, "letters": self.letters,
        }


@dataclass
class SuiteResult:
    name: str
    cases: int
    check: Check
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.check.passed


def case_rng(params: SuiteParams, suite: str, case: int) -> random.Random:
    return random.Random(f"{params.seed}:{suite}:{case}")


def _states(rng, params, k, max_letters=None):
    return [
        random_state(rng, params.n_dim, max_letters or params.letters, params.jet)
        for _ in range(k)
    ]


def _run(name: str, params: SuiteParams, body) -> SuiteResult:
    group = CheckGroup(name)
    for i in range(params.cases):
        check = body(case_rng(params, name, i))
        if not check.passed and check.witness is not None:
            check = Check(check.name, False, {"case": i, **check.witness})
        elif not check.passed:
            check = Check(check.name, False, {"case": i})
        group.add(check)
    return SuiteResult(name, params.cases, group.result())


# ---------------------------------------------------------------- quantum identities


def _oracle_case(params):
    def body(rng):
        a, b = _states(rng, params, 2)
        group = CheckGroup("oracle")
        for n in range(-4, vertex.pole_bound(a, b) + 1):
            group.add(compare(f"nprod = wick n={n}", vertex.nprod(a, n, b), vertex.wick_nprod(a, n, b), a=a, b=b, n=n))
        return group.result()

    return body


def suite_oracle(params: SuiteParams) -> SuiteResult:
    return _run("oracle", params, _oracle_case(params))


def suite_skew(params: SuiteParams) -> SuiteResult:
    def body(rng):
        a, b = _states(rng, params, 2)
        return vertex.check_skew(a, b)

    return _run("skew", params, body)


def _nontrivial(rng, draw, useful, tries: int = 30):
    """Redraw until ``useful`` holds; random triples often make both sides zero."""
    for _ in range(tries):
        case = draw(rng)
        if useful(*case):
            break
    return case


def _triple(params, modes):
    def draw(rng):
        a, b, c = _states(rng, params, 3, min(params.letters, 3))
        return (a, b, c, *(rng.randint(-2, 2) for _ in range(modes)))

    return draw


def suite_commutator(params: SuiteParams) -> SuiteResult:
    def useful(a, b, c, n, m):
        return bool(vertex.commutator_sides(a, b, c, n, m)[0])

    def body(rng):
        a, b, c, n, m = _nontrivial(rng, _triple(params, 2), useful)
        return vertex.check_commutator(a, b, c, n, m)

    return _run("commutator", params, body)


def suite_borcherds(params: SuiteParams) -> SuiteResult:
    def useful(a, b, c, n, m, l):
        return bool(vertex.borcherds_residues(a, b, c, n, m, l)[2])

    def body(rng):
        a, b, c, n, m, l = _nontrivial(rng, _triple(params, 3), useful)
        group = CheckGroup("borcherds")
        group.add(vertex.check_borcherds(a, b, c, n, m, l))
        # l = 0 must reproduce the commutator checker bit for bit
        t1, t2, t3 = vertex.borcherds_residues(a, b, c, n, m, 0)
        lhs, rhs = vertex.commutator_sides(a, b, c, n, m)
        eps = -1 if parity_bit(a) and parity_bit(b) else 1
        same = render(t1 - t2.scale(eps)) == render(lhs) and render(t3) == render(rhs)
        group.add(Check("l=0 equals commutator", same, None if same else {"a": render(a), "b": render(b), "c": render(c), "n": n, "m": m}))
        return group.result()

    return _run("borcherds", params, body)


def suite_normal_ordering(params: SuiteParams) -> SuiteResult:
    def body(rng):
        a, b, c = _states(rng, params, 3, min(params.letters, 3))
        return vertex.check_normal_ordering(a, b, c, rng.randint(-2, 2))

    return _run("normal-ordering", params, body)


# ---------------------------------------------------------------- geometry


def _field(rng, params, m_dim=0):
    return random_vector_field(rng, params.n_dim, params.deg, m_dim)


def suite_cartan(params: SuiteParams) -> SuiteResult:
    def body(rng):
        xi, eta = _field(rng, params), _field(rng, params)
        forms = [random_form(rng, params.n_dim) for _ in range(3)]
        samples = _states(rng, params, 2, 3)
        group = CheckGroup("cartan")
        group.add(cartan.check_classical_relations(xi, eta, forms, params.n_dim))
        group.add(cartan.check_cartan_relations(xi, eta, samples, params.n_dim))
        for w in forms:
            group.add(cartan.check_comparison(xi, w, params.n_dim))
        group.add(cartan.check_loop_modes(xi, eta, samples[:1], range(-1, 2), params.n_dim))
        return group.result()

    return _run("cartan", params, body)


def suite_anomaly(params: SuiteParams) -> SuiteResult:
    def body(rng):
        xi, eta = _field(rng, params), _field(rng, params)
        group = CheckGroup("anomaly")
        group.add(cartan.check_lie_ch_ope(xi, eta, params.n_dim))
        group.add(cartan.check_even_anomaly(xi, eta))
        return group.result()

    return _run("anomaly", params, body)


def _connection(rng, params):
    return random_connection(rng, params.n_dim, params.m_dim, params.deg)


def spanning_states(params: SuiteParams, max_letters: int = 3) -> list:
    return state_monomials(params.n_dim, params.m_dim, max_letters, params.jet)


def spanning_forms(params: SuiteParams, max_letters: int = 3) -> list:
    return form_monomials(params.n_dim, params.m_dim, max_letters)


def suite_dsquare(params: SuiteParams, max_letters: int = 3) -> SuiteResult:
    states = spanning_states(params, max_letters)
    forms = spanning_forms(params, max_letters)

    def body(rng):
        c = _connection(rng, params)
        group = CheckGroup("dsquare")
        group.add(gaussmanin.bianchi_check(c))
        group.add(gaussmanin.check_square_zero(c, forms, classical=True))
        group.add(gaussmanin.check_square_zero(c, states))
        samples = [random_state(rng, params.n_dim, 3, params.jet, m_dim=params.m_dim) for _ in range(4)]
        group.add(gaussmanin.check_proof_identities(c, samples))
        group.add(gaussmanin.check_degree_decomposition(c, samples))
        group.add(gaussmanin.check_degree_decomposition(c, forms[:40], classical=True))
        return group.result()

    res = _run("dsquare", params, body)
    res.extra = {"spanning_states": len(states), "spanning_forms": len(forms)}
    return res


def suite_glue(params: SuiteParams, max_letters: int = 3) -> SuiteResult:
    states = spanning_states(params, max_letters)
    forms = spanning_forms(params, max_letters)

    def body(rng):
        c1, c2, c3 = (_connection(rng, params) for _ in range(3))
        group = CheckGroup("glue")
        group.add(gaussmanin.check_intertwine(c1, c2, forms, classical=True))
        group.add(gaussmanin.check_intertwine(c1, c2, states))
        group.add(gaussmanin.check_cocycle(c1, c2, c3, forms, classical=True))
        group.add(gaussmanin.check_cocycle(c1, c2, c3, states))
        return group.result()

    res = _run("glue", params, body)
    res.extra = {"spanning_states": len(states), "spanning_forms": len(forms)}
    return res


# ---------------------------------------------------------------- quasiclassical


def suite_quasiclassical(params: SuiteParams) -> SuiteResult:
    def body(rng):
        a, b, c = _states(rng, params, 3, min(params.letters, 3))
        n = rng.randint(0, 2)
        group = CheckGroup("quasiclassical")
        for k in (n, -1, -2):
            group.add(coisson.check_quasiclassical(a, b, k))
        group.add(coisson.check_coisson_leibniz(a, b, c, n))
        group.add(coisson.check_quantized_leibniz(a, b, c, n))
        group.add(coisson.check_coisson_skew(a, b))
        group.add(coisson.check_coisson_commutator(a, b, c, n, rng.randint(0, 2)))
        ja = {k: _field(rng, params) for k in range(rng.randint(1, 2))}
        jb = {k: _field(rng, params) for k in range(rng.randint(1, 2))}
        group.add(coisson.check_jet_bracket(ja, jb))
        return group.result()

    return _run("quasiclassical", params, body)


SUITES = {
    "oracle": suite_oracle,
    "skew": suite_skew,
    "commutator": suite_commutator,
    "borcherds": suite_borcherds,
    "normal-ordering": suite_normal_ordering,
    "cartan": suite_cartan,
    "anomaly": suite_anomaly,
    "dsquare": suite_dsquare,
    "glue": suite_glue,
    "quasiclassical": suite_quasiclassical,
}


@contextmanager
def _quiet_memory():
    """Start from empty caches and pause the cycle collector.

    States are built from tuples, dicts and numbers only, so reference
    counting frees them; scanning the large memo tables on every full
    collection would otherwise dominate the heavier suites.
    """
    vertex.clear_caches()
    gaussmanin.clear_caches()
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def run_suite(name: str, params: SuiteParams) -> list:
    names = SUITE_NAMES if name == "all" else (name,)
    for k in names:
        if k not in SUITES:
            raise KeyError(name)
    out = []
    for k in names:
        with _quiet_memory():
            out.append(SUITES[k](params))
    return out
