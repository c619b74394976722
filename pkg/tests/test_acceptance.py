"""Acceptance criteria 1-12, each printed as one pass/fail line."""

import time

import pytest

from chical.cartan import VectorField, d_ch, even_anomaly, lie_ch, symbol_vector_field
from chical.cli import run_command
from chical.gaussmanin import Connection, check_square_zero
from chical.superjet import DX, Generator, Kind, State, X, U
from chical.suites import SuiteParams, run_suite, spanning_states
from chical.vertex import contraction, nprod
from oracles import contraction_oracle
from test_golden import GOLDEN, golden_files, load

SEED = 2024
NAMES = {Kind.X: "x", Kind.PX: "p", Kind.DX: "dx", Kind.PDX: "pd"}


def suite_passes(name, cases, **extra):
    (res,) = run_suite(name, SuiteParams(seed=SEED, cases=cases, **extra))
    return res.passed and res.cases >= cases


def criterion_1():
    for ka, a in NAMES.items():
        for kb, b in NAMES.items():
            for k in range(4):
                for l in range(4):
                    v = contraction(Generator(ka, 1, k), Generator(kb, 1, l))
                    if (None if v is None else (v.power, v.coefficient)) != contraction_oracle(a, k, b, l):
                        return False
                    if contraction(Generator(ka, 1, k), Generator(kb, 2, l)) is not None:
                        return False
    v = contraction(Generator(Kind.PX, 1, 1), Generator(Kind.X, 1, 1))
    return (v.power, v.coefficient) == (-3, -2)


def criterion_7():
    xi, eta = VectorField({1: X(2)}), VectorField({2: X(1)})
    worked = (even_anomaly(xi, eta) == -State.one()
              and nprod(symbol_vector_field(xi), 1, symbol_vector_field(eta)) == -State.one()
              and not nprod(lie_ch(xi, 2), 1, lie_ch(eta, 2)))
    return worked and suite_passes("anomaly", 50)


def criterion_8():
    worked = nprod(d_ch(1), 1, lie_ch(VectorField({1: X(1) * X(1)}), 1)) == DX(1).scale(-2)
    return worked and suite_passes("cartan", 50)


def criterion_9():
    if not suite_passes("dsquare", 5, n_dim=2, m_dim=2, deg=2, jet=2):
        return False
    example = Connection(2, 2, {1: VectorField({1: X(1) * U(2)})})
    return check_square_zero(example, spanning_states(SuiteParams())).passed


def criterion_12():
    import os

    here = os.getcwd()
    os.chdir(GOLDEN)
    try:
        for path in golden_files():
            argv, expected = load(path)
            code, text, _ = run_command(argv)
            if code != 0 or text != expected:
                return False
    finally:
        os.chdir(here)
    return len(golden_files()) > 0


CRITERIA = [
    (1, 1, criterion_1),
    (2, 60, lambda: suite_passes("oracle", 200)),
    (3, 60, lambda: suite_passes("skew", 200)),
    (4, 120, lambda: suite_passes("commutator", 100)),
    (5, 120, lambda: suite_passes("borcherds", 50)),
    (6, 60, lambda: suite_passes("normal-ordering", 100)),
    (7, 60, criterion_7),
    (8, 60, criterion_8),
    (9, 180, criterion_9),
    (10, 120, lambda: suite_passes("glue", 5, n_dim=2, m_dim=2, deg=2, jet=2)),
    (11, 120, lambda: suite_passes("quasiclassical", 100)),
    (12, 10, criterion_12),
]


@pytest.mark.parametrize("number,limit,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, limit, fn, capsys):
    start = time.perf_counter()
    ok = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < limit
    with capsys.disabled():
        print(f"\ncriterion {number}: {'pass' if passed else 'fail'} ({elapsed:.1f}s, limit {limit}s)")
    assert ok, f"criterion {number} check failed"
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s"
