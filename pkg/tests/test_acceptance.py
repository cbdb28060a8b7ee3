"""Acceptance suite: one printed PASS/FAIL line per headline criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to watch the lines as they
come; they are printed with capture disabled either way. Full grids, so this
takes roughly ten minutes on one core.
"""

import math
from dataclasses import replace

import pytest

from polysieve import eisenstein as eis
from polysieve import localdensity as ld
from polysieve import sieve, verify


def report(capsys, label, passed, detail, seconds=None):
    tag = "PASS" if passed else "FAIL"
    t = f" [{seconds:.1f}s]" if seconds is not None else ""
    with capsys.disabled():
        print(f"\n{tag}  {label}: {detail}{t}")


def run_check(capsys, label, result, budget=None):
    ok = result.passed and (budget is None or result.seconds < budget)
    detail = result.detail
    if budget is not None:
        detail += f" (budget {budget}s)"
    report(capsys, label, ok, detail, result.seconds)
    assert result.passed, result.detail
    if budget is not None:
        assert result.seconds < budget, f"took {result.seconds:.1f}s, budget {budget}s"


def test_lattice_correspondence(capsys):
    res = verify.check_lattice_correspondence("full")
    run_check(capsys, "1 lattice correspondence", res, budget=120)


def test_oracle_equivalence(capsys):
    res = verify.check_oracle_equivalence("full")
    run_check(capsys, "2 density oracle equivalence", res, budget=600)


def test_closed_forms(capsys):
    # printed-form mismatches are reported in the detail, never fatal
    res = verify.check_closed_forms("full")
    run_check(capsys, "3 closed forms", res)


def test_omega_tables(capsys):
    res = verify.check_omega_tables("full", depth=3)
    # depth 3 should already be exhaustive; a deeper pass at p=5 must give the same maxima
    deep = {(r.case, r.row): r.computed_max for r in ld.omega_bound_tables(primes=(5,), depth=4)}
    shallow = {(r.case, r.row): r.computed_max for r in ld.omega_bound_tables(primes=(5,), depth=3)}
    same = deep == shallow
    res = replace(
        res,
        passed=res.passed and same,
        detail=res.detail + f"; depth 4 at p=5 {'matches' if same else 'differs from'} depth 3",
    )
    run_check(capsys, "4 Omega(p)/p tables", res)


def test_sieve_identities(capsys):
    res = verify.check_sieve_identities("full", ns=(50, 400, 2000, 10**4))
    run_check(capsys, "5 sieve identities and sandwiches", res)


def test_C_beta_and_chain(capsys):
    c = verify.check_C_beta()
    chain = verify.check_sumdz_chain()
    res = verify.CheckResult(
        "C_beta", c.passed and chain.passed, f"{c.detail}; chain {chain.detail}", c.seconds + chain.seconds
    )
    run_check(capsys, "6 C_beta arithmetic and Sigma(D,z) chain", res)


def test_two_power(capsys):
    res = verify.check_two_power(16)
    run_check(capsys, "7 two-power valuations", res, budget=60)


def test_thresholds_and_cusp(capsys):
    t = verify.check_thresholds()
    # hand values at m=11, log domain
    hand_thr = (math.log10(9.22) - 45 + 9.21 * math.log10(9)) / 5.77e-4
    hand_L = 1 + 7980 * math.log(9) / math.log(5)
    six = math.isclose(sieve.positivity_threshold(11), hand_thr, rel_tol=5e-7) and math.isclose(
        sieve.L_threshold_real(11), hand_L, rel_tol=5e-7
    )
    cusp = verify.check_cusp_sandwich("full")
    res = verify.CheckResult(
        "thresholds",
        t.passed and six and cusp.passed,
        f"{t.detail}; L(11) real {sieve.L_threshold_real(11):.6g}; cusp {cusp.detail}",
        t.seconds + cusp.seconds,
    )
    run_check(capsys, "8 threshold arithmetic and cusp sandwich", res)


def test_eisenstein(capsys):
    res = verify.check_eisenstein("full")
    run_check(capsys, "9 Eisenstein factorizations and lower bound", res)


@pytest.mark.parametrize("m,a", [(11, (1, 1, 2, 4)), (13, (1, 2, 3, 4)), (5, (1, 1, 1, 1))])
def test_euler_product_overlaps_dirichlet_series(m, a):
    # supporting check for criterion 9: the L-value inside a_E, two ways
    ctx = eis.eisenstein_context(m, a)
    e = eis.L_euler_product(ctx.disc, ctx.weight)
    d = eis.L_dirichlet_series(ctx.disc, ctx.weight)
    assert e.a <= d.b and d.a <= e.b
