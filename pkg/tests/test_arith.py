import random

import pytest
from hypothesis import given, strategies as st

from polysieve.arith import (
    DomainError,
    PrimeSet,
    QuarticUnit,
    big_omega,
    eps_p,
    factorize,
    is_pls,
    kronecker,
    legendre,
    mobius,
    omega_away_from,
    primes_in,
    primorial_away_from,
    primorial_interval,
    small_omega,
)


def brute_factor(n):
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@pytest.mark.parametrize("n,factors,sign", [(12, ((2, 2), (3, 1)), 1), (-1, (), -1), (1024, ((2, 10),), 1), (-360, ((2, 3), (3, 2), (5, 1)), -1)])
def test_factorize_examples(n, factors, sign):
    f = factorize(n)
    assert f.factors == factors and f.sign == sign


def test_factorize_zero():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorize_matches_trial_division():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(-10**6, 10**6) or 1
        assert factorize(n).factors == brute_factor(n)


def test_factorize_round_trip_sample():
    rng = random.Random(7)
    for _ in range(10**4):
        n = rng.randint(-10**9, 10**9) or 7
        assert factorize(n).recompose() == n


@pytest.mark.parametrize("n,expected", [(12, 3), (1, 0), (2**10, 10)])
def test_big_omega(n, expected):
    assert big_omega(n) == expected


@pytest.mark.parametrize("n,expected", [(60, 1), (25, 2), (2**5 * 3**4, 0)])
def test_omega_away_from(n, expected):
    assert omega_away_from(n, {2, 3}) == expected


@given(st.integers(min_value=1, max_value=10**7))
def test_omega_orderings(n):
    assert big_omega(n) >= omega_away_from(n) and big_omega(n) >= small_omega(n)


@pytest.mark.parametrize("n,L,expected", [(0, 0, True), (60, 1, True), (25, 1, False)])
def test_is_pls(n, L, expected):
    assert is_pls(n, L, {2, 3}) is expected


@given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=0, max_value=5))
def test_is_pls_monotone(n, L):
    if is_pls(n, L):
        assert is_pls(n, L + 1)


@pytest.mark.parametrize("a,expected", [(1, 1), (2, 1), (3, -1)])
def test_legendre_mod7(a, expected):
    assert legendre(a, 7) == expected


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_legendre_against_squares(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        assert legendre(a, p) == (0 if a == 0 else 1 if a in squares else -1)


@given(st.integers(), st.integers(), st.sampled_from([5, 7, 11, 13]))
def test_legendre_multiplicative(a, b, p):
    assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


@pytest.mark.parametrize("p", [2, 9, 15])
def test_legendre_rejects(p):
    with pytest.raises(DomainError):
        legendre(1, p)


def test_kronecker_agrees_with_legendre_at_odd_primes():
    for D in (-4, 5, -3, 12, -15):
        for p in (5, 7, 11, 13, 17):
            if D % p:
                assert kronecker(D, p) == legendre(D, p)


@pytest.mark.parametrize("p,unit", [(5, QuarticUnit.ONE), (7, QuarticUnit.IMAG), (13, QuarticUnit.ONE)])
def test_eps_p(p, unit):
    assert eps_p(p) is unit


def test_eps_powers():
    assert eps_p(7).power(2) == (-1, 0) and eps_p(7).square() == -1
    assert eps_p(7).power(12) == (1, 0)
    with pytest.raises(DomainError):
        eps_p(2)


@pytest.mark.parametrize("X,S,expected", [(10, {2, 3}, 35), (4, {2, 3}, 1), (7, set(), 210)])
def test_primorial_away_from(X, S, expected):
    assert primorial_away_from(X, S) == expected


def test_primorial_interval_is_half_open():
    assert primorial_interval(5, 7) == 5
    assert primorial_interval(5, 13) == 5 * 7 * 11
    assert primorial_interval(5, 5) == 1
    assert primes_in(5, 13, include_hi=True) == [5, 7, 11, 13]


def test_primeset_rejects_composites():
    with pytest.raises(DomainError):
        PrimeSet({2, 4})


def test_mobius_small():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
