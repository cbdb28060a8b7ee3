"""Exact integer helpers: factorization, Omega counts, Legendre symbols,
the quartic unit eps_p and primorials.

Everything here works on Python ints; nothing is cached globally except
the small prime sieve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod

from sympy import factorint, isprime, jacobi_symbol, primerange


class DomainError(ValueError):
    """Raised when an arithmetic operation is applied outside its domain."""


@dataclass(frozen=True)
class Factorization:
    """``n = sign * prod(p**e for p, e in factors)`` with primes increasing."""

    n: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n == 0:
            raise DomainError("factorization of 0 is undefined")
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise DomainError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise DomainError("exponents must be >= 1")
        if self.recompose() != self.n:
            raise DomainError("factors do not multiply back to n")

    def recompose(self) -> int:
        return self.sign * prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


@dataclass(frozen=True)
class PrimeSet:
    """The finite exceptional prime set S (default {2, 3})."""

    primes: frozenset[int] = field(default_factory=lambda: frozenset({2, 3}))

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        bad = [p for p in self.primes if not isprime(p)]
        if bad:
            raise DomainError(f"not prime: {sorted(bad)}")

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(sorted(self.primes))


DEFAULT_S = PrimeSet()


def _as_primeset(S) -> PrimeSet:
    if isinstance(S, PrimeSet):
        return S
    return PrimeSet(frozenset(S))


class QuarticUnit(enum.Enum):
    """Value of eps_p, either 1 or i."""

    ONE = 1
    IMAG = 2

    def power(self, k: int) -> tuple[int, int]:
        """Return ``eps**k`` as a Gaussian integer ``(re, im)``."""
        if self is QuarticUnit.ONE:
            return (1, 0)
        return ((1, 0), (0, 1), (-1, 0), (0, -1))[k % 4]

    def square(self) -> int:
        return 1 if self is QuarticUnit.ONE else -1


def factorize(n: int) -> Factorization:
    n = int(n)
    if n == 0:
        raise DomainError("factorization of 0 is undefined")
    sign = 1 if n > 0 else -1
    fac = factorint(abs(n)) if abs(n) > 1 else {}
    return Factorization(n, sign, tuple(sorted(fac.items())))


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(e for _, e in factorize(n).factors)


def small_omega(n: int) -> int:
    """Number of distinct prime factors of n."""
    return len(factorize(n).factors)


def omega_away_from(n: int, S=DEFAULT_S) -> int:
    """Prime factors of n outside S, counted with multiplicity."""
    S = _as_primeset(S)
    return sum(e for p, e in factorize(n).factors if p not in S)


def is_pls(n: int, L: int, S=DEFAULT_S) -> bool:
    """True iff n is a P_{L,S}-number: zero, or at most L prime factors outside S."""
    if n == 0:
        return True
    return omega_away_from(n, S) <= L


def ord_p(n, p: int) -> int | float:
    """p-adic valuation of a nonzero integer or Fraction; ``inf`` for 0."""
    if n == 0:
        return float("inf")
    num = getattr(n, "numerator", n)
    den = getattr(n, "denominator", 1)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(n: int, p: int) -> int:
    """n with every factor of p removed (sign kept)."""
    if n == 0:
        raise DomainError("unit part of 0 is undefined")
    while n % p == 0:
        n //= p
    return n


def _check_odd_prime(p: int) -> None:
    if p == 2 or not isprime(p):
        raise DomainError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    _check_odd_prime(p)
    return int(jacobi_symbol(int(a) % p, p))


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise DomainError("kronecker symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(D % n, n))


def eps_p(p: int) -> QuarticUnit:
    """1 for p = 1 mod 4 and i for p = 3 mod 4."""
    _check_odd_prime(p)
    return QuarticUnit.ONE if p % 4 == 1 else QuarticUnit.IMAG


@lru_cache(maxsize=64)
def primes_upto(x: float) -> tuple[int, ...]:
    return tuple(primerange(2, int(x) + 1))


def primes_in(lo: float, hi: float, *, include_hi: bool = False) -> list[int]:
    """Primes p with lo <= p < hi (or <= hi)."""
    top = int(hi) + 1 if include_hi else int(-(-hi // 1))
    return [p for p in primerange(max(2, int(-(-lo // 1))), top)]


def primorial_away_from(X: float, S=DEFAULT_S) -> int:
    """Product of the primes p <= X with p outside S."""
    if X < 2:
        raise DomainError("X must be >= 2")
    S = _as_primeset(S)
    return prod(p for p in primes_upto(X) if p not in S)


def primorial_interval(w: float, z: float, S=DEFAULT_S) -> int:
    """P_w(z): product of primes p with w <= p < z, p outside S."""
    S = _as_primeset(S)
    return prod(p for p in primes_in(w, z) if p not in S)


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def squarefree_divisors(n: int) -> list[int]:
    """Divisors of a squarefree n, sorted."""
    divs = [1]
    for p in factorize(n).primes:
        divs += [d * p for d in divs]
    return sorted(divs)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
