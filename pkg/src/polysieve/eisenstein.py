"""Eisenstein coefficient of the theta series of X_d, its explicit lower
bound, the cuspidal residual and the explicit cusp-bound arithmetic.

Real quantities are carried as mpmath interval enclosures (``iv.mpf``);
everything local is an exact Fraction until the very last step.

Normalization.  The coefficient is

    a_E(h) = (2 pi)^{l/2} h^{l/2-1} / (sqrt([L_X^# : L_X]) Gamma(l/2)) prod_p beta_p

with L_X = L/2 and beta_p = b_p / p^{ord_p [L_X : L_d]}.  The generalized
index [L_X^# : L_X] equals prod(2 b_j) / [L_X : L_d]^2, so the same number
is (2 pi)^{l/2} h^{l/2-1} / (sqrt(prod 2 b_j) Gamma(l/2)) prod_p b_p, which
is the second factorization below.  Averages of exact counts confirm this
normalization (see tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from mpmath import iv

from .arith import DomainError, factorize, kronecker
from .lattice import ShiftedLattice, build, dual_index, half_lattice_index
from .localdensity import XBOUND_A_LIST, density_general, density_good_prime, density_oracle, local_params, _leg
from .polygonal import PolygonalProblem, count_with_divisibility, scaled_H

iv.prec = 96

DEFAULT_CUTOFF = 10**7


@lru_cache(maxsize=4)
def _prime_array(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.nonzero(sieve)[0]


def fundamental_discriminant(c: int) -> int:
    """Discriminant of Q(sqrt(c)); 1 when c is a square."""
    if c == 0:
        raise DomainError("c must be nonzero")
    core = -1 if c < 0 else 1
    for q, e in factorize(abs(c)).factors:
        if e % 2:
            core *= q
    return core if core % 4 == 1 else 4 * core


def _char_table(D: int) -> np.ndarray:
    """kronecker(D, n) for n mod |D| (D a fundamental discriminant)."""
    M = abs(D)
    if M == 1:
        return np.ones(1, dtype=np.int8)
    return np.array([kronecker(D, n if n else M) for n in range(M)], dtype=np.int8)


@dataclass(frozen=True)
class EisensteinContext:
    X: ShiftedLattice
    bad_primes: tuple[int, ...]
    disc: int
    L_value: object
    euler_cutoff: int

    @property
    def weight(self) -> int:
        return self.X.rank // 2

    def psi(self, n: int) -> int:
        return kronecker(self.disc, n)

    def generic_factor(self, p: int) -> Fraction:
        """The good-prime Euler factor 1 - psi(p) p^{-l/2}."""
        return 1 - Fraction(self.psi(p), p**self.weight)


def L_euler_product(D: int, s: int, cutoff: int = DEFAULT_CUTOFF):
    """Enclosure of L(s, psi_D) from the Euler product over p <= cutoff.

    The log of the omitted factors is at most sum_{n > P} n^-s / (1 - P^-s)
    <= P^{1-s} / ((s-1)(1 - P^-s)) in absolute value.
    """
    if s < 2:
        raise DomainError("Euler product needs s >= 2")
    primes = _prime_array(cutoff)
    chi = _char_table(D)[primes % abs(D)].astype(np.float64)
    terms = np.log1p(-chi * np.power(primes.astype(np.float64), -s))
    S = math.fsum(terms.tolist())
    # one ulp per term plus the tail
    err = 4e-16 * math.fsum(np.abs(terms).tolist()) + 1e-300
    tail = cutoff ** (1 - s) / ((s - 1) * (1 - cutoff ** (-s)))
    lo, hi = -S - err - tail, -S + err + tail
    return iv.exp(iv.mpf([lo, hi]))


def L_dirichlet_series(D: int, s: int, terms: int = 10**6):
    """Enclosure of L(s, psi_D) from partial sums; independent of the Euler product.

    For nonprincipal psi the character sums are bounded by |D|, so the tail is
    at most 2|D| N^-s by partial summation; for D = 1 the tail of zeta(s) is
    below N^{1-s} / (s - 1).
    """
    n = np.arange(1, terms + 1, dtype=np.float64)
    chi = _char_table(D)[np.arange(1, terms + 1) % abs(D)].astype(np.float64)
    S = math.fsum((chi * n ** (-s)).tolist())
    err = 1e-15
    tail = (terms ** (1 - s) / (s - 1)) if abs(D) == 1 else 2 * abs(D) * terms ** (-s)
    return iv.mpf([S - err - tail, S + err + tail])


def eisenstein_context(m: int, a, d=None, cutoff: int = DEFAULT_CUTOFF) -> EisensteinContext:
    X = build(m, a, d)
    ell = X.rank
    if ell <= 2:
        raise DomainError("the Eisenstein formula needs rank > 2")
    if ell % 2:
        raise DomainError("only even rank is supported")
    bad = 2 * (m - 2) * (m - 4) * math.prod(X.a) * math.prod(X.d)
    if bad == 0:
        raise DomainError("m = 4 is degenerate")
    bad_primes = factorize(bad).primes
    D = fundamental_discriminant((-1) ** (ell // 2) * math.prod(X.a))
    return EisensteinContext(X, bad_primes, D, L_euler_product(D, ell // 2, cutoff), cutoff)


def _target(ctx: EisensteinContext, h) -> tuple[Fraction, int]:
    h = Fraction(h)
    if h <= 0:
        raise DomainError("h must be positive")
    H = 4 * h
    if H.denominator != 1:
        raise DomainError("h must lie in (1/4)Z")
    return h, int(H)


def _h_primes(H: int) -> tuple[int, ...]:
    return factorize(H).primes


def local_density(ctx: EisensteinContext, p: int, H: int) -> Fraction:
    """b_p(h, lambda_d, 0), with p = 2 from the stabilized counting oracle."""
    X = ctx.X
    if p == 2:
        res = density_oracle(X.m, X.a, X.d, 2, H, max_modulus=2**22)
        if not res.stable:
            raise ArithmeticError(f"2-adic density did not stabilize for H={H}")
        return res.value
    return density_general(X.m, X.a, X.d, p, H)


def _ivq(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _leading(ctx: EisensteinContext, h: Fraction, index: Fraction):
    s = ctx.weight
    return (2 * iv.pi) ** s * _ivq(h) ** (s - 1) / (iv.sqrt(_ivq(index)) * math.factorial(s - 1))


def eisenstein_coefficient(ctx: EisensteinContext, h):
    """a_E(h) as index of L_X times the product of normalized beta_p.

    Primes dividing the bad modulus or h get their exact beta_p; the rest of
    the product is 1 / L(l/2, psi) with those Euler factors divided out.
    """
    h, H = _target(ctx, h)
    X = ctx.X
    half = half_lattice_index(X)
    index_X = Fraction(dual_index(X), half * half)
    special = sorted(set(ctx.bad_primes) | set(_h_primes(H)))
    exact = Fraction(1)
    for p in special:
        e = 0
        n = half
        while n % p == 0:
            n //= p
            e += 1
        exact *= local_density(ctx, p, H) / Fraction(p) ** e / ctx.generic_factor(p)
    return _leading(ctx, h, index_X) * _ivq(exact) / ctx.L_value


def eisenstein_coefficient_factored(ctx: EisensteinContext, h):
    """a_E(h) in the L(2, psi) arrangement.

    (2 pi)^2 h / (sqrt(16 d_L) Gamma(2) L(2, psi)) prod_{p | e1} b_p / (1 - psi(p) p^-2)
    prod_{p | h, p not | e1} gamma_p, with 16 d_L = prod 2 b_j, e1 = 2(m-2) prod a_j d_j
    and gamma_p = b_p / (1 - psi(p) p^-2) taken from the good-prime closed form.
    """
    h, H = _target(ctx, h)
    X = ctx.X
    e1 = 2 * (X.m - 2) * math.prod(X.a) * math.prod(X.d)
    e1_primes = factorize(e1).primes
    prod_e1 = Fraction(1)
    for p in e1_primes:
        prod_e1 *= local_density(ctx, p, H) / ctx.generic_factor(p)
    prod_gamma = Fraction(1)
    for p in _h_primes(H):
        if e1 % p == 0:
            continue
        if (X.m - 4) % p == 0:
            b = density_general(X.m, X.a, X.d, p, H)
        else:
            P = local_params(X.m, X.a, X.d, p, H)
            alpha = math.prod(_leg(u, p) for u in P.u_units)
            b = density_good_prime(X.rank, p, alpha, P.r, _leg(P.u, p) if P.u else None)
        prod_gamma *= b / ctx.generic_factor(p)
    return _leading(ctx, h, Fraction(dual_index(X))) * _ivq(prod_e1 * prod_gamma) / ctx.L_value


def relative_gap(x, y) -> float:
    """Largest relative distance between points of two positive enclosures."""
    lo = min(float(x.a), float(y.a))
    hi = max(float(x.b), float(y.b))
    return (hi - lo) / lo if lo > 0 else math.inf


def relative_width(x) -> float:
    lo, hi = float(x.a), float(x.b)
    return (hi - lo) / abs(lo) if lo else math.inf


def eisenstein_lower_bound(m: int, a, h) -> float:
    """9 / (26000 (m-2)^{3+1e-6}) h^{1-1e-6}, for a in the explicit list."""
    if tuple(sorted(a)) not in XBOUND_A_LIST:
        raise DomainError(f"a={tuple(a)} is not in the list the bound covers")
    if h <= 0 or m < 3:
        raise DomainError("need h > 0 and m >= 3")
    lg = math.log10(9) - math.log10(26000) - (3 + 1e-6) * math.log10(m - 2) + (1 - 1e-6) * math.log10(float(h))
    return 10.0**lg


def cusp_residual(m: int, a, d, n: int, ctx: EisensteinContext | None = None):
    """r(n) - a_E(h) for the d-constrained problem, as an enclosure."""
    d = tuple(d) if d is not None else (1,) * len(a)
    ctx = ctx or eisenstein_context(m, a, d)
    r = count_with_divisibility(PolygonalProblem(m, tuple(a), n), d)
    aE = eisenstein_coefficient(ctx, Fraction(scaled_H(m, a, n), 4))
    return r - aE


@dataclass(frozen=True)
class CuspBoundInputs:
    N_ad2: int
    M_ad2: int
    D: float
    h: float


def cusp_inputs(m: int, a, d, D, h) -> CuspBoundInputs:
    from .arith import lcm_all

    ld = lcm_all(d)
    N = 16 * (m - 2) ** 2 * lcm_all(a) * ld * ld
    M = 2 * (m - 2) * ld // math.gcd(m - 4, ld)
    return CuspBoundInputs(N, M, D, h)


CUSP_CONST = 2.04e-64
CUSP_M_EXP = 6 + 2 / 10 + 1 / 100 + 6e-6


def cusp_bound(m: int, h, D) -> float:
    """log10 of 2.04e-64 (m-2)^{6.21+6e-6} h^{17/30} D^{28.85}."""
    if m < 3 or h <= 0 or D <= 0:
        raise DomainError("need m >= 3, h > 0, D > 0")
    return math.log10(CUSP_CONST) + CUSP_M_EXP * math.log10(m - 2) + 17 / 30 * math.log10(h) + 28.85 * math.log10(D)


def minimal_sieve_level(d, beta: int = 10) -> int:
    """Smallest D whose remainder sum (|d_j| <= D / 7^{beta-1}) contains d."""
    return 7 ** (beta - 1) * max(d)


__all__ = [
    "EisensteinContext",
    "CuspBoundInputs",
    "eisenstein_context",
    "fundamental_discriminant",
    "L_euler_product",
    "L_dirichlet_series",
    "local_density",
    "eisenstein_coefficient",
    "eisenstein_coefficient_factored",
    "relative_gap",
    "relative_width",
    "eisenstein_lower_bound",
    "cusp_residual",
    "cusp_inputs",
    "cusp_bound",
    "minimal_sieve_level",
]
