"""Rosser weights, the error constant C_beta(s), the four-fold sieve sums,
the main-term product and the threshold arithmetic of the main theorem.

Sieve sums are exact Fractions.  The local weight of a divisor tuple
d = (d_1, .., d_4) with d_j | P_5(z) is

    g(d) = prod_p omega_{v,d}(p) / p^v,   p^v || d_1 d_2 d_3 d_4,

where omega_{v,d}(p) = b_p(h, lambda_d, 0) / b_p(h, lambda_1, 0) only
depends on which coordinates p divides.  P_w(z) is the product of the
primes w <= p < z; the main-term product runs over 5 <= p <= z unless a
prime set is passed explicitly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import DomainError, is_squarefree, primes_in
from .localdensity import XBOUND_A_LIST, DegenerateDensity, density_general
from .polygonal import PolygonalProblem, SolutionConstraint, count_representations, count_with_divisibility, scaled_H

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class SieveConfig:
    """Sieve level D, parameter beta, limit z and lower cut w.

    ``D`` may be an int, Fraction or float; ints and Fractions give exact
    Rosser conditions.  ``S`` optionally restricts the sieving primes.
    """

    D: object
    beta: float
    z: float
    w: float = 5
    S: frozenset[int] | None = field(default=None)

    def __post_init__(self):
        if self.beta < 5:
            raise DomainError(f"beta must be >= 5, got {self.beta}")
        if self.z < 5:
            raise DomainError(f"z must be >= 5, got {self.z}")
        if self.D <= 1:
            raise DomainError("D must exceed 1")

    @property
    def s(self) -> float:
        return _log(self.D) / math.log(self.z)

    def sieve_primes(self) -> list[int]:
        """Primes dividing P_w(z), i.e. max(w, 5) <= p < z, filtered by S."""
        ps = [p for p in primes_in(max(self.w, 5), self.z) if p > 3]
        if self.S is not None:
            ps = [p for p in ps if p in self.S]
        return ps


def _log(x) -> float:
    if isinstance(x, int):
        return math.log(x)
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(float(x))


@dataclass(frozen=True)
class RosserWeight:
    d: int
    plus: int
    minus: int

    @property
    def capital(self) -> int:
        """Lambda^-_d = 4 lambda^-_d - 3 lambda^+_d."""
        return 4 * self.minus - 3 * self.plus


def _below_y(primes_desc: list[int], k: int, cfg: SieveConfig) -> bool:
    """p_k < y_k = (D / (p_1 ... p_k))^(1/beta), for 1-based k."""
    pk = primes_desc[k - 1]
    head = math.prod(primes_desc[:k])
    beta = cfg.beta
    if isinstance(cfg.D, (int, Fraction)) and float(beta).is_integer():
        return Fraction(pk) ** int(beta) * head < cfg.D
    return beta * math.log(pk) + math.log(head) < _log(cfg.D)


def rosser_weights(d: int, cfg: SieveConfig) -> RosserWeight:
    """lambda^+ asks p_k < y_k at odd k <= r, lambda^- at even k with 2 <= k <= r."""
    if d < 1 or not is_squarefree(d) or math.gcd(d, 6) != 1:
        raise DomainError(f"d must be squarefree and prime to 6, got {d}")
    from .arith import factorize

    ps = sorted(factorize(d).primes, reverse=True)
    r = len(ps)
    sign = -1 if r % 2 else 1
    plus = sign if all(_below_y(ps, k, cfg) for k in range(1, r + 1, 2)) else 0
    minus = sign if all(_below_y(ps, k, cfg) for k in range(2, r + 1, 2)) else 0
    return RosserWeight(d, plus, minus)


@dataclass(frozen=True)
class ErrorConstant:
    a_beta: float
    r_beta: float
    C: float


def error_constant(beta: float, s: float) -> ErrorConstant:
    q = beta / (beta - 1)
    if abs(s - round(s)) < 1e-9:
        s = round(s)
    a = math.e * q * math.log(q)
    r = math.log(1 + 6 / math.log(5)) / math.log(q)
    if a >= 1:
        raise DomainError(f"divergent regime: a_beta = {a:.4f} >= 1")
    C = 2 * math.exp(r - 1) * (1 + 6 / math.log(5)) * a ** (math.floor(s - beta) + 1) / (1 - a)
    return ErrorConstant(a, r, C)


def C_beta(cfg: SieveConfig) -> float:
    return error_constant(cfg.beta, cfg.s).C


# --- local weights ---------------------------------------------------------------


def _pattern_d(p: int, mask: int, ell: int) -> tuple[int, ...]:
    return tuple(p if mask >> j & 1 else 1 for j in range(ell))


@lru_cache(maxsize=4096)
def pattern_weights(m: int, a: tuple[int, ...], H: int, p: int) -> tuple[Fraction, ...]:
    """g_p(mask) = omega_{v,d}(p) / p^v for every coordinate mask."""
    ell = len(a)
    base = density_general(m, a, None, p, H)
    if base == 0:
        raise DegenerateDensity(f"degenerate base density at p={p} (m={m}, a={a}, H={H})")
    out = []
    for mask in range(1 << ell):
        v = bin(mask).count("1")
        out.append(density_general(m, a, _pattern_d(p, mask, ell), p, H) / base / Fraction(p) ** v)
    return tuple(out)


def local_weight(m: int, a, H: int, d) -> Fraction:
    """prod_{p | d} beta_{X^d, p}(h) := prod omega_v(p) / (d_1 ... d_4)."""
    from .arith import factorize

    a = tuple(a)
    primes = set()
    for dj in d:
        primes.update(factorize(dj).primes if dj > 1 else ())
    out = Fraction(1)
    for p in primes:
        mask = sum(1 << j for j, dj in enumerate(d) if dj % p == 0)
        out *= pattern_weights(m, a, H, p)[mask]
    return out


def omega_over_p_from_weights(weights: tuple[Fraction, ...]) -> Fraction:
    return -sum(((-1) ** bin(mask).count("1") * w for mask, w in enumerate(weights) if mask), Fraction(0))


def w1(m: int, a, H: int, p: int) -> Fraction:
    """max over the single-coordinate patterns of omega_{1,d}(p)."""
    ws = pattern_weights(m, tuple(a), H, p)
    return max(ws[1 << j] for j in range(len(a))) * p


# --- the four-fold sums ----------------------------------------------------------


def _divisor_table(primes: list[int]) -> list[tuple[int, int]]:
    """(bitmask over primes, product) for every divisor of prod(primes)."""
    out = []
    for mask in range(1 << len(primes)):
        out.append((mask, math.prod(p for k, p in enumerate(primes) if mask >> k & 1)))
    return out


def _fourfold(m: int, a, H: int, primes: list[int], weight_fns) -> Fraction:
    a = tuple(a)
    if len(a) != 4:
        raise DomainError("the sieve sums are for rank 4")
    gs = [pattern_weights(m, a, H, p) for p in primes]
    divs = _divisor_table(primes)
    W = [[fn(dv) for _, dv in divs] for fn in weight_fns]
    total = Fraction(0)
    k = len(primes)
    for i1, (m1, _) in enumerate(divs):
        w_1 = W[0][i1]
        if not w_1:
            continue
        for i2, (m2, _) in enumerate(divs):
            w_2 = w_1 * W[1][i2]
            if not w_2:
                continue
            for i3, (m3, _) in enumerate(divs):
                w_3 = w_2 * W[2][i3]
                if not w_3:
                    continue
                for i4, (m4, _) in enumerate(divs):
                    w_4 = w_3 * W[3][i4]
                    if not w_4:
                        continue
                    g = Fraction(w_4)
                    for t in range(k):
                        mask = (m1 >> t & 1) | (m2 >> t & 1) << 1 | (m3 >> t & 1) << 2 | (m4 >> t & 1) << 3
                        if mask:
                            g *= gs[t][mask]
                    total += g
    return total


def _mu(d: int) -> int:
    from .arith import mobius

    return mobius(d)


def sum_Dz(cfg: SieveConfig, m: int, a, H: int) -> Fraction:
    """Sigma(D, z) = sum Lambda^-_{d1} lambda^+_{d2} lambda^+_{d3} lambda^+_{d4} g(d)."""
    primes = cfg.sieve_primes()
    cap = lambda d: rosser_weights(d, cfg).capital  # noqa: E731
    plus = lambda d: rosser_weights(d, cfg).plus  # noqa: E731
    return _fourfold(m, a, H, primes, (cap, plus, plus, plus))


def sum_prime(cfg: SieveConfig, m: int, a, H: int) -> Fraction:
    """Sigma'(D, z): all four weights lambda^+."""
    primes = cfg.sieve_primes()
    plus = lambda d: rosser_weights(d, cfg).plus  # noqa: E731
    return _fourfold(m, a, H, primes, (plus, plus, plus, plus))


def mt_primes(cfg: SieveConfig) -> list[int]:
    """5 <= p <= z, the range of the main-term product."""
    ps = primes_in(5, cfg.z, include_hi=True)
    return [p for p in ps if cfg.S is None or p in cfg.S]


def sum_MT(cfg: SieveConfig, m: int, a, H: int, primes=None) -> Fraction:
    """prod (1 - Omega(p)/p) over ``primes`` (default 5 <= p <= z)."""
    primes = mt_primes(cfg) if primes is None else primes
    out = Fraction(1)
    for p in primes:
        out *= 1 - omega_over_p_from_weights(pattern_weights(m, tuple(a), H, p))
    return out


def sum_MT_expansion(cfg: SieveConfig, m: int, a, H: int, primes=None) -> Fraction:
    """The same quantity as a four-fold sum with Moebius weights, term by term."""
    primes = mt_primes(cfg) if primes is None else primes
    return _fourfold(m, a, H, primes, (_mu,) * 4)


# --- one-dimensional Rosser sandwich ---------------------------------------------


@dataclass(frozen=True)
class RosserSandwich:
    lower: Fraction
    middle: Fraction
    upper: Fraction

    @property
    def holds(self) -> bool:
        return self.lower <= self.middle <= self.upper


def rosser_sandwich(cfg: SieveConfig, g: dict[int, Fraction]) -> RosserSandwich:
    """sum lambda^- g(d) <= prod (1 - g(p)) <= sum lambda^+ g(d), g multiplicative."""
    primes = cfg.sieve_primes()
    lo = hi = Fraction(0)
    for mask, d in _divisor_table(primes):
        gd = math.prod((g[p] for k, p in enumerate(primes) if mask >> k & 1), start=Fraction(1))
        w = rosser_weights(d, cfg)
        lo += w.minus * gd
        hi += w.plus * gd
    mid = math.prod((1 - g[p] for p in primes), start=Fraction(1))
    return RosserSandwich(lo, mid, hi)


def pointwise_sieve_check(cfg: SieveConfig) -> bool:
    """sum_{d | n} lambda^-_d <= [n = 1] <= sum_{d | n} lambda^+_d for all n | P."""
    primes = cfg.sieve_primes()
    divs = _divisor_table(primes)
    weights = {mask: rosser_weights(d, cfg) for mask, d in divs}
    for n_mask, _ in divs:
        sub = [weights[mask] for mask, _ in divs if mask & n_mask == mask]
        target = 1 if n_mask == 0 else 0
        if not sum(w.minus for w in sub) <= target <= sum(w.plus for w in sub):
            return False
    return True


def coordinate_weights(m: int, a, H: int, primes, j: int = 0) -> dict[int, Fraction]:
    """g(p) for the pattern with p dividing only coordinate j."""
    return {p: pattern_weights(m, tuple(a), H, p)[1 << j] for p in primes}


# --- S(A, z) -----------------------------------------------------------------------


def S_exact(m: int, a, n: int, z: float, w: float = 5, *, zero_exempt: bool = True) -> int:
    """#{x : sum a_j p_m(x_j) = n, gcd(x_j, P_w(z)) = 1}.

    With ``zero_exempt`` (default) x_j = 0 always passes; otherwise zero
    coordinates fail as soon as P_w(z) > 1, which is what the Moebius
    expansion over d_j | P_w(z) counts.
    """
    P = math.prod(p for p in primes_in(w, z) if p > 3)
    c = SolutionConstraint(gcd_modulus=P, zero_exempt=zero_exempt)
    return count_representations(PolygonalProblem(m, tuple(a), n), c)


def remainder_terms(cfg: SieveConfig, m: int, a, n: int, H: int) -> list[tuple[tuple[int, ...], int, Fraction]]:
    """(d, r_d(n), g(d)) for every d with d_j | P_5(z), d_j <= D / 7^(beta-1).

    R(d, h) = r_d(n) - X g(d), where X g(d) is the Eisenstein coefficient of
    X_d (checked against a direct evaluation in the tests).
    """
    primes = cfg.sieve_primes()
    bound = _log(cfg.D) - (cfg.beta - 1) * math.log(7)
    divs = [d for _, d in _divisor_table(primes) if math.log(d) <= bound]
    prob = PolygonalProblem(m, tuple(a), n)
    return [(d, count_with_divisibility(prob, d), local_weight(m, a, H, d)) for d in itertools.product(divs, repeat=4)]


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval."""
    from mpmath import mpf

    out = []
    for e in (x.a, x.b):
        man, exp = mpf(e).man_exp
        out.append(Fraction(int(man)) * Fraction(2) ** int(exp))
    return out[0], out[1]


@dataclass(frozen=True)
class UpLowSandwich:
    """X Sigma - 7 sum|R| <= S <= X Sigma' + sum|R|, with S counted exactly.

    X is only known inside [X_lo, X_hi].  Both sides are piecewise linear in
    X with kinks where some R(d, h) vanishes, so the sandwich is checked at
    the endpoints and every kink inside the enclosure.
    """

    S: int
    X_lo: Fraction
    X_hi: Fraction
    sigma: Fraction
    sigma_prime: Fraction
    terms: tuple
    log10_cusp: float

    def abs_R(self, X: Fraction) -> Fraction:
        return sum((abs(r - X * g) for _, r, g in self.terms), Fraction(0))

    def lower(self, X: Fraction) -> Fraction:
        return X * self.sigma - 7 * self.abs_R(X)

    def upper(self, X: Fraction) -> Fraction:
        return X * self.sigma_prime + self.abs_R(X)

    def _candidates(self) -> list[Fraction]:
        kinks = {Fraction(r) / g for _, r, g in self.terms if g}
        return [self.X_lo, self.X_hi] + sorted(x for x in kinks if self.X_lo < x < self.X_hi)

    @property
    def holds(self) -> bool:
        return all(self.lower(X) <= self.S <= self.upper(X) for X in self._candidates())

    @property
    def holds_with_cusp(self) -> bool:
        """The same with cusp_bound in place of sum|R| (checked in floats)."""
        R = 10.0 ** min(self.log10_cusp, 300)
        return float(self.X_lo * self.sigma) - 7 * R <= self.S <= float(self.X_hi * self.sigma_prime) + R


def uplow_sandwich(cfg: SieveConfig, m: int, a, n: int, ctx=None) -> UpLowSandwich:
    from .eisenstein import cusp_bound, eisenstein_coefficient, eisenstein_context

    a = tuple(a)
    H = scaled_H(m, a, n)
    ctx = ctx or eisenstein_context(m, a)
    X_lo, X_hi = _iv_bounds(eisenstein_coefficient(ctx, Fraction(H, 4)))
    return UpLowSandwich(
        S=S_exact(m, a, n, cfg.z, cfg.w, zero_exempt=False),
        X_lo=X_lo,
        X_hi=X_hi,
        sigma=sum_Dz(cfg, m, a, H),
        sigma_prime=sum_prime(cfg, m, a, H),
        terms=tuple(remainder_terms(cfg, m, a, n, H)),
        log10_cusp=cusp_bound(m, Fraction(H, 4), cfg.D),
    )


# --- explicit bounds and thresholds ----------------------------------------------


@dataclass(frozen=True)
class LowerBoundValue:
    """A difference main - cusp of two positive reals, kept in log10."""

    log10_main: float
    log10_cusp: float

    @property
    def positive(self) -> bool:
        return self.log10_main > self.log10_cusp

    @property
    def log10_abs(self) -> float:
        """log10 |main - cusp|."""
        hi, lo = max(self.log10_main, self.log10_cusp), min(self.log10_main, self.log10_cusp)
        gap = hi - lo
        return -math.inf if gap == 0 else hi + math.log10(-math.expm1(-gap * math.log(10)))

    @property
    def value(self) -> float:
        """The signed value; +-inf if it does not fit a float."""
        big = max(self.log10_main, self.log10_cusp)
        if big > 300:
            return math.inf if self.positive else -math.inf
        return 10.0**self.log10_main - 10.0**self.log10_cusp


def _check_xbound_a(a) -> None:
    if tuple(sorted(a)) not in XBOUND_A_LIST:
        raise DomainError(f"a={tuple(a)} is outside the list the explicit bounds cover")


def S_lower_bound(m: int, a, h, z, D) -> LowerBoundValue:
    """2.35e-4/(m-2)^{3+1e-6} h^{1-1e-6} e^{-5 gamma}/(log z)^5 (1 - 1/(log z)^2)^5
    - 1.43e-63 (m-2)^{6.21+6e-6} h^{17/30} D^{28.85}, in log10."""
    _check_xbound_a(a)
    if z < 5 or h <= 0:
        raise DomainError("need z >= 5 and h > 0")
    L10 = math.log10
    lz = math.log(z)
    main = (
        L10(2.35e-4)
        - (3 + 1e-6) * L10(m - 2)
        + (1 - 1e-6) * L10(h)
        - 5 * EULER_GAMMA / math.log(10)
        - 5 * L10(lz)
        + 5 * L10(1 - 1 / lz**2)
    )
    logD = _log(D) / math.log(10)
    cusp = L10(1.43e-63) + (6 + 2 / 10 + 1 / 100 + 6e-6) * L10(m - 2) + 17 / 30 * L10(h) + 28.85 * logD
    return LowerBoundValue(main, cusp)


def theorem_choices(h) -> tuple[float, float]:
    """z = max(h^{1/1800}, 5) and D = z^27 as used in the main argument."""
    z = max(float(h) ** (1 / 1800), 5.0)
    return z, z**27


def positivity_threshold(m: int) -> float:
    """log10 of (9.22e-45 (m-2)^{9.21})^{1/5.77e-4}."""
    if m < 5:
        raise DomainError("need m >= 5")
    return (math.log10(9.22e-45) + 9.21 * math.log10(m - 2)) / 5.77e-4


def N_LS_bound(m: int) -> float:
    """log10 of 1 + (m-2)^{-1} (9.22e-45 (m-2)^{9.21})^{1/(2 * 5.77e-4)}."""
    x = positivity_threshold(m) / 2 - math.log10(m - 2)
    if x > 15:
        return x + math.log10(1 + 10.0 ** (-x))
    return math.log10(1 + 10.0**x)


def L_threshold_real(m: int) -> float:
    """1 + 7980 log_5(m-2), before rounding."""
    if m < 5:
        raise DomainError("need m >= 5")
    return 1 + 7980 * math.log(m - 2) / math.log(5)


def L_threshold(m: int) -> int:
    """Least integer L with L >= max(900, 1 + 7980 log_5(m-2))."""
    return max(900, math.ceil(L_threshold_real(m)))


def sumdz_chain_floor(z) -> float:
    """0.68 prod_{p <= z} (1 - 1/p)^5."""
    return 0.68 * math.prod((1 - 1 / p) ** 5 for p in primes_in(2, z, include_hi=True))


def qualifies_sumdz(a) -> bool:
    """At most one prime p >= 7 divides prod a, and p || prod a for 5 <= p <= 7."""
    from .arith import factorize

    fac = dict(factorize(math.prod(a)).factors)
    big = [p for p in fac if p >= 7]
    if len(big) > 1 or any(p > 7 for p in big):
        return False
    return all(fac.get(p, 0) <= 1 for p in (5, 7))


def qualifies_one_beta(a) -> bool:
    """a only divisible by primes <= 7, with ord_p prod a <= 1 for p = 5, 7."""
    from .arith import factorize

    fac = dict(factorize(math.prod(a)).factors)
    return all(p <= 7 for p in fac) and fac.get(5, 0) <= 1 and fac.get(7, 0) <= 1


def one_beta_bound(m: int, a, H: int, w: float, z: float) -> tuple[Fraction, float]:
    """(prod_{w<p<z} (1 - w1(p)/p)^{-1} exact, 4 prod_{w<p<z} (1 - 1/p)^{-2})."""
    lhs = Fraction(1)
    rhs = 4.0
    for p in primes_in(w, z):
        if p <= w or p < 5:
            continue
        lhs /= 1 - w1(m, a, H, p) / p
        rhs /= (1 - 1 / p) ** 2
    return lhs, rhs


__all__ = [
    "SieveConfig",
    "RosserWeight",
    "ErrorConstant",
    "rosser_weights",
    "error_constant",
    "C_beta",
    "pattern_weights",
    "local_weight",
    "w1",
    "omega_over_p_from_weights",
    "sum_Dz",
    "sum_prime",
    "sum_MT",
    "sum_MT_expansion",
    "mt_primes",
    "RosserSandwich",
    "rosser_sandwich",
    "pointwise_sieve_check",
    "coordinate_weights",
    "S_exact",
    "remainder_terms",
    "UpLowSandwich",
    "uplow_sandwich",
    "LowerBoundValue",
    "S_lower_bound",
    "theorem_choices",
    "positivity_threshold",
    "N_LS_bound",
    "L_threshold_real",
    "L_threshold",
    "sumdz_chain_floor",
    "qualifies_sumdz",
    "qualifies_one_beta",
    "one_beta_bound",
]
