"""Generalized m-gonal numbers and brute-force representation counting.

A representation of n by the coefficient vector ``a`` is an integer vector
``x`` with ``sum(a[j] * pm(m, x[j])) == n``.  Completing the square turns
this into ``sum(a[j] * N[j]**2) == H`` with ``N[j] = 2(m-2)x[j] + 4 - m``
and ``H = 8(m-2)n + (m-4)**2 * sum(a)``, which is what bounds the search.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from .arith import DomainError, is_pls, is_squarefree

MAX_RANK = 8


def pm(m: int, n: int) -> int:
    """The generalized m-gonal number ((m-2)n^2 + (4-m)n) / 2."""
    if m < 3:
        raise DomainError(f"polygon order must be >= 3, got {m}")
    twice = (m - 2) * n * n + (4 - m) * n
    return twice // 2


@dataclass(frozen=True)
class ScaledTarget:
    H: int
    h_quarter: Fraction


@dataclass(frozen=True)
class PolygonalProblem:
    m: int
    a: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.m < 3:
            raise DomainError(f"polygon order must be >= 3, got {self.m}")
        if not 1 <= len(self.a) <= MAX_RANK:
            raise DomainError(f"need 1..{MAX_RANK} coefficients, got {len(self.a)}")
        if any(x < 1 for x in self.a):
            raise DomainError("coefficients must be positive")

    @property
    def rank(self) -> int:
        return len(self.a)

    def scaled_target(self) -> ScaledTarget:
        return scaled_target(self)


def scaled_H(m: int, a, n: int) -> int:
    return 8 * (m - 2) * n + (m - 4) ** 2 * sum(a)


def scaled_target(prob: PolygonalProblem) -> ScaledTarget:
    H = scaled_H(prob.m, prob.a, prob.n)
    return ScaledTarget(H, Fraction(H, 4))


@dataclass(frozen=True)
class SolutionConstraint:
    """Side conditions on a representation.

    ``d[j] | x[j]`` always; ``gcd(x[j], gcd_modulus) == 1`` and the P_{L,S}
    filter only for nonzero coordinates, unless ``zero_exempt`` is False, in
    which case x[j] = 0 passes the gcd filter only when gcd_modulus == 1.
    """

    d: tuple[int, ...] | None = None
    gcd_modulus: int = 1
    pls: tuple[int, object] | None = None
    zero_exempt: bool = True

    def __post_init__(self):
        if self.d is not None:
            object.__setattr__(self, "d", tuple(int(x) for x in self.d))
            if any(x < 1 or not is_squarefree(x) for x in self.d):
                raise DomainError(f"divisors must be positive squarefree, got {self.d}")
        if self.gcd_modulus < 1 or not is_squarefree(self.gcd_modulus):
            raise DomainError("gcd_modulus must be positive squarefree")

    def admits(self, j: int, x: int) -> bool:
        if self.d is not None and x % self.d[j]:
            return False
        if x == 0:
            return self.zero_exempt or self.gcd_modulus == 1
        if self.gcd_modulus > 1 and gcd(x, self.gcd_modulus) != 1:
            return False
        if self.pls is not None and not is_pls(x, *self.pls):
            return False
        return True


NO_CONSTRAINT = SolutionConstraint()


def coordinate_range(m: int, a_j: int, H: int) -> range:
    """All x with a_j * (2(m-2)x + 4 - m)**2 <= H."""
    if H < 0:
        return range(0)
    s = isqrt(H // a_j)
    step = 2 * (m - 2)
    lo = -((s + 4 - m) // step)  # ceil((m - 4 - s) / step)
    hi = (s + m - 4) // step
    return range(lo, hi + 1)


def _coordinate_values(prob: PolygonalProblem, c: SolutionConstraint) -> list[list[tuple[int, int]]]:
    H = scaled_H(prob.m, prob.a, prob.n)
    out = []
    for j, aj in enumerate(prob.a):
        vals = []
        for x in coordinate_range(prob.m, aj, H):
            v = aj * pm(prob.m, x)
            if v <= prob.n and c.admits(j, x):
                vals.append((x, v))
        out.append(vals)
    return out


def _check_target(prob: PolygonalProblem) -> None:
    if prob.n < 0:
        raise DomainError(f"target must be nonnegative, got {prob.n}")


def enumerate_representations(prob: PolygonalProblem, c: SolutionConstraint = NO_CONSTRAINT) -> list[tuple[int, ...]]:
    """All constrained representations, in lexicographic order."""
    _check_target(prob)
    coords = _coordinate_values(prob, c)
    # suffix minima prune partial sums that cannot reach n
    min_rest = [0] * (len(coords) + 1)
    for j in range(len(coords) - 1, -1, -1):
        lo = min((v for _, v in coords[j]), default=None)
        min_rest[j] = float("inf") if lo is None or min_rest[j + 1] == float("inf") else lo + min_rest[j + 1]
    out: list[tuple[int, ...]] = []

    def rec(j: int, acc: int, prefix: tuple[int, ...]):
        if j == len(coords):
            if acc == prob.n:
                out.append(prefix)
            return
        for x, v in coords[j]:
            if acc + v + min_rest[j + 1] <= prob.n:
                rec(j + 1, acc + v, prefix + (x,))

    rec(0, 0, ())
    out.sort()
    return out


def _value_histograms(prob: PolygonalProblem, c: SolutionConstraint) -> list[Counter]:
    return [Counter(v for _, v in vals) for vals in _coordinate_values(prob, c)]


def _count_sum(hists: list[Counter], target: int) -> int:
    """Number of ways to pick one value per histogram summing to target."""
    half = len(hists) // 2
    left: Counter = Counter({0: 1})
    for hist in hists[:half]:
        nxt: Counter = Counter()
        for s, cs in left.items():
            for v, cv in hist.items():
                if s + v <= target:
                    nxt[s + v] += cs * cv
        left = nxt
    right: Counter = Counter({0: 1})
    for hist in hists[half:]:
        nxt = Counter()
        for s, cs in right.items():
            for v, cv in hist.items():
                if s + v <= target:
                    nxt[s + v] += cs * cv
        right = nxt
    return sum(cl * right.get(target - s, 0) for s, cl in left.items())


def count_representations(prob: PolygonalProblem, c: SolutionConstraint = NO_CONSTRAINT) -> int:
    _check_target(prob)
    return _count_sum(_value_histograms(prob, c), prob.n)


def count_with_divisibility(prob: PolygonalProblem, d) -> int:
    """#{x : sum a_j pm(x_j) = n and d_j | x_j}."""
    return count_representations(prob, SolutionConstraint(d=tuple(d)))


def count_table(m: int, a, n_max: int, c: SolutionConstraint = NO_CONSTRAINT) -> list[int]:
    """Constrained representation counts for every n in 0..n_max."""
    probe = PolygonalProblem(m, tuple(a), n_max)
    series = [1] + [0] * n_max
    for hist in _value_histograms(probe, c):
        nxt = [0] * (n_max + 1)
        for s, cs in enumerate(series):
            if cs:
                for v, cv in hist.items():
                    if s + v <= n_max:
                        nxt[s + v] += cs * cv
        series = nxt
    return series


def _ord2(x: int) -> int:
    return (x & -x).bit_length() - 1


def two_power_four_square_valuations(n_max: int) -> dict[int, int]:
    """For each k <= n_max, min ord_2(x_j) over nonzero coordinates of all
    solutions of x1^2 + x2^2 + x3^2 + x4^2 = 2^k.

    Signs and order do not change valuations, so only x1 >= x2 >= x3 >= x4 >= 0
    is searched.
    """
    if n_max > 24:
        raise DomainError("n_max above 24 is out of desk scale")
    table = {}
    for k in range(n_max + 1):
        N = 1 << k
        best = None
        x1 = isqrt(N)
        while 4 * x1 * x1 >= N and x1 >= 0:
            r1 = N - x1 * x1
            x2 = min(x1, isqrt(r1))
            while 3 * x2 * x2 >= r1 and x2 >= 0:
                r2 = r1 - x2 * x2
                x3 = min(x2, isqrt(r2))
                while 2 * x3 * x3 >= r2 and x3 >= 0:
                    r3 = r2 - x3 * x3
                    x4 = isqrt(r3)
                    if x4 * x4 == r3 and x4 <= x3:
                        v = min(_ord2(x) for x in (x1, x2, x3, x4) if x)
                        best = v if best is None else min(best, v)
                    x3 -= 1
                x2 -= 1
            x1 -= 1
        table[k] = best
    return table


def universality_scan(m: int, a, N: int, L: int | None = None, S=None) -> list[bool]:
    """For n = 0..N, whether n has a representation with P_{L,S} inputs."""
    if L is None:
        c = NO_CONSTRAINT
    else:
        c = SolutionConstraint(pls=(L, S if S is not None else {2, 3}))
    return [count_table_entry > 0 for count_table_entry in count_table(m, a, N, c)]


__all__ = [
    "pm",
    "PolygonalProblem",
    "ScaledTarget",
    "SolutionConstraint",
    "scaled_target",
    "scaled_H",
    "coordinate_range",
    "enumerate_representations",
    "count_representations",
    "count_with_divisibility",
    "count_table",
    "two_power_four_square_valuations",
    "universality_scan",
]
