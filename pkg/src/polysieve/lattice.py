"""The shifted lattice X_d = L_d + nu_d attached to a polygonal problem.

Coordinates are taken in the basis v_{d,j} = (m-2) d_j e_j of L_d, so a
point is ``x + s`` with ``x`` integral and the fixed shift
``s_j = (4-m) / (2(m-2)d_j)``.  Q-values live in (1/4)Z; counting is done
on ``4Q`` so that everything stays integral.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod

from .arith import DomainError, is_squarefree


@dataclass(frozen=True)
class ShiftedLattice:
    m: int
    a: tuple[int, ...]
    d: tuple[int, ...]
    gram_diag: tuple[int, ...]
    shift_coeffs: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return len(self.a)

    def shift_in_e_basis(self) -> tuple[Fraction, ...]:
        """Coordinates of nu_d in the basis e_j; all equal (4-m)/2."""
        return tuple(s * (self.m - 2) * dj for s, dj in zip(self.shift_coeffs, self.d))

    def Q(self, x) -> Fraction:
        """Q of the point x + s for an integral coordinate vector x."""
        return sum((b * (xj + s) ** 2 for b, xj, s in zip(self.gram_diag, x, self.shift_coeffs)), Fraction(0))

    def Q_of_shift(self) -> Fraction:
        return self.Q((0,) * self.rank)


def build(m: int, a, d=None) -> ShiftedLattice:
    a = tuple(int(x) for x in a)
    d = tuple(int(x) for x in d) if d is not None else (1,) * len(a)
    if m < 3:
        raise DomainError(f"polygon order must be >= 3, got {m}")
    if len(d) != len(a):
        raise DomainError("a and d must have the same length")
    if any(x < 1 for x in a):
        raise DomainError("coefficients must be positive")
    if any(x < 1 or not is_squarefree(x) for x in d):
        raise DomainError(f"d must be positive squarefree, got {d}")
    gram = tuple(aj * (m - 2) ** 2 * dj**2 for aj, dj in zip(a, d))
    shift = tuple(Fraction(4 - m, 2 * (m - 2) * dj) for dj in d)
    return ShiftedLattice(m, a, d, gram, shift)


def dual_index(X: ShiftedLattice) -> int:
    """prod_j 2 a_j (m-2)^2 d_j^2."""
    return prod(2 * b for b in X.gram_diag)


def half_lattice_index(X: ShiftedLattice) -> int:
    """[L/2 : L_d] = 2^l prod_j (m-2) d_j."""
    return 2**X.rank * prod((X.m - 2) * dj for dj in X.d)


def _scaled_coordinate_values(X: ShiftedLattice, bound4: int) -> list[Counter]:
    """Per coordinate, a histogram of a_j (2(m-2)d_j x + 4 - m)^2 up to bound4."""
    hists = []
    for aj, dj in zip(X.a, X.d):
        step = 2 * (X.m - 2) * dj
        off = 4 - X.m
        s = isqrt(bound4 // aj) if bound4 >= 0 else -1
        hist: Counter = Counter()
        if s >= 0:
            lo = -((s + off) // step)
            hi = (s - off) // step
            for x in range(lo, hi + 1):
                y = step * x + off
                v = aj * y * y
                if v <= bound4:
                    hist[v] += 1
        hists.append(hist)
    return hists


def _convolve_upto(hists: list[Counter], bound: int) -> Counter:
    acc: Counter = Counter({0: 1})
    for hist in hists:
        nxt: Counter = Counter()
        for s, cs in acc.items():
            for v, cv in hist.items():
                if s + v <= bound:
                    nxt[s + v] += cs * cv
        acc = nxt
    return acc


def count_points(X: ShiftedLattice, value) -> int:
    """#{v in L_d + nu_d : Q(v) = value}."""
    value = Fraction(value)
    if value < 0:
        return 0
    four = 4 * value
    if four.denominator != 1:
        return 0
    target = int(four)
    hists = _scaled_coordinate_values(X, target)
    half = len(hists) // 2
    left = _convolve_upto(hists[:half], target)
    right = _convolve_upto(hists[half:], target)
    return sum(c * right.get(target - s, 0) for s, c in left.items())


def theta_coefficients(X: ShiftedLattice, h_max) -> dict[Fraction, int]:
    """All nonzero coefficients of Theta_X up to q^{h_max}, keyed by Q-value."""
    bound = int(4 * Fraction(h_max))
    if bound < 0:
        return {}
    series = _convolve_upto(_scaled_coordinate_values(X, bound), bound)
    return {Fraction(k, 4): c for k, c in sorted(series.items())}


__all__ = [
    "ShiftedLattice",
    "build",
    "dual_index",
    "half_lattice_index",
    "count_points",
    "theta_coefficients",
]
