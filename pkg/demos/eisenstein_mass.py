"""
Eisenstein coefficients against actual counts
=============================================

For a rank-4 polygonal form the main term a_E(n) predicts the number of
representations. The difference is the cusp part, which is bounded above.
"""

from fractions import Fraction

import numpy as np

from polysieve import eisenstein as eis
from polysieve.polygonal import PolygonalProblem, count_representations, scaled_H

m, a = 11, (1, 1, 2, 4)
ctx = eis.eisenstein_context(m, a)
print("character discriminant:", ctx.disc)
print("L(2, psi) enclosure:", ctx.L_value)

# %%
# a_E is an interval: the L-value is an enclosure, everything else exact.
ns = np.arange(1, 201)
counts, mains = [], []
for n in ns:
    r = count_representations(PolygonalProblem(m, a, int(n)))
    x = eis.eisenstein_coefficient(ctx, Fraction(scaled_H(m, a, int(n)), 4))
    counts.append(r)
    mains.append(float(x.mid))

counts, mains = np.array(counts), np.array(mains)
print("sum r / sum a_E over n <= 200:", counts.sum() / mains.sum())

# %%
# Two arrangements of the same product should agree to the enclosure width.
h = Fraction(scaled_H(m, a, 37), 4)
x = eis.eisenstein_coefficient(ctx, h)
y = eis.eisenstein_coefficient_factored(ctx, h)
print("relative gap between the two forms:", eis.relative_gap(x, y))
print("lower bound", eis.eisenstein_lower_bound(m, a, h), "<= a_E", float(x.a))

# %%
# The residual stays under the (very generous) cusp bound.
worst = 0.0
for n in range(1, 120, 11):
    res = eis.cusp_residual(m, a, (1, 1, 1, 1), n, ctx)
    worst = max(worst, abs(float(res.mid)))
D = eis.minimal_sieve_level((1, 1, 1, 1))
print("largest |r - a_E|:", worst)
print("log10 cusp bound at n=120:", eis.cusp_bound(m, Fraction(scaled_H(m, a, 120), 4), D))
