"""
Rosser weights and the sieve main term
======================================

Builds the beta-sieve weights, compares the weighted sums with the Euler
product main term, and evaluates the explicit thresholds.
"""

from polysieve import sieve
from polysieve.polygonal import scaled_H

m, a, n = 11, (1, 1, 2, 4), 50
H = scaled_H(m, a, n)

# %%
# A low sieve level makes the weights differ from mu(d).
cfg = sieve.SieveConfig(10**9, 10, 13)
print("sieving primes:", cfg.sieve_primes(), "s =", round(cfg.s, 3))
for d in (5, 7, 35, 77, 385):
    w = sieve.rosser_weights(d, cfg)
    print(f"d={d:4d}  lambda+={w.plus:2d}  lambda-={w.minus:2d}  Lambda-={w.capital:2d}")

# %%
# At the working level D = z^27 the three sums and the main term.
for z in (5, 7, 11, 13):
    cfg = sieve.SieveConfig(z**27, 10, z)
    C = sieve.C_beta(cfg)
    mt = sieve.sum_MT(cfg, m, a, H, primes=cfg.sieve_primes())
    sd = sieve.sum_Dz(cfg, m, a, H)
    sp = sieve.sum_prime(cfg, m, a, H)
    print(f"z={z:2d}  C={C:.5f}  Sigma={float(sd):.5f}  Sigma'={float(sp):.5f}  Sigma_MT={float(mt):.5f}"
          f"  floor={float(sieve.sumdz_chain_floor(z)):.5f}")

# %%
# Exact sieved count against the upper/lower sandwich.
cfg = sieve.SieveConfig(13**27, 10, 13)
u = sieve.uplow_sandwich(cfg, m, a, 400)
print("S(A, 13) =", u.S, " sandwich holds:", u.holds, " with cusp bound:", u.holds_with_cusp)

# %%
# Explicit thresholds live far outside desk range, so only their arithmetic is checked.
for mm in (5, 11, 13):
    print(mm, "log10 threshold", round(sieve.positivity_threshold(mm), 1), " L >=", sieve.L_threshold(mm))
