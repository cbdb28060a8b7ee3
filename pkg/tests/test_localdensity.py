import itertools
import random
from fractions import Fraction

import pytest

from polysieve.arith import DomainError, legendre
from polysieve.localdensity import (
    INF,
    OMEGA_TABLE,
    XBOUND_A_LIST,
    DegenerateDensity,
    Omega_of_p,
    Omega_over_p,
    TableUnits,
    beta_p,
    closed_form_discrepancies,
    d_patterns,
    density_at_depth,
    density_general,
    density_good_prime,
    density_good_prime_stated,
    density_oracle,
    density_table,
    local_params,
    omega_bound_tables,
    omega_v,
    solution_count,
)
from polysieve.polygonal import scaled_H


def count_mod(b, c, target, p, k):
    """Plain loop count of sum b_j x_j^2 + c_j x_j = target mod p^k."""
    N = p**k
    return sum(1 for x in itertools.product(range(N), repeat=len(b)) if (sum(bj * xj * xj + cj * xj for bj, cj, xj in zip(b, c, x)) - target) % N == 0)


def test_fft_count_matches_plain_loop():
    # phi(x) = sum b_j x_j^2 + c_j x_j with the targets used by the oracle
    m, a, p, k = 5, (1, 2, 3), 5, 2
    for H in (scaled_H(m, a, n) for n in (0, 1, 7, 12)):
        P = local_params(m, a, None, p, H)
        b = P.b
        c = tuple(cj // 4 for cj in P.c)
        # h - Q(s) with Q(s) = (m-4)^2 sum(a) / 4
        target = Fraction(H - (m - 4) ** 2 * sum(a), 4)
        assert target.denominator == 1
        assert solution_count(m, a, None, p, H, k) == count_mod(b, c, int(target), p, k)


def test_rank_one_oracle_counts_square_roots():
    # phi(x) = 9x^2 - 12x = (3x - 2)^2 - 4, so solutions mirror square roots of H mod 5^k
    for H in (4, 24, 44):
        assert legendre(H, 5) == 1
        assert density_at_depth(5, (1,), None, 5, H, 3) == 2
    for H in (8, 12, 28):
        assert legendre(H, 5) == -1
        assert density_at_depth(5, (1,), None, 5, H, 3) == 0


def sample_points(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = rng.choice((5, 7))
        m = rng.choice((5, 11, 13))
        a = rng.choice(XBOUND_A_LIST)
        d = tuple(rng.choice((1, p)) for _ in range(4))
        n = rng.randrange(0, 400)
        out.append((m, a, d, p, scaled_H(m, a, n)))
    return out


@pytest.mark.parametrize("pt", sample_points(3, 60))
def test_general_matches_oracle(pt):
    m, a, d, p, H = pt
    o = density_oracle(m, a, d, p, H)
    assert o.stable
    assert density_general(m, a, d, p, H) == o.value


def test_oracle_stable_past_r_plus_two():
    m, a, p = 11, (1, 1, 2, 4), 5
    for n in range(0, 40, 3):
        H = scaled_H(m, a, n)
        r = local_params(m, a, None, p, H).r
        k = int(r) + 2
        assert density_at_depth(m, a, None, p, H, k) == density_at_depth(m, a, None, p, H, k + 1)


def test_empty_sum_when_r_zero():
    # D_p empty, r = 0: only the tail term survives and the value is 1 - alpha/p^2
    m, a, p = 11, (1, 1, 2, 4), 7
    alpha = legendre(2 * 4 * 81 ** 4, p)
    seen = 0
    for n in range(60):
        H = scaled_H(m, a, n)
        if local_params(m, a, None, p, H).r == 0:
            seen += 1
            assert density_general(m, a, None, p, H) == 1 - Fraction(alpha, p * p)
    assert seen


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("alpha", [1, -1])
def test_h_zero_geometric_series(p, alpha):
    P = Fraction(p)
    closed = 1 + (1 - 1 / P) / (P * P - 1) + alpha * (1 - 1 / P) / P * P * P / (P * P - 1)
    assert density_good_prime(4, p, alpha, INF) == closed
    for r in (10, 11):
        assert abs(density_good_prime(4, p, alpha, r) - closed) <= P ** (1 - r)


def good_prime_cases():
    out = []
    for p in (5, 7, 11, 13):
        for ell in (3, 4, 5, 6):
            for m in (11, 17, 23):
                if (m - 2) % p == 0 or (m - 4) % p == 0:
                    continue
                a = (1, 2, 3, 4, 6, 8)[:ell]
                out.append((ell, p, m, a))
    return out


@pytest.mark.parametrize("ell,p,m,a", good_prime_cases())
def test_good_prime_matches_general(ell, p, m, a):
    for n in range(0, 6 * p):
        H = scaled_H(m, a, n)
        P = local_params(m, a, None, p, H)
        alpha = 1
        for u in P.u_units:
            alpha *= legendre(u, p)
        usym = legendre(P.u, p) if P.r != INF and P.r % 2 == 0 else None
        assert density_good_prime(ell, p, alpha, P.r, usym) == density_general(m, a, None, p, H)


def test_good_prime_examples():
    # l = 4, r = 0, alpha = 1: 1 - 1/p^2
    assert density_good_prime(4, 5, 1, 0) == Fraction(24, 25)
    # the printed arrangement gives 1 + alpha - alpha/p^2 there
    assert density_good_prime_stated(4, 5, 1, 0) == Fraction(49, 25)
    m, a, p = 11, (1, 1, 1, 1), 5
    for n in range(40):
        H = scaled_H(m, a, n)
        P = local_params(m, a, None, p, H)
        if P.r == 1:
            alpha = 1
            for u in P.u_units:
                alpha *= legendre(u, p)
            assert density_good_prime(4, p, alpha, 1) == density_at_depth(m, a, None, p, H, 4)
            break
    else:
        pytest.fail("no r = 1 target found")


def test_good_prime_rejects_bad_alpha():
    with pytest.raises(DomainError):
        density_good_prime(4, 5, 0, 0)


def test_table_examples():
    assert density_table(5, "a", 3, TableUnits(T=2)) == 25
    assert density_table(5, "a", 1, TableUnits(T=2)) == 0
    assert density_table(5, (1, 2, 2, 2), 0, TableUnits(u=(1, 1, 1, 1))) == 0
    assert density_table(5, (1, 2, 2, 2), 2, TableUnits(u=(1, 1, 1, 1))) == 5
    # case (b), r = 1: 1 + (u4 u / p) p^-2
    for u4, uh in [(1, 1), (2, 1), (2, 3)]:
        val = density_table(7, (0, 0, 0, 1), 1, TableUnits(u=(1, 1, 1, u4), uh=uh))
        assert val == 1 + Fraction(legendre(u4 * uh, 7), 49)
    with pytest.raises(DomainError, match="uncovered"):
        density_table(5, (0, 1, 1, 1), 0, TableUnits(u=(1, 1, 1, 1)))


def test_closed_form_report_small():
    n, bad = closed_form_discrepancies(ms=(11,), primes=(5,), a_list=XBOUND_A_LIST[:8], per_class=4)
    assert n > 0
    assert not [x for x in bad if x.source == "good_prime"]
    # printed table mismatches only where the table adds its extra case (c) term
    assert {x.label for x in bad if x.source == "table"} <= {"case=c r=2"}


def test_beta_p_examples():
    m, a = 11, (1, 1, 2, 4)
    H = scaled_H(m, a, 17)
    assert beta_p(m, a, None, 7, H) == density_general(m, a, None, 7, H)
    assert beta_p(m, a, (7, 1, 1, 1), 7, H) == density_general(m, a, (7, 1, 1, 1), 7, H) / 7
    m = 17  # 15 = 3 * 5
    H = scaled_H(m, a, 4)
    assert beta_p(m, a, None, 5, H) == density_general(m, a, None, 5, H) / 5**4


def test_omega_v_examples():
    m, a, p = 11, (1, 1, 2, 4), 5
    H = scaled_H(m, a, 9)
    assert omega_v(m, a, None, p, H) == 1
    assert omega_v(m, a, (p, 1, 1, 1), p, H) == density_general(m, a, (p, 1, 1, 1), p, H) / density_general(m, a, None, p, H)


def test_omega_v_degenerate():
    # alpha = (1, 2, 2, 2) with r = 0 has zero base density
    m, a, p = 11, (5, 25, 25, 25), 5
    H = next(H for H in (scaled_H(m, a, n) for n in range(50)) if local_params(m, a, None, p, H).r == 0)
    assert density_general(m, a, None, p, H) == 0
    with pytest.raises(DegenerateDensity):
        omega_v(m, a, (p, 1, 1, 1), p, H)


def test_pattern_counts():
    assert [len(d_patterns(7, 4, v)) for v in range(1, 5)] == [4, 6, 4, 1]


def test_Omega_definitions_agree():
    m, a, p = 11, (1, 2, 2, 5), 5
    for n in range(0, 30, 4):
        H = scaled_H(m, a, n)
        assert Omega_of_p(m, a, p, H) == p * Omega_over_p(m, a, p, H)


def test_case_a_example_bound():
    m, a, p = 11, (1, 2, 2, 5), 5
    vals = [Omega_over_p(m, a, p, H) for H in (scaled_H(m, a, n) for n in range(200)) if local_params(m, a, None, p, H).r == 0]
    assert vals and max(vals) <= OMEGA_TABLE[("a", "0", 5)]


def test_omega_table_rows_small():
    rows = omega_bound_tables(primes=(7,), a_list=XBOUND_A_LIST[:6])
    assert rows and all(r.ok for r in rows)
    assert {r.case for r in rows} >= {"c", "e"}


def test_densities_nonnegative():
    for pt in sample_points(11, 200):
        assert density_general(*pt) >= 0
