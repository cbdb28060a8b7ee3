from fractions import Fraction

import pytest

from polysieve.arith import DomainError
from polysieve.lattice import build, count_points, dual_index, half_lattice_index, theta_coefficients
from polysieve.polygonal import PolygonalProblem, count_with_divisibility, scaled_H


def test_build_examples():
    assert build(5, (1, 1, 1, 1)).gram_diag == (9, 9, 9, 9)
    assert build(5, (1, 1, 1, 1), (5, 1, 1, 1)).gram_diag == (225, 9, 9, 9)
    X = build(5, (1, 1, 1, 1), (5, 7, 1, 1))
    assert X.shift_in_e_basis() == (Fraction(-1, 2),) * 4


def test_build_rejects_non_squarefree():
    with pytest.raises(DomainError):
        build(5, (1, 1, 1, 1), (25, 1, 1, 1))


@pytest.mark.parametrize("m,a,expected", [(5, (1, 1, 1, 1), 104976), (5, (1, 2, 2, 5), 2099520), (5, (1,), 18)])
def test_dual_index(m, a, expected):
    assert dual_index(build(m, a)) == expected


def test_dual_index_scales_by_p_squared():
    base = dual_index(build(11, (1, 1, 2, 4)))
    assert dual_index(build(11, (1, 1, 2, 4), (1, 7, 1, 1))) == 49 * base


def test_half_lattice_index():
    assert half_lattice_index(build(5, (1, 1, 1, 1))) == 16 * 81
    assert half_lattice_index(build(11, (1, 1, 2, 4), (5, 1, 1, 1))) == 16 * 9**4 * 5


def test_count_points_examples():
    X = build(5, (1, 1, 1, 1))
    assert count_points(X, 7) == 4
    assert count_points(X, X.Q_of_shift()) >= 1
    assert count_points(X, -3) == 0
    assert count_points(X, Fraction(1, 3)) == 0


def test_Q_values_quarter_integral():
    X = build(11, (1, 2, 3, 4), (5, 1, 7, 1))
    for x in [(0, 0, 0, 0), (1, -2, 3, 0), (-4, 1, 1, 2)]:
        assert (4 * X.Q(x)).denominator == 1 and X.Q(x) > 0


def test_theta_partition_and_nonnegativity():
    X = build(5, (1, 1, 2, 4))
    theta = theta_coefficients(X, 60)
    assert all(c > 0 for c in theta.values())
    assert min(theta) == X.Q_of_shift() and theta[X.Q_of_shift()] == 1
    assert sum(theta.values()) == sum(count_points(X, v) for v in {Fraction(k, 4) for k in range(241)})


@pytest.mark.parametrize("m,a,d", [(5, (1, 1, 1, 1), (1, 1, 1, 1)), (11, (1, 1, 2, 4), (5, 1, 7, 1)), (13, (1, 2, 3, 4), (35, 1, 1, 5))])
def test_lattice_matches_polygonal(m, a, d):
    X = build(m, a, d)
    for n in range(0, 60):
        assert count_points(X, Fraction(scaled_H(m, a, n), 4)) == count_with_divisibility(PolygonalProblem(m, a, n), d)
