from __future__ import annotations

import math
from fractions import Fraction

import pytest

from hyperell import testfn as tfn
from hyperell.ensemble import accumulate_moments, one_level_average
from hyperell.fqx import parse_field
from hyperell.ratios import (
    RatiosDomainError,
    ShiftPair,
    a_euler,
    a_prime_diag,
    exact_logderiv_average,
    exact_ratio_average,
    ratios_logderiv,
    ratios_one_level,
    ratios_R,
    soft_bound,
    zeta_q,
    zeta_q_logderiv,
    zeta_u,
)
from hyperell.theorems import c_term


def test_zeta_values():
    assert abs(zeta_q(3, 2) - 1.5) < 1e-15
    assert zeta_u(3, 0) == 1
    with pytest.raises(RatiosDomainError):
        zeta_q(3, 1)
    with pytest.raises(RatiosDomainError):
        zeta_u(5, 0.2)


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("r", [0, 0.05, 0.1, 0.2])
def test_a_on_the_diagonal_is_one(q, r):
    val, err = a_euler(q, r, r)
    assert abs(val - 1) < 1e-10 and err < 1e-10


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("t", [0.1, 0.3, 0.7])
def test_a_antidiagonal_closed_form(q, t):
    val, _ = a_euler(q, -1j * t, 1j * t)
    assert abs(val - zeta_q(q, 2) / zeta_q(q, 2 - 2j * t)) < 1e-10


def test_a_prime_truncation_and_monotonicity():
    assert abs(a_prime_diag(3, 0, 30) - a_prime_diag(3, 0, 40)) < 1e-12
    vals = [a_prime_diag(3, r) for r in (0, 0.05, 0.1, 0.2, 0.5)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_logderiv_geometric_series():
    q, r = 3, 0.25
    series = -math.log(q) * sum(q ** (-2 * r * n) for n in range(1, 400))
    assert abs(zeta_q_logderiv(q, 1 + 2 * r) - series) < 1e-12
    assert abs(zeta_q_logderiv(q, 1 + 2 * r) + math.log(q) * q ** (-2 * r) / (1 - q ** (-2 * r))) < 1e-12


def test_poles_and_domain():
    with pytest.raises(RatiosDomainError):
        ratios_R(3, 2, 0, 0.1)
    with pytest.raises(RatiosDomainError):
        ratios_logderiv(3, 2, 0)
    with pytest.raises(RatiosDomainError):
        ShiftPair(0.3, 0.1)


def test_ratio_at_equal_shifts_is_one():
    for g in (1, 2, 5):
        assert abs(ratios_R(3, g, 0.1, 0.1) - 1) < 1e-12


def test_one_level_terms():
    tf = tfn.TestFunction((Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(1)), 4)
    pred = ratios_one_level(tf, 3, 2)
    assert pred.A4 == Fraction(-1, 4)
    assert pred.A3 == c_term(tf, 3, 2)
    assert pred.A1 == 1
    assert pred.total == pred.A1 + pred.A2 + pred.A3 + pred.A4


@pytest.mark.parametrize("g", [2, 3])
def test_against_exact_ensemble(g):
    tf = tfn.fejer(g + 1)
    exact = one_level_average(tf, accumulate_moments(parse_field("3"), g, tf.N))
    bound = soft_bound(3, g)
    assert abs(exact - float(ratios_one_level(tf, 3, g).total)) <= bound
    r = 0.1
    assert abs(exact_logderiv_average(3, g, r) - ratios_logderiv(3, g, r)) <= bound
    # the recipe for the ratio itself, at a generic pair of shifts
    a, b = 0.1, 0.15
    assert abs(exact_ratio_average(3, g, a, b) - ratios_R(3, g, a, b)) <= bound
