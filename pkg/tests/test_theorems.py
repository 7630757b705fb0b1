from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperell.ensemble import accumulate_moments, one_level_average, pair_correlation_exact
from hyperell.fqx import lambda_square_sum, parse_field
from hyperell import testfn as tfn
from hyperell.testfn import fejer, zero
from hyperell.theorems import (
    WindowError,
    c_term,
    corollary_constants,
    delta0_pair,
    fejer_pair_correlation,
    fejer_pair_density,
    katz_sarnak_density,
    katz_sarnak_density_exact,
    nonvanishing_bound,
    pair_corr_limit,
    pair_corr_limit_exact,
    prime_sum_brute,
    prime_sum_c,
    prime_sum_c1,
    prime_sum_c2,
    simple_zero_bound,
    thm1_rhs,
    thm1_window,
    thm2_rhs,
    thm2_window,
)


def test_zero_test_function_gives_zero_everywhere():
    tf = tfn.TestFunction((Fraction(0),) * 5, 4)
    for rep in (thm1_rhs(tf, 3, 3), thm2_rhs(tf, 3, 4)):
        assert all(v == 0 for _, v in rep.parts)
    assert zero().is_zero()


def test_single_term_c():
    tf = fejer(3)  # Phi_hat(1/g) is hat(2) = 1/3
    for g in (2, 3, 5):
        assert c_term(tf, 3, g) == Fraction(1, 3) * Fraction(3, 12) / g


def test_secondary_term_only_when_three_divides_g():
    rep = thm1_rhs(fejer(3), 3, 3)
    assert rep.K == 1
    assert rep.part("secondary_k=1") == -Fraction(1, 3) / (3 * 2 * 3**4)
    rep4 = thm1_rhs(fejer(3), 3, 4)
    assert all(v == 0 for _, v in rep4.secondary)


def test_lambda_square_closed_form():
    assert lambda_square_sum(3, 4) == 303
    assert Fraction(lambda_square_sum(3, 4), 3**4) == Fraction(4 * 303, 324)


@pytest.mark.parametrize("n", range(1, 9))
def test_prime_sums_against_enumerated_primes(F3, n):
    def w_c(m, r):
        return Fraction(m, 3 ** (m * r) * (3**m + 1))

    def w_c1(m, r):
        return Fraction(m * m, 3 ** (m * r) * (3**m + 1))

    def w_c2(m, r):
        return Fraction(m * m, 3 ** (m * (2 * r - 2)) * (3**m + 1) ** 2)

    if n <= 6:
        assert prime_sum_brute(F3, n, w_c) == prime_sum_c(3, n)
        assert prime_sum_brute(F3, n, w_c1) == prime_sum_c1(3, n)
        assert prime_sum_brute(F3, n, w_c2) == prime_sum_c2(3, n)
    assert prime_sum_c(3, n) > 0 and prime_sum_c1(3, n) >= prime_sum_c(3, n)


def test_correction_signs():
    rep = thm2_rhs(fejer(3), 3, 4)
    assert rep.part("c1") < 0
    assert rep.part("c2") < 0
    assert rep.part("c3") < 0
    assert rep.part("c4") > 0
    for name in ("c1", "c2", "c3", "c4"):
        assert isinstance(rep.part(name), Fraction)


def test_windows():
    assert thm1_window(6, 6) == 1
    assert thm1_window(3, 7) == 0
    assert thm2_window(4, 2) == 1
    assert thm2_window(4, 5) == 0
    with pytest.raises(WindowError):
        thm1_rhs(fejer(30), 3, 3)
    with pytest.raises(WindowError):
        thm2_rhs(fejer(20), 3, 3)
    forced = thm2_rhs(fejer(20), 3, 3, force=True)
    assert forced.forced


@settings(max_examples=25, deadline=None)
@given(g=st.integers(2, 9), M=st.integers(2, 8), extra=st.integers(0, 3))
def test_kprime_beyond_g_only_adds_zeros(g, M, extra):
    tf = fejer(M)
    K = thm1_window(g, tf.N)
    if K is None or K == 0:
        return
    a = thm1_rhs(tf, 3, g)
    if K > g:
        return
    # every secondary and tail term with k > g vanishes, so totals agree
    b = thm1_rhs(tf, 3, g, Kprime=g)
    assert a.total == b.total
    if g - 1 >= K:
        c = thm1_rhs(tf, 3, g, Kprime=g - 1)
        assert abs(float(c.total - a.total)) <= 3 ** (-2 * g)


def test_limit_densities_exact_and_quadrature():
    d = fejer_pair_density()
    p = fejer_pair_correlation()
    assert katz_sarnak_density_exact(d) == Fraction(1, 8)
    assert abs(katz_sarnak_density(d) - 0.125) < 1e-12
    assert abs(pair_corr_limit(p) - float(pair_corr_limit_exact(p))) < 1e-12
    assert nonvanishing_bound(d) == Fraction(15, 16)
    assert simple_zero_bound(p) == Fraction(2, 3)
    # a transform of tiny support integrates to almost nothing
    assert abs(float(katz_sarnak_density_exact(delta0_pair())) - 1) < 1e-5


def test_corollary_constants():
    c = corollary_constants()
    assert abs(c["p0_bound"] - 0.94273) < 5e-5
    assert abs(c["simple_bound"] - 0.67252) < 5e-5
    assert abs(c["inf_integral"] - 0.114540) < 5e-6
    assert abs(c["inf_integral"] - c["inf_integral_from_h0"]) < 1e-9
    assert c["h0_residual"] < 1e-8
    # the optimized constant beats the Fejer pair
    assert c["p0_bound"] > float(c["fejer_nonvanishing"])


def test_thm1_residual_g3():
    F = parse_field("3")
    tf = fejer(3)
    rep = thm1_rhs(tf, 3, 3)
    exact = one_level_average(tf, accumulate_moments(F, 3, tf.N))
    assert abs(exact - float(rep.total)) <= 10 * rep.error_scale


@pytest.mark.parametrize("g,M", [(2, 2), (4, 3)])
def test_thm2_residual(g, M):
    F = parse_field("3")
    tf = fejer(M)
    rep = thm2_rhs(tf, 3, g)
    exact = pair_correlation_exact(tf, accumulate_moments(F, g, tf.N))
    assert abs(float(exact - rep.total)) <= 10 * rep.error_scale
    # the opposite sign for c1 misses by far more
    wrong = thm2_rhs(tf, 3, g, c1_sign=1)
    assert abs(float(exact - wrong.total)) > abs(float(exact - rep.total))
