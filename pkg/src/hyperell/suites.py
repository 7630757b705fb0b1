"""Named verification suites: each check records pass/fail and a residual.

Shared by ``hyperell verify`` and the test suite.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from . import characters as ch
from .ensemble import (
    sample_discriminants,
    sigma1_from_psi,
    sigma1_from_zeros,
    sigma2_from_psi,
    sigma2_from_zeros,
    verify_sample,
)
from .fqx import (
    Field,
    divisors,
    enumerate_hyperelliptic,
    enumerate_monic,
    lambda_square_sum,
    lambda_square_sum_brute,
    monic_irreducibles,
    pi_q,
    poly_mul,
    poly_pow,
    prime_count_brute,
    X,
)
from .lfunction import (
    afe_evaluate,
    central_order,
    compute_zeros,
    functional_equation_holds,
    l_coefficients,
    newton_check,
    psi_from_coefficients,
    psi_from_zeros,
    psi_power_sums,
)
from .testfn import fejer

SUITES = ("lemmas", "lfunction", "dualroute", "all")


@dataclass
class Check:
    name: str
    passed: bool
    residual: float = 0.0
    count: int = 0
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _monic_upto(F: Field, max_deg: int) -> Iterable:
    for n in range(0, max_deg + 1):
        yield from enumerate_monic(F, n)


# ---------------------------------------------------------------- lemmas


def _all_upto(F: Field, max_deg: int) -> Iterable:
    """Every nonzero polynomial of degree <= max_deg (not only monic ones)."""
    for f in _monic_upto(F, max_deg):
        for c in range(1, F.q):
            yield tuple(F.mul(c, a) for a in f)


def check_reciprocity(F: Field, max_deg: int = 2) -> Check:
    bad = 0
    n = 0
    for Q in _monic_upto(F, max_deg + 1):
        if len(Q) < 2:
            continue
        for f in _monic_upto(F, max_deg):
            n += 1
            if ch.jacobi(F, f, Q) != ch.jacobi_factored(F, f, Q):
                bad += 1
    return Check("jacobi symbol: reciprocity ladder vs factorization", bad == 0, float(bad), n)


def check_lemma31(F: Field, g: int, max_deg: int = 3) -> Check:
    bad = 0
    n = 0
    worst = ""
    for f in _monic_upto(F, max_deg):
        lhs, rhs = ch.verify_lemma31(F, f, g)
        n += 1
        if lhs != rhs:
            bad += 1
            worst = f"f={f}: {lhs} vs {rhs}"
    return Check(f"ensemble character sum identity (g={g}, d(f)<={max_deg})", bad == 0, float(bad), n, worst)


def check_gauss_closed(F: Field, max_deg: int = 3, tol: float = 1e-9) -> Check:
    worst = 0.0
    n = 0
    for dP in range(1, max_deg + 1):
        for P in monic_irreducibles(F, dP):
            for j in (1, 2):
                if F.q ** (j * dP) > 729:
                    continue
                mod = poly_pow(F, P, j)
                # every V of low degree (unit multiples included) plus multiples of P
                low = [v for v in _all_upto(F, min(j * dP - 1, 1))]
                Vs = low + [(), P, poly_mul(F, P, X), poly_pow(F, P, 2)]
                for V in Vs:
                    direct = ch.gauss_sum(F, V, mod)
                    closed = ch.gauss_sum_closed(F, V, P, j)
                    worst = max(worst, abs(direct - closed))
                    n += 1
    return Check(f"Gauss sums: direct vs closed form (d(P)<={max_deg})", worst < tol, worst, n)


def check_poisson(F: Field, max_deg: int = 3, tol: float = 1e-9) -> Check:
    worst = 0.0
    n = 0
    for dP in range(1, max_deg + 1):
        for P in monic_irreducibles(F, dP):
            for m in range(dP):
                out = ch.verify_poisson(F, P, m)
                worst = max(worst, abs(out["direct"] - out["poisson"]), abs(out["direct"] - out["poisson_prime"]))
                n += 1
    return Check(f"Poisson summation, general and prime forms (d(P)<={max_deg})", worst < tol, worst, n)


def check_lambda_square(F: Field, max_n: int = 8) -> Check:
    bad = []
    for n in range(1, max_n + 1):
        if lambda_square_sum_brute(F, n) != lambda_square_sum(F.q, n):
            bad.append(n)
    return Check(f"sum of Lambda(f)^2 over M_n, brute vs closed form (n<={max_n})", not bad, float(len(bad)), max_n,
                 f"failing n: {bad}" if bad else "")


def check_prime_polynomial_theorem(F: Field, max_n: int = 6) -> Check:
    bad = []
    for n in range(1, max_n + 1):
        counts = {m: prime_count_brute(F, m) for m in divisors(n)}
        if sum(m * c for m, c in counts.items()) != F.q**n or counts[n] != pi_q(F.q, n):
            bad.append(n)
    return Check(f"prime polynomial theorem, counted primes (n<={max_n})", not bad, float(len(bad)), max_n,
                 f"failing n: {bad}" if bad else "")


def check_epsilon(F: Field) -> Check:
    try:
        eps = ch.epsilon_q(F)
    except AssertionError as exc:
        return Check("epsilon(q): direct vs Hasse-Davenport", False, 1.0, 1, str(exc))
    return Check("epsilon(q): direct vs Hasse-Davenport", True, 0.0, 1, f"epsilon = {eps}")


def lemma_suite(F: Field, g: int, tol: float = 1e-9) -> list[Check]:
    g = max(g, 1)
    return [
        check_epsilon(F),
        check_reciprocity(F),
        check_lemma31(F, min(g, 2)),
        check_gauss_closed(F, tol=tol),
        check_poisson(F, tol=tol),
        check_lambda_square(F),
        check_prime_polynomial_theorem(F),
    ]


# ---------------------------------------------------------------- L-functions


def check_functional_equation(F: Field, g: int) -> Check:
    """Every coefficient summed directly, then compared with the symmetric completion."""
    n = bad = 0
    for D in enumerate_hyperelliptic(F, 2 * g + 1):
        n += 1
        try:
            L = l_coefficients(F, D, full=True)
        except AssertionError:
            bad += 1
            continue
        if not functional_equation_holds(L):
            bad += 1
    return Check(f"functional equation, all of H_{2 * g + 1}", bad == 0, float(bad), n)


def check_rh_and_psi(F: Field, g: int, tol: float = 1e-8) -> list[Check]:
    worst_rh = worst_psi = worst_afe = 0.0
    n = newton_bad = parity_bad = 0
    N = 2 * g + 2
    Nprimes = g + 1
    for D in enumerate_hyperelliptic(F, 2 * g + 1):
        L = l_coefficients(F, D)
        Z = compute_zeros(L)
        n += 1
        worst_rh = max(worst_rh, float(np.max(np.abs(Z.residuals))) if g else 0.0)
        psi = psi_from_coefficients(L.coeffs, N)
        if psi_power_sums(F, D, Nprimes) != psi[:Nprimes] or not newton_check(L, psi[: 2 * g]):
            newton_bad += 1
        if g:
            worst_psi = max(worst_psi, float(np.max(np.abs(psi_from_zeros(Z.angles, F.q, N)[0] - psi))))
        if central_order(L.coeffs, F.q) % 2:
            parity_bad += 1
        a, b = afe_evaluate(L, 0.1)
        worst_afe = max(worst_afe, abs(a - b))
    return [
        Check(f"zeros on the circle |u| = q^(-1/2), H_{2 * g + 1}", worst_rh < tol, worst_rh, n),
        Check(f"Newton identities: coefficients vs prime power sums up to degree {g + 1}", newton_bad == 0, float(newton_bad), n),
        Check("power sums from zeros vs exact integers", worst_psi < tol, worst_psi, n),
        Check("central vanishing order is even", parity_bad == 0, float(parity_bad), n),
        Check("approximate functional equation at s = 0.6", worst_afe < tol, worst_afe, n),
    ]


def lfunction_suite(F: Field, g: int, tol: float = 1e-8) -> list[Check]:
    out = []
    for h in range(1, max(g, 1) + 1):
        out.append(check_functional_equation(F, h))
        out.extend(check_rh_and_psi(F, h, tol))
    return out


# ---------------------------------------------------------------- dual route


def dual_route_residual(F: Field, g: int, Ds: Iterable) -> tuple[float, int]:
    """Max over D of |Sigma_i from zeros - Sigma_i from exact power sums|, i = 1, 2."""
    worst = 0.0
    n = 0
    tfs = [fejer(M) for M in (2, g + 1, 2 * g + 1, 2 * g + 3)]
    Nmax = max(tf.N for tf in tfs)
    for D in Ds:
        L = l_coefficients(F, D)
        angles = compute_zeros(L).angles
        psi = psi_from_coefficients(L.coeffs, Nmax)
        for tf in tfs:
            z1 = float(sigma1_from_zeros(tf, angles, g)[0])
            z2 = float(sigma2_from_zeros(tf, angles, g)[0])
            worst = max(worst, abs(z1 - sigma1_from_psi(tf, psi, F.q, g)), abs(z2 - sigma2_from_psi(tf, psi, F.q, g)))
        n += 1
    return worst, n


def dualroute_suite(F: Field, g: int, tol: float = 1e-8, sample: int | None = None, seed: int = 0) -> list[Check]:
    out = []
    g = max(g, 1)
    if sample is None:
        Ds = list(enumerate_hyperelliptic(F, 2 * g + 1))
        label = f"all of H_{2 * g + 1}"
    else:
        Ds = sample_discriminants(F, g, sample, seed)
        label = f"{len(Ds)} sampled D in H_{2 * g + 1} (seed {seed})"
    worst, n = dual_route_residual(F, g, Ds)
    out.append(Check(f"Sigma_1, Sigma_2 from zeros vs power sums, {label}", worst < tol, worst, n))
    rep = verify_sample(F, g, fraction=0.01, seed=seed)
    out.append(Check("vectorized ensemble engine vs per-D power sums", rep["mismatches"] == 0,
                     float(rep["mismatches"]), rep["checked"]))
    return out


def run_suite(name: str, F: Field, g: int, tol: float = 1e-8, seed: int = 0) -> list[Check]:
    if name == "lemmas":
        return lemma_suite(F, g, tol)
    if name == "lfunction":
        return lfunction_suite(F, g, tol)
    if name == "dualroute":
        return dualroute_suite(F, g, tol, seed=seed)
    if name == "all":
        return lemma_suite(F, g, tol) + lfunction_suite(F, g, tol) + dualroute_suite(F, g, tol, seed=seed)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
