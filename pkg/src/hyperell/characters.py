"""Quadratic symbols over F_q[x], the characters chi_D, Gauss sums and
executable checks of the classical character-sum identities.

Conventions:

* ``jacobi(F, f, Q)`` is the Jacobi symbol (f/Q) for monic Q.
* ``chi(F, D, f)`` is chi_D(f) = (D/f).
* Gauss sums use the character u -> (u/f), which is periodic mod f.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from .fqx import (
    ONE,
    Field,
    Poly,
    enumerate_monic,
    factor,
    hyperelliptic_count,
    is_irreducible,
    is_monic,
    monic_irreducibles,
    normalize,
    poly_divrem,
    poly_mod,
    poly_monic,
    poly_mul,
    poly_powmod,
)


def _reciprocity_sign(F: Field, da: int, db: int) -> int:
    """(-1)^((q-1)/2 * da * db): the monic quadratic reciprocity factor."""
    return -1 if ((F.q - 1) // 2 * da * db) % 2 else 1


def residue_symbol(F: Field, f: Poly, P: Poly) -> int:
    """(f/P) for P monic irreducible, by Euler's criterion in F_q[x]/(P)."""
    if not is_monic(P) or len(P) < 2 or not is_irreducible(F, P):
        raise ValueError("residue_symbol needs a monic irreducible modulus")
    r = poly_mod(F, f, P)
    if not r:
        return 0
    e = (F.q ** (len(P) - 1) - 1) // 2
    v = poly_powmod(F, r, e, P)
    if v == ONE:
        return 1
    if len(v) == 1 and v[0] == F.neg(1):
        return -1
    raise AssertionError("Euler criterion returned a non-unit")


def jacobi(F: Field, f: Poly, Q: Poly) -> int:
    """Jacobi symbol (f/Q), Q monic of positive degree, via the reciprocity ladder.

    Q is never factored: at each step the numerator is reduced mod the
    denominator, its leading coefficient c is pulled out through
    (c/Q) = chi_q(c)^d(Q), and the two monic polynomials swap places.
    """
    if not is_monic(Q) or len(Q) < 2:
        raise ValueError("jacobi needs a monic denominator of degree >= 1")
    result = 1
    A = poly_mod(F, f, Q)
    B = Q
    while True:
        if not A:
            return 0 if len(B) > 1 else result
        dB = len(B) - 1
        if dB == 0:
            return result
        lead, A = poly_monic(F, A)
        if lead != 1 and dB % 2:
            result *= F.quad_char(lead)
        dA = len(A) - 1
        if dA == 0:
            return result
        result *= _reciprocity_sign(F, dA, dB)
        A, B = poly_mod(F, B, A), A


def jacobi_factored(F: Field, f: Poly, Q: Poly) -> int:
    """(f/Q) as the product of residue symbols over the factorization of Q."""
    if not is_monic(Q) or len(Q) < 2:
        raise ValueError("jacobi needs a monic denominator of degree >= 1")
    _, fac = factor(F, Q)
    res = 1
    for P, e in fac:
        s = residue_symbol(F, f, P)
        res *= s**e
        if res == 0:
            return 0
    return res


def chi(F: Field, D: Poly, f: Poly) -> int:
    """chi_D(f) = (D/f); f may carry a nonzero constant factor."""
    if not f:
        raise ValueError("chi_D of the zero polynomial")
    lead, fm = poly_monic(F, f)
    if len(fm) == 1:
        # (D/c) for a constant c: the empty product
        return 1
    return jacobi(F, D, fm)


def additive_e(F: Field, a1: int) -> complex:
    """Hayes' exponential on an element whose 1/x coefficient is a1."""
    t = F.trace(a1)
    if t == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * math.pi * t / F.p)


@lru_cache(maxsize=None)
def _e_table(F: Field) -> tuple[complex, ...]:
    return tuple(additive_e(F, a) for a in range(F.q))


def _gauss_prefactor(F: Field, df: int) -> complex:
    if ((F.q - 1) * df // 2) % 2:
        return -1j  # -(1+i)/2 + (1-i)/2
    return 1.0 + 0.0j


def _residues(F: Field, n: int):
    """All polynomials of degree < n (coefficient vectors, constant fastest)."""
    q = F.q
    for index in range(q**n):
        coeffs = []
        for _ in range(n):
            index, c = divmod(index, q)
            coeffs.append(c)
        yield normalize(coeffs)


@lru_cache(maxsize=64)
def _char_table(F: Field, f: Poly) -> tuple:
    """Residues u mod f with (u/f) != 0, paired with the symbol."""
    n = len(f) - 1
    return tuple((u, s) for u in _residues(F, n) if u and (s := jacobi(F, u, f)))


def gauss_sum(F: Field, V: Poly, f: Poly) -> complex:
    """G(V, chi_f) by direct summation over u mod f, chi_f(u) = (u/f)."""
    if not is_monic(f) or len(f) < 2:
        raise ValueError("gauss_sum needs a monic modulus of degree >= 1")
    n = len(f) - 1
    etab = _e_table(F)
    Vr = poly_mod(F, V, f)
    total = 0j
    for u, s in _char_table(F, f):
        w = poly_mod(F, poly_mul(F, u, Vr), f) if Vr else ()
        a1 = w[n - 1] if len(w) == n else 0
        total += s * etab[a1]
    return _gauss_prefactor(F, n) * total


def tau(F: Field) -> complex:
    """tau(q) = sum over a in F_q of chi_q(a) e(a), by direct summation."""
    return sum(F.quad_char(a) * additive_e(F, a) for a in range(1, F.q))


def tau_hasse_davenport(F: Field) -> complex:
    """tau(q) = (-1)^(k-1) tau(p)^k with the classical value of tau(p)."""
    p, k = F.p, F.k
    tp = math.sqrt(p) if p % 4 == 1 else 1j * math.sqrt(p)
    return (-1) ** (k - 1) * tp**k


def _epsilon_from_tau(q: int, t: complex) -> int:
    v = t / math.sqrt(q) if q % 4 == 1 else -1j * t / math.sqrt(q)
    eps = round(v.real)
    if abs(v - eps) > 1e-9 or eps not in (-1, 1):
        raise AssertionError(f"epsilon(q) is not +-1: {v}")
    return eps


def epsilon_q(F: Field) -> int:
    """epsilon(q) in {+1, -1}, computed by direct summation and by Hasse-Davenport."""
    direct = _epsilon_from_tau(F.q, tau(F))
    closed = _epsilon_from_tau(F.q, tau_hasse_davenport(F))
    if direct != closed:
        raise AssertionError(f"epsilon(q) routes disagree: {direct} vs {closed}")
    return direct


def gauss_sum_closed(F: Field, V: Poly, P: Poly, j: int) -> complex:
    """Closed form of G(V, chi_{P^j}) for P monic irreducible."""
    if j < 1:
        raise ValueError("j must be >= 1")
    dP = len(P) - 1
    normP = F.q**dP
    if not V:
        a = math.inf
        V1: Poly = ONE
    else:
        a, V1 = 0, V
        while True:
            s, r = poly_divrem(F, V1, P)
            if r:
                break
            V1, a = s, a + 1
    if j <= a:
        return 0j if j % 2 else complex(normP**j - normP ** (j - 1))
    if j == a + 1:
        if j % 2 == 0:
            return complex(-(normP ** (j - 1)))
        val = residue_symbol(F, V1, P) * normP ** (j - 0.5)
        if dP % 2:
            val *= epsilon_q(F)
        return complex(val)
    return 0j


def sum_chi_f(F: Field, f: Poly, m: int) -> int:
    """Sum over monic h of degree m of (h/f)."""
    return sum(jacobi(F, h, f) for h in enumerate_monic(F, m))


def poisson_rhs(F: Field, f: Poly, m: int) -> complex:
    """Right side of the Poisson summation formula for sum_{h in M_m} (h/f)."""
    n = len(f) - 1
    if not 0 <= m < n:
        raise ValueError("Poisson formula needs 0 <= m < deg f")
    q = F.q
    normf = q**n
    top = sum((gauss_sum(F, V, f) for V in enumerate_monic(F, n - m - 1)), 0j)
    if n % 2 == 0:
        low = sum(
            (gauss_sum(F, V, f) for d in range(0, n - m - 1) for V in enumerate_monic(F, d)),
            0j,
        )
        return q**m / normf * (gauss_sum(F, (), f) + (q - 1) * low - top)
    return epsilon_q(F) * q ** (m + 0.5) / normf * top


def poisson_prime_rhs(F: Field, P: Poly, m: int) -> float:
    """Specialization of the Poisson formula to an irreducible modulus."""
    n = len(P) - 1
    if not 0 <= m < n:
        raise ValueError("Poisson formula needs 0 <= m < deg P")
    q = F.q
    top = sum(jacobi(F, V, P) for V in enumerate_monic(F, n - m - 1))
    if n % 2 == 0:
        low = sum(jacobi(F, V, P) for d in range(0, n - m - 1) for V in enumerate_monic(F, d))
        return q**m / q ** (n / 2) * ((q - 1) * low - top)
    return q ** (m + 0.5) / q ** (n / 2) * top


def verify_poisson(F: Field, f: Poly, m: int) -> dict:
    """Direct character sum against the Poisson side (and the prime form when f is prime)."""
    direct = sum_chi_f(F, f, m)
    out = {"direct": direct, "poisson": poisson_rhs(F, f, m)}
    if is_irreducible(F, f):
        out["poisson_prime"] = poisson_prime_rhs(F, f, m)
    return out


def _coprime_part_divisors(F: Field, f: Poly, max_deg: int) -> list[int]:
    """Degrees of all monic C with prime factors among those of f, d(C) <= max_deg.

    Returned as a count per degree: out[d] = number of such C of degree d.
    """
    out = [0] * (max_deg + 1)
    out[0] = 1
    if len(f) > 1:
        for P, _ in factor(F, f)[1]:
            dP = len(P) - 1
            # multiply the generating series by 1/(1 - u^dP)
            for d in range(dP, max_deg + 1):
                out[d] += out[d - dP]
    return out


def verify_lemma31(F: Field, f: Poly, g: int) -> tuple[int, int]:
    """Both sides of the identity for sum_{D in H_{2g+1}} chi_D(f)."""
    if not is_monic(f):
        raise ValueError("f must be monic")
    n = 2 * g + 1
    if len(f) == 1:
        lhs = hyperelliptic_count(F.q, n)
    else:
        from .fqx import enumerate_hyperelliptic

        lhs = sum(chi(F, D, f) for D in enumerate_hyperelliptic(F, n))
    counts = _coprime_part_divisors(F, f, n)
    df = len(f) - 1

    def hsum(m: int) -> int:
        if m < 0:
            return 0
        if len(f) == 1:
            return F.q**m
        # chi_f(h) = (f/h) here, the same convention as chi_D
        return sum(chi(F, f, h) for h in enumerate_monic(F, m))

    total = 0
    for dC, cnt in enumerate(counts):
        if cnt:
            total += cnt * (hsum(n - 2 * dC) - F.q * hsum(n - 2 - 2 * dC))
    sign = -1 if ((F.q - 1) * df // 2) % 2 else 1
    return lhs, sign * total


def polya_vinogradov_scan(F: Field, max_deg: int) -> dict:
    """Max of |sum_{h in M_m} (h/f)| / |f|^(1/2) over non-square monic f, m < d(f)."""
    worst = 0.0
    worst_at = None
    for n in range(1, max_deg + 1):
        for f in enumerate_monic(F, n):
            if _is_square(F, f):
                continue
            for m in range(n):
                s = abs(sum_chi_f(F, f, m)) / F.q ** (n / 2)
                if s > worst:
                    worst, worst_at = s, (f, m)
    return {"max_ratio": worst, "at": worst_at}


def weil_scan(F: Field, max_deg_V: int, max_n: int) -> dict:
    """Max of |sum_{P in P_n} chi_V(P)| / ((d(V)/n) q^(n/2)) over non-square monic V."""
    worst = 0.0
    worst_at = None
    primes = {n: monic_irreducibles(F, n) for n in range(1, max_n + 1)}
    for dV in range(1, max_deg_V + 1):
        for V in enumerate_monic(F, dV):
            if _is_square(F, V):
                continue
            for n in range(1, max_n + 1):
                s = abs(sum(jacobi(F, V, P) for P in primes[n]))
                r = s / ((dV / n) * F.q ** (n / 2))
                if r > worst:
                    worst, worst_at = r, (V, n)
    return {"max_ratio": worst, "at": worst_at}


def _is_square(F: Field, f: Poly) -> bool:
    lead, fac = factor(F, f)
    return F.quad_char(lead) == 1 and all(e % 2 == 0 for _, e in fac)


__all__ = [
    "residue_symbol",
    "jacobi",
    "jacobi_factored",
    "chi",
    "additive_e",
    "gauss_sum",
    "gauss_sum_closed",
    "tau",
    "tau_hasse_davenport",
    "epsilon_q",
    "sum_chi_f",
    "poisson_rhs",
    "poisson_prime_rhs",
    "verify_poisson",
    "verify_lemma31",
    "polya_vinogradov_scan",
    "weil_scan",
]
