"""Predictions of the ratios recipe for the hyperelliptic ensemble.

Every Euler product or prime sum here depends on a prime P only through
|P| = q^m, so products run over degrees with exponent pi_q(m).  The
truncation degree is chosen from an explicit geometric tail bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ensemble import EnsembleScan, cached_scan
from .fqx import parse_field, pi_q
from .testfn import TestFunction
from .theorems import c_term


class RatiosDomainError(ValueError):
    """Shifts at a pole or outside the range where the products converge."""


@dataclass(frozen=True)
class ShiftPair:
    alpha: complex
    beta: complex

    def __post_init__(self):
        if abs(complex(self.alpha).real) >= 0.25:
            raise RatiosDomainError(f"need |Re(alpha)| < 1/4, got alpha = {self.alpha}")


def zeta_q(q: int, s: complex) -> complex:
    """zeta_q(s) = 1 / (1 - q^(1-s))."""
    den = 1 - q ** (1 - complex(s))
    if abs(den) < 1e-14:
        raise RatiosDomainError(f"zeta_q has a pole at s = {s}")
    return 1 / den


def zeta_q_inv(q: int, s: complex) -> complex:
    """1 / zeta_q(s) = 1 - q^(1-s), entire in s."""
    return 1 - q ** (1 - complex(s))


def zeta_u(q: int, u: complex) -> complex:
    """The u-form 1 / (1 - q u)."""
    den = 1 - q * complex(u)
    if abs(den) < 1e-14:
        raise RatiosDomainError(f"Z(u) has a pole at u = {u}")
    return 1 / den


def zeta_q_logderiv(q: int, s: complex) -> complex:
    """zeta_q'/zeta_q(s) = -log q * q^(1-s) / (1 - q^(1-s))."""
    w = q ** (1 - complex(s))
    if abs(1 - w) < 1e-14:
        raise RatiosDomainError(f"zeta_q has a pole at s = {s}")
    return -math.log(q) * w / (1 - w)


def _factor_minus_one(x: float, alpha: complex, beta: complex) -> complex:
    """(local Euler factor at |P| = x) - 1, arranged to avoid cancellation."""
    b = x ** (-(alpha + beta))
    a = x ** (-1 - 2 * alpha)
    num = b / (x * (x + 1)) - a / (x + 1)
    return num / (1 - b / x)


def _log1p(z: complex) -> complex:
    if abs(z) < 1e-5:
        # series keeps full relative accuracy where 1 + z would round
        return z - z * z / 2 + z**3 / 3
    return cmath.log(1 + z)


def _convergence_exponent(alpha: complex, beta: complex) -> float:
    return min((alpha + beta).real, 2 * alpha.real)


def euler_tail_bound(q: int, D: int, sigma: float) -> float:
    """Bound on the log of the product over degrees > D (factors ~ q^(-m(2+sigma)))."""
    rho = q ** (-(1 + sigma))
    return 4 * rho ** (D + 1) / ((D + 1) * (1 - rho))


def default_dmax(q: int, sigma: float, tol: float = 1e-12) -> int:
    if 1 + sigma <= 0:
        raise RatiosDomainError("the Euler product diverges for these shifts")
    D = 1
    while euler_tail_bound(q, D, sigma) >= tol:
        D += 1
    return D


def a_euler(q: int, alpha: complex, beta: complex, Dmax: int | None = None) -> tuple[complex, float]:
    """A(alpha; beta) truncated at degree Dmax, with the bound on the omitted tail."""
    alpha, beta = complex(alpha), complex(beta)
    if (alpha + beta).real <= -0.5:
        raise RatiosDomainError("need Re(alpha + beta) > -1/2")
    sigma = _convergence_exponent(alpha, beta)
    if Dmax is None:
        Dmax = default_dmax(q, sigma)
    logA = 0j
    for m in range(1, Dmax + 1):
        logA += pi_q(q, m) * _log1p(_factor_minus_one(float(q) ** m, alpha, beta))
    value = cmath.exp(logA)
    tail = euler_tail_bound(q, Dmax, sigma)
    return value, abs(value) * math.expm1(tail)


def a_prime_diag(q: int, r: float, Dmax: int | None = None, natural_log: bool = False) -> float:
    """sum_P log|P| / ((|P|^(1+2r) - 1)(|P| + 1)), in units of log q unless natural_log."""
    if r <= -0.25:
        raise RatiosDomainError("need r > -1/4")
    if Dmax is None:
        Dmax = default_dmax(q, 2 * r)
    tot = math.fsum(
        pi_q(q, m) * m / ((float(q) ** (m * (1 + 2 * r)) - 1) * (float(q) ** m + 1)) for m in range(1, Dmax + 1)
    )
    return tot * math.log(q) if natural_log else tot


def ratios_R(q: int, g: int, alpha: complex, beta: complex) -> complex:
    """Conjectured average of L(1/2+alpha)/L(1/2+beta) over H_{2g+1}."""
    sp = ShiftPair(alpha, beta)
    a, b = complex(sp.alpha), complex(sp.beta)
    for s, what in ((1 + 2 * a, "zeta_q(1+2alpha)"), (1 - 2 * a, "zeta_q(1-2alpha)")):
        if abs(1 - q ** (1 - s)) < 1e-14:
            raise RatiosDomainError(f"pole of {what} at alpha = {alpha}")
    first = zeta_q(q, 1 + 2 * a) * zeta_q_inv(q, 1 + a + b) * a_euler(q, a, b)[0]
    second = q ** (-2 * g * a) * zeta_q(q, 1 - 2 * a) * zeta_q_inv(q, 1 - a + b) * a_euler(q, -a, b)[0]
    return first + second


def ratios_logderiv(q: int, g: int, r: complex) -> complex:
    """Conjectured average of L'/L(1/2 + r) over H_{2g+1}, natural-log units."""
    r = complex(r)
    if abs(1 - q ** (-2 * r)) < 1e-14:
        raise RatiosDomainError(f"pole at r = {r}")
    ShiftPair(r, r)
    lq = math.log(q)
    if r.imag == 0:
        ap = a_prime_diag(q, r.real, natural_log=True)
    else:
        ap = _a_prime_complex(q, r) * lq
    return zeta_q_logderiv(q, 1 + 2 * r) + ap - lq * q ** (-2 * g * r) * zeta_q(q, 1 - 2 * r) * a_euler(q, -r, r)[0]


def _a_prime_complex(q: int, r: complex, Dmax: int | None = None) -> complex:
    Dmax = Dmax or default_dmax(q, 2 * r.real)
    return sum(pi_q(q, m) * m / ((q ** (m * (1 + 2 * r)) - 1) * (q**m + 1)) for m in range(1, Dmax + 1))


@dataclass
class RatiosOneLevel:
    A1: Fraction
    A2: Fraction
    A3: Fraction
    A4: Fraction

    @property
    def total(self) -> Fraction:
        return self.A1 + self.A2 + self.A3 + self.A4

    def as_dict(self) -> dict:
        return {k: {"exact": str(v), "decimal": float(v)} for k, v in
                (("A1", self.A1), ("A2", self.A2), ("A3", self.A3), ("A4", self.A4), ("total", self.total))}


def ratios_one_level(tf: TestFunction, q: int, g: int) -> RatiosOneLevel:
    """The 1-level density predicted by the recipe, valid for any support N."""
    if g < 1:
        return RatiosOneLevel(Fraction(0), Fraction(0), Fraction(0), Fraction(0))
    N = tf.N
    A1 = Fraction(tf.hat(0))
    A2 = -sum((Fraction(tf.hat(2 * n)) for n in range(1, N // 2 + 1)), Fraction(0)) / g
    A3 = c_term(tf, q, g)
    A4 = -Fraction(tf.hat(2 * g)) / (g * (q - 1))
    A4 += sum((Fraction(tf.hat(2 * n)) for n in range(g + 1, N // 2 + 1)), Fraction(0)) / g
    return RatiosOneLevel(A1, A2, A3, A4)


# ---------------------------------------------------------------- exact ensemble baselines


def _scan_for(q_or_field, g: int) -> EnsembleScan:
    F = parse_field(str(q_or_field))
    return cached_scan(str(F), g)


def _l_values(scan: EnsembleScan, u: complex, derivative: bool = False) -> np.ndarray:
    full = np.array(scan.coefficients().tolist(), dtype=np.float64)
    n = np.arange(full.shape[1])
    powers = np.power(complex(u), n)
    if derivative:
        # d/ds of sum c_n q^(-ns) = sum c_n (-n log q) q^(-ns)
        powers = powers * (-n * math.log(scan.q))
    return full @ powers


def exact_ratio_average(q, g: int, alpha: complex, beta: complex) -> complex:
    """Average of L(1/2+alpha)/L(1/2+beta) over all of H_{2g+1}; q may be a field spec."""
    scan = _scan_for(q, g)
    q = scan.q
    num = _l_values(scan, q ** (-0.5 - complex(alpha)))
    den = _l_values(scan, q ** (-0.5 - complex(beta)))
    return complex(np.dot(num / den, scan.counts) / scan.H)


def exact_logderiv_average(q, g: int, r: complex) -> complex:
    """Average of L'/L(1/2+r) over all of H_{2g+1} (natural-log units)."""
    scan = _scan_for(q, g)
    q = scan.q
    u = q ** (-0.5 - complex(r))
    return complex(np.dot(_l_values(scan, u, True) / _l_values(scan, u), scan.counts) / scan.H)


def soft_bound(q: int, g: int, eps: float = 0.1, const: float = 10.0) -> float:
    return const * q ** (-g - 0.5 + eps * g)
