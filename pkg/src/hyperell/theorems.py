"""Closed-form right-hand sides for the 1-level density and pair
correlation of the hyperelliptic ensemble, with every main, lower-order
and secondary term kept separate, plus the limiting Katz-Sarnak
integrals and the constants derived from them.

All prime sums depend on a prime only through its degree, so they are
evaluated exactly as degree sums weighted by pi_q(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .fqx import divisors, lambda_square_sum, pi_q
from .testfn import TestFunction


class WindowError(ValueError):
    """N lies outside every admissible range of the theorem."""


# ---------------------------------------------------------------- prime sums


def prime_sum_c(q: int, n: int) -> Fraction:
    """sum over P in P_{n/r}, r >= 1 of d(P) / (|P|^r (|P|+1))."""
    tot = Fraction(0)
    for r in divisors(n):
        m = n // r
        tot += Fraction(pi_q(q, m) * m, q**n * (q**m + 1))
    return tot


def prime_sum_c1(q: int, n: int) -> Fraction:
    """sum over P in P_{n/r} of d(P)^2 / (|P|^r (|P|+1))."""
    tot = Fraction(0)
    for r in divisors(n):
        m = n // r
        tot += Fraction(pi_q(q, m) * m * m, q**n * (q**m + 1))
    return tot


def prime_sum_c2(q: int, n: int) -> Fraction:
    """sum over P in P_{n/r} of d(P)^2 / (|P|^(2r-2) (|P|+1)^2)."""
    tot = Fraction(0)
    for r in divisors(n):
        m = n // r
        tot += Fraction(pi_q(q, m) * m * m, q ** (m * (2 * r - 2)) * (q**m + 1) ** 2)
    return tot


def prime_sum_brute(F, n: int, weight: Callable[[int, int], Fraction]) -> Fraction:
    """The same kind of sum over explicitly enumerated primes; weight(d(P), r)."""
    from .fqx import monic_irreducibles

    tot = Fraction(0)
    for r in divisors(n):
        m = n // r
        for _ in monic_irreducibles(F, m):
            tot += weight(m, r)
    return tot


def c_term(tf: TestFunction, q: int, g: int) -> Fraction:
    """c(Phi, g) = (1/g) sum_{n <= N/2} Phi_hat(n/g) prime_sum_c(n)."""
    tot = Fraction(0)
    for n in range(1, tf.N // 2 + 1):
        h = Fraction(tf.hat(2 * n))
        if h:
            tot += h * prime_sum_c(q, n)
    return tot / g


# ---------------------------------------------------------------- reports


@dataclass
class TheoremReport:
    theorem: str
    q: int
    g: int
    N: int
    K: int
    Kprime: int
    parts: list = field(default_factory=list)  # (name, Fraction)
    error_scale: float = 0.0
    error_scale_parts: dict = field(default_factory=dict)
    forced: bool = False

    def add(self, name: str, value) -> None:
        self.parts.append((name, Fraction(value)))

    def part(self, name: str) -> Fraction:
        for n, v in self.parts:
            if n == name:
                return v
        raise KeyError(name)

    def secondary_parts(self):
        return [(n, v) for n, v in self.parts if n.startswith("secondary") or n.startswith("tail")]

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.parts), Fraction(0))

    @property
    def total_without_secondary(self) -> Fraction:
        return self.total - sum((v for _, v in self.secondary_parts()), Fraction(0))

    @property
    def secondary(self) -> list:
        return [(n, v) for n, v in self.parts if n.startswith("secondary")]

    @property
    def tails(self) -> list:
        return [(n, v) for n, v in self.parts if n.startswith("tail")]

    @property
    def predicted_error_scale(self) -> float:
        return self.error_scale

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "q": self.q,
            "g": self.g,
            "N": self.N,
            "K": self.K,
            "Kprime": self.Kprime,
            "forced": self.forced,
            "parts": [{"name": n, "exact": str(v), "decimal": float(v)} for n, v in self.parts],
            "total": {"exact": str(self.total), "decimal": float(self.total)},
            "error_scale": self.error_scale,
            "error_scale_parts": dict(self.error_scale_parts),
        }


class Thm1Report(TheoremReport):
    """Term-by-term right side of the 1-level density formula."""


class Thm2Report(TheoremReport):
    """Term-by-term right side of the pair-correlation formula."""


def thm1_window(g: int, N: int) -> int | None:
    """Smallest K >= 1 with 2g/(2K+1) <= N <= (2g-1)/(2K-1); 0 for 2g <= N < 4g."""
    if 2 * g <= N < 4 * g:
        return 0
    for K in range(1, 2 * g + 1):
        if 2 * g <= N * (2 * K + 1) and N * (2 * K - 1) <= 2 * g - 1:
            return K
    return None


def thm2_window(g: int, N: int) -> int | None:
    """Smallest K >= 1 with g/(K+1) <= N <= (g-1)/K; 0 for g <= N < 2g."""
    if g <= N < 2 * g:
        return 0
    for K in range(1, g + 1):
        if g <= N * (K + 1) and N * K <= g - 1:
            return K
    return None


def _thm1_intervals(g: int) -> str:
    return f"2g/(2K+1) <= N <= (2g-1)/(2K-1) for K >= 1, or {2 * g} <= N < {4 * g}"


def _thm2_intervals(g: int) -> str:
    return f"g/(K+1) <= N <= (g-1)/K for K >= 1, or {g} <= N < {2 * g}"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def thm1_rhs(
    tf: TestFunction, q: int, g: int, K: int | None = None, Kprime: int | None = None, force: bool = False
) -> TheoremReport:
    """Right side of the 1-level density formula, term by term."""
    if g < 1:
        raise WindowError("the theorem needs g >= 1")
    N = tf.N
    auto = thm1_window(g, N)
    if K is None:
        K = auto
    forced = False
    if K is None or (K != auto and not _thm1_ok(g, N, K)):
        if not force:
            raise WindowError(f"N = {N} is outside the admissible ranges: {_thm1_intervals(g)}")
        forced = True
        if K is None:
            K = max(1, _ceil_div(2 * g - N, 2 * N)) if N else 1
    Kp = g if Kprime is None else Kprime
    if K >= 1 and not K <= Kp <= g:
        raise WindowError(f"need K <= K' <= g, got K={K}, K'={Kp}")
    rep = Thm1Report("1-level density", q, g, N, K, Kp if K else 0, forced=forced)
    rep.add("main", tf.hat(0))
    if K == 0:
        rep.add("oscillatory", -Fraction(sum((Fraction(tf.hat(2 * n)) for n in range(1, g + 1)), Fraction(0)), g))
        rep.add("c_term", c_term(tf, q, g))
        rep.add("secondary_k=0", -Fraction(tf.hat(2 * g)) / (g * (q - 1)))
        rep.error_scale = q ** (N / 2 - 2 * g - 0.5)
        rep.error_scale_parts = {"main": rep.error_scale}
        return rep
    rep.add("oscillatory", -Fraction(sum((Fraction(tf.hat(2 * n)) for n in range(1, N // 2 + 1)), Fraction(0)), g))
    rep.add("c_term", c_term(tf, q, g))
    for k in range(K, Kp + 1):
        if g % (2 * k + 1) == 0:
            val = -Fraction(tf.hat(2 * g // (2 * k + 1))) / (g * (q - 1) * q ** (4 * k * g // (2 * k + 1)))
        else:
            val = Fraction(0)
        rep.add(f"secondary_k={k}", val)
    for k in range(K, Kp + 1):
        lo = _ceil_div(g + 1, 2 * k + 1)
        hi = min(N // 2, (g - 1) // (2 * k))
        val = Fraction(0)
        for n in range(lo, hi + 1):
            val += Fraction(tf.hat(2 * n)) / q ** (4 * k * n)
        rep.add(f"tail_k={k}", val / g)
    e1 = q ** (min(N / 2, (g - 1) / (2 * K)) - 2 * g - 0.5) / K
    e2 = q ** ((g - 1) / (Kp + 1) - 2 * g) / g
    rep.error_scale = e1 + e2
    rep.error_scale_parts = {"main": e1, "truncation": e2}
    return rep


def _thm1_ok(g: int, N: int, K: int) -> bool:
    if K == 0:
        return 2 * g <= N < 4 * g
    return 2 * g <= N * (2 * K + 1) and N * (2 * K - 1) <= 2 * g - 1


def _thm2_ok(g: int, N: int, K: int) -> bool:
    if K == 0:
        return g <= N < 2 * g
    return g <= N * (K + 1) and N * K <= g - 1


# c1 enters with a minus sign: averaging chi_D(P^(2r)) over the ensemble gives
# |P|/(|P|+1) = 1 - 1/(|P|+1), and the exact ensemble data confirm it.
C1_SIGN = -1


def thm2_rhs(
    tf: TestFunction,
    q: int,
    g: int,
    K: int | None = None,
    Kprime: int | None = None,
    force: bool = False,
    c1_sign: int = C1_SIGN,
) -> TheoremReport:
    """Right side of the pair-correlation formula, term by term."""
    if g < 1:
        raise WindowError("the theorem needs g >= 1")
    N = tf.N
    auto = thm2_window(g, N)
    if K is None:
        K = auto
    forced = False
    if K is None or (K != auto and not _thm2_ok(g, N, K)):
        if not force:
            raise WindowError(f"N = {N} is outside the admissible ranges: {_thm2_intervals(g)}")
        forced = True
        if K is None:
            K = max(1, _ceil_div(g - N, N)) if N else 1
    Kp = max(K, g - 1) if Kprime is None else Kprime
    if K >= 1 and not K <= Kp:
        raise WindowError(f"need K <= K', got K={K}, K'={Kp}")
    G2 = 2 * g * g
    rep = Thm2Report("pair correlation", q, g, N, K, Kp if K else 0, forced=forced)
    rep.add("main", tf.hat(0))
    lam = Fraction(0)
    c1 = Fraction(0)
    for n in range(1, N + 1):
        h = Fraction(tf.hat(n))
        if h:
            lam += h * Fraction(lambda_square_sum(q, n), q**n)
            c1 += h * prime_sum_c1(q, n)
    rep.add("lambda_square", lam / G2)
    even = Fraction(0)
    c2 = c3 = c4 = Fraction(0)
    for n in range(1, N // 2 + 1):
        h = Fraction(tf.hat(2 * n))
        if h:
            s = prime_sum_c(q, n)
            even += h
            c2 += h * prime_sum_c2(q, n)
            c3 += h * s
            c4 += h * s * s
    rep.add("even_diagonal", even / G2)
    rep.add("c1", c1_sign * c1 / G2)
    rep.add("c2", -c2 / G2)
    rep.add("c3", -c3 / (g * g))
    rep.add("c4", c4 / G2)
    if K == 0:
        rep.add("secondary_k=0", Fraction(tf.hat(g)) / (G2 * (q - 1)))
        rep.add("tail_k=0", -sum((Fraction(tf.hat(n)) for n in range(g + 1, N + 1)), Fraction(0)) / G2)
        e = {
            "main": q ** (-g / 2 - 0.5) / g**2,
            "offdiag": q ** (N - 2 * g - 1),
            "boundary": q ** (N - 2 * g) / g**2,
        }
        rep.error_scale = sum(e.values())
        rep.error_scale_parts = e
        return rep
    for k in range(K, Kp + 1):
        if g % (k + 1) == 0:
            val = Fraction((k + 1) * Fraction(tf.hat(g // (k + 1))), G2 * (q - 1) * q ** (2 * k * g // (k + 1)))
        else:
            val = Fraction(0)
        rep.add(f"secondary_k={k}", val)
    for k in range(K, Kp + 1):
        lo = _ceil_div(g + 1, k + 1)
        val = Fraction(0)
        for n in range(lo, N + 1):
            val += Fraction(tf.hat(n)) / q ** (2 * k * n)
        rep.add(f"tail_k={k}", -(k + 1) * val / G2)
    e = {
        "main": q ** (3 * g / (2 * (K + 1)) - 2 * g - 1) / g**2,
        "offdiag": max(1.0, math.log(Kp)) * q ** (N - 2 * g - 1),
        "truncation": Kp * q ** (2 * (g - 1) / (Kp + 1) - 2 * g - 1) / g**2,
    }
    rep.error_scale = sum(e.values())
    rep.error_scale_parts = e
    return rep


# ---------------------------------------------------------------- limit densities


@dataclass(frozen=True)
class FourierPair:
    """An even Phi_hat given as a piecewise-linear function on [0, support].

    ``knots`` are (y, value) pairs with rational entries, y ascending from 0;
    Phi_hat vanishes beyond the last knot.
    """

    name: str
    knots: tuple

    def __call__(self, y: float) -> float:
        y = abs(y)
        ys = [float(a) for a, _ in self.knots]
        vs = [float(b) for _, b in self.knots]
        if y > ys[-1]:
            return 0.0
        return float(np.interp(y, ys, vs))

    @property
    def support(self) -> Fraction:
        return Fraction(self.knots[-1][0])

    def hat0(self) -> Fraction:
        return Fraction(self.knots[0][1])

    def _segments(self, lo: Fraction, hi: Fraction):
        """Linear pieces (a, b, va, slope) of Phi_hat restricted to [lo, hi], lo >= 0."""
        for (y0, v0), (y1, v1) in zip(self.knots, self.knots[1:]):
            y0, y1, v0, v1 = map(Fraction, (y0, y1, v0, v1))
            a, b = max(y0, lo), min(y1, hi)
            if a >= b:
                continue
            slope = (v1 - v0) / (y1 - y0)
            yield a, b, v0 + slope * (a - y0), slope

    def integral(self, lo, hi) -> Fraction:
        """Exact integral of Phi_hat over [lo, hi] with 0 <= lo <= hi."""
        tot = Fraction(0)
        for a, b, va, s in self._segments(Fraction(lo), Fraction(hi)):
            tot += va * (b - a) + s * (b - a) ** 2 / 2
        return tot

    def moment1(self, lo, hi) -> Fraction:
        """Exact integral of y Phi_hat(y) over [lo, hi]."""
        tot = Fraction(0)
        for a, b, va, s in self._segments(Fraction(lo), Fraction(hi)):
            # Phi_hat(y) = va + s (y - a)
            c0 = va - s * a
            tot += c0 * (b * b - a * a) / 2 + s * (b**3 - a**3) / 3
        return tot

    def phi0(self) -> Fraction:
        """Phi(0) = integral of Phi_hat over the real line."""
        return 2 * self.integral(0, self.support)


def fejer_pair_density() -> FourierPair:
    """(sin 2 pi x / 2 pi x)^2 with transform (1/2)(1 - |y|/2) on |y| < 2."""
    return FourierPair("sinc2(2x)", ((Fraction(0), Fraction(1, 2)), (Fraction(2), Fraction(0))))


def fejer_pair_correlation() -> FourierPair:
    """(sin pi x / pi x)^2 with transform 1 - |y| on |y| < 1."""
    return FourierPair("sinc2(x)", ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))


def delta0_pair() -> FourierPair:
    """A transform concentrated near 0 for limiting checks (Phi_hat(0)=1, tiny support)."""
    eps = Fraction(1, 10**6)
    return FourierPair("delta0", ((Fraction(0), Fraction(1)), (eps, Fraction(0))))


def zero_pair() -> FourierPair:
    return FourierPair("zero", ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))))


def _quad(f, a: float, b: float, breaks: Sequence[float] = ()) -> float:
    pts = [x for x in breaks if a < x < b]
    val, _ = integrate.quad(f, a, b, points=pts or None, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def _breaks(pair: FourierPair) -> list[float]:
    return [float(y) for y, _ in pair.knots]


def katz_sarnak_density_exact(pair: FourierPair) -> Fraction:
    """Phi_hat(0) - (1/2) int_{-1}^{1} Phi_hat, exactly for piecewise-linear transforms."""
    return pair.hat0() - pair.integral(0, 1)


def katz_sarnak_density(pair: FourierPair) -> float:
    """The same limit by adaptive quadrature."""
    return float(pair.hat0()) - 0.5 * _quad(pair, -1.0, 1.0, [0.0] + _breaks(pair))


def pair_corr_limit_exact(pair: FourierPair) -> Fraction:
    """Phi_hat(0) + 2 int_0^1 y Phi_hat(y) dy (even reading of delta_0 + eta(y) y)."""
    return pair.hat0() + 2 * pair.moment1(0, 1)


def pair_corr_limit(pair: FourierPair) -> float:
    return float(pair.hat0()) + _quad(lambda y: abs(y) * pair(y), -1.0, 1.0, [0.0] + _breaks(pair))


def nonvanishing_bound(pair: FourierPair) -> Fraction:
    """1 - (1/2) (Katz-Sarnak density) / Phi(0)."""
    return 1 - katz_sarnak_density_exact(pair) / (2 * pair.phi0())


def simple_zero_bound(pair: FourierPair) -> Fraction:
    """2 - (pair-correlation limit) / Phi(0)."""
    return 2 - pair_corr_limit_exact(pair) / pair.phi0()


def h0(y):
    """The extremal function of the symplectic nonvanishing problem (even, on [-1, 1])."""
    y = np.abs(np.asarray(y, dtype=float))
    den = math.sqrt(2) * math.sin(0.25) - math.cos((math.pi + 1) / 4)
    return np.sin(y / 2 - (math.pi + 1) / 4) / den


def h0_equation_residual(points: int = 2001) -> float:
    """max over y in [0,1] of |h0(y) - (1/2) int_0^1 h0 - (1/2) int_0^{1-y} h0 - 1|."""
    full = _quad(lambda x: float(h0(x)), 0.0, 1.0)
    worst = 0.0
    for y in np.linspace(0.0, 1.0, points):
        part = _quad(lambda x: float(h0(x)), 0.0, 1.0 - y) if y < 1 else 0.0
        worst = max(worst, abs(float(h0(y)) - 0.5 * full - 0.5 * part - 1.0))
    return worst


def corollary_constants() -> dict:
    cot = lambda x: math.cos(x) / math.sin(x)  # noqa: E731
    p0 = (19 - cot(0.25)) / 16
    simple = 1.5 - cot(1 / math.sqrt(2)) / math.sqrt(2)
    inf_int = (cot(0.25) - 3) / 8
    inner = 2 * _quad(lambda x: float(h0(x)), 0.0, 1.0)  # <1, h0> on [-1, 1]
    return {
        "p0_bound": p0,
        "simple_bound": simple,
        "inf_integral": inf_int,
        "inf_integral_from_h0": 1 / inner,
        "h0_residual": h0_equation_residual(),
        "fejer_nonvanishing": nonvanishing_bound(fejer_pair_density()),
        "fejer_simple": simple_zero_bound(fejer_pair_correlation()),
    }
