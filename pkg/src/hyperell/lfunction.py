"""L-polynomials of quadratic characters, their zeros, power sums and
exact central values.

For D monic square-free of degree 2g+1 the L-function
L(u, chi_D) = sum_f chi_D(f) u^d(f) is a polynomial of degree 2g with
integer coefficients.  Zeros are written u_j = q^(-1/2) e(theta_j).
Numerics happen in the variable v = u sqrt(q), where the polynomial is
monic and all roots lie on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import jacobi
from .fqx import Field, Poly, enumerate_monic, is_monic, is_squarefree, monic_irreducibles

MAX_ITER = 200
STEP_TOL = 1e-13


class NonConvergenceError(RuntimeError):
    """Root iteration failed; carries the worst residual seen."""

    def __init__(self, msg: str, worst: float):
        super().__init__(msg)
        self.worst = worst


@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    coeffs: tuple  # c_0 .. c_{2g}
    D: Poly | None = None

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.g + 1:
            raise ValueError("an L-polynomial of genus g has 2g+1 coefficients")

    def value(self, u: complex) -> complex:
        r = 0j
        for c in reversed(self.coeffs):
            r = r * u + c
        return r

    def at_s(self, s: float) -> float:
        return self.value(self.q ** (-s)).real


@dataclass
class ZeroSet:
    angles: np.ndarray  # ascending, in [0, 1)
    residuals: np.ndarray  # |u_j| sqrt(q) - 1
    exact_fallback: bool = False


@dataclass(frozen=True)
class CentralValue:
    A: Fraction
    B: Fraction
    vanishing: bool

    def numeric(self, q: int) -> float:
        return float(self.A) + float(self.B) * math.sqrt(q)


# ---------------------------------------------------------------- coefficients


def _check_discriminant(F: Field, D: Poly) -> int:
    if not is_monic(D) or (len(D) - 1) % 2 == 0 or not is_squarefree(F, D):
        raise ValueError("D must be monic, square-free and of odd degree")
    return (len(D) - 2) // 2


def char_sum(F: Field, D: Poly, n: int) -> int:
    """sum over monic f of degree n of chi_D(f)."""
    if n == 0:
        return 1
    return sum(jacobi(F, D, f) for f in enumerate_monic(F, n))


def l_coefficients(F: Field, D: Poly, full: bool = False) -> LPolynomial:
    """L(u, chi_D) from character sums up to degree g and the functional equation.

    With ``full=True`` every coefficient is summed directly and the
    functional equation is asserted instead of used.
    """
    g = _check_discriminant(F, D)
    q = F.q
    c = [char_sum(F, D, n) for n in range(g + 1)]
    sym = c + [q ** (g - m) * c[m] for m in range(g - 1, -1, -1)]
    if full:
        direct = c + [char_sum(F, D, n) for n in range(g + 1, 2 * g + 1)]
        if direct != sym:
            raise AssertionError(f"functional equation fails for D={D}: {direct} vs {sym}")
    return LPolynomial(q, g, tuple(sym), D)


def functional_equation_holds(L: LPolynomial) -> bool:
    g, q, c = L.g, L.q, L.coeffs
    return all(c[2 * g - n] == q ** (g - n) * c[n] for n in range(2 * g + 1))


def psi_power_sums(F: Field, D: Poly, N: int) -> list[int]:
    """psi_D(n) for n = 1..N as sums of d(P) chi_D(P)^r over r d(P) = n."""
    if N < 1:
        raise ValueError("N must be >= 1")
    vals: dict[int, list[int]] = {}
    out = []
    for n in range(1, N + 1):
        total = 0
        for d in range(1, n + 1):
            if n % d:
                continue
            if d not in vals:
                vals[d] = [jacobi(F, D, P) for P in monic_irreducibles(F, d)]
            r = n // d
            if r % 2:
                total += d * sum(vals[d])
            else:
                total += d * sum(v * v for v in vals[d])
        out.append(total)
    return out


def coefficients_from_psi(psi: Sequence[int], g: int) -> list[int]:
    """Newton identities n c_n = sum_{k=1}^n psi(k) c_{n-k}, exact integers."""
    if len(psi) < 2 * g:
        raise ValueError("need psi(1..2g)")
    c = [1]
    for n in range(1, 2 * g + 1):
        s = sum(psi[k - 1] * c[n - k] for k in range(1, n + 1))
        if s % n:
            raise AssertionError("Newton identity produced a non-integer coefficient")
        c.append(s // n)
    return c


def psi_from_coefficients(coeffs: Sequence[int], N: int) -> list[int]:
    """Inverse Newton recursion: psi(n) = n c_n - sum_{k<n} psi(k) c_{n-k}."""
    c = list(coeffs) + [0] * max(0, N + 1 - len(coeffs))
    psi: list[int] = []
    for n in range(1, N + 1):
        psi.append(n * c[n] - sum(psi[k - 1] * c[n - k] for k in range(1, n)))
    return psi


# ---------------------------------------------------------------- zeros


def _v_coeffs(coeffs: np.ndarray, q: int) -> np.ndarray:
    """Coefficients in v = u sqrt(q) (rows, little-endian); monic for L-polynomials."""
    m = coeffs.shape[1] - 1
    scale = float(q) ** (-0.5 * np.arange(m + 1))
    b = coeffs.astype(float) * scale
    return b / b[:, -1:]


def aberth(b: np.ndarray, max_iter: int = MAX_ITER, tol: float = STEP_TOL):
    """Batched Aberth-Ehrlich iteration.

    ``b`` holds little-endian monic coefficient rows of equal degree m.
    Returns (roots, converged) where converged flags each row.
    """
    b = np.asarray(b, dtype=complex)
    B, m1 = b.shape
    m = m1 - 1
    if m == 0:
        return np.zeros((B, 0), dtype=complex), np.ones(B, dtype=bool)
    # initial guesses equispaced on the unit circle with an irrational offset
    phase = 2 * math.pi * (np.arange(m) + (math.sqrt(2) - 1)) / m
    z = np.tile(np.exp(1j * phase), (B, 1))
    db = b[:, 1:] * np.arange(1, m1)
    active = np.ones(B, dtype=bool)
    converged = np.zeros(B, dtype=bool)
    eye = np.eye(m, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zz = z[idx]
        pv = np.zeros_like(zz)
        for k in range(m, -1, -1):
            pv = pv * zz + b[idx, k : k + 1]
        dv = np.zeros_like(zz)
        for k in range(m - 1, -1, -1):
            dv = dv * zz + db[idx, k : k + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            w = pv / dv
            diff = zz[:, :, None] - zz[:, None, :]
            diff[:, eye] = 1.0
            inv = 1.0 / diff
            inv[:, eye] = 0.0
            s = inv.sum(axis=2)
            step = w / (1.0 - w * s)
        step = np.where(pv == 0, 0, step)
        bad = ~np.isfinite(step).all(axis=1)
        step[bad] = 0
        z[idx] = zz - step
        done = (np.abs(step).max(axis=1) < tol) & ~bad
        converged[idx[done]] = True
        active[idx[done]] = False
        active[idx[bad]] = False
    return z, converged


# exact rational polynomial helpers (little-endian lists of Fractions)


def _q_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _q_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    quo = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] / lead
        quo[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _q_trim(quo), _q_trim(a[:db])


def _q_gcd(a: list, b: list) -> list:
    a, b = _q_trim(list(a)), _q_trim(list(b))
    while b:
        a, b = b, _q_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _q_deriv(a: list) -> list:
    return _q_trim([i * a[i] for i in range(1, len(a))])


def squarefree_decomposition(coeffs: Sequence[int]) -> list[tuple[list, int]]:
    """Yun's algorithm over Q: [(factor, multiplicity)], factors monic and coprime."""
    f = [Fraction(c) for c in coeffs]
    f = _q_trim(f)
    if len(f) <= 1:
        return []
    out = []
    a = _q_gcd(f, _q_deriv(f))
    b = _q_divmod(f, a)[0]
    c = _q_divmod(_q_deriv(f), a)[0]
    d = _q_trim([x - y for x, y in _zip_pad(c, _q_deriv(b))])
    i = 1
    while len(b) > 1:
        a = _q_gcd(b, d) if d else [c / b[-1] for c in b]
        if len(a) > 1:
            out.append((a, i))
        b = _q_divmod(b, a)[0]
        c = _q_divmod(d, a)[0] if d else []
        d = _q_trim([x - y for x, y in _zip_pad(c, _q_deriv(b))])
        i += 1
    return out


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else Fraction(0), b[i] if i < len(b) else Fraction(0))


def multiplicity_profile(L: LPolynomial) -> list[int]:
    """Multiplicities of the distinct zeros, ascending (exact)."""
    prof = []
    for fac, mult in squarefree_decomposition(L.coeffs):
        prof.extend([mult] * (len(fac) - 1))
    prof.sort()
    if sum(prof) != 2 * L.g:
        raise AssertionError("multiplicities do not add up to 2g")
    return prof


def simple_zero_count(L: LPolynomial) -> int:
    return sum(1 for m in multiplicity_profile(L) if m == 1)


def _roots_v(coeffs_u: Sequence, q: int) -> np.ndarray:
    """Roots in v of a single rational polynomial in u (via Aberth, polished)."""
    c = np.array([[float(x) for x in coeffs_u]])
    b = _v_coeffs(c, q)
    z, ok = aberth(b, max_iter=4 * MAX_ITER)
    if not ok[0]:
        raise NonConvergenceError("Aberth iteration did not converge on a square-free factor", float("nan"))
    return z[0]


def compute_zeros_batch(coeffs: np.ndarray, q: int, rh_tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zeros of many L-polynomials of the same genus.

    Returns (angles, residuals, fallback) with angles sorted per row.  Rows
    where the iteration stalls (repeated zeros) are redone exactly: the
    polynomial is split into square-free parts over Q and each part is
    solved separately.
    """
    coeffs = np.asarray(coeffs)
    B, m1 = coeffs.shape
    m = m1 - 1
    if m == 0:
        return np.zeros((B, 0)), np.zeros((B, 0)), np.zeros(B, dtype=bool)
    z, ok = aberth(_v_coeffs(coeffs, q))
    fallback = ~ok
    for i in np.nonzero(fallback)[0]:
        parts = squarefree_decomposition([int(x) for x in coeffs[i]])
        roots = []
        for fac, mult in parts:
            r = _roots_v(fac, q)
            roots.extend(list(r) * mult)
        z[i] = np.array(roots)
    residuals = np.abs(z) - 1.0
    worst = float(np.max(np.abs(residuals))) if residuals.size else 0.0
    if worst > rh_tol:
        raise NonConvergenceError(f"zero off the critical circle by {worst:.3e}", worst)
    angles = np.mod(np.angle(z) / (2 * math.pi), 1.0)
    order = np.argsort(angles, axis=1)
    angles = np.take_along_axis(angles, order, axis=1)
    residuals = np.take_along_axis(residuals, order, axis=1)
    return angles, residuals, fallback


def compute_zeros(L: LPolynomial, rh_tol: float = 1e-8) -> ZeroSet:
    if L.g == 0:
        return ZeroSet(np.zeros(0), np.zeros(0))
    a, r, fb = compute_zeros_batch(np.array([L.coeffs], dtype=np.int64), L.q, rh_tol)
    return ZeroSet(a[0], r[0], bool(fb[0]))


def psi_from_zeros(angles: np.ndarray, q: int, N: int) -> np.ndarray:
    """-q^(n/2) sum_j e(n theta_j) for n = 1..N (rows of angles allowed)."""
    angles = np.atleast_2d(angles)
    n = np.arange(1, N + 1)
    ph = np.exp(2j * math.pi * angles[:, None, :] * n[None, :, None]).sum(axis=2).real
    return -(float(q) ** (n / 2)) * ph


# ---------------------------------------------------------------- central values


def central_value(L: LPolynomial) -> CentralValue:
    """L(1/2) = A + B sqrt(q) exactly."""
    q = L.q
    A = Fraction(0)
    B = Fraction(0)
    for n, c in enumerate(L.coeffs):
        if n % 2 == 0:
            A += Fraction(c, q ** (n // 2))
        else:
            B += Fraction(c, q ** ((n + 1) // 2))
    s = math.isqrt(q)
    if s * s == q:
        vanishing = A + s * B == 0
    else:
        vanishing = A == 0 and B == 0
    return CentralValue(A, B, vanishing)


def central_order(coeffs: Sequence[int], q: int) -> int:
    """Order of vanishing of L(u) at u = q^(-1/2), exactly.

    For non-square q the minimal polynomial of q^(-1/2) is q u^2 - 1 and both
    of its roots vanish to the same order, so the order is the exponent of
    q u^2 - 1.  For q = s^2 the linear factor s u - 1 is used.
    """
    f = _q_trim([Fraction(c) for c in coeffs])
    s = math.isqrt(q)
    if s * s == q:
        m = [Fraction(-1), Fraction(s)]
    else:
        m = [Fraction(-1), Fraction(0), Fraction(q)]
    order = 0
    while len(f) >= len(m):
        quo, rem = _q_divmod(f, m)
        if rem:
            break
        f, order = quo, order + 1
    return order


def afe_evaluate(L: LPolynomial, alpha: float) -> tuple[float, float]:
    """L(1/2 + alpha) directly and through the approximate functional equation."""
    if abs(alpha) >= 0.25:
        raise ValueError("|alpha| must be < 1/4")
    q, g, c = L.q, L.g, L.coeffs
    s = 0.5 + alpha
    lhs = math.fsum(c[n] * q ** (-n * s) for n in range(2 * g + 1))
    first = math.fsum(c[n] * q ** (-n * s) for n in range(g + 1))
    second = math.fsum(c[n] * q ** (-n * (1 - s)) for n in range(g))
    return lhs, first + q ** (2 * g * (0.5 - s)) * second


def newton_check(L: LPolynomial, psi: Sequence[int]) -> bool:
    """Exact consistency of coefficients and power sums."""
    return coefficients_from_psi(psi, L.g) == list(L.coeffs)


__all__ = [
    "LPolynomial",
    "ZeroSet",
    "CentralValue",
    "NonConvergenceError",
    "char_sum",
    "l_coefficients",
    "functional_equation_holds",
    "psi_power_sums",
    "coefficients_from_psi",
    "psi_from_coefficients",
    "aberth",
    "compute_zeros",
    "compute_zeros_batch",
    "psi_from_zeros",
    "squarefree_decomposition",
    "multiplicity_profile",
    "simple_zero_count",
    "central_value",
    "central_order",
    "afe_evaluate",
    "newton_check",
]
