"""Arithmetic in F_q and F_q[x] for odd q = p^k.

Field elements are small integers in ``[0, q)``: the base-p digits of an
element are its coordinates in the basis 1, t, ..., t^(k-1) of
F_p[t]/(modulus), constant coordinate least significant.  All element
arithmetic goes through lookup tables built once per field.

Polynomials are plain tuples of field elements, little-endian
(``f[i]`` is the coefficient of x^i) and normalized so the last entry is
nonzero.  The empty tuple is the zero polynomial.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

Poly = tuple

MAX_Q = 256

# Default moduli for prime-power fields given only as "q".
DEFAULT_MODULI = {
    9: (3, 2, (1, 0, 1)),  # t^2 + 1 over F_3
    25: (5, 2, (2, 0, 1)),  # t^2 + 2 over F_5
    27: (3, 3, (1, 2, 0, 1)),  # t^3 + 2t + 1 over F_3
}


class FieldError(ValueError):
    """Invalid field description or an undefined field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of a positive integer, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    """Integer Moebius function."""
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    res = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    if n > 1:
        res = -res
    return res


def alpha(d: int) -> int:
    """alpha(d) = prod over primes l | d of (1 - l)."""
    res = 1
    for ell in prime_factors(d):
        res *= 1 - ell
    return res


# ---------------------------------------------------------------- F_p[t] helpers
# Used only to build the tables of F_q; coefficients are residues mod p.


def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(_fp_trim(a)) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
    return a


def _fp_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, m, p)


def _fp_is_irreducible(m: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility over F_p for the small moduli used here."""
    k = len(m) - 1
    if k < 1 or m[-1] % p == 0:
        return False
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            cand = list(tail) + [1]
            if not _fp_trim(_fp_mod(m, cand, p)):
                return False
    return True


# ---------------------------------------------------------------- the field


class Field:
    """The finite field F_q, q = p^k with p odd, k >= 1.

    ``modulus`` is the little-endian coefficient tuple of a monic
    irreducible polynomial of degree k over F_p (``None`` when k = 1).
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported (q must be odd)")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**k
        if q > MAX_Q:
            raise FieldError(f"q = {q} exceeds the supported table size (q <= {MAX_Q})")
        if k == 1:
            modulus = None
        else:
            if modulus is None:
                raise FieldError("a modulus is required for k > 1")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {k}")
            if not _fp_is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # -- construction

    def _coords_of(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_coords(self, c: Sequence[int]) -> int:
        a = 0
        for x in reversed(c):
            a = a * self.p + x % self.p
        return a

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        coords = [self._coords_of(a) for a in range(q)]
        self._coords = coords
        add = [0] * (q * q)
        mul = [0] * (q * q)
        for a in range(q):
            ca = coords[a]
            for b in range(q):
                cb = coords[b]
                add[a * q + b] = self._from_coords([(x + y) % p for x, y in zip(ca, cb)])
                if k == 1:
                    mul[a * q + b] = a * b % p
                else:
                    mul[a * q + b] = self._from_coords(
                        _fp_mulmod(_fp_trim(list(ca)), _fp_trim(list(cb)), self.modulus, p)
                        + [0] * k
                    )
        self._add = add
        self._mul = mul
        self._neg = [self._from_coords([(-x) % p for x in coords[a]]) for a in range(q)]
        self._sub = [add[a * q + self._neg[b]] for a in range(q) for b in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        self._inv = inv
        # Frobenius a -> a^p, trace and quadratic character.
        frob = [self._pow_raw(a, p) for a in range(q)]
        trace = []
        for a in range(q):
            s, x = 0, a
            for _ in range(k):
                s = add[s * q + x]
                x = frob[x]
            if s >= p:
                raise AssertionError("trace left the prime field")
            trace.append(s)
        self._frob = frob
        self._trace = trace
        half = (q - 1) // 2
        chi = [0] * q
        for a in range(1, q):
            chi[a] = 1 if self._pow_raw(a, half) == 1 else -1
        self._chi = chi

    def _pow_raw(self, a: int, e: int) -> int:
        q, mul = self.q, self._mul
        r = 1
        while e:
            if e & 1:
                r = mul[r * q + a]
            a = mul[a * q + a]
            e >>= 1
        return r

    # -- element API

    def elem(self, coords: Sequence[int] | int) -> int:
        """Element from its coordinate vector (or from an integer residue)."""
        if isinstance(coords, int):
            return coords % self.p
        if len(coords) > self.k:
            raise FieldError("too many coordinates")
        return self._from_coords(list(coords) + [0] * (self.k - len(coords)))

    def coords(self, a: int) -> tuple[int, ...]:
        return tuple(self._coords[a])

    @property
    def t(self) -> int:
        """The class of t (the generator over F_p); equals 1 when k = 1."""
        return self.p if self.k > 1 else 1

    def add(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self._sub[a * self.q + b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        return self._pow_raw(a, e)

    def trace(self, a: int) -> int:
        """Absolute trace Tr_{F_q/F_p}(a) as a residue mod p."""
        return self._trace[a]

    def quad_char(self, a: int) -> int:
        """Quadratic character of F_q: 0, +1 (nonzero square) or -1."""
        return self._chi[a]

    def proot(self, a: int) -> int:
        """The unique p-th root of ``a``."""
        return self._pow_raw(a, self.q // self.p)

    def int_elem(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    # -- misc

    def __str__(self) -> str:
        if self.k == 1:
            return str(self.p)
        return f"{self.p}^{self.k}:" + ",".join(str(c) for c in self.modulus)

    def __repr__(self) -> str:
        return f"Field({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))

    @property
    def is_square_q(self) -> bool:
        return self.k % 2 == 0


@lru_cache(maxsize=None)
def parse_field(spec: str) -> Field:
    """Parse "p", "q" (q in 9, 25, 27 uses a built-in modulus), "p^k" or "p^k:c0,...,1"."""
    s = str(spec).strip()
    try:
        if ":" in s:
            head, tail = s.split(":", 1)
            p_s, k_s = head.split("^")
            modulus = tuple(int(c) for c in tail.split(","))
            return Field(int(p_s), int(k_s), modulus)
        if "^" in s:
            p_s, k_s = s.split("^")
            p, k = int(p_s), int(k_s)
            if k == 1:
                return Field(p)
            if p**k in DEFAULT_MODULI and DEFAULT_MODULI[p**k][:2] == (p, k):
                return Field(p, k, DEFAULT_MODULI[p**k][2])
            raise FieldError(f"no default modulus for {p}^{k}; use p^k:c0,...,1")
        q = int(s)
    except FieldError:
        raise
    except ValueError as exc:
        raise FieldError(f"cannot parse field {spec!r}") from exc
    if q in DEFAULT_MODULI:
        p, k, m = DEFAULT_MODULI[q]
        return Field(p, k, m)
    if q % 2 == 0:
        raise FieldError(f"q = {q} is even; q must be odd")
    if not is_prime(q):
        raise FieldError(f"q = {q} is not prime; give the modulus as p^k:c0,...,1")
    return Field(q)


# ---------------------------------------------------------------- polynomials


def normalize(coeffs: Sequence[int]) -> Poly:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def degree(f: Poly) -> int:
    """Degree of f; -1 for the zero polynomial."""
    return len(f) - 1


def norm(F: Field, f: Poly) -> int:
    """|f| = q^deg(f) (0 for the zero polynomial)."""
    return F.q ** degree(f) if f else 0


def is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def poly_from_ints(F: Field, coeffs: Sequence[int]) -> Poly:
    """Polynomial over the prime field from integer coefficients (little-endian)."""
    return normalize([c % F.p for c in coeffs])


def poly_str(F: Field, f: Poly) -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        cs = str(c) if F.k == 1 else "[" + ",".join(map(str, F.coords(c))) + "]"
        if i == 0:
            terms.append(cs)
        else:
            mon = "x" if i == 1 else f"x^{i}"
            terms.append(mon if c == 1 else f"{cs}*{mon}")
    return " + ".join(terms)


X = (0, 1)
ONE = (1,)


def poly_add(F: Field, f: Poly, h: Poly) -> Poly:
    q, add = F.q, F._add
    if len(f) < len(h):
        f, h = h, f
    out = list(f)
    for i, b in enumerate(h):
        out[i] = add[out[i] * q + b]
    return normalize(out)


def poly_sub(F: Field, f: Poly, h: Poly) -> Poly:
    q, sub = F.q, F._sub
    n = max(len(f), len(h))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = h[i] if i < len(h) else 0
        out[i] = sub[a * q + b]
    return normalize(out)


def poly_scale(F: Field, c: int, f: Poly) -> Poly:
    if c == 0:
        return ()
    q, mul = F.q, F._mul
    row = c * q
    return normalize([mul[row + a] for a in f])


def poly_mul(F: Field, f: Poly, h: Poly) -> Poly:
    if not f or not h:
        return ()
    q, add, mul = F.q, F._add, F._mul
    out = [0] * (len(f) + len(h) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        row = a * q
        for j, b in enumerate(h):
            if b:
                out[i + j] = add[out[i + j] * q + mul[row + b]]
    return normalize(out)


def poly_divrem(F: Field, f: Poly, h: Poly) -> tuple[Poly, Poly]:
    """Return (s, r) with f = s*h + r and deg r < deg h."""
    if not h:
        raise ZeroDivisionError("polynomial division by zero")
    dh = len(h) - 1
    if len(f) - 1 < dh:
        return (), f
    q, sub, mul = F.q, F._sub, F._mul
    inv_lead = F._inv[h[-1]]
    r = list(f)
    quo = [0] * (len(f) - dh)
    for i in range(len(f) - 1 - dh, -1, -1):
        c = r[i + dh]
        if c == 0:
            continue
        c = mul[c * q + inv_lead]
        quo[i] = c
        row = c * q
        for j, b in enumerate(h):
            if b:
                r[i + j] = sub[r[i + j] * q + mul[row + b]]
    return normalize(quo), normalize(r[:dh])


def poly_mod(F: Field, f: Poly, h: Poly) -> Poly:
    if not h:
        raise ZeroDivisionError("polynomial division by zero")
    dh = len(h) - 1
    if len(f) - 1 < dh:
        return f
    q, sub, mul = F.q, F._sub, F._mul
    if h[-1] == 1:
        r = list(f)
        for i in range(len(f) - 1 - dh, -1, -1):
            c = r[i + dh]
            if c:
                row = c * q
                for j in range(dh):
                    b = h[j]
                    if b:
                        r[i + j] = sub[r[i + j] * q + mul[row + b]]
        return normalize(r[:dh])
    return poly_divrem(F, f, h)[1]


def poly_quo(F: Field, f: Poly, h: Poly) -> Poly:
    s, r = poly_divrem(F, f, h)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return s


def poly_monic(F: Field, f: Poly) -> tuple[int, Poly]:
    """Split f = lead * monic."""
    if not f:
        return 0, ()
    lead = f[-1]
    if lead == 1:
        return 1, f
    return lead, poly_scale(F, F.inv(lead), f)


def poly_gcd(F: Field, f: Poly, h: Poly) -> Poly:
    """Monic greatest common divisor."""
    if not f and not h:
        raise ValueError("gcd(0, 0) is undefined")
    while h:
        f, h = h, poly_mod(F, f, h)
    return poly_monic(F, f)[1]


def poly_derivative(F: Field, f: Poly) -> Poly:
    q, mul = F.q, F._mul
    return normalize([mul[F.int_elem(i) * q + f[i]] for i in range(1, len(f))])


def poly_pow(F: Field, f: Poly, e: int) -> Poly:
    r: Poly = ONE
    while e:
        if e & 1:
            r = poly_mul(F, r, f)
        f = poly_mul(F, f, f)
        e >>= 1
    return r


def poly_powmod(F: Field, f: Poly, e: int, m: Poly) -> Poly:
    r: Poly = poly_mod(F, ONE, m)
    f = poly_mod(F, f, m)
    while e:
        if e & 1:
            r = poly_mod(F, poly_mul(F, r, f), m)
        e >>= 1
        if e:
            f = poly_mod(F, poly_mul(F, f, f), m)
    return r


def poly_eval(F: Field, f: Poly, a: int) -> int:
    q, add, mul = F.q, F._add, F._mul
    r = 0
    for c in reversed(f):
        r = add[mul[r * q + a] * q + c]
    return r


def _poly_proot(F: Field, f: Poly) -> Poly:
    p = F.p
    return normalize([F.proot(f[i * p]) for i in range((len(f) - 1) // p + 1)])


# ---------------------------------------------------------------- square-free / irreducible


def is_squarefree(F: Field, f: Poly) -> bool:
    if not f:
        raise ZeroDivisionError("is_squarefree of the zero polynomial")
    if len(f) == 1:
        return True
    df = poly_derivative(F, f)
    if not df:
        return False
    return len(poly_gcd(F, f, df)) == 1


def is_irreducible(F: Field, P: Poly) -> bool:
    """Rabin's test: x^(q^d) = x mod P and gcd(x^(q^(d/l)) - x, P) = 1."""
    if not is_monic(P) or len(P) < 2:
        raise ValueError("is_irreducible expects a monic polynomial of degree >= 1")
    d = len(P) - 1
    if d == 1:
        return True
    frob = [poly_mod(F, X, P)]
    for _ in range(d):
        frob.append(poly_powmod(F, frob[-1], F.q, P))
    # frob[i] = x^(q^i) mod P
    if frob[d] != poly_mod(F, X, P):
        return False
    for ell in prime_factors(d):
        w = poly_sub(F, frob[d // ell], X)
        if len(poly_gcd(F, w, P)) != 1:
            return False
    return True


# ---------------------------------------------------------------- factorization


def _ddf(F: Field, f: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a monic square-free polynomial."""
    out = []
    i = 1
    w = X
    while len(f) - 1 >= 2 * i:
        w = poly_powmod(F, w, F.q, f)
        g = poly_gcd(F, f, poly_sub(F, w, X))
        if len(g) > 1:
            out.append((g, i))
            f = poly_quo(F, f, g)
            w = poly_mod(F, w, f)
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(F: Field, f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus equal-degree splitting (q odd)."""
    n = len(f) - 1
    if n <= d:
        return [f]
    e = (F.q**d - 1) // 2
    while True:
        a = normalize([rng.randrange(F.q) for _ in range(n)])
        if len(a) < 2:
            continue
        b = poly_sub(F, poly_powmod(F, a, e, f), ONE)
        g = poly_gcd(F, f, b) if b else f
        if 1 < len(g) < len(f):
            return _edf(F, g, d, rng) + _edf(F, poly_quo(F, f, g), d, rng)


def _distinct_primes(F: Field, f: Poly, rng: random.Random) -> list[Poly]:
    if len(f) <= 1:
        return []
    df = poly_derivative(F, f)
    if not df:
        return _distinct_primes(F, _poly_proot(F, f), rng)
    h = poly_quo(F, f, poly_gcd(F, f, df))
    found = []
    for g, d in _ddf(F, h):
        found.extend(_edf(F, g, d, rng))
    rest = f
    for P in found:
        while True:
            s, r = poly_divrem(F, rest, P)
            if r:
                break
            rest = s
    return found + _distinct_primes(F, rest, rng)


def factor(F: Field, f: Poly, seed: int = 0) -> tuple[int, list[tuple[Poly, int]]]:
    """Factor f = lead * prod P^e into monic irreducibles (sorted)."""
    if not f:
        raise ZeroDivisionError("factor of the zero polynomial")
    lead, f = poly_monic(F, f)
    primes = _distinct_primes(F, f, random.Random(seed))
    out = []
    for P in primes:
        e = 0
        while True:
            s, r = poly_divrem(F, f, P)
            if r:
                break
            f, e = s, e + 1
        out.append((P, e))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1]))
    return lead, out


def arith_functions(F: Field, f: Poly) -> tuple[int, int]:
    """(Lambda(f), mu(f)): von Mangoldt and Moebius of a nonzero polynomial."""
    if not f:
        raise ZeroDivisionError("arithmetic functions of the zero polynomial")
    _, fac = factor(F, f)
    lam = len(fac[0][0]) - 1 if len(fac) == 1 else 0
    if any(e > 1 for _, e in fac):
        mu = 0
    else:
        mu = (-1) ** len(fac)
    return lam, mu


def von_mangoldt(F: Field, f: Poly) -> int:
    return arith_functions(F, f)[0]


# ---------------------------------------------------------------- enumeration


def monic_from_index(F: Field, n: int, index: int) -> Poly:
    """The index-th monic polynomial of degree n (constant term varies fastest)."""
    q = F.q
    coeffs = []
    for _ in range(n):
        index, c = divmod(index, q)
        coeffs.append(c)
    coeffs.append(1)
    return tuple(coeffs)


def enumerate_monic(F: Field, n: int, start: int = 0, stop: int | None = None) -> Iterator[Poly]:
    """All monic polynomials of degree n in lexicographic order (constant term fastest).

    ``start``/``stop`` select an index range so streams can be split into chunks.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    total = F.q**n
    stop = total if stop is None else min(stop, total)
    for index in range(start, stop):
        yield monic_from_index(F, n, index)


def enumerate_hyperelliptic(F: Field, d: int) -> Iterator[Poly]:
    """Monic square-free polynomials of degree d."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    for f in enumerate_monic(F, d):
        if is_squarefree(F, f):
            yield f


def hyperelliptic_count(q: int, d: int) -> int:
    """|H_d|: q for d = 1, q^(d-1)(q-1) for d >= 2 (and 1 for d = 0)."""
    if d < 0:
        return 0
    if d == 0:
        return 1
    if d == 1:
        return q
    return q ** (d - 1) * (q - 1)


def pi_q(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q."""
    if n <= 0:
        raise ValueError("pi_q is defined for n >= 1")
    total = sum(mobius(d) * q ** (n // d) for d in divisors(n))
    assert total % n == 0
    return total // n


def lambda_square_sum(q: int, n: int) -> int:
    """Sum of Lambda(f)^2 over monic f of degree n, in closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # n * sum_{d|n} alpha(d) q^(n/d) / d, kept integral
    total = sum(alpha(d) * q ** (n // d) * (n // d) for d in divisors(n))
    return total


@lru_cache(maxsize=64)
def monic_irreducibles(F: Field, n: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree n, in enumeration order."""
    return tuple(P for P in enumerate_monic(F, n) if is_irreducible(F, P))


def count_irreducibles_by_orbits(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n, counted as Frobenius orbits.

    F_{q^n}^* is cyclic of order q^n - 1; gamma^k lies in the subfield
    F_{q^d} exactly when (q^n - 1)/(q^d - 1) divides k.  Elements outside
    every proper subfield fall into orbits of size n, one per prime.
    Independent of the Moebius-inversion formula used by pi_q.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    order = q**n - 1
    in_subfield = np.zeros(order, dtype=bool)
    for d in divisors(n):
        if d < n:
            in_subfield[:: order // (q**d - 1)] = True
    if n == 1:
        return q  # every element of F_q, including 0, is a root of a linear prime
    exact = order - int(in_subfield.sum())
    return exact // n


def prime_count_brute(F: Field, m: int, limit: int = 20000) -> int:
    """Count degree-m monic irreducibles by Rabin tests when q^m <= limit, else by orbits."""
    if F.q**m <= limit:
        return len(monic_irreducibles(F, m))
    return count_irreducibles_by_orbits(F.q, m)


def lambda_square_sum_brute(F: Field, n: int, limit: int = 20000) -> int:
    """sum over M_n of Lambda(f)^2: direct over every f when q^n <= limit, else over prime powers."""
    if F.q**n <= limit:
        return sum(von_mangoldt(F, f) ** 2 for f in enumerate_monic(F, n))
    return sum(m * m * prime_count_brute(F, m, limit) for m in divisors(n))
