"""Exhaustive scans of the hyperelliptic ensemble H_{2g+1} and exact
ensemble averages of the 1-level density and pair-correlation statistics.

The scan evaluates chi_D(P) for every prime P of degree <= g and every
monic D of degree 2g+1 at once.  Each prime of degree d is represented by
one of its roots alpha in F_{q^d}; chi_D(P) is then the quadratic
character of D(alpha), and D(alpha) is an F_p-linear function of the
coordinates of D, so a whole block of discriminants is handled by one
matrix product followed by a discrete-log table lookup.  Square-freeness
is detected the same way (P^2 | D iff D(alpha) = D'(alpha) = 0).

From the per-degree character sums the power sums psi_D(1..g) follow, and
Newton's identities give c_1..c_g, which determine L(u, chi_D) through the
functional equation.  The scan output is the multiset of distinct
L-polynomials with multiplicities; every ensemble statistic is computed
from it with exact integer arithmetic.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np

from .characters import chi
from .fqx import (
    Field,
    Poly,
    enumerate_hyperelliptic,
    hyperelliptic_count,
    monic_from_index,
    parse_field,
    pi_q,
)
from .lfunction import (
    compute_zeros_batch,
    psi_power_sums,
    squarefree_decomposition,
)
from .testfn import TestFunction

CHUNK = 1 << 14
DEFAULT_BUDGET = 2 * 10**7
CACHE_FORMAT = 2
SQUAREFREE_PRIME = 2**61 - 1


class BudgetError(RuntimeError):
    """The requested enumeration exceeds the configured budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"enumeration needs {needed} candidates, budget is {budget} (raise --budget)")
        self.needed = needed
        self.budget = budget


class CacheError(RuntimeError):
    """A cache file is missing, corrupt or does not match its key."""


# ---------------------------------------------------------------- extension fields


class _PrimeExtension:
    """F_{p^n} = F_p[z]/(M) with M primitive; elements are base-p digit indices."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.size = p**n
        for tail in product(range(p), repeat=n):
            if tail[0] == 0 and n > 1:
                continue
            exp = self._cycle(tail)
            if exp is not None:
                break
        else:  # pragma: no cover - a primitive polynomial always exists
            raise AssertionError("no primitive polynomial found")
        self.modulus = tuple(tail) + (1,)
        self.exp = np.array(exp, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        log[self.exp] = np.arange(self.size - 1, dtype=np.int64)
        self.log = log

    def _cycle(self, tail) -> list[int] | None:
        """Powers of z modulo z^n + tail, or None when z is not primitive."""
        p, n = self.p, self.n
        if n == 1:
            # F_p: z is the root of x + tail[0], i.e. the element -tail[0]
            g = (-tail[0]) % p
            if g == 0:
                return None
            out, x = [], 1
            for _ in range(p - 1):
                out.append(x)
                x = x * g % p
            return out if x == 1 and len(set(out)) == p - 1 else None
        order = self.size - 1
        digits = [1] + [0] * (n - 1)
        weights = [p**j for j in range(n)]
        out = []
        for step in range(order):
            idx = sum(d * w for d, w in zip(digits, weights))
            if step and idx == 1:
                return None
            out.append(idx)
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(d - top * m) % p for d, m in zip(digits, tail)]
        if digits != [1] + [0] * (n - 1):
            return None
        return out

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, d) -> int:
        return sum(int(x) % self.p * self.p**j for j, x in enumerate(d))

    def add(self, a: int, b: int) -> int:
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.size - 1)])

    def power_of_gen(self, e: int) -> int:
        return int(self.exp[e % (self.size - 1)])

    def scale(self, c: int, a: int) -> int:
        """Multiply an element by an integer (prime-field) scalar."""
        return self.from_digits([c * x for x in self.digits(a)])


class _DegreeTable:
    """Everything needed to evaluate chi_D(P) for all primes P of one degree d."""

    def __init__(self, F: Field, g: int, d: int):
        p, k, q = F.p, F.k, F.q
        K = _PrimeExtension(p, k * d)
        order = K.size - 1
        # image of the generator t of F_q inside K
        if k == 1:
            tau_log = 0
        else:
            step = order // (q - 1)
            tau_log = None
            for j in range(q - 1):
                beta = K.power_of_gen(j * step)
                acc, power = 0, 1
                for m in F.modulus:
                    acc = K.add(acc, K.scale(m, power))
                    power = K.mul(power, beta)
                if acc == 0:
                    tau_log = j * step
                    break
            if tau_log is None:  # pragma: no cover
                raise AssertionError("modulus of F_q has no root in the extension")
        # one root per Frobenius orbit of exact size d
        roots: list[int | None] = []  # log of the root, None for the root 0
        if d == 1:
            roots.append(None)
        seen = np.zeros(order, dtype=bool)
        for e in range(order):
            if seen[e]:
                continue
            orbit = [e]
            x = e * q % order
            while x != e:
                orbit.append(x)
                x = x * q % order
            seen[orbit] = True
            if len(orbit) == d:
                roots.append(e)
        if len(roots) != pi_q(q, d):
            raise AssertionError(f"found {len(roots)} roots of degree {d}, expected {pi_q(q, d)}")
        self.d, self.n, self.p = d, k * d, p
        self.nroots = len(roots)
        R = (2 * g + 1) * k

        def element(i: int, l: int, e: int | None) -> int:
            # tau^l * alpha^i
            if e is None:
                if i:
                    return 0
                return K.power_of_gen(l * tau_log)
            return K.power_of_gen(l * tau_log + i * e)

        n = self.n
        M = np.zeros((R, self.nroots * n), dtype=np.float32)
        off = np.zeros(self.nroots * n, dtype=np.float32)
        Md = np.zeros((self.nroots, R, n), dtype=np.int64)
        offd = np.zeros((self.nroots, n), dtype=np.int64)
        for r, e in enumerate(roots):
            cols = slice(r * n, (r + 1) * n)
            for i in range(2 * g + 1):
                for l in range(k):
                    M[i * k + l, cols] = K.digits(element(i, l, e))
            off[cols] = K.digits(element(2 * g + 1, 0, e))
            # derivative: D' = sum_{i>=1} i D_i x^(i-1) + (2g+1) x^(2g)
            for i in range(1, 2 * g + 1):
                for l in range(k):
                    Md[r, i * k + l, :] = [(i * x) % p for x in K.digits(element(i - 1, l, e))]
            offd[r] = [((2 * g + 1) * x) % p for x in K.digits(element(2 * g, 0, e))]
        self.M, self.off = M, off
        self.Md, self.offd = Md, offd
        self.weights = np.array([p**j for j in range(n)], dtype=np.float32)
        self.log = K.log


class EnsembleEngine:
    """Vectorized evaluation of chi_D over all primes of degree <= g."""

    def __init__(self, F: Field, g: int):
        self.F, self.g = F, g
        self.R = (2 * g + 1) * F.k
        self.tables = [_DegreeTable(F, g, d) for d in range(1, g + 1)]
        self.total = F.q ** (2 * g + 1)

    def _digits(self, idx: np.ndarray) -> np.ndarray:
        p = self.F.p
        X = np.empty((idx.size, self.R), dtype=np.float32)
        rest = idx.copy()
        for j in range(self.R):
            X[:, j] = rest % p
            rest //= p
        return X

    def evaluate(self, idx: np.ndarray):
        """For D given by enumeration indices: (squarefree mask, psi[:, 1..g], c[:, 0..g])."""
        g, p = self.g, self.F.p
        B = idx.size
        if g == 0:
            return np.ones(B, dtype=bool), np.zeros((B, 0), np.int64), np.ones((B, 1), np.int64)
        X = self._digits(idx)
        Xi = X.astype(np.int64)
        s1 = np.zeros((B, g + 1), dtype=np.int64)
        s0 = np.zeros((B, g + 1), dtype=np.int64)
        squarefree = np.ones(B, dtype=bool)
        for T in self.tables:
            Y = X @ T.M
            Y += T.off
            Y = np.remainder(Y, p, out=Y)
            elem = (Y.reshape(B, T.nroots, T.n) @ T.weights).astype(np.int64)
            lg = T.log[elem]
            zero = elem == 0
            ch = np.where(zero, 0, 1 - 2 * (lg & 1))
            s1[:, T.d] = ch.sum(axis=1)
            s0[:, T.d] = T.nroots - zero.sum(axis=1)
            rows, cols = np.nonzero(zero)
            if rows.size:
                val = np.einsum("pr,prj->pj", Xi[rows], T.Md[cols]) + T.offd[cols]
                dead = (val % p == 0).all(axis=1)
                squarefree[rows[dead]] = False
        psi = np.zeros((B, g), dtype=np.int64)
        for n in range(1, g + 1):
            tot = np.zeros(B, dtype=np.int64)
            for d in range(1, n + 1):
                if n % d == 0:
                    tot += d * (s1[:, d] if (n // d) % 2 else s0[:, d])
            psi[:, n - 1] = tot
        c = np.zeros((B, g + 1), dtype=np.int64)
        c[:, 0] = 1
        for n in range(1, g + 1):
            s = np.zeros(B, dtype=np.int64)
            for kk in range(1, n + 1):
                s += psi[:, kk - 1] * c[:, n - kk]
            if np.any(s % n):
                raise AssertionError("Newton identity produced a non-integer coefficient")
            c[:, n] = s // n
        return squarefree, psi, c

    def chunk(self, start: int, stop: int):
        """Distinct (c_1..c_g) rows with multiplicities over square-free D in [start, stop)."""
        idx = np.arange(start, stop, dtype=np.int64)
        sq, _, c = self.evaluate(idx)
        rows = c[sq, 1:]
        if rows.shape[0] == 0:
            return np.zeros((0, self.g), np.int64), np.zeros(0, np.int64)
        if self.g == 0:
            return np.zeros((1, 0), np.int64), np.array([rows.shape[0]], np.int64)
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
        return uniq, counts.astype(np.int64)


# ---------------------------------------------------------------- scan (map-reduce)

_WORKER_ENGINE: EnsembleEngine | None = None


def _init_worker(field_str: str, g: int) -> None:
    global _WORKER_ENGINE
    _WORKER_ENGINE = EnsembleEngine(parse_field(field_str), g)


def _run_chunk(bounds):
    assert _WORKER_ENGINE is not None
    return _WORKER_ENGINE.chunk(*bounds)


def _merge(parts, g: int):
    parts = [pc for pc in parts if pc[1].size]
    if not parts:
        return np.zeros((0, g), np.int64), np.zeros(0, np.int64)
    U = np.concatenate([u for u, _ in parts])
    C = np.concatenate([c for _, c in parts])
    if g == 0:
        return np.zeros((1, 0), np.int64), np.array([int(C.sum())], np.int64)
    uniq, inv = np.unique(U, axis=0, return_inverse=True)
    counts = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(counts, inv.reshape(-1), C)
    return uniq, counts


@dataclass
class EnsembleScan:
    """Distinct L-polynomials of H_{2g+1} with their multiplicities."""

    field: str
    q: int
    g: int
    H: int
    heads: np.ndarray  # (u, g): c_1..c_g per distinct L-polynomial, sorted
    counts: np.ndarray  # (u,)

    def coefficients(self) -> np.ndarray:
        """Full coefficient rows c_0..c_{2g} (object dtype: exact Python ints)."""
        q, g = self.q, self.g
        u = self.heads.shape[0]
        full = np.empty((u, 2 * g + 1), dtype=object)
        full[:, 0] = 1
        for n in range(1, g + 1):
            full[:, n] = [int(x) for x in self.heads[:, n - 1]]
        for n in range(g + 1, 2 * g + 1):
            m = 2 * g - n
            full[:, n] = [q ** (g - m) * int(x) for x in full[:, m]]
        return full


def check_budget(q: int, g: int, budget: int | None) -> int:
    needed = q ** (2 * g + 1)
    budget = DEFAULT_BUDGET if budget is None else budget
    if needed > budget:
        raise BudgetError(needed, budget)
    return needed


def scan_ensemble(F: Field, g: int, threads: int = 1, budget: int | None = None) -> EnsembleScan:
    """Enumerate H_{2g+1} in fixed chunks; the result does not depend on ``threads``."""
    if g < 0:
        raise ValueError("g must be >= 0")
    total = check_budget(F.q, g, budget)
    bounds = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    if threads <= 1:
        engine = EnsembleEngine(F, g)
        parts = [engine.chunk(a, b) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(str(F), g)) as ex:
            parts = list(ex.map(_run_chunk, bounds))
    heads, counts = _merge(parts, g)
    H = int(counts.sum())
    if H != hyperelliptic_count(F.q, 2 * g + 1):
        raise AssertionError(f"scan found {H} square-free D, expected {hyperelliptic_count(F.q, 2 * g + 1)}")
    return EnsembleScan(str(F), F.q, g, H, heads, counts)


@lru_cache(maxsize=16)
def cached_scan(field_str: str, g: int, budget: int | None = None) -> EnsembleScan:
    return scan_ensemble(parse_field(field_str), g, 1, budget)


# ---------------------------------------------------------------- exact per-L reductions


def psi_rows(full: np.ndarray, Nmax: int) -> list[list[int]]:
    """psi(1..Nmax) per coefficient row by the inverse Newton recursion (exact)."""
    out = []
    m = full.shape[1] - 1
    for row in full:
        c = [int(x) for x in row] + [0] * max(0, Nmax + 1 - (m + 1))
        psi: list[int] = []
        for n in range(1, Nmax + 1):
            psi.append(n * c[n] - sum(psi[k - 1] * c[n - k] for k in range(1, n)))
        out.append(psi)
    return out


def _gcd_is_one_mod(coeffs: list[int], ell: int) -> bool:
    """gcd(f, f') == 1 over F_ell; f's leading coefficient must be a unit mod ell."""
    a = [x % ell for x in coeffs]
    b = [(i * coeffs[i]) % ell for i in range(1, len(coeffs))]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, ell)
        while len(a) >= len(b):
            c = a[-1] * inv % ell
            shift = len(a) - len(b)
            for j, bj in enumerate(b):
                a[shift + j] = (a[shift + j] - c * bj) % ell
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) == 1


def simple_zeros_of(coeffs: list[int], q: int) -> int:
    """Number of simple zeros of sum c_n u^n, exactly."""
    m = len(coeffs) - 1
    if m == 0:
        return 0
    if _gcd_is_one_mod(coeffs, SQUAREFREE_PRIME):
        return m
    prof = []
    for fac, mult in squarefree_decomposition(coeffs):
        prof.extend([mult] * (len(fac) - 1))
    return sum(1 for x in prof if x == 1)


def central_order_of(coeffs: list[int], q: int) -> int:
    """Order of vanishing at u = q^(-1/2) (0 when L(1/2) != 0), exactly."""
    g2 = len(coeffs) - 1
    g = g2 // 2
    # A q^g and B q^(g+1) as integers
    A = sum(c * q ** (g - n // 2) for n, c in enumerate(coeffs) if n % 2 == 0)
    Bq = sum(c * q ** (g + 1 - (n + 1) // 2) for n, c in enumerate(coeffs) if n % 2 == 1)
    s = math.isqrt(q)
    if s * s == q:
        vanish = A * q + s * Bq == 0
    else:
        vanish = A == 0 and Bq == 0
    if not vanish:
        return 0
    from .lfunction import central_order

    return central_order(coeffs, q)


# ---------------------------------------------------------------- moment cache


@dataclass
class MomentCache:
    field: str
    g: int
    Nmax: int
    H: int
    S1: list[int]
    S2: list[int]
    nonvanishing: int
    simple_zeros: int
    central_orders: dict[int, int] = field(default_factory=dict)

    def check_invariants(self) -> None:
        q, g = parse_field(self.field).q, self.g
        if self.H != hyperelliptic_count(q, 2 * g + 1):
            raise CacheError("H does not match |H_{2g+1}|")
        if len(self.S1) != self.Nmax or len(self.S2) != self.Nmax:
            raise CacheError("moment vectors have the wrong length")
        for n in range(1, self.Nmax + 1):
            s1, s2 = self.S1[n - 1], self.S2[n - 1]
            if s1 * s1 > (self.H * 2 * g) ** 2 * q**n:
                raise CacheError(f"|S1({n})| exceeds H 2g q^(n/2)")
            if not 0 <= s2 <= self.H * (2 * g) ** 2 * q**n:
                raise CacheError(f"S2({n}) outside [0, H (2g)^2 q^n]")
        if not 0 <= self.nonvanishing <= self.H:
            raise CacheError("nonvanishing count out of range")
        if not 0 <= self.simple_zeros <= 2 * g * self.H:
            raise CacheError("simple zero total out of range")
        if sum(self.central_orders.values()) not in (0, self.H):
            raise CacheError("central order histogram does not cover the ensemble")

    def to_json(self) -> dict:
        doc = self._payload()
        doc["digest"] = _digest(doc)
        return doc

    def _payload(self) -> dict:
        return {
            "format": CACHE_FORMAT,
            "field": self.field,
            "g": self.g,
            "Nmax": self.Nmax,
            "H": str(self.H),
            "S1": [str(x) for x in self.S1],
            "S2": [str(x) for x in self.S2],
            "nonvanishing": str(self.nonvanishing),
            "simple_zeros": str(self.simple_zeros),
            "central_orders": {str(k): str(v) for k, v in sorted(self.central_orders.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MomentCache":
        try:
            if obj.get("format") != CACHE_FORMAT:
                raise CacheError(f"unsupported cache format {obj.get('format')!r}")
            body = {k: v for k, v in obj.items() if k != "digest"}
            if obj.get("digest") != _digest(body):
                raise CacheError("content digest does not match; the file was modified or truncated")
            mc = cls(
                field=str(obj["field"]),
                g=int(obj["g"]),
                Nmax=int(obj["Nmax"]),
                H=int(obj["H"]),
                S1=[int(x) for x in obj["S1"]],
                S2=[int(x) for x in obj["S2"]],
                nonvanishing=int(obj["nonvanishing"]),
                simple_zeros=int(obj["simple_zeros"]),
                central_orders={int(k): int(v) for k, v in obj.get("central_orders", {}).items()},
            )
        except CacheError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheError(f"corrupt cache document: {exc}") from exc
        mc.check_invariants()
        return mc


def _digest(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def moments_from_scan(scan: EnsembleScan, Nmax: int) -> MomentCache:
    if Nmax < 1:
        raise ValueError("Nmax must be >= 1")
    full = scan.coefficients()
    psis = psi_rows(full, Nmax)
    S1 = [0] * Nmax
    S2 = [0] * Nmax
    nonvan = 0
    simple = 0
    orders: dict[int, int] = {}
    for row, psi, cnt in zip(full, psis, scan.counts.tolist()):
        for n in range(Nmax):
            S1[n] += cnt * psi[n]
            S2[n] += cnt * psi[n] * psi[n]
        coeffs = [int(x) for x in row]
        o = central_order_of(coeffs, scan.q)
        orders[o] = orders.get(o, 0) + cnt
        if o == 0:
            nonvan += cnt
        simple += cnt * simple_zeros_of(coeffs, scan.q)
    mc = MomentCache(scan.field, scan.g, Nmax, scan.H, S1, S2, nonvan, simple, orders)
    mc.check_invariants()
    return mc


def accumulate_moments(
    F: Field, g: int, Nmax: int, threads: int = 1, budget: int | None = None
) -> MomentCache:
    """Exact ensemble aggregates S1, S2 and the central-value / simple-zero counts."""
    scan = scan_ensemble(F, g, threads, budget)
    return moments_from_scan(scan, Nmax)


def cache_path(cache_dir: str | Path, field_str: str, g: int, Nmax: int) -> Path:
    tag = field_str.replace("^", "p").replace(":", "_").replace(",", "-")
    return Path(cache_dir) / f"moments_q{tag}_g{g}_N{Nmax}.json"


def default_cache_dir() -> Path:
    return Path(os.environ.get("HYPERELL_CACHE_DIR", Path.home() / ".cache" / "hyperell"))


def save_cache(mc: MomentCache, cache_dir: str | Path) -> Path:
    path = cache_path(cache_dir, mc.field, mc.g, mc.Nmax)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = json.dumps(mc.to_json(), indent=1, sort_keys=True) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_cache(cache_dir: str | Path, field_str: str, g: int, Nmax: int) -> MomentCache:
    path = cache_path(cache_dir, field_str, g, Nmax)
    if not path.exists():
        raise CacheError(f"no cache file at {path}")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CacheError(f"{path}: not valid JSON ({exc})") from exc
    mc = MomentCache.from_json(obj)
    if (mc.field, mc.g, mc.Nmax) != (field_str, g, Nmax):
        raise CacheError(
            f"{path}: key mismatch, file has field={mc.field} g={mc.g} Nmax={mc.Nmax}, "
            f"expected field={field_str} g={g} Nmax={Nmax}"
        )
    return mc


def find_cache(cache_dir: str | Path, field_str: str, g: int, Nmax: int) -> int | None:
    """Smallest cached Nmax' >= Nmax for (field, g), or None."""
    base = cache_path(cache_dir, field_str, g, 0).name.rsplit("_N", 1)[0] + "_N"
    best = None
    for path in Path(cache_dir).glob(base + "*.json"):
        try:
            n = int(path.stem.rsplit("_N", 1)[1])
        except ValueError:
            continue
        if n >= Nmax and (best is None or n < best):
            best = n
    return best


def truncate_moments(mc: MomentCache, Nmax: int) -> MomentCache:
    if Nmax > mc.Nmax:
        raise CacheError(f"cache holds moments up to {mc.Nmax}, {Nmax} requested")
    if Nmax == mc.Nmax:
        return mc
    return MomentCache(mc.field, mc.g, Nmax, mc.H, mc.S1[:Nmax], mc.S2[:Nmax], mc.nonvanishing,
                       mc.simple_zeros, dict(mc.central_orders))


def get_moments(
    F: Field,
    g: int,
    Nmax: int,
    cache_dir: str | Path | None = None,
    threads: int = 1,
    budget: int | None = None,
) -> MomentCache:
    """Load from cache when present, otherwise compute (and store when a directory is given).

    A cache file with a larger Nmax for the same field and genus is reused
    by truncating its moment vectors.
    """
    if cache_dir is not None:
        found = find_cache(cache_dir, str(F), g, Nmax)
        if found is not None:
            return truncate_moments(load_cache(cache_dir, str(F), g, found), Nmax)
    mc = accumulate_moments(F, g, Nmax, threads, budget)
    if cache_dir is not None:
        save_cache(mc, cache_dir)
    return mc


# ---------------------------------------------------------------- averages


def one_level_average(tf: TestFunction, mc: MomentCache) -> float:
    """Explicit-formula route: Phi_hat(0) - (1/(gH)) sum_n Phi_hat(n/2g) q^(-n/2) S1(n)."""
    if tf.N > mc.Nmax:
        raise ValueError(f"test function support N={tf.N} exceeds cache Nmax={mc.Nmax}")
    g = mc.g
    if g == 0:
        return 0.0
    q = parse_field(mc.field).q
    terms = [float(tf.hat(0))]
    for n in range(1, tf.N + 1):
        h = tf.hat(n)
        if h:
            terms.append(-float(Fraction(mc.S1[n - 1]) * h / (g * mc.H)) * q ** (-n / 2))
    return math.fsum(terms)


def pair_correlation_exact(tf: TestFunction, mc: MomentCache) -> Fraction:
    """Phi_hat(0) + (1/(2g^2 H)) sum_n Phi_hat(n/2g) q^(-n) S2(n), an exact rational."""
    if tf.N > mc.Nmax:
        raise ValueError(f"test function support N={tf.N} exceeds cache Nmax={mc.Nmax}")
    g = mc.g
    if g == 0:
        return Fraction(0)
    q = parse_field(mc.field).q
    total = Fraction(tf.hat(0))
    for n in range(1, tf.N + 1):
        h = Fraction(tf.hat(n))
        if h:
            total += h * Fraction(mc.S2[n - 1], 2 * g * g * mc.H * q**n)
    return total


def pair_correlation_average(tf: TestFunction, mc: MomentCache) -> float:
    return float(pair_correlation_exact(tf, mc))


# per-discriminant statistics, both routes


def sigma1_from_psi(tf: TestFunction, psi, q: int, g: int) -> float:
    if g == 0:
        return 0.0
    terms = [float(tf.hat(0))]
    for n in range(1, tf.N + 1):
        h = float(tf.hat(n))
        if h:
            terms.append(-h * psi[n - 1] * q ** (-n / 2) / g)
    return math.fsum(terms)


def sigma2_from_psi(tf: TestFunction, psi, q: int, g: int) -> float:
    if g == 0:
        return 0.0
    terms = [float(tf.hat(0))]
    for n in range(1, tf.N + 1):
        h = float(tf.hat(n))
        if h:
            terms.append(h * float(psi[n - 1]) ** 2 * q ** (-n) / (2 * g * g))
    return math.fsum(terms)


def sigma1_from_zeros(tf: TestFunction, angles: np.ndarray, g: int) -> np.ndarray:
    """sum_j Phi(2g theta_j) per row of angles."""
    angles = np.atleast_2d(angles)
    if g == 0:
        return np.zeros(angles.shape[0])
    return tf.phi(angles, g).sum(axis=1)


def sigma2_from_zeros(tf: TestFunction, angles: np.ndarray, g: int) -> np.ndarray:
    """(1/2g) sum_{j,k} Phi(2g(theta_j - theta_k)) per row of angles."""
    angles = np.atleast_2d(angles)
    if g == 0:
        return np.zeros(angles.shape[0])
    diff = angles[:, :, None] - angles[:, None, :]
    return tf.phi(diff, g).sum(axis=(1, 2)) / (2 * g)


def _zero_route(tf: TestFunction, scan: EnsembleScan, which: int, block: int = 4096) -> float:
    if scan.g == 0:
        return 0.0
    full = scan.coefficients()
    parts = []
    for s in range(0, full.shape[0], block):
        rows = np.array(full[s : s + block].tolist(), dtype=np.float64)
        angles, _, _ = compute_zeros_batch(rows, scan.q)
        vals = sigma1_from_zeros(tf, angles, scan.g) if which == 1 else sigma2_from_zeros(tf, angles, scan.g)
        parts.append(float(np.dot(vals, scan.counts[s : s + block])))
    total = math.fsum(parts)
    return total / scan.H


def one_level_average_zeros(tf: TestFunction, F: Field, g: int, scan: EnsembleScan | None = None) -> float:
    """Average of sum_j Phi(2g theta_j) over H_{2g+1} from extracted zeros."""
    scan = scan or cached_scan(str(F), g)
    return _zero_route(tf, scan, 1)


def pair_correlation_zeros(tf: TestFunction, F: Field, g: int, scan: EnsembleScan | None = None) -> float:
    """Average of the pair-correlation double sum over H_{2g+1} from extracted zeros."""
    scan = scan or cached_scan(str(F), g)
    return _zero_route(tf, scan, 2)


# ---------------------------------------------------------------- chi_D(P^2) averages, proportions


def coprime_count(q: int, m: int, dP: int) -> int:
    """#{D in H_m : P does not divide D} by count(m) = |H_m| - count(m - d(P))."""
    if m < 0:
        return 0
    return hyperelliptic_count(q, m) - coprime_count(q, m - dP, dP)


def chi_square_ensemble_sum(F: Field, P: Poly, g: int) -> Fraction:
    """(1/|H_{2g+1}|) sum_D chi_D(P^2r), exact (independent of r >= 1)."""
    m = 2 * g + 1
    return Fraction(coprime_count(F.q, m, len(P) - 1), hyperelliptic_count(F.q, m))


def chi_square_ensemble_direct(F: Field, P: Poly, g: int) -> Fraction:
    """The same average by enumerating H_{2g+1}."""
    P2 = tuple(P)
    from .fqx import poly_mul

    P2 = poly_mul(F, P2, P2)
    tot = n = 0
    for D in enumerate_hyperelliptic(F, 2 * g + 1):
        tot += chi(F, D, P2)
        n += 1
    return Fraction(tot, n)


def nonvanishing_proportion(mc: MomentCache) -> Fraction:
    return Fraction(mc.nonvanishing, mc.H)


def simple_zero_proportion(mc: MomentCache) -> Fraction | None:
    """simple_zero_total / (2g H); None for g = 0 where there are no zeros."""
    if mc.g == 0:
        return None
    return Fraction(mc.simple_zeros, 2 * mc.g * mc.H)


# ---------------------------------------------------------------- spot checks


def discriminant_from_index(F: Field, g: int, index: int) -> Poly:
    return monic_from_index(F, 2 * g + 1, index)


def sample_discriminants(F: Field, g: int, count: int, seed: int = 0) -> list[Poly]:
    """Fixed-seed sample of distinct D in H_{2g+1}."""
    from .fqx import is_squarefree

    rng = np.random.default_rng(seed)
    total = F.q ** (2 * g + 1)
    H = hyperelliptic_count(F.q, 2 * g + 1)
    count = min(count, H)
    out: list[Poly] = []
    seen = set()
    while len(out) < count:
        i = int(rng.integers(total))
        if i in seen:
            continue
        seen.add(i)
        D = monic_from_index(F, 2 * g + 1, i)
        if is_squarefree(F, D):
            out.append(D)
    return out


def verify_sample(F: Field, g: int, fraction: float = 0.01, seed: int = 0, minimum: int = 20) -> dict:
    """Compare the vectorized engine with the per-discriminant route on a fixed-seed sample."""
    H = hyperelliptic_count(F.q, 2 * g + 1)
    count = max(minimum, int(math.ceil(fraction * H)))
    Ds = sample_discriminants(F, g, count, seed)
    engine = EnsembleEngine(F, g)
    q = F.q
    idx = np.array([sum(c * q**i for i, c in enumerate(D[:-1])) for D in Ds], dtype=np.int64)
    sq, psi, _ = engine.evaluate(idx)
    mismatches = 0
    for D, ok, row in zip(Ds, sq, psi):
        ref = psi_power_sums(F, D, g) if g else []
        if not ok or list(map(int, row)) != ref:
            mismatches += 1
    return {"checked": len(Ds), "mismatches": mismatches}
