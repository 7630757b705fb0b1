"""Even trigonometric-polynomial test functions.

A test function is stored through its Fourier coefficients
hat[n] = Phi_hat(n/2g) for 0 <= n <= N (evenness supplies negative n).
On the circle it is Phi(2g theta) = (1/2g) sum_{|n|<=N} hat[|n|] e(n theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np


class TestFunctionError(ValueError):
    """Malformed test-function specification or file."""


@dataclass(frozen=True)
class TestFunction:
    coeffs: tuple  # hat[0..len-1], Fractions (or floats)
    N: int
    name: str = "custom"

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.N < len(self.coeffs) - 1 and any(self.coeffs[self.N + 1 :]):
            raise TestFunctionError("declared support N is smaller than the coefficient support")
        if self.N < 0:
            raise TestFunctionError("support N must be >= 0")

    def hat(self, n: int) -> Fraction:
        n = abs(n)
        if n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def with_support(self, N: int) -> "TestFunction":
        return TestFunction(self.coeffs, N, self.name)

    def phi(self, theta, g: int):
        """Phi(2g theta) for scalar or array theta."""
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, float(self.hat(0)))
        for n in range(1, len(self.coeffs)):
            h = float(self.coeffs[n])
            if h:
                out = out + 2 * h * np.cos(2 * math.pi * n * theta)
        return out / (2 * g)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_text(self) -> str:
        lines = [f"# test function {self.name}, N = {self.N}"]
        for n, c in enumerate(self.coeffs):
            lines.append(f"{n} {c}")
        return "\n".join(lines) + "\n"


def fejer(M: int) -> TestFunction:
    """Discrete Fejer kernel: hat[n] = 1 - n/M for n < M."""
    if M < 1:
        raise TestFunctionError("fejer needs M >= 1")
    return TestFunction(tuple(Fraction(M - n, M) for n in range(M)), M - 1, f"fejer:{M}")


def delta0() -> TestFunction:
    return TestFunction((Fraction(1),), 0, "delta0")


def zero() -> TestFunction:
    return TestFunction((Fraction(0),), 0, "zero")


def _parse_value(s: str) -> Fraction:
    return Fraction(s)


def load(path: str | Path) -> TestFunction:
    """Read "n value" lines; value is a rational a/b or a decimal; '#' starts a comment."""
    values: dict[int, Fraction] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TestFunctionError(f"cannot read test function file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TestFunctionError(f"{path}:{lineno}: expected 'n value', got {raw!r}")
        try:
            n = int(parts[0])
            v = _parse_value(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise TestFunctionError(f"{path}:{lineno}: cannot parse {raw!r}") from exc
        if n < 0:
            raise TestFunctionError(f"{path}:{lineno}: index must be >= 0")
        if n in values:
            raise TestFunctionError(f"{path}:{lineno}: duplicate index {n}")
        values[n] = v
    if not values:
        raise TestFunctionError(f"{path}: no coefficients")
    N = max(values)
    coeffs = tuple(values.get(n, Fraction(0)) for n in range(N + 1))
    return TestFunction(coeffs, N, f"file:{path}")


def save(tf: TestFunction, path: str | Path) -> None:
    Path(path).write_text(tf.to_text())


def testfn_make(spec: str, N: int | None = None) -> TestFunction:
    """Build from "fejer:M", "delta0", "zero" or "file:PATH"; N optionally widens the support."""
    spec = spec.strip()
    if spec.startswith("fejer:"):
        try:
            M = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise TestFunctionError(f"bad fejer spec {spec!r}") from exc
        tf = fejer(M)
    elif spec == "delta0":
        tf = delta0()
    elif spec == "zero":
        tf = zero()
    elif spec.startswith("file:"):
        tf = load(spec.split(":", 1)[1])
    else:
        raise TestFunctionError(f"unknown test function {spec!r} (fejer:M | delta0 | file:PATH)")
    if N is not None:
        if N < len(tf.coeffs) - 1 and any(tf.coeffs[N + 1 :]):
            raise TestFunctionError(f"N = {N} is below the support of {spec}")
        tf = tf.with_support(N)
    return tf
