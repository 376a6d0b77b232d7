"""Probabilists' Hermite polynomials He_n.

He_0 = 1, He_1 = x, He_{n+1}(x) = x He_n(x) - n He_{n-1}(x).  These are
orthogonal under the standard normal weight with <He_m, He_n> = n! delta_mn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import OrderTooLarge

MAX_ORDER = 32


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError(f"Hermite order must be nonnegative, got {n}")
    if n > MAX_ORDER:
        raise OrderTooLarge(f"Hermite order {n} exceeds the supported maximum {MAX_ORDER}")


@dataclass(frozen=True)
class HermiteCoeffs:
    """Coordinates of a polynomial (or distribution) in the He_n basis.

    Odd-order coordinates are ``coeffs[n] / sqrt(radical)``.  ``radical`` is 1
    except for Gram-Charlier coefficients taken under an irrational scale, where
    keeping the square root out of the rationals keeps everything else exact.
    """

    coeffs: tuple[Fraction, ...]
    radical: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("HermiteCoeffs needs at least one coefficient")
        if self.radical <= 0:
            raise ValueError("radical must be positive")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def values(self) -> list[float]:
        root = math.sqrt(self.radical)
        return [float(c) / root if n % 2 else float(c) for n, c in enumerate(self.coeffs)]

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)


def he_eval(n: int, x: float) -> float:
    """Evaluate He_n(x) in double precision by the three-term recurrence."""
    _check_order(n)
    if n == 0:
        return 1.0
    prev, cur = 1.0, float(x)
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur


@lru_cache(maxsize=None)
def _monomial_coeffs(n: int) -> tuple[Fraction, ...]:
    if n == 0:
        return (Fraction(1),)
    if n == 1:
        return (Fraction(0), Fraction(1))
    a = _monomial_coeffs(n - 1)
    b = _monomial_coeffs(n - 2)
    out = [Fraction(0)] * (n + 1)
    for k, c in enumerate(a):
        out[k + 1] += c
    for k, c in enumerate(b):
        out[k] -= (n - 1) * c
    return tuple(out)


def he_monomial_coeffs(n: int) -> list[Fraction]:
    """Return a_0..a_n with He_n(x) = sum a_k x^k, exactly."""
    _check_order(n)
    return list(_monomial_coeffs(n))


def monomial_to_hermite(poly: Sequence) -> HermiteCoeffs:
    """Rewrite sum poly[k] x^k as sum c_n He_n(x).

    Works downward from the top degree: He_d is the only basis element that
    contributes x^d, and it is monic.
    """
    if len(poly) == 0:
        raise ValueError("polynomial must have at least one coefficient")
    rest = [Fraction(c) for c in poly]
    degree = len(rest) - 1
    _check_order(degree)
    out = [Fraction(0)] * (degree + 1)
    for n in range(degree, -1, -1):
        c = rest[n]
        if c:
            out[n] = c
            for k, a in enumerate(_monomial_coeffs(n)):
                rest[k] -= c * a
    return HermiteCoeffs(tuple(out))


def hermite_to_monomial(coeffs: HermiteCoeffs | Sequence) -> list[Fraction]:
    if isinstance(coeffs, HermiteCoeffs):
        if coeffs.radical != 1:
            raise ValueError("cannot expand coefficients with an irrational scale exactly")
        coeffs = coeffs.coeffs
    degree = len(coeffs) - 1
    _check_order(degree)
    out = [Fraction(0)] * (degree + 1)
    for n, c in enumerate(coeffs):
        if c:
            for k, a in enumerate(_monomial_coeffs(n)):
                out[k] += Fraction(c) * a
    return out
