"""The studied power-map family over F_{p^n} with n = 4l.

Two Frobenius-equivalent exponents drive everything:

    d  = p^{2l} - p^l + 1
    d1 = p^{3l} - p^{2l} + p^l  (= p^l * d)

``x**d1`` and ``x**d`` have identical differential spectra, and d1 is the
exponent entering the exponential sums and trace codes.  The sum/code results
additionally need p^l == 2 (mod 3), which is exactly when
gcd(d1, p^n-1) == 3.
"""

from __future__ import annotations

from math import gcd

from .field import DEFAULT_FIELD_CAP, FieldContext, field_for


def exponents(p: int, l: int) -> tuple[int, int]:
    """The exponent pair (d, d1) for parameters (p, l)."""
    if l < 1:
        raise ValueError("l must be positive")
    q = p**l
    return q * q - q + 1, q**3 - q * q + q


def degree(l: int) -> int:
    return 4 * l


def cube_condition(p: int, l: int) -> bool:
    """True when p^l == 2 (mod 3); required by the sum and code results."""
    return pow(p, l, 3) == 2


def require_cube_condition(p: int, l: int) -> None:
    if not cube_condition(p, l):
        raise ValueError(
            f"p^l = {p}^{l} is {pow(p, l, 3)} (mod 3); "
            "the value-distribution results need p^l == 2 (mod 3)"
        )


def build(p: int, l: int, cap: int = DEFAULT_FIELD_CAP) -> FieldContext:
    """The field F_{p^{4l}} on the pinned modulus convention."""
    return field_for(p, degree(l), cap=cap)


def level_of(F: FieldContext) -> int:
    """Recover l from a field of degree 4l."""
    if F.n % 4:
        raise ValueError(f"field degree {F.n} is not of the form 4l")
    return F.n // 4


def shifted_gcd(p: int, l: int) -> int:
    d1 = exponents(p, l)[1]
    return gcd(d1, p ** degree(l) - 1)
