"""Differential solution counts, spectra and c-differential uniformity.

For a power map f(x) = x**d the count delta(b) is the number of solutions of
(x+1)**d - x**d = b; fixing the derivative direction a = 1 loses nothing
because delta(a, b) = delta(1, b / a**d).  The spectrum is the histogram of
delta(b) over all b, computable either by brute force or, for the
d = p^{2l}-p^l+1 family on F_{p^{4l}}, by closed form.

The c-differential variant replaces the difference with
(x+1)**d - c*x**d; for c outside the (p^l+1)-th roots of unity the family's
uniformity is bounded by (p^l+1)**2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import family
from .errors import VerificationError
from .field import FieldContext, add_logs, neg_logs


@dataclass
class Spectrum:
    """Sparse histogram i -> number of b with exactly i solutions."""

    counts: dict[int, int]
    field_size: int

    @property
    def delta(self) -> int:
        """Largest solution count that actually occurs (the uniformity)."""
        return max(i for i, c in self.counts.items() if c > 0)

    def validate(self) -> None:
        # both identities: sum of multiplicities and of i-weighted counts is p^n
        if sum(self.counts.values()) != self.field_size:
            raise VerificationError("spectrum multiplicities do not sum to p^n")
        if sum(i * c for i, c in self.counts.items()) != self.field_size:
            raise VerificationError("weighted spectrum sum is not p^n")

    def as_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())


@dataclass
class CDiffReport:
    """Result of a c-differential sweep for one value of c."""

    c: int
    d: int
    uniformity: int
    max_witness: tuple[int, int]
    gcd_term: int | None
    bound: int | None = None
    bound_holds: bool | None = None

    def to_json(self) -> dict:
        out = {
            "c": self.c,
            "d": self.d,
            "uniformity": self.uniformity,
            "max_witness": {"b": self.max_witness[0], "count": self.max_witness[1]},
            "gcd_term": self.gcd_term,
        }
        if self.bound is not None:
            out["bound"] = self.bound
            out["bound_holds"] = self.bound_holds
        return out


def _derivative_counts(F: FieldContext, d: int, c: int = 1) -> np.ndarray:
    """Number of x with (x+1)**d - c*x**d == b, for every b at once.

    Returned array has length p^n and is indexed by the log code of b
    (index group_order is b = 0).
    """
    if d < 1:
        raise ValueError("exponent must be positive")
    N = F.group_order
    i = np.arange(N, dtype=np.int64)
    lx1 = F.zech_table[i].astype(np.int64)          # log(x + 1), N when x == -1
    lhs = np.where(lx1 == N, N, (d * lx1) % N)      # (x+1)**d, zero stays zero
    if c == 0:
        diff = lhs
    else:
        lc = F.log(c)
        rhs = (lc + d * i) % N                      # c * x**d over nonzero x
        diff = add_logs(F, lhs, neg_logs(F, rhs))
    counts = np.bincount(diff, minlength=N + 1)
    # x = 0 contributes (0+1)**d - c*0 = 1, which has log code 0
    counts[0] += 1
    return counts


def _log_code(F: FieldContext, b: int) -> int:
    return F.zero_log if b == 0 else F.log(b)


def delta(F: FieldContext, d: int, b: int) -> int:
    """Solutions of (x+1)**d - x**d == b, by direct enumeration."""
    return int(_derivative_counts(F, d, 1)[_log_code(F, b)])


def c_delta(F: FieldContext, d: int, c: int, b: int) -> int:
    """Solutions of (x+1)**d - c*x**d == b, by direct enumeration."""
    return int(_derivative_counts(F, d, c)[_log_code(F, b)])


def spectrum_oracle(F: FieldContext, d: int, sweep_a: bool = False) -> Spectrum:
    """Brute-force spectrum of x**d.

    With ``sweep_a`` every derivative direction a != 0 is enumerated and the
    per-a histograms are checked to coincide (slow audit of the a = 1
    reduction); otherwise only a = 1 is swept.
    """
    per_b = _derivative_counts(F, d, 1)
    hist = np.bincount(per_b)
    if sweep_a:
        base = _a_histogram(F, d, 1)
        for la in range(1, F.group_order):
            if _a_histogram(F, d, int(F.exp_table[la])) != base:
                raise VerificationError(f"histogram for a=psi^{la} differs from a=1")
    counts = {int(i): int(c) for i, c in enumerate(hist) if c}
    spec = Spectrum(counts, F.order)
    spec.validate()
    return spec


def _a_histogram(F: FieldContext, d: int, a: int) -> dict[int, int]:
    # histogram of #{x: (x+a)^d - x^d = b} over b, scalar loop (audit only)
    per_b: dict[int, int] = {}
    for x in F.elements():
        val = F.sub(F.pow(F.add(x, a), d), F.pow(x, d))
        per_b[val] = per_b.get(val, 0) + 1
    hist: dict[int, int] = {}
    misses = F.order - len(per_b)
    if misses:
        hist[0] = misses
    for cnt in per_b.values():
        hist[cnt] = hist.get(cnt, 0) + 1
    return hist


def spectrum_closed(p: int, l: int) -> Spectrum:
    """Closed-form spectrum for the d = p^{2l}-p^l+1 family on F_{p^{4l}}.

    Symbolic bins are merged by summation when indices collide, which
    happens exactly for p^l = 2 (then 2 == p^l == p^{2l}-p^l).
    """
    q = p**l
    size = q**4
    bins = [
        (0, (size + q**3 - q**2 - q - 2) // 2),
        (2, (size - q**3 + q**2 - q) // 2),
        (q, 1),
        (q**2 - q, q),
    ]
    counts: dict[int, int] = {}
    for idx, cnt in bins:
        counts[idx] = counts.get(idx, 0) + cnt
    spec = Spectrum({i: c for i, c in counts.items() if c}, size)
    spec.validate()
    return spec


def classify_counts(F: FieldContext, l: int, d: int | None = None) -> dict:
    """Exhaustive per-b classification for the family exponent.

    Checks delta(1) = p^l, delta(b) = p^{2l}-p^l exactly on the other
    (p^l+1)-th roots of unity, and delta(b) in {0, 2} everywhere else.
    Raises VerificationError on any violation.
    """
    if d is None:
        d = family.exponents(F.p, l)[0]
    q = F.p**l
    m = q + 1
    N = F.group_order
    if N % m:
        raise ValueError("p^l+1 does not divide p^n-1; wrong field degree")
    per_b = _derivative_counts(F, d, 1)
    step = N // m
    if per_b[0] != q:
        raise VerificationError(f"delta(1) = {per_b[0]}, expected p^l = {q}")
    root_codes = {j * step for j in range(1, m)}
    for code in root_codes:
        if per_b[code] != q * q - q:
            raise VerificationError(
                f"delta at unity-root code {code} is {per_b[code]}, expected {q*q - q}"
            )
    rest = np.delete(per_b, [0] + sorted(root_codes))
    bad = np.setdiff1d(np.unique(rest), [0, 2])
    if bad.size:
        raise VerificationError(f"counts {bad.tolist()} found outside {{0, 2}}")
    return {
        "delta_at_one": int(per_b[0]),
        "unity_roots": sorted(int(per_b[c]) for c in root_codes),
        "others_in_0_2": True,
    }


def c_uniformity(F: FieldContext, d: int, c: int) -> CDiffReport:
    """Maximal c-derivative solution count, joined with gcd(d, p^n-1).

    c = 1 is routed to the classical uniformity (the gcd term belongs to the
    excluded (a, c) = (0, 1) pair and is not joined there).  When the field
    has degree 4l and c avoids the (p^l+1)-th roots of unity, the family
    bound (p^l+1)^2 is attached and checked.
    """
    per_b = _derivative_counts(F, d, c)
    arg = int(per_b.argmax())
    witness_b = 0 if arg == F.zero_log else int(F.exp_table[arg])
    max_count = int(per_b[arg])
    g = gcd(d, F.group_order)
    if c == 1:
        report = CDiffReport(c, d, max_count, (witness_b, max_count), gcd_term=None)
    else:
        report = CDiffReport(c, d, max(max_count, g), (witness_b, max_count), gcd_term=g)
    if F.n % 4 == 0 and c != 1:
        q = F.p ** (F.n // 4)
        if not (c != 0 and F.is_root_of_unity(c, q + 1)):
            report.bound = (q + 1) ** 2
            report.bound_holds = report.uniformity <= report.bound
            if not report.bound_holds:
                raise VerificationError(
                    f"c-differential uniformity {report.uniformity} exceeds "
                    f"(p^l+1)^2 = {report.bound} for c={c}"
                )
    return report


def bound_sweep(F: FieldContext, l: int, d: int | None = None) -> dict:
    """Check the (p^l+1)^2 bound for every c outside the root subgroup."""
    if d is None:
        d = family.exponents(F.p, l)[1]
    q = F.p**l
    worst = 0
    swept = 0
    for c in F.elements():
        if c != 0 and F.is_root_of_unity(c, q + 1):
            continue
        rep = c_uniformity(F, d, c)
        worst = max(worst, rep.uniformity)
        swept += 1
    return {
        "d": d,
        "bound": (q + 1) ** 2,
        "max_uniformity": worst,
        "gcd": gcd(d, F.group_order),
        "c_swept": swept,
    }
