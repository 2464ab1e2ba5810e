"""Point counts on affine diagonal curves a*x^{n1} + b*y^{n2} + 1 = 0.

Over F_{p^n} with n = 2ks and lcm(n1, n2) dividing p^s + 1 the count has a
five-case closed form driven only by the coset classes r1 = log(a) mod n1 and
r2 = log(b) mod n2 and their gcd t.  The oracle folds preimage multiplicities
of the two power maps, staying O(p^n); a naive double loop over (x, y) is
kept behind an audit flag.

Also here: the binary-field criterion deciding whether x^2 + a*x + b has both
roots inside the subgroup of (2^m+1)-th roots of unity (n = 2m), with an
exhaustive-root oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .errors import VerificationError
from .field import FieldContext, add_logs

CASE_LABELS = ("i", "ii", "iii", "iv", "v")


@dataclass
class DiagonalCurve:
    """One curve instance; validates the closed form's hypotheses."""

    F: FieldContext
    n1: int
    n2: int
    r1: int
    r2: int
    alpha: int
    beta: int
    k: int
    s: int

    def __post_init__(self) -> None:
        F = self.F
        if self.k < 1 or self.s < 1 or F.n != 2 * self.k * self.s:
            raise ValueError(f"need n = 2ks; got n={F.n}, k={self.k}, s={self.s}")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive")
        if (F.p**self.s + 1) % lcm(self.n1, self.n2):
            raise ValueError(
                f"lcm({self.n1},{self.n2}) does not divide p^s+1 = {F.p**self.s + 1}"
            )
        if not 0 <= self.r1 < self.n1 or not 0 <= self.r2 < self.n2:
            raise ValueError("coset labels must satisfy 0 <= r_i < n_i")
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("curve coefficients must be nonzero")
        if F.coset_class(self.alpha, self.n1) != self.r1:
            raise ValueError(f"alpha={self.alpha} is not in coset {self.r1} mod {self.n1}")
        if F.coset_class(self.beta, self.n2) != self.r2:
            raise ValueError(f"beta={self.beta} is not in coset {self.r2} mod {self.n2}")

    @property
    def t(self) -> int:
        return gcd(self.n1, self.n2)

    def descriptor(self) -> dict:
        return {
            "field": self.F.descriptor(),
            "n1": self.n1, "n2": self.n2,
            "r1": self.r1, "r2": self.r2,
            "alpha": self.alpha, "beta": self.beta,
            "k": self.k, "s": self.s,
        }


def _minus_one_minus(F: FieldContext) -> np.ndarray:
    """Table a -> -1 - a over the integer encodings (digitwise, no carries)."""
    digs = F.digit_table.astype(np.int64)
    out = (-digs) % F.p
    out[:, 0] = (out[:, 0] - 1) % F.p
    weights = F.p ** np.arange(F.n, dtype=np.int64)
    return out @ weights


def _power_image_counts(F: FieldContext, coeff: int, e: int) -> np.ndarray:
    """Multiplicity of each value of coeff * x**e as x runs over the field."""
    N = F.group_order
    idx = (F.log(coeff) + e * np.arange(N, dtype=np.int64)) % N
    counts = np.bincount(F.exp_table[idx], minlength=F.order)
    counts[0] += 1  # x = 0
    return counts


def point_count_oracle(curve: DiagonalCurve, naive: bool = False) -> int:
    """Exact number of (x, y) pairs on the curve.

    Default folds the two preimage-count tables in O(p^n); ``naive`` runs the
    O(p^{2n}) double loop for audit.
    """
    F = curve.F
    if naive:
        total = 0
        for x in F.elements():
            lhs = F.mul(curve.alpha, F.pow(x, curve.n1))
            for y in F.elements():
                val = F.add(F.add(lhs, F.mul(curve.beta, F.pow(y, curve.n2))), 1)
                total += val == 0
        return total
    cx = _power_image_counts(F, curve.alpha, curve.n1)
    cy = _power_image_counts(F, curve.beta, curve.n2)
    partner = _minus_one_minus(F)
    return int(np.sum(cx * cy[partner]))


def lemma_case(curve: DiagonalCurve) -> str:
    """Which of the five closed-form branches applies ("i".."v")."""
    r1, r2, t = curve.r1, curve.r2, curve.t
    if r1 == 0 and r2 == 0:
        return "i"
    if r1 == 0:
        if r2 % t:
            return "ii"
        raise ValueError(
            f"configuration (r1=0, r2={r2}, t={t} | r2) is outside the closed form"
        )
    if r2 == 0:
        if r1 % t:
            return "iii"
        raise ValueError(
            f"configuration (r1={r1}, t={t} | r1, r2=0) is outside the closed form"
        )
    if (r1 - r2) % t:
        return "iv"
    return "v"


def point_count_closed(curve: DiagonalCurve) -> int:
    """Closed-form point count from the five-case formula."""
    F = curve.F
    case = lemma_case(curve)
    q = F.p ** (F.n // 2)
    n1, n2, t, k = curve.n1, curve.n2, curve.t, curve.k
    size = F.order
    if case == "i":
        return size + (-1) ** (k - 1) * ((n1 - 1) * (n2 - 1) + 1 - t) * q - t + 1
    if case == "ii":
        return size + (-1) ** k * (n1 - 2) * q + 1
    if case == "iii":
        return size + (-1) ** k * (n2 - 2) * q + 1
    if case == "iv":
        return size + (-1) ** (k - 1) * 2 * q + 1
    return size + (-1) ** k * (t - 2) * q - t + 1


def curve_report(curve: DiagonalCurve, naive: bool = False) -> dict:
    """Oracle and closed counts side by side for one curve."""
    oracle = point_count_oracle(curve, naive=naive)
    closed = point_count_closed(curve)
    return {
        "curve": curve.descriptor(),
        "oracle": oracle,
        "closed": closed,
        "case": lemma_case(curve),
        "match": oracle == closed,
    }


def admissible_curves(F: FieldContext, rep_steps: tuple[int, ...] = (0, 1)):
    """Yield every curve configuration the closed form covers, plus coset reps.

    Iterates all factorizations n = 2ks, all divisor pairs (n1, n2) of
    p^s + 1, all coset labels, and for each label the representatives
    psi^(r + n*w) for w in rep_steps.  Configurations the formula does not
    cover are skipped.
    """
    n = F.n
    seen = set()
    for k in range(1, n + 1):
        if n % (2 * k):
            continue
        s = n // (2 * k)
        m = F.p**s + 1
        divisors = [d for d in range(1, m + 1) if m % d == 0]
        for n1 in divisors:
            for n2 in divisors:
                for r1 in range(n1):
                    for r2 in range(n2):
                        for w1 in rep_steps:
                            for w2 in rep_steps:
                                alpha = F.element(r1 + n1 * w1)
                                beta = F.element(r2 + n2 * w2)
                                key = (k, s, n1, n2, r1, r2, alpha, beta)
                                if key in seen:
                                    continue
                                seen.add(key)
                                curve = DiagonalCurve(F, n1, n2, r1, r2,
                                                      alpha, beta, k, s)
                                try:
                                    lemma_case(curve)
                                except ValueError:
                                    continue
                                yield curve


# ---------------------------------------------------------------------------
# quadratics with both roots in the (2^m+1)-th roots of unity
# ---------------------------------------------------------------------------


def _check_quad_field(F: FieldContext, a: int, b: int) -> int:
    if F.p != 2:
        raise ValueError("criterion is specific to characteristic 2")
    if F.n % 2:
        raise ValueError("need an even-degree binary field (n = 2m)")
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    return F.n // 2


def quad_roots_in_subgroup(F: FieldContext, a: int, b: int) -> bool:
    """Criterion: both roots of x^2 + a*x + b lie among (2^m+1)-th roots of unity.

    Holds iff b = a^{1-2^m} and the F_{2^m} trace of a^{-2^m-1} equals 1.
    """
    m = _check_quad_field(F, a, b)
    if b != F.pow(a, 1 - 2**m):
        return False
    return F.subfield_trace(F.pow(a, -(2**m) - 1), m) == 1


def quad_roots_in_subgroup_oracle(F: FieldContext, a: int, b: int) -> bool:
    """Exhaustive-root check of the same property."""
    m = _check_quad_field(F, a, b)
    N = F.group_order
    la, lb = F.log(a), F.log(b)
    x = np.arange(N, dtype=np.int64)
    # x^2 + a*x + b over all nonzero x (x = 0 is no root since b != 0)
    acc = add_logs(F, (2 * x) % N, (la + x) % N)
    acc = add_logs(F, acc, np.full(N, lb, dtype=np.int64))
    roots = np.flatnonzero(acc == N)
    if roots.size != 2:
        return False
    return all((int(r) * (2**m + 1)) % N == 0 for r in roots)
