"""Exact evaluation of the family's exponential sums S(u, v).

S(u, v) = sum over x in F_{p^n} of zeta_p ** Tr(u*x^{d1} - v*x) with
d1 = p^{3l}-p^{2l}+p^l and n = 4l.  No complex arithmetic is ever done:
a sum is carried as the vector (N_0, ..., N_{p-1}) counting how often each
trace value occurs.  The sum is a rational integer exactly when
N_1 = ... = N_{p-1}, and then equals N_0 - N_1; for this family that always
holds, so every value here is an exact Python int.

Three independent routes are provided and cross-checked:
  * direct trace counting over all x,
  * the coset-count route through the subgroup character sum,
  * the closed-form value distribution (valid for p^l == 2 mod 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import family
from .errors import IrrationalSumError, SizeLimitError, VerificationError
from .field import FieldContext, add_logs, neg_logs

DEFAULT_PAIR_BUDGET = 1 << 26

DOMAIN_UNITS = "F*xF"
DOMAIN_ALL = "FxF"

_BLOCK_CELLS = 1 << 22


@dataclass
class TraceCounts:
    """N_j = #{x : Tr(u x^{d1} - v x) = j} for j = 0..p-1."""

    counts: tuple[int, ...]

    @property
    def rational(self) -> bool:
        tail = self.counts[1:]
        return all(t == tail[0] for t in tail) if tail else True

    def value(self) -> int:
        if not self.rational:
            raise IrrationalSumError(
                f"trace counts {self.counts} give an irrational sum"
            )
        return self.counts[0] - (self.counts[1] if len(self.counts) > 1 else 0)


@dataclass
class SumValue:
    value: int
    rational: bool = True


@dataclass
class CosetCounts:
    """Classification of u*psi^{d1*j} - v*psi^j over j = 0..p^l.

    zeros counts hits of {0}, residues hits of the nonzero (p^l+1)-th
    powers, nonresidues the rest.
    """

    zeros: int
    residues: int
    nonresidues: int

    def validate(self, q: int) -> None:
        if self.zeros + self.residues + self.nonresidues != q + 1:
            raise VerificationError("coset counts do not cover all p^l+1 indices")
        if self.zeros > 1:
            raise VerificationError(f"more than one zero hit: {self}")
        if self.zeros + self.residues > 3:
            raise VerificationError(f"zero+residue count exceeds 3: {self}")


@dataclass
class SumDistribution:
    """Multiset of S values over a declared (u, v) domain."""

    values: dict[int, int]
    domain: str
    total: int

    def validate(self) -> None:
        if sum(self.values.values()) != self.total:
            raise VerificationError("distribution total does not match its domain")

    def as_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.values.items())


@dataclass
class MomentReport:
    first: int
    second: int
    third: int
    expected: tuple[int, int, int]

    def as_dict(self) -> dict:
        return {"m1": self.first, "m2": self.second, "m3": self.third}


def _trace_row(F: FieldContext, d1: int, u_log: int | None) -> np.ndarray:
    """Tr(u * x^{d1}) for x = psi^0..psi^{N-1} (u = 0 when u_log is None)."""
    N = F.group_order
    if u_log is None:
        return np.zeros(N, dtype=np.int16)
    idx = (u_log + d1 * np.arange(N, dtype=np.int64)) % N
    return F.trace_exp[idx].astype(np.int16)


def trace_counts(F: FieldContext, d1: int, u: int, v: int) -> TraceCounts:
    """Exact trace-value counts from one pass over the whole field."""
    if d1 < 1:
        raise ValueError("exponent must be positive")
    N = F.group_order
    a = _trace_row(F, d1, None if u == 0 else F.log(u))
    if v == 0:
        diff = a % F.p
    else:
        b = F.trace_exp[(F.log(v) + np.arange(N, dtype=np.int64)) % N]
        diff = (a - b) % F.p
    counts = np.bincount(diff, minlength=F.p)
    counts[0] += 1  # x = 0
    return TraceCounts(tuple(int(c) for c in counts))


def exp_sum(F: FieldContext, d1: int, u: int, v: int) -> SumValue:
    """S(u, v) as an exact integer (raises if the sum is irrational)."""
    return SumValue(trace_counts(F, d1, u, v).value())


def power_character_sum(F: FieldContext, a: int) -> int:
    """Brute-force sum of zeta_p^Tr(a * y^{p^l+1}), checked against its closed form.

    The closed form is p^n for a = 0, -p^{3l} when a is a (p^l+1)-th power,
    p^{2l} otherwise.
    """
    l = family.level_of(F)
    q = F.p**l
    m = q + 1
    N = F.group_order
    if a == 0:
        counts = np.zeros(F.p, dtype=np.int64)
        counts[0] = F.order
    else:
        idx = (F.log(a) + m * np.arange(N, dtype=np.int64)) % N
        counts = np.bincount(F.trace_exp[idx], minlength=F.p).astype(np.int64)
        counts[0] += 1
    value = TraceCounts(tuple(int(c) for c in counts)).value()
    if a == 0:
        closed = F.order
    elif F.coset_class(a, m) == 0:
        closed = -(q**3)
    else:
        closed = q**2
    if value != closed:
        raise VerificationError(
            f"subgroup character sum {value} != closed form {closed} for a={a}"
        )
    return value


def coset_counts(F: FieldContext, d1: int, u: int, v: int) -> CosetCounts:
    """Classify u*psi^{d1*j} - v*psi^j for j = 0..p^l."""
    if u == 0:
        raise ValueError("u must be nonzero")
    l = family.level_of(F)
    family.require_cube_condition(F.p, l)
    q = F.p**l
    m = q + 1
    zeros = residues = nonresidues = 0
    for j in range(m):
        w = F.sub(F.mul(u, F.element(d1 * j)), F.mul(v, F.element(j)))
        if w == 0:
            zeros += 1
        elif F.coset_class(w, m) == 0:
            residues += 1
        else:
            nonresidues += 1
    out = CosetCounts(zeros, residues, nonresidues)
    out.validate(q)
    return out


def exp_sum_via_cosets(F: FieldContext, d1: int, u: int, v: int) -> int:
    """S(u, v) from the coset counts; the division by p^l+1 must be exact."""
    l = family.level_of(F)
    q = F.p**l
    t = coset_counts(F, d1, u, v)
    num = q**4 * t.zeros - q**3 * t.residues + q**2 * t.nonresidues
    if num % (q + 1):
        raise VerificationError(
            f"coset-route numerator {num} not divisible by p^l+1 = {q + 1}"
        )
    return num // (q + 1)


# ---------------------------------------------------------------------------
# bulk sweeps: all v for one u at a time (partition-friendly over u)
# ---------------------------------------------------------------------------


def sum_values_for_u(F: FieldContext, d1: int, u_log: int | None) -> np.ndarray:
    """S(u, v) for v = psi^0..psi^{N-1} and finally v = 0, as int64.

    u_log is the discrete log of u (None for u = 0).  Every sum's
    rationality is asserted.
    """
    p, N = F.p, F.group_order
    a = _trace_row(F, d1, u_log)
    tr2 = np.concatenate([F.trace_exp, F.trace_exp]).astype(np.int16)
    windows = np.lib.stride_tricks.sliding_window_view(tr2, N)
    values = np.empty(N + 1, dtype=np.int64)
    block = max(1, _BLOCK_CELLS // max(N, 1))
    shifted = (a + p).astype(np.int32)
    for m0 in range(0, N, block):
        m1 = min(N, m0 + block)
        rows = m1 - m0
        # residues r and r+p of a - b land in the same trace class; one flat
        # bincount per block replaces p scans
        diff = shifted[None, :] - windows[m0:m1]
        diff += (np.arange(rows, dtype=np.int32) * (2 * p))[:, None]
        flat = np.bincount(diff.ravel(), minlength=rows * 2 * p)
        per_row = flat.reshape(rows, 2 * p)
        counts = (per_row[:, :p] + per_row[:, p:]).T.astype(np.int64)
        counts[0] += 1  # x = 0
        if p > 2 and np.any(counts[2:] != counts[1]):
            raise IrrationalSumError("irrational sum met during v sweep")
        values[m0:m1] = counts[0] - counts[1]
    tail = np.bincount(a % p, minlength=p).astype(np.int64)
    tail[0] += 1
    values[N] = TraceCounts(tuple(int(c) for c in tail)).value()
    return values


def sum_values_via_cosets(F: FieldContext, d1: int, u_log: int) -> np.ndarray:
    """Same layout as :func:`sum_values_for_u`, via the coset-count route."""
    l = family.level_of(F)
    q = F.p**l
    m = q + 1
    N = F.group_order
    zeros = np.zeros(N + 1, dtype=np.int64)
    residues = np.zeros(N + 1, dtype=np.int64)
    nonres = np.zeros(N + 1, dtype=np.int64)
    vs = np.arange(N, dtype=np.int64)
    for j in range(m):
        a_log = (u_log + d1 * j) % N
        w = add_logs(F, np.full(N, a_log, dtype=np.int64),
                     neg_logs(F, (j + vs) % N))
        is_zero = w == N
        is_res = ~is_zero & (w % m == 0)
        zeros[:N] += is_zero
        residues[:N] += is_res
        nonres[:N] += ~is_zero & ~is_res
        if a_log % m == 0:  # v = 0 column: the element u*psi^{d1 j} itself
            residues[N] += 1
        else:
            nonres[N] += 1
    if np.any(zeros > 1) or np.any(zeros + residues > 3):
        raise VerificationError("coset-count invariants violated in bulk sweep")
    num = q**4 * zeros - q**3 * residues + q**2 * nonres
    if np.any(num % m):
        raise VerificationError("non-exact division in bulk coset route")
    return num // m


def sum_table_char2(F: FieldContext, d1: int) -> np.ndarray:
    """All S(u, v) with u != 0 at once, for binary fields only.

    Row k is psi^k as u; columns follow :func:`sum_values_for_u`.  With p = 2
    a sum is 2*N_0 - 2^n and N_0 is a zero-coordinate count, so one pair of
    exact float32 matrix products covers the whole (u, v) grid.  Rationality
    is automatic at p = 2, so nothing is assumed that the per-u sweep checks.
    """
    if F.p != 2:
        raise ValueError("the all-pairs fast path applies to p = 2 only")
    N = F.group_order
    idx = (d1 * np.arange(N, dtype=np.int64)) % N
    A = F.trace_exp[(np.arange(N, dtype=np.int64)[:, None] + idx[None, :]) % N]
    tr2 = np.concatenate([F.trace_exp, F.trace_exp])
    B = np.lib.stride_tricks.sliding_window_view(tr2, N)[:N]
    A1 = np.ascontiguousarray(A, dtype=np.float32)
    B1 = np.ascontiguousarray(B, dtype=np.float32)
    agree = A1 @ B1.T + (1.0 - A1) @ (1.0 - B1).T  # integral, < 2^24
    zeros = np.rint(agree).astype(np.int64) + 1  # x = 0 always contributes
    table = np.empty((N, N + 1), dtype=np.int64)
    table[:, :N] = 2 * zeros - F.order
    table[:, N] = 2 * ((A == 0).sum(axis=1) + 1) - F.order  # v = 0 column
    return table


def distribution_oracle(F: FieldContext, d1: int,
                        budget: int = DEFAULT_PAIR_BUDGET) -> SumDistribution:
    """Exact tally of S(u, v) over every pair with u != 0.

    Refuses fields where the full sweep would exceed ``budget`` pair
    evaluations; use :func:`distribution_reduced` there.
    """
    if F.order * F.order > budget:
        raise SizeLimitError(
            f"full sweep needs {F.order**2} pair evaluations (> budget {budget}); "
            "use distribution_reduced"
        )
    acc: dict[int, int] = {}
    for u_log in range(F.group_order):
        vals, cnts = np.unique(sum_values_for_u(F, d1, u_log), return_counts=True)
        for v, c in zip(vals, cnts):
            acc[int(v)] = acc.get(int(v), 0) + int(c)
    dist = SumDistribution(acc, DOMAIN_UNITS, F.order * (F.order - 1))
    dist.validate()
    return dist


def distribution_reduced(F: FieldContext, d1: int) -> SumDistribution:
    """Distribution from the three cube-class representatives 1, psi, psi^2.

    Replacing u by u*t^{d1} permutes the v column, so per-cube-class rows
    coincide; the two non-cube rows must additionally agree with each other,
    which is asserted rather than assumed before scaling by (p^n-1)/3.
    """
    N = F.group_order
    if N % 3:
        raise ValueError("3 does not divide p^n-1; no cube classes to reduce over")
    if gcd(d1, N) != 3:
        raise ValueError(f"gcd(d1, p^n-1) = {gcd(d1, N)}, expected 3")
    rows = []
    for u_log in (0, 1, 2):
        vals, cnts = np.unique(sum_values_for_u(F, d1, u_log), return_counts=True)
        rows.append({int(v): int(c) for v, c in zip(vals, cnts)})
    if rows[1] != rows[2]:
        raise VerificationError(
            "distributions for the two non-cube representatives differ: "
            f"{rows[1]} vs {rows[2]}"
        )
    scale = N // 3
    acc: dict[int, int] = {}
    for row in rows:
        for v, c in row.items():
            acc[v] = acc.get(v, 0) + c * scale
    dist = SumDistribution(acc, DOMAIN_UNITS, F.order * (F.order - 1))
    dist.validate()
    return dist


def _exact_div(num: int, den: int) -> int:
    if num % den:
        raise VerificationError(f"{num} is not divisible by {den}")
    return num // den


def distribution_closed(p: int, l: int) -> SumDistribution:
    """Closed-form value distribution over F* x F (needs p^l == 2 mod 3).

    Colliding values are merged; p^l = 2 makes p^{2l} and p^{3l}-p^{2l}
    coincide.
    """
    family.require_cube_condition(p, l)
    q = p**l
    size = q**4
    rows = [
        (-2 * q**2, _exact_div(
            q**8 - 3 * q**7 + 3 * q**6 - q**5 - q**4 + 3 * q**3 - 3 * q**2 + q, 6)),
        (-(q**2), q**7 - q**6 - q**3 + q**2),
        (0, _exact_div(
            q**8 - q**7 + q**6 - q**5 - 3 * q**4 + q**3 - q**2 + q + 2, 2)),
        (q**2, _exact_div(q**8 - q**5 - q**4 + q, 3)),
        (q**3 - q**2, q * (q**4 - 1)),
        (q**3, q**4 - 1),
    ]
    acc: dict[int, int] = {}
    for value, count in rows:
        acc[value] = acc.get(value, 0) + count
    dist = SumDistribution({v: c for v, c in acc.items() if c}, DOMAIN_UNITS,
                           size * (size - 1))
    dist.validate()
    return dist


def moment_identities(F: FieldContext, d1: int,
                      budget: int = DEFAULT_PAIR_BUDGET) -> MomentReport:
    """First three power sums of S over all of F x F, checked exactly.

    Expected values: p^{2n}, p^{3n} and p^{13l} + p^{3n} - p^{9l}.
    """
    l = family.level_of(F)
    dist = distribution_oracle(F, d1, budget=budget)
    zero_row = sum_values_for_u(F, d1, None)
    moments = []
    for k in (1, 2, 3):
        m = sum(c * v**k for v, c in dist.values.items())
        m += int(np.sum(zero_row.astype(object) ** k))
        moments.append(int(m))
    p, n = F.p, F.n
    expected = (p**(2 * n), p**(3 * n), p**(13 * l) + p**(3 * n) - p**(9 * l))
    if tuple(moments) != expected:
        raise VerificationError(
            f"moment identities failed: got {tuple(moments)}, expected {expected}"
        )
    return MomentReport(*moments, expected=expected)
