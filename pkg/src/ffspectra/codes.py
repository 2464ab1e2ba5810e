"""Trace codes attached to the power-map family and their weight enumerators.

The full-length code consists of the words (Tr(u*psi^{i*d1} + v*psi^i)) for
i = 0..p^n-2; the short code keeps the first (p^n-1)/(p-1) coordinates, and
the full word is the concatenation of the short word scaled by successive
powers of beta = psi^{(p^n-1)/(p-1)}.  Weights therefore come three ways:

  * direct: count zero coordinates of every codeword (blocked exact
    integer matrix products, one row per (u, v) pair),
  * via_sums: map the exponential-sum distribution through
    w = p^{n-1} - S/p (short lengths),
  * closed: same map applied to the closed-form distribution plus the
    u = 0 words.

The short code is closed under the beta^{-1}-constacyclic shift, which is a
plain cyclic shift exactly when p = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import family
from .errors import SizeLimitError, VerificationError
from .expsum import (DEFAULT_PAIR_BUDGET, distribution_closed,
                     distribution_oracle, distribution_reduced, exp_sum)
from .field import FieldContext

EXHAUSTIVE_PAIR_LIMIT = 1 << 16
DEFAULT_SAMPLES = 10_000
_SAMPLE_SEED = 7


@dataclass
class CodeParams:
    field: dict
    d1: int
    length_full: int
    length_short: int
    dimension: int
    beta: int


@dataclass
class WeightDistribution:
    """Hamming weight -> number of codewords, over all p^{2n} pairs."""

    weights: dict[int, int]
    length: int
    dimension: int
    total: int

    @property
    def min_distance(self) -> int:
        return min(w for w in self.weights if w > 0)

    def validate(self) -> None:
        if sum(self.weights.values()) != self.total:
            raise VerificationError("weight counts do not sum to p^{2n}")
        if self.weights.get(0) != 1:
            raise VerificationError("weight 0 must occur exactly once")

    def as_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.weights.items())


@dataclass
class ConstacyclicReport:
    mode: str
    checked: int
    ok: bool


def code_params(F: FieldContext, d1: int) -> CodeParams:
    p = F.p
    if d1 % (p - 1) != 1 % (p - 1):
        raise ValueError("exponent must be 1 mod p-1 for the code construction")
    return CodeParams(
        field=F.descriptor(),
        d1=d1,
        length_full=F.group_order,
        length_short=F.group_order // (p - 1),
        dimension=2 * F.n,
        beta=F.beta,
    )


def _length(F: FieldContext, variant: str) -> int:
    if variant == "full":
        return F.group_order
    if variant == "short":
        return F.group_order // (F.p - 1)
    raise ValueError(f"unknown variant {variant!r}")


def codeword(F: FieldContext, d1: int, u: int, v: int,
             variant: str = "short") -> np.ndarray:
    """Coordinates Tr(u*psi^{j*d1} + v*psi^j) for j below the variant length."""
    L = _length(F, variant)
    N = F.group_order
    j = np.arange(L, dtype=np.int64)
    zero = np.zeros(L, dtype=np.int16)
    a = zero if u == 0 else F.trace_exp[(F.log(u) + d1 * j) % N]
    b = zero if v == 0 else F.trace_exp[(F.log(v) + j) % N]
    return ((a + b) % F.p).astype(np.int8)


def weight(word: np.ndarray) -> int:
    return int(np.count_nonzero(word))


def weight_from_sum(F: FieldContext, d1: int, u: int, v: int,
                    variant: str = "short") -> int:
    """Weight through the exponential sum, cross-checked against the word.

    The code pairs u*x^{d1} with +v*x while the sums use -v, so the sum is
    evaluated at (u, -v).
    """
    s = exp_sum(F, d1, u, F.neg(v)).value
    if s % F.p:
        raise VerificationError(f"sum {s} for ({u}, {v}) is not divisible by p")
    short = F.p ** (F.n - 1) - s // F.p
    expected = short if variant == "short" else short * (F.p - 1)
    direct = weight(codeword(F, d1, u, v, variant))
    if direct != expected:
        raise VerificationError(
            f"sum-based weight {expected} != direct weight {direct} for ({u}, {v})"
        )
    return expected


def _direct_weight_hist(F: FieldContext, d1: int, L: int, budget: int) -> np.ndarray:
    """Zero-coordinate counts for every (u, v) pair, as a weight histogram.

    One-hot rows of the two trace summands are combined by float32 matrix
    products; entries stay integral (bounded by L << 2^24) so the counts are
    exact.
    """
    p, N = F.p, F.group_order
    if F.order * F.order > budget:
        raise SizeLimitError(
            f"direct enumeration needs {F.order**2} pairs (> budget {budget}); "
            "use the via_sums method"
        )
    j = np.arange(L, dtype=np.int64)
    tr2 = np.concatenate([F.trace_exp, F.trace_exp])
    tB = np.lib.stride_tricks.sliding_window_view(tr2, L)[:N]
    B_hot = [np.ascontiguousarray(tB == r, dtype=np.float32) for r in range(p)]
    base = (d1 * j) % N
    hist = np.zeros(L + 2, dtype=np.int64)
    block = max(1, (1 << 22) // max(L, 1))
    for s0 in range(0, N, block):
        rows = np.arange(s0, min(N, s0 + block), dtype=np.int64)
        tA = F.trace_exp[(rows[:, None] + base[None, :]) % N]
        zero_cnt = np.zeros((rows.size, N), dtype=np.float32)
        for r in range(p):
            A_hot = np.ascontiguousarray(tA == r, dtype=np.float32)
            zero_cnt += A_hot @ B_hot[(p - r) % p].T
        weights = L - np.rint(zero_cnt).astype(np.int64)
        hist += np.bincount(weights.ravel(), minlength=L + 2)
        hist += np.bincount(L - (tA == 0).sum(axis=1), minlength=L + 2)  # v = 0
    hist += np.bincount(L - (tB == 0).sum(axis=1), minlength=L + 2)      # u = 0
    hist[0] += 1                                                         # (0, 0)
    return hist[: L + 1]


def _sum_distribution(F: FieldContext, d1: int, budget: int):
    # cube-class reduction is valid whenever gcd(d1, p^n-1) = 3; fall back to
    # the full sweep (budget permitting) outside that family
    N = F.group_order
    if N % 3 == 0 and gcd(d1, N) == 3:
        return distribution_reduced(F, d1)
    return distribution_oracle(F, d1, budget=budget)


def weight_distribution(F: FieldContext, d1: int, method: str = "direct",
                        variant: str = "short",
                        budget: int = DEFAULT_PAIR_BUDGET) -> WeightDistribution:
    """Weight distribution over all p^{2n} codewords by the chosen method."""
    p = F.p
    L = _length(F, variant)
    short_base = p ** (F.n - 1)
    scale = 1 if variant == "short" else p - 1
    if method == "direct":
        hist = _direct_weight_hist(F, d1, L, budget)
        counts = {int(w): int(c) for w, c in enumerate(hist) if c}
    elif method in ("via_sums", "closed"):
        if method == "via_sums":
            dist = _sum_distribution(F, d1, budget)
        else:
            dist = distribution_closed(p, family.level_of(F))
        counts = {}
        for s, c in dist.values.items():
            if s % p:
                raise VerificationError(f"sum value {s} not divisible by p")
            w = (short_base - s // p) * scale
            counts[w] = counts.get(w, 0) + c
        counts[0] = counts.get(0, 0) + 1
        w_zero_u = short_base * scale
        counts[w_zero_u] = counts.get(w_zero_u, 0) + F.group_order
    else:
        raise ValueError(f"unknown method {method!r}")
    dist = WeightDistribution(counts, L, 2 * F.n, F.order * F.order)
    dist.validate()
    return dist


def constacyclic_closure(F: FieldContext, d1: int, samples: int | None = None,
                         seed: int = _SAMPLE_SEED) -> ConstacyclicReport:
    """Verify closure of the short code under the beta^{-1} shift.

    The shift of the word for (u, v) must be the word for
    (u*psi^{-d1}, v*psi^{-1}).  Exhaustive when p^{2n} <= 2^16 and no sample
    count is forced, else a seeded sample of pairs.
    """
    p = F.p
    code_params(F, d1)  # validates d1 = 1 mod p-1, which the shift needs
    beta_inv = pow(F.beta, p - 2, p) if p > 2 else 1
    u_shift = F.element(-d1)
    v_shift = F.element(-1)
    if samples is None and F.order * F.order <= EXHAUSTIVE_PAIR_LIMIT:
        pairs = ((u, v) for u in F.elements() for v in F.elements())
        mode, checked = "exhaustive", F.order * F.order
    else:
        samples = samples or DEFAULT_SAMPLES
        rng = np.random.default_rng(seed)
        draws = rng.integers(0, F.order, size=(samples, 2))
        pairs = ((int(u), int(v)) for u, v in draws)
        mode, checked = "sampled", samples
    for u, v in pairs:
        word = codeword(F, d1, u, v, "short")
        shifted = np.empty_like(word)
        shifted[0] = (beta_inv * int(word[-1])) % p
        shifted[1:] = word[:-1]
        expected = codeword(F, d1, F.mul(u, u_shift), F.mul(v, v_shift), "short")
        if not np.array_equal(shifted, expected):
            raise VerificationError(
                f"constacyclic shift failed at (u, v) = ({u}, {v})"
            )
    return ConstacyclicReport(mode, checked, True)


def _rank_mod_p(M: np.ndarray, p: int) -> int:
    M = (M.astype(np.int64) % p).copy()
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if M[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        M[[r, pivot]] = M[[pivot, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == rows:
            break
    return r


def code_dimension(F: FieldContext, d1: int, method: str = "auto") -> int:
    """Verified dimension 2n: the pair-to-codeword map is injective.

    Small codes are checked by exhaustive distinctness of all p^{2n} words;
    larger ones by the rank of the 2n trace-basis generator words.
    """
    if method == "auto":
        method = "exhaustive" if F.order * F.order <= EXHAUSTIVE_PAIR_LIMIT else "rank"
    if method == "exhaustive":
        seen = set()
        for u in F.elements():
            for v in F.elements():
                seen.add(codeword(F, d1, u, v, "short").tobytes())
        if len(seen) != F.order * F.order:
            raise VerificationError(
                f"only {len(seen)} distinct codewords, expected {F.order**2}"
            )
    elif method == "rank":
        gens = [codeword(F, d1, F.element(i), 0, "short") for i in range(F.n)]
        gens += [codeword(F, d1, 0, F.element(i), "short") for i in range(F.n)]
        # psi^0..psi^{n-1} form an F_p basis, so these 2n rows generate the code
        rank = _rank_mod_p(np.stack(gens), F.p)
        if rank != 2 * F.n:
            raise VerificationError(f"generator rank {rank} != 2n = {2 * F.n}")
    else:
        raise ValueError(f"unknown method {method!r}")
    return 2 * F.n


def minimal_polynomial(F: FieldContext, a: int) -> tuple[int, ...]:
    """Minimal polynomial of a over F_p, coefficients constant term first."""
    conj = []
    y = a
    while y not in conj:
        conj.append(y)
        y = F.pow(y, F.p)
    poly = [1]
    for c in conj:
        nxt = [0] * (len(poly) + 1)
        for i, coeff in enumerate(poly):
            nxt[i + 1] = F.add(nxt[i + 1], coeff)
            nxt[i] = F.add(nxt[i], F.mul(F.neg(c), coeff))
        poly = nxt
    if any(coeff >= F.p for coeff in poly):
        raise VerificationError("minimal polynomial left the prime field")
    return tuple(poly)


def parity_check_polynomials(F: FieldContext, d1: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minimal polynomials of psi^{-1} and psi^{-d1} (diagnostic only)."""
    return (minimal_polynomial(F, F.element(-1)),
            minimal_polynomial(F, F.element(-d1)))
