"""Exact arithmetic in F_{p^n} backed by flat lookup tables.

Elements are plain integers in ``[0, p^n)``: the integer ``sum(c_i * p**i)``
stands for the residue class ``sum(c_i * x**i)`` modulo the defining
polynomial, so ``0`` and ``1`` are the field's zero and one and the class of
``x`` itself (the generator ``psi``) is the integer ``p`` whenever ``n > 1``.

Internally everything multiplicative runs in the log domain: ``exp_table[k]``
holds the integer encoding of ``psi**k`` and ``log_table`` inverts it.
Addition of two nonzero elements goes through the Zech table
``zech_table[k] = log(1 + psi**k)``, so every arithmetic operation is O(1)
table lookups.  All tables are immutable after construction and the context
can be shared freely across workers.

The defining polynomial is always primitive, which makes ``psi`` a generator
of the multiplicative group; ``find_primitive_polynomial`` pins the
deterministic convention (lexicographically smallest, coefficients compared
constant term first).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import SizeLimitError

DEFAULT_FIELD_CAP = 1 << 22

# log-domain code for the zero element in bulk arrays: valid logs are
# 0..group_order-1, zero is encoded as group_order itself.
# Scalar API functions use the integer encoding instead (zero == 0).


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m by trial division (m stays desk-sized)."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class FieldParams:
    """Defining data of F_{p^n}: characteristic, degree and modulus.

    ``modulus`` lists the n+1 coefficients of a monic primitive polynomial,
    constant term first.
    """

    p: int
    n: int
    modulus: tuple[int, ...]

    def descriptor(self) -> dict:
        """JSON-ready descriptor embedded in every report."""
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def validate(self, cap: int = DEFAULT_FIELD_CAP) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError(f"n={self.n} must be positive")
        if self.p**self.n > cap:
            raise SizeLimitError(
                f"field size {self.p}^{self.n} exceeds cap {cap}"
            )
        if len(self.modulus) != self.n + 1:
            raise ValueError("modulus must have n+1 coefficients")
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if self.modulus[0] == 0:
            raise ValueError("modulus has constant term 0, so it is reducible")


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, low degree first),
# used only while searching for / validating the defining polynomial
# ---------------------------------------------------------------------------


def _poly_mul_mod(a: list[int], b: list[int], mod_low: list[int], p: int) -> list[int]:
    n = len(mod_low)
    res = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(2 * n - 2, n - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(n):
                res[i - n + j] = (res[i - n + j] - c * mod_low[j]) % p
    return res[:n]


def _x_power_mod(e: int, mod_low: list[int], p: int) -> list[int]:
    """x**e reduced modulo the monic polynomial with low coefficients mod_low."""
    n = len(mod_low)
    if n == 1:
        return [pow((-mod_low[0]) % p, e, p)]
    result = [1] + [0] * (n - 1)
    base = [0, 1] + [0] * (n - 2)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod_low, p)
        base = _poly_mul_mod(base, base, mod_low, p)
        e >>= 1
    return result


def _x_has_full_order(coeffs: tuple[int, ...], p: int, n: int,
                      group_order: int, factors: list[int]) -> bool:
    mod_low = list(coeffs[:n])
    one = [1] + [0] * (n - 1)
    if _x_power_mod(group_order, mod_low, p) != one:
        return False
    return all(_x_power_mod(group_order // q, mod_low, p) != one for q in factors)


def find_primitive_polynomial(p: int, n: int, cap: int = DEFAULT_FIELD_CAP) -> tuple[int, ...]:
    """Smallest monic primitive polynomial of degree n over F_p.

    "Smallest" compares the coefficient tuple (c_0, ..., c_{n-1}) of the
    non-leading coefficients lexicographically, constant term first.  The
    result is deterministic, which pins down psi for reproducible reports.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if n < 1:
        raise ValueError(f"n={n} must be positive")
    if p**n > cap:
        raise SizeLimitError(f"field size {p}^{n} exceeds cap {cap}")
    group_order = p**n - 1
    factors = prime_factors(group_order) if group_order > 1 else []
    for low in product(range(p), repeat=n):
        if low[0] == 0:
            continue
        if _x_has_full_order(low, p, n, group_order, factors):
            return low + (1,)
    raise ValueError(f"no primitive polynomial of degree {n} over F_{p}")


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------


class FieldContext:
    """Immutable arithmetic tables for F_{p^n}.

    Do not call directly; use :func:`build_field` or :func:`field_for`.
    Useful attributes for bulk (numpy) work:

    exp_table   int32[group_order]      integer encoding of psi**k
    log_table   int32[order]            discrete log, -1 at index 0
    zech_table  int32[group_order]      log(1 + psi**k), group_order if zero
    trace_table int16[order]            absolute trace into [0, p)
    trace_exp   int16[group_order]      trace(psi**k) == trace_table[exp_table]
    digit_table int8[order, n]          base-p digits of each encoding
    """

    def __init__(self, params: FieldParams, exp_table: np.ndarray):
        self.params = params
        self.p = params.p
        self.n = params.n
        self.order = params.p**params.n
        self.group_order = self.order - 1
        self.zero_log = self.group_order

        p, n, order, N = self.p, self.n, self.order, self.group_order

        exp_table = np.ascontiguousarray(exp_table, dtype=np.int32)
        if exp_table.shape != (N,) or exp_table[0] != 1:
            raise ValueError("malformed exponent table")
        log_table = np.full(order, -1, dtype=np.int32)
        log_table[exp_table] = np.arange(N, dtype=np.int32)
        if np.any(log_table[1:] < 0):
            raise ValueError("modulus is not primitive: psi does not generate the units")

        digits = np.empty((order, n), dtype=np.int8)
        tmp = np.arange(order, dtype=np.int64)
        for i in range(n):
            digits[:, i] = tmp % p
            tmp //= p

        # trace of the monomial basis psi**i, then extend F_p-linearly
        basis_tr = np.empty(n, dtype=np.int64)
        for i in range(n):
            acc = np.zeros(n, dtype=np.int64)
            for j in range(n):
                acc = (acc + digits[exp_table[(i * p**j) % N]]) % p
            if np.any(acc[1:]):
                raise ValueError("trace left the prime field; corrupt tables")
            basis_tr[i] = acc[0]
        trace_table = ((digits.astype(np.int64) @ basis_tr) % p).astype(np.int16)

        low = exp_table % p
        plus_one = exp_table - low + (low + 1) % p
        zech_table = np.where(plus_one == 0, N, log_table[plus_one]).astype(np.int32)

        self.exp_table = exp_table
        self.log_table = log_table
        self.trace_table = trace_table
        self.trace_exp = trace_table[exp_table]
        self.zech_table = zech_table
        self.digit_table = digits

        for arr in (self.exp_table, self.log_table, self.trace_table,
                    self.trace_exp, self.zech_table, self.digit_table):
            arr.flags.writeable = False

        self.psi = int(exp_table[1]) if N > 1 else 1
        self.beta = int(exp_table[(N // (p - 1)) % N]) if N > 0 else 1
        # log of -1: additive inverses reduce to a rotation by this offset
        self.minus_one_log = 0 if p == 2 else N // 2
        if p != 2 and exp_table[self.minus_one_log] != p - 1:
            raise ValueError("inconsistent tables: psi**((p^n-1)/2) != -1")

    # -- scalar operations --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la = int(self.log_table[a])
        lb = int(self.log_table[b])
        z = int(self.zech_table[(lb - la) % self.group_order])
        if z == self.zero_log:
            return 0
        return int(self.exp_table[(la + z) % self.group_order])

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        la = int(self.log_table[a])
        return int(self.exp_table[(la + self.minus_one_log) % self.group_order])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        la = int(self.log_table[a])
        lb = int(self.log_table[b])
        return int(self.exp_table[(la + lb) % self.group_order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return int(self.exp_table[(-int(self.log_table[a])) % self.group_order])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ValueError("division by zero")
        if a == 0:
            return 0
        la = int(self.log_table[a])
        lb = int(self.log_table[b])
        return int(self.exp_table[(la - lb) % self.group_order])

    def pow(self, a: int, e: int) -> int:
        """a**e with exponents reduced mod p^n-1; 0**0 == 1, 0**e == 0 for e > 0."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ValueError("zero has no negative powers")
            return 0
        la = int(self.log_table[a])
        return int(self.exp_table[(la * e) % self.group_order])

    def trace(self, a: int) -> int:
        return int(self.trace_table[a])

    def log(self, a: int) -> int:
        """Discrete log of a to base psi; the zero element has no log."""
        if a == 0:
            raise ValueError("zero has no discrete logarithm")
        return int(self.log_table[a])

    def element(self, k: int) -> int:
        """The element psi**k (k arbitrary integer)."""
        return int(self.exp_table[k % self.group_order])

    def coset_class(self, a: int, m: int) -> int:
        """log(a) mod m for m | p^n-1; class 0 means a is an m-th power."""
        if m < 1 or self.group_order % m:
            raise ValueError(f"m={m} does not divide p^n-1={self.group_order}")
        return self.log(a) % m

    def is_root_of_unity(self, a: int, e: int) -> bool:
        """Whether a**e == 1, i.e. a lies in the subgroup of e-th roots of unity."""
        if e < 1:
            raise ValueError("e must be positive")
        if a == 0:
            return False
        return (int(self.log_table[a]) * e) % self.group_order == 0

    def subfield_trace(self, a: int, m: int) -> int:
        """Absolute trace F_{p^m} -> F_p of an element lying in that subfield."""
        if self.n % m:
            raise ValueError(f"F_{{p^{m}}} is not a subfield of F_{{p^{self.n}}}")
        if self.pow(a, self.p**m) != a:
            raise ValueError("element does not lie in the requested subfield")
        acc = 0
        for i in range(m):
            acc = self.add(acc, self.pow(a, self.p**i))
        if acc >= self.p:
            raise ValueError("subfield trace left the prime field; corrupt tables")
        return acc

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def descriptor(self) -> dict:
        return self.params.descriptor()

    def __repr__(self) -> str:  # pragma: no cover
        return f"FieldContext(p={self.p}, n={self.n}, modulus={list(self.params.modulus)})"


def _raw_exp_table(params: FieldParams) -> np.ndarray:
    """Successive powers of the class of x, encoded as integers.

    Also the primitivity check: hitting 1 early, or not returning to 1 after
    p^n-1 multiplications, rejects the modulus.
    """
    p, n = params.p, params.n
    N = p**n - 1
    mod_low = list(params.modulus[:n])
    weights = [p**i for i in range(n)]
    digits = [1] + [0] * (n - 1)
    out = np.empty(N, dtype=np.int32)
    out[0] = 1
    for k in range(1, N):
        top = digits[-1]
        digits = [0] + digits[:-1]
        if top:
            digits = [(d - top * m) % p for d, m in zip(digits, mod_low)]
        val = sum(d * w for d, w in zip(digits, weights))
        if val == 1:
            raise ValueError(f"modulus {list(params.modulus)} is not primitive over F_{p}")
        out[k] = val
    # one more step must close the cycle
    top = digits[-1]
    digits = [0] + digits[:-1]
    if top:
        digits = [(d - top * m) % p for d, m in zip(digits, mod_low)]
    if sum(d * w for d, w in zip(digits, weights)) != 1:
        raise ValueError(f"modulus {list(params.modulus)} is not primitive over F_{p}")
    return out


def _cache_path(params: FieldParams) -> str | None:
    root = os.environ.get("FFSPECTRA_CACHE_DIR")
    if not root:
        return None
    tag = "-".join(str(c) for c in params.modulus)
    return os.path.join(root, f"gf-{params.p}-{params.n}-{tag}.npy")


def build_field(params: FieldParams, cap: int = DEFAULT_FIELD_CAP) -> FieldContext:
    """Build the full table set; pure and repeatable for fixed params.

    If FFSPECTRA_CACHE_DIR is set, the exponent table (the only serially
    built part) is persisted there keyed by (p, n, modulus).
    """
    params = FieldParams(params.p, params.n, tuple(params.modulus))
    params.validate(cap=cap)
    path = _cache_path(params)
    if path and os.path.exists(path):
        exp_table = np.load(path)
        return FieldContext(params, exp_table)
    exp_table = _raw_exp_table(params)
    ctx = FieldContext(params, exp_table)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "wb") as fh:
            np.save(fh, exp_table)
        os.replace(tmp, path)
    return ctx


def field_for(p: int, n: int, cap: int = DEFAULT_FIELD_CAP,
              modulus: tuple[int, ...] | None = None) -> FieldContext:
    """Field on the pinned deterministic modulus (or an explicit one)."""
    if modulus is None:
        modulus = find_primitive_polynomial(p, n, cap=cap)
    return build_field(FieldParams(p, n, tuple(modulus)), cap=cap)


# ---------------------------------------------------------------------------
# bulk log-domain helpers shared by the sweep modules
# ---------------------------------------------------------------------------


def add_logs(F: FieldContext, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise sum of log-coded arrays (code group_order == zero)."""
    N = F.group_order
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = (b - a) % N
    z = F.zech_table[k]
    raw = np.where(z == N, N, (a + z) % N)
    return np.where(a == N, b, np.where(b == N, a, raw))


def neg_logs(F: FieldContext, a: np.ndarray) -> np.ndarray:
    """Elementwise additive inverse in log codes."""
    if F.p == 2:
        return np.asarray(a, dtype=np.int64)
    N = F.group_order
    a = np.asarray(a, dtype=np.int64)
    return np.where(a == N, N, (a + F.minus_one_log) % N)


def pow_logs(F: FieldContext, a: np.ndarray, e: int) -> np.ndarray:
    """Elementwise e-th power in log codes (e > 0)."""
    N = F.group_order
    a = np.asarray(a, dtype=np.int64)
    return np.where(a == N, N, (a * e) % N)
