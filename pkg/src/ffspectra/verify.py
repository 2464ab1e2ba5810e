"""Batch closed-form-vs-oracle verification behind the `verify` subcommand.

Every check pits an independent brute-force computation against the matching
closed form (or an internal cross-method identity) and reports pass/fail with
both payloads.  Check order is fixed, results are merged in that order, and
no timestamps enter the serialized report, so a preset's report bytes are
identical across runs and worker counts.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import codes, curves, diffspec, expsum, family
from .errors import VerificationError
from .field import DEFAULT_FIELD_CAP, field_for


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    expected: object
    actual: object
    elapsed: float  # seconds; deliberately left out of serialized reports

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "expected": self.expected,
            "actual": self.actual,
        }


# --- individual checks (module-level so worker processes can import them) ---


def check_field(p: int, n: int, cap: int) -> tuple[bool, object, object]:
    F = field_for(p, n, cap=cap)
    beta_order = 1
    b = F.beta
    while b != 1:
        b = F.mul(b, F.beta)
        beta_order += 1
    fibers = np.bincount(F.trace_table, minlength=p)
    frob_ok = bool(
        np.array_equal(F.trace_exp,
                       F.trace_table[F.exp_table[(np.arange(F.group_order) * p) % F.group_order]])
    )
    rng = np.random.default_rng(11)
    if F.order <= 256:
        pairs = [(x, y) for x in F.elements() for y in F.elements()]
    else:
        pairs = rng.integers(0, F.order, size=(4096, 2)).tolist()
    add_mismatch = 0
    digs = F.digit_table.astype(np.int64)
    weights = p ** np.arange(F.n, dtype=np.int64)
    for x, y in pairs:
        digit_sum = int((((digs[x] + digs[y]) % p) * weights).sum())
        add_mismatch += F.add(int(x), int(y)) != digit_sum
    expected = {
        "field": F.descriptor(),
        "beta_order": p - 1 if p > 2 else 1,
        "trace_fibers": [p ** (n - 1)] * p,
        "frobenius_trace_invariant": True,
        "zech_vs_digit_mismatches": 0,
    }
    actual = {
        "field": F.descriptor(),
        "beta_order": beta_order,
        "trace_fibers": [int(c) for c in fibers],
        "frobenius_trace_invariant": frob_ok,
        "zech_vs_digit_mismatches": add_mismatch,
    }
    return expected == actual, expected, actual


def check_spectrum(p: int, l: int, cap: int) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d, d1 = family.exponents(p, l)
    closed = diffspec.spectrum_closed(p, l).as_pairs()
    oracle_d = diffspec.spectrum_oracle(F, d).as_pairs()
    oracle_d1 = diffspec.spectrum_oracle(F, d1).as_pairs()
    expected = {"field": F.descriptor(), "spectrum": closed}
    actual = {"field": F.descriptor(), "oracle_d": oracle_d, "oracle_d1": oracle_d1}
    return closed == oracle_d == oracle_d1, expected, actual


def check_classification(p: int, l: int, cap: int) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    q = p**l
    expected = {
        "delta_at_one": q,
        "unity_roots": [q * q - q] * q,
        "others_in_0_2": True,
    }
    actual = diffspec.classify_counts(F, l)
    return expected == actual, expected, actual


def check_cdiff_bound(p: int, l: int, cap: int) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    rep = diffspec.bound_sweep(F, l)
    expected = {"max_uniformity<=bound": True, "gcd<=3": True, "bound": (p**l + 1) ** 2}
    actual = {
        "max_uniformity<=bound": rep["max_uniformity"] <= rep["bound"],
        "gcd<=3": rep["gcd"] <= 3,
        "bound": rep["bound"],
        "max_uniformity": rep["max_uniformity"],
        "gcd": rep["gcd"],
        "c_swept": rep["c_swept"],
    }
    ok = actual["max_uniformity<=bound"] and actual["gcd<=3"]
    return ok, expected, actual


def check_distribution(p: int, l: int, cap: int,
                       with_oracle: bool) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d1 = family.exponents(p, l)[1]
    closed = expsum.distribution_closed(p, l).as_pairs()
    reduced = expsum.distribution_reduced(F, d1).as_pairs()
    actual = {"reduced": reduced}
    ok = closed == reduced
    if with_oracle:
        oracle = expsum.distribution_oracle(F, d1).as_pairs()
        actual["oracle"] = oracle
        ok = ok and closed == oracle
    return ok, {"closed": closed}, actual


def check_moments(p: int, l: int, cap: int) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d1 = family.exponents(p, l)[1]
    n = 4 * l
    expected = {
        "m1": p ** (2 * n),
        "m2": p ** (3 * n),
        "m3": p ** (13 * l) + p ** (3 * n) - p ** (9 * l),
    }
    actual = expsum.moment_identities(F, d1).as_dict()
    return expected == actual, expected, actual


def check_weights(p: int, l: int, cap: int,
                  methods: tuple[str, ...]) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d1 = family.exponents(p, l)[1]
    dists = {m: codes.weight_distribution(F, d1, m) for m in methods}
    pairs = {m: d.as_pairs() for m, d in dists.items()}
    ref = pairs[methods[0]]
    ok = all(v == ref for v in pairs.values())
    return ok, {methods[0]: ref}, pairs


def check_dimension(p: int, l: int, cap: int) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d1 = family.exponents(p, l)[1]
    dim = codes.code_dimension(F, d1)
    return dim == 2 * F.n, {"dimension": 2 * F.n}, {"dimension": dim}


def check_constacyclic(p: int, l: int, cap: int,
                       samples: int | None) -> tuple[bool, object, object]:
    F = family.build(p, l, cap)
    d1 = family.exponents(p, l)[1]
    rep = codes.constacyclic_closure(F, d1, samples=samples)
    return rep.ok, {"closed_under_shift": True}, {
        "closed_under_shift": rep.ok, "mode": rep.mode, "checked": rep.checked,
    }


def check_curves(p: int, n: int, cap: int) -> tuple[bool, object, object]:
    F = field_for(p, n, cap=cap)
    total = mismatches = 0
    cases: dict[str, int] = {}
    for curve in curves.admissible_curves(F):
        rep = curves.curve_report(curve)
        total += 1
        cases[rep["case"]] = cases.get(rep["case"], 0) + 1
        mismatches += not rep["match"]
    expected = {"mismatches": 0, "all_cases_hit": True}
    actual = {
        "mismatches": mismatches,
        "all_cases_hit": sorted(cases) == list(curves.CASE_LABELS),
        "configs": total,
        "cases": dict(sorted(cases.items())),
    }
    ok = mismatches == 0 and actual["all_cases_hit"]
    return ok, expected, actual


def check_quad_criterion(m: int, cap: int) -> tuple[bool, object, object]:
    F = field_for(2, 2 * m, cap=cap)
    disagreements = 0
    holds = 0
    for a in F.units():
        for b in F.units():
            crit = curves.quad_roots_in_subgroup(F, a, b)
            disagreements += crit != curves.quad_roots_in_subgroup_oracle(F, a, b)
            holds += crit
    return (disagreements == 0, {"criterion_vs_oracle_disagreements": 0},
            {"criterion_vs_oracle_disagreements": disagreements, "holds_for": holds})


# --- presets ----------------------------------------------------------------

DESK_FAMILIES = ((2, 1), (3, 1), (2, 2), (5, 1), (2, 3))
SUM_FAMILIES_DESK = ((2, 1), (5, 1))
EXTENDED_SUM_FAMILIES = ((2, 3), (11, 1))


def preset_checks(preset: str) -> list[tuple[str, object, dict]]:
    if preset not in ("desk", "extended"):
        raise ValueError(f"unknown preset {preset!r}")
    cs: list[tuple[str, object, dict]] = []
    for p, l in DESK_FAMILIES:
        cs.append((f"field/p{p}l{l}", check_field, {"p": p, "n": 4 * l}))
    for p, l in DESK_FAMILIES:
        cs.append((f"diff-spectrum/p{p}l{l}", check_spectrum, {"p": p, "l": l}))
        cs.append((f"per-b-classification/p{p}l{l}", check_classification, {"p": p, "l": l}))
    for p, l in ((2, 1), (3, 1), (5, 1)):
        cs.append((f"cdiff-bound/p{p}l{l}", check_cdiff_bound, {"p": p, "l": l}))
    for p, l in SUM_FAMILIES_DESK:
        cs.append((f"sum-distribution/p{p}l{l}", check_distribution,
                   {"p": p, "l": l, "with_oracle": True}))
        cs.append((f"sum-moments/p{p}l{l}", check_moments, {"p": p, "l": l}))
        cs.append((f"code-weights/p{p}l{l}", check_weights,
                   {"p": p, "l": l, "methods": ("direct", "via_sums", "closed")}))
    for p, l in ((2, 1), (3, 1), (5, 1)):
        cs.append((f"code-dimension/p{p}l{l}", check_dimension, {"p": p, "l": l}))
    cs.append(("constacyclic/p2l1", check_constacyclic, {"p": 2, "l": 1, "samples": None}))
    cs.append(("constacyclic/p3l1", check_constacyclic, {"p": 3, "l": 1, "samples": None}))
    cs.append(("constacyclic/p5l1", check_constacyclic, {"p": 5, "l": 1, "samples": 10_000}))
    for p, n in ((2, 4), (3, 4), (2, 8)):
        cs.append((f"curve-counts/{p}^{n}", check_curves, {"p": p, "n": n}))
    for m in (2, 3):
        cs.append((f"quad-criterion/m{m}", check_quad_criterion, {"m": m}))
    if preset == "extended":
        for p, l in EXTENDED_SUM_FAMILIES:
            cs.append((f"sum-distribution/p{p}l{l}", check_distribution,
                       {"p": p, "l": l, "with_oracle": False}))
        cs.append(("code-weights/p2l3", check_weights,
                   {"p": 2, "l": 3, "methods": ("direct", "via_sums", "closed")}))
        cs.append(("code-weights/p11l1", check_weights,
                   {"p": 11, "l": 1, "methods": ("via_sums", "closed")}))
        cs.append(("code-dimension/p2l3", check_dimension, {"p": 2, "l": 3}))
        cs.append(("code-dimension/p11l1", check_dimension, {"p": 11, "l": 1}))
        cs.append(("constacyclic/p2l3", check_constacyclic,
                   {"p": 2, "l": 3, "samples": 10_000}))
    return cs


def _run_one(spec: tuple[str, object, dict], cap: int) -> CheckResult:
    name, fn, kwargs = spec
    start = perf_counter()
    try:
        ok, expected, actual = fn(cap=cap, **kwargs)
        status = "pass" if ok else "fail"
    except VerificationError as exc:
        expected, actual, status = None, {"error": str(exc)}, "fail"
    return CheckResult(name, status, expected, actual, perf_counter() - start)


def run_preset(preset: str, workers: int = 1, cap: int = DEFAULT_FIELD_CAP,
               name_filter: str | None = None) -> tuple[dict, list[CheckResult]]:
    checks = preset_checks(preset)
    if name_filter:
        checks = [c for c in checks if name_filter in c[0]]
        if not checks:
            raise ValueError(f"no checks match filter {name_filter!r}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, c, cap) for c in checks]
            results = [f.result() for f in futures]  # preserves registry order
    else:
        results = [_run_one(c, cap) for c in checks]
    report = {
        "preset": preset,
        "checks": [r.to_json() for r in results],
        "status": "pass" if all(r.status == "pass" for r in results) else "fail",
    }
    return report, results
