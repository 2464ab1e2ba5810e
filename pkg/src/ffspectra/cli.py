"""Command-line front end.

Subcommands: field-info, diffspec, cdiff, expsum, expsum-dist, code-weights,
curve-count, quad-mu, verify.  Every report embeds the field descriptor
(p, n, modulus) so results are reproducible against the pinned generator
convention.  Field elements on the command line are either integer encodings
(base-p digit vectors packed as sum(c_i * p**i)) or `psi^K` powers of the
generator.

Exit codes: 0 success, 1 verification mismatch, 2 invalid parameters or an
exceeded size budget.  Reports go to stdout or --out; timings and progress go
to stderr so reports stay byte-identical between runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from time import perf_counter

from . import codes, curves, diffspec, expsum, family, verify
from .errors import SizeLimitError, VerificationError
from .field import DEFAULT_FIELD_CAP, FieldContext, field_for


@dataclass
class RunConfig:
    """Validated run parameters common to the computing subcommands."""

    p: int
    n: int
    d: int | None
    l: int | None
    fmt: str
    out: str | None
    workers: int
    budget: int
    cap: int

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        p = args.p
        l = getattr(args, "l", None)
        n = getattr(args, "n", None)
        d = getattr(args, "d", None)
        if (l is None) == (n is None):
            raise ValueError("give exactly one of --l (family mode) or --n (explicit mode)")
        if l is not None:
            if l < 1:
                raise ValueError("--l must be positive")
            n = family.degree(l)
        elif n < 1:
            raise ValueError("--n must be positive")
        budget = args.budget
        if budget < p**n:
            raise ValueError(f"--budget {budget} is below the field size {p**n}")
        return cls(p=p, n=n, d=d, l=l, fmt=args.format, out=args.out,
                   workers=args.workers, budget=budget, cap=args.cap)

    def field(self) -> FieldContext:
        return field_for(self.p, self.n, cap=self.cap)

    def exponent(self, shifted: bool) -> int:
        """The requested exponent: explicit --d, or the family d/d1 for l."""
        if self.d is not None:
            return self.d
        if self.l is None:
            raise ValueError("explicit mode needs --d")
        return family.exponents(self.p, self.l)[1 if shifted else 0]


def parse_element(F: FieldContext, text: str) -> int:
    """An element given as an integer encoding or as psi^K."""
    text = text.strip()
    if text.startswith("psi^"):
        return F.element(int(text[4:]))
    if text == "psi":
        return F.psi
    value = int(text)
    if not 0 <= value < F.order:
        raise ValueError(f"element {value} outside [0, {F.order})")
    return value


# --- report emission --------------------------------------------------------


def _pairs_rows(report: dict) -> tuple[str, list] | None:
    for key, header in (("spectrum", "solutions,count"),
                        ("distribution", "value,count"),
                        ("enumerator", "weight,count")):
        if key in report:
            rows = report[key]
            if isinstance(rows, dict):
                rows = sorted((int(k), v) for k, v in rows.items())
            return header, rows
    return None


def _to_csv(report: dict) -> str:
    lines = []
    pairs = _pairs_rows(report)
    if pairs:
        header, rows = pairs
        lines.append(header)
        lines += [f"{a},{b}" for a, b in rows]
    elif "checks" in report:
        lines.append("name,status")
        lines += [f"{c['name']},{c['status']}" for c in report["checks"]]
    else:
        lines.append("key,value")
        for key in sorted(report):
            lines.append(f"{key},{json.dumps(report[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _to_text(report: dict) -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if key == "checks":
            for c in value:
                lines.append(f"{c['status']:>5}  {c['name']}")
        elif isinstance(value, list) and value and isinstance(value[0], (list, tuple)):
            lines.append(f"{key}:")
            lines += [f"  {a}: {b}" for a, b in value]
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _to_csv(report)
    else:
        text = _to_text(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommand handlers ----------------------------------------------------


def cmd_field_info(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    report = {
        "field": F.descriptor(),
        "order": F.order,
        "units": F.group_order,
        "psi": F.psi,
        "beta": F.beta,
        "beta_log": F.log(F.beta) if F.beta != 1 else 0,
    }
    return report, 0


def cmd_diffspec(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    d = cfg.exponent(shifted=False)
    report: dict = {"field": F.descriptor(), "d": d, "method": args.method}
    code = 0
    if args.method in ("oracle", "both"):
        spec = diffspec.spectrum_oracle(F, d)
        report["spectrum"] = {str(i): c for i, c in spec.as_pairs()}
        report["delta"] = spec.delta
    if args.method in ("closed", "both"):
        if cfg.l is None:
            raise ValueError("closed form needs family mode (--l)")
        closed = diffspec.spectrum_closed(cfg.p, cfg.l)
        report.setdefault("spectrum", {str(i): c for i, c in closed.as_pairs()})
        report.setdefault("delta", closed.delta)
        report["closed"] = {str(i): c for i, c in closed.as_pairs()}
    if args.method == "both":
        report["match"] = report["closed"] == report["spectrum"]
        code = 0 if report["match"] else 1
    return report, code


def cmd_cdiff(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    d = cfg.exponent(shifted=True)
    c = parse_element(F, args.c)
    rep = diffspec.c_uniformity(F, d, c)
    report = {"field": F.descriptor(), **rep.to_json()}
    return report, 0


def cmd_expsum(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    d1 = cfg.exponent(shifted=True)
    u = parse_element(F, args.u)
    v = parse_element(F, args.v)
    counts = expsum.trace_counts(F, d1, u, v)
    value = counts.value()
    report = {
        "field": F.descriptor(), "d1": d1, "u": u, "v": v,
        "value": value, "trace_counts": list(counts.counts),
    }
    if u != 0 and cfg.l is not None and family.cube_condition(cfg.p, cfg.l):
        t = expsum.coset_counts(F, d1, u, v)
        report["coset_counts"] = {"zeros": t.zeros, "residues": t.residues,
                                  "nonresidues": t.nonresidues}
        via = expsum.exp_sum_via_cosets(F, d1, u, v)
        report["value_via_cosets"] = via
        if via != value:
            raise VerificationError(f"coset route gives {via}, direct gives {value}")
    return report, 0


def cmd_expsum_dist(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    d1 = cfg.exponent(shifted=True)
    report: dict = {"field": F.descriptor(), "d1": d1, "method": args.method}
    dists: dict[str, list] = {}
    if args.method in ("oracle", "all"):
        dists["oracle"] = expsum.distribution_oracle(F, d1, budget=cfg.budget).as_pairs()
    if args.method in ("reduced", "all"):
        dists["reduced"] = expsum.distribution_reduced(F, d1).as_pairs()
    if args.method in ("closed", "all"):
        if cfg.l is None:
            raise ValueError("closed form needs family mode (--l)")
        dists["closed"] = expsum.distribution_closed(cfg.p, cfg.l).as_pairs()
    first = next(iter(dists.values()))
    report["distribution"] = first
    code = 0
    if len(dists) > 1:
        report["methods_agree"] = all(v == first for v in dists.values())
        code = 0 if report["methods_agree"] else 1
    if args.moments:
        report["moments"] = expsum.moment_identities(F, d1, budget=cfg.budget).as_dict()
    return report, code


def cmd_code_weights(args) -> tuple[dict, int]:
    cfg = RunConfig.from_args(args)
    F = cfg.field()
    d1 = cfg.exponent(shifted=True)
    methods = (["direct", "via_sums", "closed"] if args.method == "all"
               else [args.method])
    dists = {m: codes.weight_distribution(F, d1, m, variant=args.variant,
                                          budget=cfg.budget) for m in methods}
    first = dists[methods[0]]
    report = {
        "field": F.descriptor(), "d1": d1, "method": args.method,
        "variant": args.variant,
        "length": first.length, "dimension": first.dimension,
        "min_distance": first.min_distance,
        "enumerator": first.as_pairs(),
    }
    code = 0
    if len(dists) > 1:
        report["methods_agree"] = all(d.weights == first.weights for d in dists.values())
        code = 0 if report["methods_agree"] else 1
    return report, code


def cmd_curve_count(args) -> tuple[dict, int]:
    F = field_for(args.p, args.n, cap=args.cap)
    alpha = parse_element(F, args.alpha) if args.alpha else F.element(args.r1)
    beta = parse_element(F, args.beta) if args.beta else F.element(args.r2)
    curve = curves.DiagonalCurve(F, args.n1, args.n2, args.r1, args.r2,
                                 alpha, beta, k=args.k, s=args.s)
    report = curves.curve_report(curve, naive=args.naive)
    return report, 0 if report["match"] else 1


def cmd_quad_mu(args) -> tuple[dict, int]:
    F = field_for(2, 2 * args.m, cap=args.cap)
    a = parse_element(F, args.a)
    b = parse_element(F, args.b)
    crit = curves.quad_roots_in_subgroup(F, a, b)
    oracle = curves.quad_roots_in_subgroup_oracle(F, a, b)
    report = {
        "field": F.descriptor(), "m": args.m, "a": a, "b": b,
        "criterion": crit, "oracle": oracle, "match": crit == oracle,
    }
    return report, 0 if report["match"] else 1


def cmd_verify(args) -> tuple[dict, int]:
    start = perf_counter()
    report, results = verify.run_preset(args.preset, workers=args.workers,
                                        cap=args.cap, name_filter=args.checks)
    for r in results:
        print(f"[{r.status:>4}] {r.name} ({r.elapsed:.2f}s)", file=sys.stderr)
    print(f"verify: {len(results)} checks in {perf_counter() - start:.1f}s",
          file=sys.stderr)
    return report, 0 if report["status"] == "pass" else 1


# --- argument wiring ---------------------------------------------------------


def _add_common(sp, l_mode: bool = True) -> None:
    sp.add_argument("--p", type=int, required=True, help="field characteristic")
    if l_mode:
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--l", type=int, help="family level (degree n = 4l)")
        group.add_argument("--n", type=int, help="explicit field degree")
        sp.add_argument("--d", type=int, help="explicit exponent (with --n)")
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out", help="write the report to this path instead of stdout")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--budget", type=int, default=expsum.DEFAULT_PAIR_BUDGET,
                    help="pair-evaluation budget for full sweeps")
    sp.add_argument("--cap", type=int, default=DEFAULT_FIELD_CAP,
                    help="field size cap (table memory guard)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffspectra",
        description=__doc__.splitlines()[0] if __doc__ else "",
        epilog="Set FFSPECTRA_CACHE_DIR to persist field tables between runs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field-info", help="field descriptor and generators")
    _add_common(sp)
    sp.set_defaults(handler=cmd_field_info)

    sp = sub.add_parser("diffspec", help="differential spectrum of x^d")
    _add_common(sp)
    sp.add_argument("--method", choices=("oracle", "closed", "both"), default="both")
    sp.set_defaults(handler=cmd_diffspec)

    sp = sub.add_parser("cdiff", help="c-differential uniformity for one c")
    _add_common(sp)
    sp.add_argument("--c", required=True, help="the multiplier c (int or psi^K)")
    sp.set_defaults(handler=cmd_cdiff)

    sp = sub.add_parser("expsum", help="one exponential sum S(u, v)")
    _add_common(sp)
    sp.add_argument("--u", required=True)
    sp.add_argument("--v", required=True)
    sp.set_defaults(handler=cmd_expsum)

    sp = sub.add_parser("expsum-dist", help="value distribution of S(u, v)")
    _add_common(sp)
    sp.add_argument("--method", choices=("oracle", "reduced", "closed", "all"),
                    default="all")
    sp.add_argument("--moments", action="store_true",
                    help="also check the three moment identities")
    sp.set_defaults(handler=cmd_expsum_dist)

    sp = sub.add_parser("code-weights", help="weight distribution of the trace code")
    _add_common(sp)
    sp.add_argument("--method", choices=("direct", "via_sums", "closed", "all"),
                    default="all")
    sp.add_argument("--variant", choices=("short", "full"), default="short")
    sp.set_defaults(handler=cmd_code_weights)

    sp = sub.add_parser("curve-count", help="points on a*x^n1 + b*y^n2 + 1 = 0")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--n1", type=int, required=True)
    sp.add_argument("--n2", type=int, required=True)
    sp.add_argument("--r1", type=int, required=True)
    sp.add_argument("--r2", type=int, required=True)
    sp.add_argument("--alpha", help="coefficient in coset r1 (default psi^r1)")
    sp.add_argument("--beta", help="coefficient in coset r2 (default psi^r2)")
    sp.add_argument("--naive", action="store_true", help="O(p^2n) audit loop")
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--cap", type=int, default=DEFAULT_FIELD_CAP)
    sp.set_defaults(handler=cmd_curve_count)

    sp = sub.add_parser("quad-mu", help="roots of x^2+ax+b inside mu_{2^m+1}")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--cap", type=int, default=DEFAULT_FIELD_CAP)
    sp.set_defaults(handler=cmd_quad_mu)

    sp = sub.add_parser("verify", help="run a closed-form-vs-oracle preset")
    sp.add_argument("--preset", choices=("desk", "extended"), default="desk")
    sp.add_argument("--checks", help="only run checks whose name contains this")
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--cap", type=int, default=DEFAULT_FIELD_CAP)
    sp.set_defaults(handler=cmd_verify)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.handler(args)
    except SizeLimitError as exc:
        print(f"size budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    emit(report, args.format, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
