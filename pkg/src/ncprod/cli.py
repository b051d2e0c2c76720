"""Command-line front end: ``ncprod verify`` and ``ncprod families``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Callable

from . import algebra, koszul
from .algebra import AlgebraElement
from .errors import (
    ConstraintViolated,
    MatrixShapeMismatch,
    NcprodError,
    NotOrthogonal,
    NotUnitVector,
    SpecParseError,
)
from .families import FamilySpec, catalog, make_family
from .quaternion import Quaternion
from .rmatrix import RMatrix, check_axioms
from .scalar import GaussianRational

CHECKS = ("axioms", "dims", "center", "koszul", "clifford", "pbw", "quotients", "symmetry", "confluence")
DEPENDS = {name: ("axioms",) for name in CHECKS if name != "axioms"}
DEPENDS["quotients"] = ("axioms", "center")

PASS, FAIL, BLOCKED, SKIPPED = "pass", "fail", "blocked", "skipped"

INPUT_ERRORS = (SpecParseError, ConstraintViolated, NotUnitVector, NotOrthogonal, MatrixShapeMismatch)

# rational unit quaternion pairs (q1, q2) for the symmetry check
QUATERNION_PAIRS = [
    ((1, 0, 0, 0), (1, 0, 0, 0)),
    (("3/5", "4/5", 0, 0), (0, 0, "3/5", "4/5")),
    (("1/2", "1/2", "1/2", "1/2"), (0, "3/5", 0, "-4/5")),
    ((0, 0, 0, 1), ("1/3", "2/3", "2/3", 0)),
    (("2/7", "3/7", "6/7", 0), ("1/2", "-1/2", "1/2", "-1/2")),
]

FORMULAS = {
    "axioms": "reality, involution, Yang-Baxter, centrality and Euclidean identities of R",
    "dims": "dim A_n = C(N+n-1, n) from normal forms; overlap certificate; dual tower",
    "center": "|x1|^2, |x2|^2, |x|^2 commute with every generator",
    "koszul": "dim A^!_n = C(N, n); H_n(K(A)) = 0 for n >= 1; b^2 = 0",
    "clifford": "Clifford span = 2^N; Gamma(x)^2 = 1 (x) |x|^2 and block identities",
    "pbw": "P meets F^1 trivially; (P E + E P) meets F^2 inside P",
    "quotients": "sphere reductions idempotent and multiplicative",
    "symmetry": "relations invariant under the SU(2) x SU(2) action",
    "confluence": "rewriting strategies agree; cross-block rewrite is an involution",
}


@dataclass
class RunConfig:
    spec_path: str
    checks: tuple[str, ...] = CHECKS
    max_degree: int = 4
    max_weight: int = 3
    mode: str | None = None
    output: str = "text"
    out_path: str | None = None

    def __post_init__(self):
        if self.max_degree < 1 or self.max_weight < 1:
            raise SpecParseError("--max-degree and --max-weight must be positive")
        if not self.checks:
            raise SpecParseError("at least one check must be selected")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise SpecParseError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
        if self.mode not in (None, "exact", "float"):
            raise SpecParseError(f"mode must be exact or float, got {self.mode!r}")


@dataclass
class CheckOutcome:
    status: str
    summary: str = ""
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"status": self.status, "summary": self.summary, "details": self.details, "seconds": self.seconds}

    @classmethod
    def from_json(cls, obj: dict) -> CheckOutcome:
        return cls(obj["status"], obj.get("summary", ""), obj.get("details", {}), float(obj.get("seconds", 0.0)))


@dataclass
class CheckReport:
    family: dict
    checks: dict[str, CheckOutcome]

    @property
    def passed(self) -> bool:
        return all(c.status in (PASS, SKIPPED) for c in self.checks.values())

    def failures(self) -> list[str]:
        """Checks that ran and failed; blocked ones are listed separately."""
        return [k for k, c in self.checks.items() if c.status == FAIL]

    def blocked(self) -> list[str]:
        return [k for k, c in self.checks.items() if c.status == BLOCKED]

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "checks": {k: v.to_json() for k, v in self.checks.items()},
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CheckReport:
        return cls(obj["family"], {k: CheckOutcome.from_json(v) for k, v in obj["checks"].items()})


# ---------------------------------------------------------------------------
# loading


def load_spec(path: str | Path, mode: str | None = None) -> tuple[dict, RMatrix, FamilySpec | None]:
    """Read a FamilySpec file, or a raw R-matrix file with n1/n2/entries."""
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SpecParseError("spec file must contain a JSON object")
    if "kind" in obj:
        if mode is not None:
            obj = {**obj, "mode": mode}
        spec = FamilySpec.from_json(obj)
        return spec.to_json(), make_family(spec), spec
    if "entries" in obj:
        m = mode or obj.get("mode", "exact")
        tol = float(obj.get("tol", 1e-12)) if m == "float" else None
        return obj, RMatrix.from_json(obj, tol), None
    raise SpecParseError("spec file needs either a 'kind' key (family) or 'entries' (raw R-matrix)")


# ---------------------------------------------------------------------------
# individual checks


def _check_axioms(ctx: _Context) -> CheckOutcome:
    rep = check_axioms(ctx.r)
    failing = []
    for res in rep.results():
        if not res.passed:
            worst = sorted(res.defects)[:5]
            failing.append(
                {
                    "check": res.name,
                    "formula": res.formula,
                    "residual": res.residual,
                    "defect_indices": [list(k) for k in worst],
                    "defect_count": len(res.defects),
                }
            )
    summary = "all identities hold" if rep.passed else "failing: " + ", ".join(rep.failures())
    return CheckOutcome(PASS if rep.passed else FAIL, summary, {"failing": failing, "report": rep.to_json()})


def _check_dims(ctx: _Context) -> CheckOutcome:
    r, cap = ctx.r, ctx.cfg.max_degree
    n = r.n1 + r.n2
    alg = algebra.algebra_of(r)
    table = []
    for d in range(cap + 1):
        table.append({"n": d, "dim": alg.graded_dimension(d), "expected": comb(n + d - 1, d)})
    overlaps = len(alg.rewriting.overlap_failures())
    tower = [len(c) for c in koszul.algebra_dual_components(r, cap)]
    ok = overlaps == 0 and all(row["dim"] == row["expected"] == tower[row["n"]] for row in table)
    return CheckOutcome(
        PASS if ok else FAIL,
        "dims " + ",".join(str(row["dim"]) for row in table),
        {"table": table, "overlap_failures": overlaps, "dual_tower": tower},
    )


def _check_center(ctx: _Context) -> CheckOutcome:
    alg = algebra.algebra_of(ctx.r)
    flags = {"x1_norm": alg.is_central(alg.norm_x1()), "x2_norm": alg.is_central(alg.norm_x2())}
    flags["norm"] = alg.is_central(alg.norm())
    ok = all(flags.values())
    return CheckOutcome(PASS if ok else FAIL, "norms central" if ok else "non-central norm", {"central": flags})


def _check_koszul(ctx: _Context) -> CheckOutcome:
    r = ctx.r
    n = r.n1 + r.n2
    dual = [{"n": k, "dim": koszul.dual_dimension(r, k), "expected": comb(n, k)} for k in range(n + 1)]
    overlaps = len(koszul.koszul_dual_relations(r).overlap_failures())
    hom = koszul.koszul_homology(r, ctx.cfg.max_weight)
    ok = overlaps == 0 and all(d["dim"] == d["expected"] for d in dual) and hom.acyclic and hom.boundary_squares_zero
    nonzero = [p.to_json() for p in hom.pieces if p.dim_h and (p.n, p.weight) != (0, 0)]
    return CheckOutcome(
        PASS if ok else FAIL,
        f"acyclic through weight {ctx.cfg.max_weight}" if ok else "dual dimension or homology defect",
        {
            "dual_dims": dual,
            "dual_overlap_failures": overlaps,
            "homology": hom.to_json(),
            "boundary_squares_zero": hom.boundary_squares_zero,
            "nonzero_homology": nonzero,
        },
    )


def _check_clifford(ctx: _Context) -> CheckOutcome:
    r = ctx.r
    n = r.n1 + r.n2
    size = koszul.clifford_basis_size(r)
    overlaps = len(koszul.clifford_system(r).overlap_failures())
    gamma = koszul.verify_gamma_square(r)
    ok = size == 2**n and overlaps == 0 and gamma.passed
    return CheckOutcome(
        PASS if ok else FAIL,
        f"basis {size}, Gamma square {'ok' if gamma.passed else 'broken'}",
        {"basis_size": size, "expected": 2**n, "overlap_failures": overlaps, "gamma_square": gamma.as_dict()},
    )


def _check_pbw(ctx: _Context) -> CheckOutcome:
    rep = koszul.check_pbw_conditions(ctx.r)
    return CheckOutcome(
        PASS if rep.passed else FAIL,
        f"(i) {rep.condition_i}, (ii) {rep.condition_ii}",
        {"condition_i": rep.condition_i, "condition_ii": rep.condition_ii},
    )


def random_element(alg: algebra.QuadraticAlgebra, rng: random.Random, max_degree: int, terms: int = 3) -> AlgebraElement:
    out = AlgebraElement({})
    for _ in range(terms):
        d = rng.randint(0, max_degree)
        w = [rng.randrange(alg.ngens) for _ in range(d)]
        c = GaussianRational(rng.randint(-3, 3), rng.randint(-2, 2))
        out = out + alg.normal_form(w).scale(c)
    return out


def _check_quotients(ctx: _Context, samples: int = 40) -> CheckOutcome:
    r = ctx.r
    alg = algebra.algebra_of(r)
    rng = random.Random(1)
    top = min(ctx.cfg.max_degree, 4)
    results = {}
    for ideal in algebra.IDEALS:
        bad_idem = bad_mult = 0
        for _ in range(samples):
            a = random_element(alg, rng, top // 2)
            b = random_element(alg, rng, top - top // 2)
            ra = algebra.reduce_mod_spheres(r, a, ideal)
            if algebra.reduce_mod_spheres(r, ra, ideal) != ra:
                bad_idem += 1
            lhs = algebra.reduce_mod_spheres(r, alg.multiply(a, b), ideal)
            rhs = algebra.reduce_mod_spheres(r, alg.multiply(ra, algebra.reduce_mod_spheres(r, b, ideal)), ideal)
            if lhs != rhs:
                bad_mult += 1
        results[ideal] = {"samples": samples, "idempotence_failures": bad_idem, "multiplicativity_failures": bad_mult}
    ok = all(v["idempotence_failures"] == v["multiplicativity_failures"] == 0 for v in results.values())
    return CheckOutcome(PASS if ok else FAIL, f"{samples} samples per ideal", {"ideals": results})


def _quat(coords) -> Quaternion:
    return Quaternion.of(coords)


def _check_symmetry(ctx: _Context) -> CheckOutcome:
    spec = ctx.spec
    if spec is None or spec.kind != "quaternionic":
        return CheckOutcome(SKIPPED, "only defined for quaternionic families")
    side = "right" if spec.sign == "+" else "left"
    other = "left" if side == "right" else "right"
    rows = []
    for c1, c2 in QUATERNION_PAIRS:
        q1, q2 = _quat(c1), _quat(c2)
        rows.append(
            {
                "q1": [str(x) for x in c1],
                "q2": [str(x) for x in c2],
                side: algebra.check_relation_invariance(ctx.r, q1, q2, side),
            }
        )
    ok = all(row[side] for row in rows)
    # the opposite action is recorded for information only
    q1, q2 = _quat(QUATERNION_PAIRS[1][0]), _quat(QUATERNION_PAIRS[1][1])
    info = {"side": other, "invariant": algebra.check_relation_invariance(ctx.r, q1, q2, other)}
    return CheckOutcome(
        PASS if ok else FAIL,
        f"{side} action, {len(rows)} pairs",
        {"side": side, "pairs": rows, "complementary_action": info},
    )


def _check_confluence(ctx: _Context) -> CheckOutcome:
    rep = algebra.check_confluence_sample(ctx.r, trials=500, max_len=5, seed=0)
    double = algebra.double_rewrite_defects(ctx.r)
    ok = rep.passed and not double
    return CheckOutcome(
        PASS if ok else FAIL,
        f"{rep.trials} words, {len(rep.mismatches)} mismatches",
        {
            "trials": rep.trials,
            "mismatches": [list(w) for w in rep.mismatches[:10]],
            "double_rewrite_defects": [list(p) for p in double],
        },
    )


RUNNERS: dict[str, Callable[[_Context], CheckOutcome]] = {
    "axioms": _check_axioms,
    "dims": _check_dims,
    "center": _check_center,
    "koszul": _check_koszul,
    "clifford": _check_clifford,
    "pbw": _check_pbw,
    "quotients": _check_quotients,
    "symmetry": _check_symmetry,
    "confluence": _check_confluence,
}


@dataclass
class _Context:
    r: RMatrix
    spec: FamilySpec | None
    cfg: RunConfig


def _timed(name: str, ctx: _Context) -> CheckOutcome:
    t0 = time.perf_counter()
    try:
        out = RUNNERS[name](ctx)
    except NcprodError as exc:
        out = CheckOutcome(FAIL, f"{type(exc).__name__}: {exc}")
    out.seconds = round(time.perf_counter() - t0, 4)
    return out


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("NCPROD_THREADS", "1")))
    except ValueError:
        return 1


def run_checks(r: RMatrix, spec: FamilySpec | None, cfg: RunConfig, family: dict) -> CheckReport:
    ctx = _Context(r, spec, cfg)
    selected = [c for c in CHECKS if c in cfg.checks]
    results: dict[str, CheckOutcome] = {}
    # axioms always runs first; its verdict gates everything downstream
    axioms = _timed("axioms", ctx)
    if "axioms" in selected:
        results["axioms"] = axioms
    rest = [c for c in selected if c != "axioms"]
    if axioms.status != PASS:
        # the gate is reported even when it was not selected
        results["axioms"] = axioms
        for c in rest:
            results[c] = CheckOutcome(BLOCKED, "axioms failed")
        return CheckReport(family, {c: results[c] for c in ["axioms", *rest]})

    first = [c for c in rest if c != "quotients"]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        futures = {c: pool.submit(_timed, c, ctx) for c in first}
        results.update({c: f.result() for c, f in futures.items()})
    if "quotients" in rest:
        center = results.get("center") or _timed("center", ctx)
        results["quotients"] = _timed("quotients", ctx) if center.status == PASS else CheckOutcome(BLOCKED, "center failed")
    return CheckReport(family, {c: results[c] for c in selected})


def run(cfg: RunConfig) -> tuple[CheckReport | None, int, str]:
    """Returns (report, exit code, error message)."""
    try:
        family, r, spec = load_spec(cfg.spec_path, cfg.mode)
    except INPUT_ERRORS as exc:
        return None, 2, f"{type(exc).__name__}: {exc}"
    report = run_checks(r, spec, cfg, family)
    return report, (0 if report.passed else 1), ""


# ---------------------------------------------------------------------------
# output


def format_text(report: CheckReport) -> str:
    lines = [f"family: {json.dumps(report.family, sort_keys=True)}"]
    for name, out in report.checks.items():
        lines.append(f"[{out.status.upper():7}] {name:10} {out.seconds:8.3f}s  {out.summary}")
        lines.append(f"          checks: {FORMULAS[name]}")
        if name == "axioms":
            for f in out.details.get("failing", []):
                idx = "; ".join(",".join(map(str, k)) for k in f["defect_indices"])
                lines.append(f"          {f['check']}: {f['formula']}  residual {f['residual']:.3g}")
                lines.append(f"            defect indices (0-based): {idx} ({f['defect_count']} total)")
    lines.append(f"verdict: {report.verdict.upper()}")
    return "\n".join(lines)


def list_families() -> list[dict]:
    return catalog()


def _parse_checks(text: str) -> tuple[str, ...]:
    if text.strip() == "all":
        return CHECKS
    return tuple(c.strip() for c in text.split(",") if c.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncprod", description="Verify noncommutative product R-matrix families.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run checks on a family spec")
    v.add_argument("--spec", required=True, help="FamilySpec JSON file or raw R-matrix JSON")
    v.add_argument("--checks", default="all", help=f"comma list from {','.join(CHECKS)} (default all)")
    v.add_argument("--max-degree", type=int, default=4)
    v.add_argument("--max-weight", type=int, default=3)
    v.add_argument("--mode", choices=("exact", "float"))
    v.add_argument("--json", dest="out_path", help="write the JSON report here ('-' for stdout)")
    f = sub.add_parser("families", help="list the built-in family templates")
    f.add_argument("--json", action="store_true", help="print JSON")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "families":
        cat = list_families()
        if args.json:
            print(json.dumps(cat, indent=2))
        else:
            for e in cat:
                mark = "ok" if e["satisfied"] else "VIOLATED"
                print(f"{e['kind']:13} {e['constraint']:40} [{mark}] {json.dumps(e['template']['params'])}")
        return 0

    try:
        cfg = RunConfig(
            spec_path=args.spec,
            checks=_parse_checks(args.checks),
            max_degree=args.max_degree,
            max_weight=args.max_weight,
            mode=args.mode,
            output="json" if args.out_path == "-" else "text",
            out_path=args.out_path,
        )
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report, code, err = run(cfg)
    if report is None:
        print(f"error: {err}", file=sys.stderr)
        return code
    payload = json.dumps(report.to_json(), indent=2)
    if cfg.output == "json":
        print(payload)
    else:
        print(format_text(report))
        if cfg.out_path:
            Path(cfg.out_path).write_text(payload + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
