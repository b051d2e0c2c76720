"""The R tensor, the big involutive R on the combined generator space, and
the axiom battery.

Storage convention: ``R[l, a, b, m]`` is the coefficient in

    x1^l x2^a = sum_{b, m} R[l, a, b, m] x2^b x1^m

so the index order is (l, a, b, m) with shape (n1, n2, n2, n1), upper pair
(l, a) first.  All indices are 0-based.  Single letters in the einsum
strings below follow the same names: l, m, n, r are block-1 indices and
a, b, g, d are block-2 indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

from .errors import SpecParseError
from .linalg import ONE, Matrix, sparse_einsum, sparse_sub
from .scalar import ApproxComplex, GaussianRational, scalar_from_json, scalar_to_json


class RMatrix:
    """Rank-4 tensor R[l, a, b, m] together with its block sizes."""

    __slots__ = ("n1", "n2", "_nz", "__weakref__")

    def __init__(self, n1: int, n2: int, entries):
        if n1 < 1 or n2 < 1:
            raise ValueError("block sizes must be positive")
        self.n1, self.n2 = n1, n2
        nz = {}
        if isinstance(entries, dict):
            items = entries.items()
        else:
            items = _nested_items(entries, (n1, n2, n2, n1))
        for idx, v in items:
            l, a, b, m = idx
            if not (0 <= l < n1 and 0 <= a < n2 and 0 <= b < n2 and 0 <= m < n1):
                raise IndexError(f"index {idx} out of range for shape {self.shape}")
            if not isinstance(v, (GaussianRational, ApproxComplex)):
                v = GaussianRational(v)
            if v:
                nz[tuple(idx)] = v
        self._nz = nz

    @classmethod
    def from_function(cls, n1: int, n2: int, f: Callable[[int, int, int, int], object]) -> RMatrix:
        return cls(
            n1,
            n2,
            {
                (l, a, b, m): f(l, a, b, m)
                for l in range(n1)
                for a in range(n2)
                for b in range(n2)
                for m in range(n1)
            },
        )

    @classmethod
    def classical(cls, n1: int, n2: int) -> RMatrix:
        return cls(n1, n2, {(l, a, a, l): ONE for l in range(n1) for a in range(n2)})

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.n1, self.n2, self.n2, self.n1)

    def __getitem__(self, idx) -> GaussianRational:
        return self._nz.get(tuple(idx), _zero_like(self))

    def nonzero(self) -> dict:
        """Sparse view ``{(l, a, b, m): value}``; do not mutate."""
        return self._nz

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, GaussianRational) for v in self._nz.values())

    def conj(self) -> RMatrix:
        return RMatrix(self.n1, self.n2, {k: v.conjugate() for k, v in self._nz.items()})

    def with_entry(self, idx, value) -> RMatrix:
        nz = dict(self._nz)
        nz[tuple(idx)] = value
        return RMatrix(self.n1, self.n2, nz)

    def as_matrix(self) -> Matrix:
        """Rows indexed by (l, a), columns by (b, m), both row-major."""
        z = _zero_like(self)
        return Matrix(
            [
                [self._nz.get((l, a, b, m), z) for b in range(self.n2) for m in range(self.n1)]
                for l in range(self.n1)
                for a in range(self.n2)
            ]
        )

    def __eq__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return not sparse_sub(self._nz, other._nz)

    __hash__ = None

    def __repr__(self):
        return f"RMatrix(n1={self.n1}, n2={self.n2}, nonzero={len(self._nz)})"

    # -- JSON -----------------------------------------------------------
    def to_json(self) -> dict:
        z = _zero_like(self)
        return {
            "n1": self.n1,
            "n2": self.n2,
            "entries": [
                [
                    [[scalar_to_json(self._nz.get((l, a, b, m), z)) for m in range(self.n1)] for b in range(self.n2)]
                    for a in range(self.n2)
                ]
                for l in range(self.n1)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, tol: float | None = None) -> RMatrix:
        try:
            n1, n2, raw = int(obj["n1"]), int(obj["n2"]), obj["entries"]
            entries = {
                idx: scalar_from_json(v, tol) for idx, v in _nested_items(raw, (n1, n2, n2, n1))
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed R-matrix JSON: {exc}") from exc
        return cls(n1, n2, entries)


def _zero_like(r: RMatrix):
    for v in r._nz.values():
        if isinstance(v, ApproxComplex):
            return ApproxComplex(0.0, 0.0, v.tol)
        break
    return GaussianRational(0)


def _nested_items(arr, shape: tuple[int, ...], prefix: tuple = ()) -> Iterable:
    if len(arr) != shape[0]:
        raise ValueError(f"expected length {shape[0]} at index prefix {prefix}, got {len(arr)}")
    for i, sub in enumerate(arr):
        if len(shape) == 1:
            yield prefix + (i,), sub
        else:
            yield from _nested_items(sub, shape[1:], prefix + (i,))


# ---------------------------------------------------------------------------
# big R on the combined space: indices 0..n1-1 are x1, n1..n1+n2-1 are x2


class BigR:
    """Sparse rank-4 tensor BR[a, b, c, d] with x^a x^b = BR[a,b,c,d] x^c x^d."""

    __slots__ = ("n", "n1", "entries")

    def __init__(self, n1: int, n: int, entries: dict):
        self.n1, self.n = n1, n
        self.entries = entries

    def __getitem__(self, idx):
        return self.entries.get(tuple(idx), GaussianRational(0))

    def as_matrix(self) -> Matrix:
        n = self.n
        z = GaussianRational(0)
        return Matrix(
            [
                [self.entries.get((a, b, c, d), z) for c in range(n) for d in range(n)]
                for a in range(n)
                for b in range(n)
            ]
        )


def assemble_big_r(r: RMatrix) -> BigR:
    n1, n2 = r.n1, r.n2
    n = n1 + n2
    ent: dict = {}
    # flip on each commutative block
    for block in (range(n1), range(n1, n)):
        for a in block:
            for b in block:
                ent[a, b, b, a] = ONE
    for (l, a, b, m), v in r.nonzero().items():
        ent[l, n1 + a, n1 + b, m] = v
        ent[n1 + a, l, m, n1 + b] = v.conjugate()
    return BigR(n1, n, ent)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class CheckResult:
    name: str
    formula: str
    passed: bool
    residual: float
    defects: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "formula": self.formula,
            "passed": self.passed,
            "residual": self.residual,
            "defects": [[list(k), scalar_to_json(v)] for k, v in sorted(self.defects.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> CheckResult:
        return cls(
            obj["name"],
            obj["formula"],
            bool(obj["passed"]),
            float(obj["residual"]),
            {tuple(k): scalar_from_json(v) for k, v in obj["defects"]},
        )


def _result(name: str, formula: str, defect: dict) -> CheckResult:
    residual = max((v.magnitude() for v in defect.values()), default=0.0)
    return CheckResult(name, formula, not defect, residual, defect)


def _delta(out: str, pairs: list[tuple[str, str]], sizes: dict[str, int]) -> dict:
    """Product of Kronecker deltas d(p, q) over the letter pairs, as a sparse tensor."""
    rep = {}
    for p, q in pairs:
        rep[p] = rep[q] = p
    letters = sorted(set(rep.values()))
    result = {}
    for vals in product(*(range(sizes[ch]) for ch in letters)):
        env = dict(zip(letters, vals))
        result[tuple(env[rep[ch]] for ch in out)] = ONE
    return result


# key: block pattern of the three free upper indices.
# value: (lhs operands, lhs subscripts, rhs operands, rhs subscripts, output)
# with "R" for R and "C" for its conjugate.
YANG_BAXTER = {
    "x1x2x2": ("RR", "lagr,rbdm", "RR", "lbdr,ragm", "labgdm"),
    "x2x2x1": ("CC", "lagr,rbdm", "CC", "lbdr,ragm", "labgdm"),
    "x2x1x2": ("CR", "lagr,rbdm", "RC", "lbdr,ragm", "labgdm"),
    "x1x1x2": ("RR", "lagn,mgbr", "RR", "magr,lgbn", "lmabnr"),
    "x2x1x1": ("CC", "lagn,mgbr", "CC", "magr,lgbn", "lmabnr"),
    "x1x2x1": ("RC", "lagn,mgbr", "CR", "magr,lgbn", "lmabnr"),
}


def _yb_formula(key: str) -> str:
    lo, ls, ro, rs, _ = YANG_BAXTER[key]

    def side(ops, subs):
        return " ".join(
            f"{'R' if o == 'R' else 'conj(R)'}[{','.join(sub)}]" for o, sub in zip(ops, subs.split(","))
        )

    return f"{side(lo, ls)} = {side(ro, rs)}"


def _yb_defect(key: str, R: dict, C: dict) -> dict:
    lo, ls, ro, rs, out = YANG_BAXTER[key]
    pick = {"R": R, "C": C}
    lhs = sparse_einsum(f"{ls}->{out}", pick[lo[0]], pick[lo[1]])
    rhs = sparse_einsum(f"{rs}->{out}", pick[ro[0]], pick[ro[1]])
    return sparse_sub(lhs, rhs)


@dataclass
class AxiomReport:
    reality: CheckResult
    involution: CheckResult
    yang_baxter: dict[str, CheckResult]
    centrality: dict[str, CheckResult]
    euclidean: dict[str, CheckResult]

    def results(self) -> list[CheckResult]:
        return [
            self.reality,
            self.involution,
            *self.yang_baxter.values(),
            *self.centrality.values(),
            *self.euclidean.values(),
        ]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.results())

    def failures(self) -> list[str]:
        return [c.name for c in self.results() if not c.passed]

    def to_json(self) -> dict:
        return {
            "reality": self.reality.to_json(),
            "involution": self.involution.to_json(),
            "yang_baxter": {k: v.to_json() for k, v in self.yang_baxter.items()},
            "centrality": {k: v.to_json() for k, v in self.centrality.items()},
            "euclidean": {k: v.to_json() for k, v in self.euclidean.items()},
            "passed": self.passed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> AxiomReport:
        return cls(
            CheckResult.from_json(obj["reality"]),
            CheckResult.from_json(obj["involution"]),
            {k: CheckResult.from_json(v) for k, v in obj["yang_baxter"].items()},
            {k: CheckResult.from_json(v) for k, v in obj["centrality"].items()},
            {k: CheckResult.from_json(v) for k, v in obj["euclidean"].items()},
        )


def check_involution(big: BigR) -> CheckResult:
    """BR o BR = identity on E (x) E."""
    sq = sparse_einsum("abef,efcd->abcd", big.entries, big.entries)
    ident = {(a, b, a, b): ONE for a in range(big.n) for b in range(big.n)}
    return _result("involution", "sum_{e,f} BR[a,b,e,f] BR[e,f,c,d] = d(a,c) d(b,d)", sparse_sub(sq, ident))


def check_reality(r: RMatrix) -> CheckResult:
    R, C = r.nonzero(), r.conj().nonzero()
    sizes = {"l": r.n1, "n": r.n1, "a": r.n2, "g": r.n2}
    lhs = sparse_einsum("labm,mbgn->lagn", C, R)
    rhs = _delta("lagn", [("l", "n"), ("a", "g")], sizes)
    return _result(
        "reality",
        "sum_{b,m} conj(R)[l,a,b,m] R[m,b,g,n] = d(l,n) d(a,g)",
        sparse_sub(lhs, rhs),
    )


def check_axioms(r: RMatrix) -> AxiomReport:
    R, C = r.nonzero(), r.conj().nonzero()
    n1, n2 = r.n1, r.n2

    yb = {
        key: _result(f"yang_baxter[{key}]", _yb_formula(key), _yb_defect(key, R, C)) for key in YANG_BAXTER
    }

    # sum over the contracted x1 index of the x1 norm passing x2
    cent1 = sparse_sub(
        sparse_einsum("lgbn,lbam->gnam", R, R),
        _delta("gnam", [("g", "a"), ("m", "n")], {"g": n2, "a": n2, "m": n1, "n": n1}),
    )
    # sum over the contracted x2 index of the x2 norm passing x1
    cent2 = sparse_sub(
        sparse_einsum("labr,ragm->lbgm", R, R),
        _delta("lbgm", [("l", "m"), ("b", "g")], {"l": n1, "m": n1, "b": n2, "g": n2}),
    )
    centrality = {
        "x1_norm": _result("centrality[x1_norm]", "sum_{l,b} R[l,g,b,n] R[l,b,a,m] = d(g,a) d(m,n)", cent1),
        "x2_norm": _result("centrality[x2_norm]", "sum_{a,r} R[l,a,b,r] R[r,a,g,m] = d(l,m) d(b,g)", cent2),
    }

    # R[l,b,a,m] = R[m,a,b,l] = conj(R)[m,b,a,l]
    swapped = sparse_einsum("mabl->lbam", R)
    swapped_conj = sparse_einsum("mbal->lbam", C)
    sym = sparse_sub(R, swapped)
    for k, v in sparse_sub(R, swapped_conj).items():
        sym.setdefault(k, v)
    euclid = {
        "index_symmetry": _result(
            "euclidean[index_symmetry]", "R[l,b,a,m] = R[m,a,b,l] = conj(R)[m,b,a,l]", sym
        ),
        "chain_block1": _result(
            "euclidean[chain_block1]",
            "R[l,a,b,r] R[r,d,g,m] = R[l,d,g,r] R[r,a,b,m]",
            sparse_sub(
                sparse_einsum("labr,rdgm->labdgm", R, R),
                sparse_einsum("ldgr,rabm->labdgm", R, R),
            ),
        ),
        "chain_block2": _result(
            "euclidean[chain_block2]",
            "R[l,a,g,n] R[m,g,b,r] = R[m,a,g,r] R[l,g,b,n]",
            sparse_sub(
                sparse_einsum("lagn,mgbr->lmabnr", R, R),
                sparse_einsum("magr,lgbn->lmabnr", R, R),
            ),
        ),
    }

    return AxiomReport(
        reality=check_reality(r),
        involution=check_involution(assemble_big_r(r)),
        yang_baxter=yb,
        centrality=centrality,
        euclidean=euclid,
    )


def yang_baxter_defect(big: BigR) -> dict:
    """(BR x 1)(1 x BR)(BR x 1) - (1 x BR)(BR x 1)(1 x BR) as a sparse 6-tensor."""
    e = big.entries
    lhs = sparse_einsum("abcgif,gide->abcdef", sparse_einsum("abgh,hcif->abcgif", e, e), e)
    rhs = sparse_einsum("abcdhi,ihef->abcdef", sparse_einsum("bcgh,agdi->abcdhi", e, e), e)
    return sparse_sub(lhs, rhs)


def conjugate_inverse_defect(r: RMatrix) -> dict:
    """Compare inv(R) with the conjugate of R under swapped index pairs.

    With R read as the map (b, m) -> (l, a), the expected inverse entry at
    row (b, m), column (n, g) is conj(R)[m, b, g, n].  Raises
    ``ZeroDivisionError`` when R is singular.
    """
    n1, n2 = r.n1, r.n2
    inv = r.as_matrix().inverse()
    out = {}
    for b in range(n2):
        for m in range(n1):
            for n in range(n1):
                for g in range(n2):
                    d = inv[b * n1 + m, n * n2 + g] - r[m, b, g, n].conjugate()
                    if d:
                        out[b, m, n, g] = d
    return out
