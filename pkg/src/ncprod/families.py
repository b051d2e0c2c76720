"""R-matrix families of the form R = A (x) B + i C (x) D.

Every kind is built from four real matrices through

    R[l, a, b, m] = A[l][m] B[a][b] + i C[l][m] D[a][b]

after its parameter constraint has been verified exactly (or within the
tolerance in float mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .errors import ConstraintViolated, MatrixShapeMismatch, NotOrthogonal, NotUnitVector, SpecParseError
from .linalg import Matrix, commutator
from .quaternion import j_of_vector, opposite
from .rmatrix import RMatrix
from .scalar import I, ApproxComplex, GaussianRational, scalar_from_json

KINDS = ("classical", "theta4", "toric8", "quaternionic", "stratum1", "stratum2", "abcd")
SIGNED = {"toric8", "quaternionic", "stratum1", "stratum2"}
FIXED_DIMS = {"theta4": (2, 2), "toric8": (4, 4), "quaternionic": (4, 4), "stratum1": (4, 4), "stratum2": (4, 4)}

CONSTRAINTS = {
    "classical": "none",
    "theta4": "u^2+v^2=1",
    "toric8": "u^2+v^2=1",
    "quaternionic": "(u0)^2+(u1)^2+(u2)^2=1",
    "stratum1": "|v|^2|w|^2+u^2=1",
    "stratum2": "((u1)^2+(u2)^2)(t^2+|w|^2|v|^2)=1",
    "abcd": "A^2(x)B^2+C^2(x)D^2=1(x)1",
}


@dataclass
class FamilySpec:
    kind: str
    params: dict = field(default_factory=dict)
    sign: str = "+"
    mode: str = "exact"
    n1: int | None = None
    n2: int | None = None
    tol: float = 1e-12

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecParseError(f"unknown family kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.sign not in ("+", "-"):
            raise SpecParseError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.mode not in ("exact", "float"):
            raise SpecParseError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if self.kind in FIXED_DIMS:
            fixed = FIXED_DIMS[self.kind]
            given = (self.n1 or fixed[0], self.n2 or fixed[1])
            if given != fixed:
                raise SpecParseError(f"{self.kind} requires (n1, n2) = {fixed}, got {given}")
            self.n1, self.n2 = fixed

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "sign": self.sign, "params": self.params, "mode": self.mode}
        if self.n1 is not None:
            out["n1"], out["n2"] = self.n1, self.n2
        if self.mode == "float":
            out["tol"] = self.tol
        return out

    @classmethod
    def from_json(cls, obj: dict) -> FamilySpec:
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SpecParseError("family spec must be a JSON object with a 'kind' key")
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise SpecParseError("'params' must be an object")
        return cls(
            kind=obj["kind"],
            params=params,
            sign=obj.get("sign", "+"),
            mode=obj.get("mode", "exact"),
            n1=obj.get("n1"),
            n2=obj.get("n2"),
            tol=float(obj.get("tol", 1e-12)),
        )


# ---------------------------------------------------------------------------
# parameter parsing


class _Params:
    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.raw = spec.params
        self.float = spec.mode == "float"

    def scalar(self, name: str, default=None):
        if name not in self.raw:
            if default is not None:
                return self._conv(default)
            raise SpecParseError(f"{self.spec.kind} needs parameter {name!r}")
        return self._conv(self.raw[name])

    def vector(self, name: str, length: int = 3):
        v = self.raw.get(name)
        if not isinstance(v, (list, tuple)) or len(v) != length:
            raise SpecParseError(f"{self.spec.kind} needs {name!r} as a list of {length} numbers")
        return [self._conv(x) for x in v]

    def matrix(self, name: str):
        m = self.raw.get(name)
        if not isinstance(m, (list, tuple)) or not m or not all(isinstance(r, (list, tuple)) for r in m):
            raise SpecParseError(f"{self.spec.kind} needs {name!r} as a nested list")
        return Matrix([[self._conv(x) for x in row] for row in m])

    def _conv(self, x):
        if isinstance(x, (GaussianRational, ApproxComplex)):
            return x
        try:
            if self.float:
                return scalar_from_json(x, self.spec.tol)
            if isinstance(x, float):
                raise SpecParseError(f"float {x!r} in exact mode; give a rational string such as '3/5'")
            return scalar_from_json(x)
        except (TypeError, ValueError) as exc:
            raise SpecParseError(f"cannot parse parameter value {x!r}: {exc}") from exc


def _is_one(x, spec: FamilySpec) -> bool:
    if isinstance(x, ApproxComplex):
        return abs(x.re - 1) <= spec.tol and abs(x.im) <= spec.tol
    return x == 1


def _is_zero(x, spec: FamilySpec) -> bool:
    if isinstance(x, ApproxComplex):
        return abs(x.re) <= spec.tol and abs(x.im) <= spec.tol
    return not x


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), GaussianRational(0))


def _require(constraint: str, value, spec: FamilySpec) -> None:
    if not _is_one(value, spec):
        raise ConstraintViolated(constraint, value)


def _unit(name: str, v, spec: FamilySpec):
    n2 = _dot(v, v)
    if not _is_one(n2, spec):
        raise NotUnitVector(f"{name} = {[str(x) for x in v]} has squared norm {n2}, expected 1")
    return v


def _orthogonal(n1, n2, spec: FamilySpec) -> None:
    d = _dot(n1, n2)
    if not _is_zero(d, spec):
        raise NotOrthogonal(f"n1 . n2 = {d}, expected 0")


# ---------------------------------------------------------------------------
# construction


def abcd_tensor(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> RMatrix:
    """R[l,a,b,m] = A[l][m] B[a][b] + i C[l][m] D[a][b], without validation."""
    n1, n2 = a.shape[0], b.shape[0]
    if a.shape != (n1, n1) or c.shape != (n1, n1) or b.shape != (n2, n2) or d.shape != (n2, n2):
        raise MatrixShapeMismatch(
            f"A, C must be {n1}x{n1} and B, D {n2}x{n2}; got {a.shape}, {b.shape}, {c.shape}, {d.shape}"
        )
    ent = {}
    for l in range(n1):
        for m in range(n1):
            alm, clm = a[l, m], c[l, m]
            if not alm and not clm:
                continue
            for al in range(n2):
                for be in range(n2):
                    v = alm * b[al, be] + I * clm * d[al, be]
                    if v:
                        ent[l, al, be, m] = v
    return RMatrix(n1, n2, ent)


@dataclass
class AbcdReport:
    a_symmetric_real: bool
    b_symmetric_real: bool
    c_antisymmetric_real: bool
    d_antisymmetric_real: bool
    ac_commute: bool
    bd_commute: bool
    squares_sum_to_identity: bool
    squares_defect: Matrix | None = None

    def conditions(self) -> dict[str, bool]:
        return {
            "a_symmetric_real": self.a_symmetric_real,
            "b_symmetric_real": self.b_symmetric_real,
            "c_antisymmetric_real": self.c_antisymmetric_real,
            "d_antisymmetric_real": self.d_antisymmetric_real,
            "ac_commute": self.ac_commute,
            "bd_commute": self.bd_commute,
            "squares_sum_to_identity": self.squares_sum_to_identity,
        }

    @property
    def passed(self) -> bool:
        return all(self.conditions().values())

    def failures(self) -> list[str]:
        return [k for k, v in self.conditions().items() if not v]


def validate_abcd(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> AbcdReport:
    n1, n2 = a.shape[0], b.shape[0]
    if a.shape != (n1, n1) or c.shape != (n1, n1) or b.shape != (n2, n2) or d.shape != (n2, n2):
        raise MatrixShapeMismatch(
            f"A, C must be {n1}x{n1} and B, D {n2}x{n2}; got {a.shape}, {b.shape}, {c.shape}, {d.shape}"
        )
    squares = (a @ a).kron(b @ b) + (c @ c).kron(d @ d)
    defect = squares - Matrix.identity(n1 * n2)
    return AbcdReport(
        a_symmetric_real=a.is_real() and a.is_symmetric(),
        b_symmetric_real=b.is_real() and b.is_symmetric(),
        c_antisymmetric_real=c.is_real() and c.is_antisymmetric(),
        d_antisymmetric_real=d.is_real() and d.is_antisymmetric(),
        ac_commute=commutator(a, c).is_zero(),
        bd_commute=commutator(b, d).is_zero(),
        squares_sum_to_identity=defect.is_zero(),
        squares_defect=defect,
    )


def family_matrices(spec: FamilySpec) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Validate the parameters of ``spec`` and return its (A, B, C, D)."""
    p = _Params(spec)
    s, t = spec.sign, opposite(spec.sign)
    kind = spec.kind

    if kind == "classical":
        n1 = spec.n1 or int(spec.params.get("n1", 1))
        n2 = spec.n2 or int(spec.params.get("n2", 1))
        one1, one2 = Matrix.identity(n1), Matrix.identity(n2)
        return one1, one2, Matrix.zeros(n1), Matrix.zeros(n2)

    if kind in ("theta4", "toric8"):
        if p.float and "theta" in spec.params:
            th = float(spec.params["theta"])
            u, v = ApproxComplex(math.cos(th), 0, spec.tol), ApproxComplex(math.sin(th), 0, spec.tol)
        else:
            u, v = p.scalar("u"), p.scalar("v")
        _require(CONSTRAINTS[kind], u * u + v * v, spec)
        if kind == "theta4":
            rot = Matrix([[0, -1], [1, 0]])
            return Matrix.identity(2) * u, Matrix.identity(2), rot, -rot * v
        n = _unit("n", p.vector("n"), spec)
        return Matrix.identity(4) * u, Matrix.identity(4), j_of_vector(s, n), j_of_vector(t, n) * v

    if kind == "quaternionic":
        if "u" in spec.params:
            u0, u1, u2 = p.vector("u")
        else:
            u0, u1, u2 = p.scalar("u0"), p.scalar("u1"), p.scalar("u2")
        _require(CONSTRAINTS[kind], u0 * u0 + u1 * u1 + u2 * u2, spec)
        n1 = _unit("n1", p.vector("n1"), spec)
        n2 = _unit("n2", p.vector("n2"), spec)
        _orthogonal(n1, n2, spec)
        uvec = [u1 * x + u2 * y for x, y in zip(n1, n2)]
        return Matrix.identity(4) * u0, Matrix.identity(4), j_of_vector(s, n1), j_of_vector(s, uvec)

    if kind == "stratum1":
        n = _unit("n", p.vector("n"), spec)
        u, v, w = p.scalar("u"), p.vector("v"), p.vector("w")
        _require(CONSTRAINTS[kind], _dot(v, v) * _dot(w, w) + u * u, spec)
        jn_s, jn_t = j_of_vector(s, n), j_of_vector(t, n)
        return jn_s @ j_of_vector(t, v), jn_t @ j_of_vector(s, w), jn_s * u, jn_t

    if kind == "stratum2":
        n1 = _unit("n1", p.vector("n1"), spec)
        n2 = _unit("n2", p.vector("n2"), spec)
        _orthogonal(n1, n2, spec)
        u1, u2, tt = p.scalar("u1"), p.scalar("u2"), p.scalar("t")
        v, w = p.vector("v"), p.vector("w")
        _require(CONSTRAINTS[kind], (u1 * u1 + u2 * u2) * (tt * tt + _dot(w, w) * _dot(v, v)), spec)
        uvec = [u1 * x + u2 * y for x, y in zip(n1, n2)]
        ju = j_of_vector(s, uvec)
        jn1 = j_of_vector(s, n1)
        return jn1 @ j_of_vector(t, v), ju @ j_of_vector(t, w), jn1, ju * tt

    # abcd
    a, b, c, d = (p.matrix(k) for k in "ABCD")
    rep = validate_abcd(a, b, c, d)
    if not rep.passed:
        bad = rep.failures()
        if bad == ["squares_sum_to_identity"]:
            worst = max((x.magnitude() for row in rep.squares_defect for x in row), default=0.0)
            raise ConstraintViolated(CONSTRAINTS["abcd"], 1 + worst, worst)
        raise ConstraintViolated(", ".join(bad), 0, None)
    return a, b, c, d


def make_family(spec: FamilySpec) -> RMatrix:
    return abcd_tensor(*family_matrices(spec))


def make(kind: str, sign: str = "+", mode: str = "exact", **params) -> RMatrix:
    """Shorthand: ``make("theta4", u="3/5", v="4/5")``."""
    return make_family(FamilySpec(kind=kind, params=params, sign=sign, mode=mode))


# ---------------------------------------------------------------------------
# catalog

TEMPLATES: dict[str, dict] = {
    "classical": {"kind": "classical", "params": {}, "n1": 2, "n2": 2},
    "theta4": {"kind": "theta4", "params": {"u": "3/5", "v": "4/5"}},
    "toric8": {"kind": "toric8", "sign": "+", "params": {"u": "3/5", "v": "4/5", "n": [0, 0, 1]}},
    "quaternionic": {
        "kind": "quaternionic",
        "sign": "+",
        "params": {"u0": "1/3", "u1": "2/3", "u2": "2/3", "n1": [1, 0, 0], "n2": [0, 1, 0]},
    },
    "stratum1": {
        "kind": "stratum1",
        "sign": "+",
        "params": {"n": [0, 0, 1], "u": "3/5", "v": ["4/5", 0, 0], "w": [1, 0, 0]},
    },
    "stratum2": {
        "kind": "stratum2",
        "sign": "+",
        "params": {
            "n1": [1, 0, 0],
            "n2": [0, 1, 0],
            "u1": "2/3",
            "u2": "2/3",
            "t": "3/4",
            "v": ["3/4", 0, 0],
            "w": [0, 1, 0],
        },
    },
    "abcd": {
        "kind": "abcd",
        "params": {
            "A": [["3/5", 0], [0, "3/5"]],
            "B": [[1, 0], [0, 1]],
            "C": [[0, -1], [1, 0]],
            "D": [[0, "4/5"], ["-4/5", 0]],
        },
    },
}


def catalog() -> list[dict]:
    """One entry per kind: template spec, constraint formula and whether it holds."""
    out = []
    for kind in KINDS:
        spec = FamilySpec.from_json(TEMPLATES[kind])
        try:
            make_family(spec)
            ok = True
        except (ConstraintViolated, NotUnitVector, NotOrthogonal):
            ok = False
        out.append({"kind": kind, "constraint": CONSTRAINTS[kind], "template": spec.to_json(), "satisfied": ok})
    return out

