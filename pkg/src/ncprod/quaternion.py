"""Quaternions as 4x4 real matrices, the J^+/J^- bases and the Hodge star.

Coordinates are ordered (x0, x1, x2, x3) with x0 the real part.  The two
families ``j_matrix("+", a)`` and ``j_matrix("-", a)`` are the matrices of
right multiplication by e_a and of minus left multiplication by e_a.  They
commute with each other, and each family squares and multiplies like the
imaginary units up to the sign of the epsilon term:

    J_a J_b = -delta_ab 1 - eps_abc J_c          (both signs)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .errors import NotAntisymmetric, NotUnit
from .linalg import ONE, ZERO, Matrix
from .scalar import ApproxComplex, GaussianRational, exact

Matrix4 = Matrix

SIGNS = ("+", "-")


def _check_sign(sign: str) -> str:
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return sign


def eps3(a: int, b: int, c: int) -> int:
    """Levi-Civita symbol on {1,2,3} with eps(1,2,3) = +1."""
    return (a - b) * (b - c) * (c - a) // 2


def _perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# Orientation of R^4: eps_{0123} = -1.  With this choice J^+ is self-dual.
ORIENTATION = -1
EPS4 = {p: ORIENTATION * _perm_sign(p) for p in permutations(range(4))}


def j_matrix(sign: str, a: int) -> Matrix4:
    """(J^{+-}_a)_{mn} = -+(d_{0m} d_{an} - d_{am} d_{0n}) + eps_{amn}."""
    _check_sign(sign)
    if a not in (1, 2, 3):
        raise ValueError(f"index a must be 1, 2 or 3, got {a}")
    s = -1 if sign == "+" else 1
    rows = [[ZERO] * 4 for _ in range(4)]
    rows[0][a] = GaussianRational(s)
    rows[a][0] = GaussianRational(-s)
    for m in range(1, 4):
        for n in range(1, 4):
            e = eps3(a, m, n)
            if e:
                rows[m][n] = GaussianRational(e)
    return Matrix(rows)


_J = {(s, a): j_matrix(s, a) for s in SIGNS for a in (1, 2, 3)}


def j_of_vector(sign: str, u: Sequence) -> Matrix4:
    """u1 J_1 + u2 J_2 + u3 J_3 for the given sign."""
    _check_sign(sign)
    if len(u) != 3:
        raise ValueError("expected a 3-vector")
    out = Matrix.zeros(4)
    for a, c in enumerate(u, start=1):
        c = c if isinstance(c, (GaussianRational, ApproxComplex)) else exact(c)
        if c:
            out = out + _J[sign, a] * c
    return out


def opposite(sign: str) -> str:
    return "-" if _check_sign(sign) == "+" else "+"


@dataclass(frozen=True)
class Quaternion:
    x0: GaussianRational
    x1: GaussianRational
    x2: GaussianRational
    x3: GaussianRational

    def __init__(self, x0=0, x1=0, x2=0, x3=0):
        for name, v in zip(("x0", "x1", "x2", "x3"), (x0, x1, x2, x3)):
            v = exact(v)
            if not v.is_real:
                raise ValueError("quaternion coordinates must be real")
            object.__setattr__(self, name, v)

    @classmethod
    def of(cls, coords: Sequence) -> Quaternion:
        if len(coords) != 4:
            raise ValueError("a quaternion needs 4 coordinates")
        return cls(*coords)

    @property
    def coords(self) -> tuple:
        return (self.x0, self.x1, self.x2, self.x3)

    def __mul__(self, other: Quaternion) -> Quaternion:
        a0, a1, a2, a3 = self.coords
        b0, b1, b2, b3 = other.coords
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def conjugate(self) -> Quaternion:
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm2(self):
        return sum((x * x for x in self.coords), ZERO)

    @property
    def is_unit(self) -> bool:
        return self.norm2() == 1

    def require_unit(self) -> Quaternion:
        if not self.is_unit:
            raise NotUnit(f"quaternion {self} has squared norm {self.norm2()}, expected 1")
        return self

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


UNIT_BASIS = tuple(Quaternion.of([1 if i == j else 0 for j in range(4)]) for i in range(4))


def action_matrix(side: str, q: Quaternion) -> Matrix4:
    """Matrix of p -> q p (side "left") or p -> p q (side "right").

    Column b holds the coordinates of the image of e_b.
    """
    if side == "left":
        images = [q * e for e in UNIT_BASIS]
    elif side == "right":
        images = [e * q for e in UNIT_BASIS]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return Matrix([[images[b].coords[m] for b in range(4)] for m in range(4)])


def j_of_quaternion(sign: str, q: Quaternion) -> Matrix4:
    """q0 1 + q1 J_1 + q2 J_2 + q3 J_3.

    For sign "+" this is right multiplication by q; for sign "-" it is left
    multiplication by the conjugate of q.
    """
    return Matrix.identity(4) * q.x0 + j_of_vector(sign, (q.x1, q.x2, q.x3))


def pairing(m: Matrix, n: Matrix):
    """<M, N> = tr(M^T N) / 4."""
    return (m.T @ n).trace() / 4


class TwoForm:
    """Antisymmetric 4x4 matrix viewed as a two-form on R^4."""

    __slots__ = ("f",)

    def __init__(self, f):
        f = f if isinstance(f, Matrix) else Matrix(f)
        if f.shape != (4, 4):
            raise ValueError("a two-form on R^4 is a 4x4 matrix")
        if not f.is_antisymmetric():
            raise NotAntisymmetric("two-form must satisfy F^T = -F")
        self.f = f

    def __eq__(self, other):
        if isinstance(other, TwoForm):
            return self.f == other.f
        if isinstance(other, Matrix):
            return self.f == other
        return NotImplemented

    __hash__ = None

    def __neg__(self) -> TwoForm:
        return TwoForm(-self.f)

    def __repr__(self):
        return f"TwoForm({self.f!r})"


def hodge_star(f) -> TwoForm:
    """(*F)_{mn} = 1/2 sum_{rs} eps_{mnrs} F_{rs}."""
    f = f if isinstance(f, TwoForm) else TwoForm(f)
    half = GaussianRational(1) / 2
    rows = [[ZERO] * 4 for _ in range(4)]
    for (m, n, r, s), e in EPS4.items():
        x = f.f[r, s]
        if x:
            rows[m][n] = rows[m][n] + x * e
    return TwoForm(Matrix([[x * half for x in row] for row in rows]))


__all__ = [
    "EPS4",
    "ONE",
    "Matrix4",
    "Quaternion",
    "TwoForm",
    "action_matrix",
    "eps3",
    "hodge_star",
    "j_matrix",
    "j_of_quaternion",
    "j_of_vector",
    "opposite",
    "pairing",
]
