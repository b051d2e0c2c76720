"""Small dense matrices and sparse exact Gaussian elimination.

Sparse vectors are plain ``dict`` objects mapping a sortable column key to a
nonzero scalar.  Zero tests use truthiness, so the same elimination works for
exact Gaussian rationals and for tolerance-tagged floats.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Hashable, Iterable, Mapping

from .scalar import GaussianRational

ZERO = GaussianRational(0)
ONE = GaussianRational(1)


class Matrix:
    """Immutable dense matrix over the package scalars."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(_scalar(x) for x in row) for row in rows)
        n = len(self.rows)
        m = len(self.rows[0]) if n else 0
        if any(len(r) != m for r in self.rows):
            raise ValueError("ragged matrix")
        self.shape = (n, m)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> Matrix:
        return cls([[ZERO] * (n if m is None else m) for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self.rows)) if self.rows else self

    def conj(self) -> Matrix:
        return Matrix([[x.conjugate() for x in r] for r in self.rows])

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def __add__(self, other: Matrix) -> Matrix:
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, c) -> Matrix:
        return Matrix([[a * c for a in r] for r in self.rows])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    __hash__ = None

    def trace(self):
        acc = ZERO
        for i in range(min(self.shape)):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_antisymmetric(self) -> bool:
        return self == -self.T

    def is_real(self) -> bool:
        return all(x.is_real for r in self.rows for x in r)

    def kron(self, other: Matrix) -> Matrix:
        n, m = self.shape
        p, q = other.shape
        return Matrix(
            [[self.rows[i][j] * other.rows[k][l] for j in range(m) for l in range(q)] for i in range(n) for k in range(p)]
        )

    def inverse(self) -> Matrix:
        """Gauss-Jordan inverse; raises ``ZeroDivisionError`` if singular."""
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c]), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for r in range(n):
                f = aug[r][c]
                if r != c and f:
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return Matrix([row[n:] for row in aug])

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def _scalar(x):
    if isinstance(x, (int,)) or type(x).__name__ in ("mpq", "mpz", "Fraction"):
        return GaussianRational(x)
    return x


# ---------------------------------------------------------------------------
# sparse elimination

SparseVec = dict


def axpy(y: dict, a, x: Mapping) -> dict:
    """In place ``y += a * x`` on sparse vectors, dropping zeros."""
    for k, v in x.items():
        if k in y:
            s = y[k] + a * v
            if s:
                y[k] = s
            else:
                del y[k]
        else:
            s = a * v
            if s:
                y[k] = s
    return y


def scale(x: Mapping, a) -> dict:
    out = {}
    for k, v in x.items():
        s = v * a
        if s:
            out[k] = s
    return out


class Echelon:
    """Incrementally built row echelon form of a set of sparse vectors.

    ``rows[c]`` is the pivot row whose leading (smallest) column is ``c``;
    it is normalised so that ``rows[c][c] == 1`` and holds only columns
    ``>= c``.  Column keys must be mutually comparable.
    """

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self.rows: dict[Hashable, dict] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Return ``v`` minus its projection along the pivot rows."""
        rows = self.rows
        v = dict(v)
        heap = [c for c in v if c in rows]
        heapify(heap)
        while heap:
            c = heappop(heap)
            a = v.get(c)
            if a is None:
                continue
            for k, x in rows[c].items():
                if k in v:
                    s = v[k] - a * x
                    if s:
                        v[k] = s
                    else:
                        del v[k]
                else:
                    s = -a * x
                    if s:
                        v[k] = s
                        if k in rows:
                            heappush(heap, k)
            v.pop(c, None)
        return v

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; return True iff it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        c = min(r)
        inv = r[c].inverse()
        row = {k: x * inv for k, x in r.items()}
        row[c] = ONE
        self.rows[c] = row
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def rref(self) -> Echelon:
        """Back-substitute in place so that pivot rows vanish on other pivots."""
        rows = self.rows
        for c in sorted(rows, reverse=True):
            row = rows[c]
            for k in sorted((k for k in row if k != c and k in rows)):
                a = row.get(k)
                if a:
                    axpy(row, -a, rows[k])
        return self

    def basis(self) -> list[dict]:
        return [self.rows[c] for c in sorted(self.rows)]


def rank(vectors: Iterable[Mapping]) -> int:
    return Echelon(vectors).rank


def nullspace(rows: Iterable[Mapping], columns: Iterable[Hashable]) -> list[dict]:
    """Basis of ``{x : <row, x> = 0 for every row}`` over the given columns.

    Columns absent from every row are free.  Each returned vector has a 1 in
    its own free column.
    """
    ech = Echelon(rows).rref()
    out = []
    for f in columns:
        if f in ech.rows:
            continue
        vec = {f: ONE}
        for c, row in ech.rows.items():
            a = row.get(f)
            if a:
                vec[c] = -a
        out.append(vec)
    return out


def span_basis(vectors: Iterable[Mapping]) -> list[dict]:
    return Echelon(vectors).basis()


# ---------------------------------------------------------------------------
# sparse tensors: dict mapping index tuples to nonzero scalars


def sparse_einsum(subscripts: str, *operands: Mapping) -> dict:
    """Einstein summation over one or two sparse tensors.

    ``sparse_einsum("lagr,rbdm->labgdm", X, Y)`` sums over the letters that
    do not appear after ``->``.  Every operand letter must be a single index.
    """
    lhs, out = subscripts.replace(" ", "").split("->")
    ins = lhs.split(",")
    if len(ins) != len(operands) or len(ins) not in (1, 2):
        raise ValueError("sparse_einsum supports one or two operands")
    result: dict = {}
    if len(ins) == 1:
        (sa,), (A,) = ins, operands
        pos = [sa.index(ch) for ch in out]
        for idx, v in A.items():
            if any(idx[sa.index(ch)] != idx[j] for j, ch in enumerate(sa) if sa.index(ch) != j):
                continue
            key = tuple(idx[p] for p in pos)
            _acc(result, key, v)
        return result
    sa, sb = ins
    A, B = operands
    shared = [ch for ch in dict.fromkeys(sa) if ch in sb]
    a_shared = [sa.index(ch) for ch in shared]
    b_shared = [sb.index(ch) for ch in shared]
    index_b: dict = {}
    for idx, v in B.items():
        index_b.setdefault(tuple(idx[p] for p in b_shared), []).append((idx, v))
    src = []
    for ch in out:
        if ch in sa:
            src.append((0, sa.index(ch)))
        elif ch in sb:
            src.append((1, sb.index(ch)))
        else:
            raise ValueError(f"output index {ch!r} not in inputs")
    for ia, va in A.items():
        for ib, vb in index_b.get(tuple(ia[p] for p in a_shared), ()):
            key = tuple((ia, ib)[w][p] for w, p in src)
            _acc(result, key, va * vb)
    return result


def _acc(d: dict, key, v) -> None:
    if key in d:
        s = d[key] + v
        if s:
            d[key] = s
        else:
            del d[key]
    elif v:
        d[key] = v


def sparse_sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, -v)
    return out
