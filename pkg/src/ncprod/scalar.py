"""Coefficient fields: exact Gaussian rationals and tolerance-tagged floats.

Every matrix, tensor and algebra element in the package carries scalars from
one of the two classes below.  Both implement the same small protocol
(``+ - * /``, ``conjugate()``, ``abs2()``, truthiness meaning "nonzero"), so
the algebraic code never needs to know which mode it is running in.
"""

from __future__ import annotations

import math
from numbers import Rational

from gmpy2 import isqrt, mpq, mpz

from .errors import ZeroSeed

_ZERO = mpq(0)
_ONE = mpq(1)


def to_mpq(x) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to ``mpq``."""
    if type(x) is mpq:
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, (int, Rational)) or type(x).__name__ == "mpz":
        return mpq(x)
    if isinstance(x, float):
        raise TypeError(f"refusing to convert float {x!r} to an exact rational")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _new(re, im):
    z = object.__new__(GaussianRational)
    z.re = re
    z.im = im
    return z


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            self.re, self.im = re.re, re.im + to_mpq(im)
            return
        self.re = to_mpq(re)
        self.im = to_mpq(im)

    # -- coercion -------------------------------------------------------
    @staticmethod
    def _lift(other):
        t = type(other)
        if t is GaussianRational:
            return other
        if t is int or t is mpq or isinstance(other, (int, Rational)):
            return _new(mpq(other), _ZERO)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _new(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b:
            return _new(a * c, a * d)
        if not d:
            return _new(a * c, b * c)
        return _new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return _new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> GaussianRational:
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return _new(self.re / n, -self.im / n)

    def conjugate(self) -> GaussianRational:
        return _new(self.re, -self.im)

    def abs2(self) -> mpq:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def magnitude(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    # -- comparison / hashing --------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"GaussianRational({_fmt(self.re)!r}, {_fmt(self.im)!r})"

    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        if not self.re:
            return f"{_fmt(self.im)}i"
        sign = "-" if self.im < 0 else "+"
        return f"{_fmt(self.re)}{sign}{_fmt(abs(self.im))}i"

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


I = _new(_ZERO, _ONE)


def _fmt(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ApproxComplex:
    """Double-precision complex number whose equality is tolerance based.

    Equality and truthiness compare each component against ``tol``; this is
    deliberately not transitive, so instances are unhashable.
    """

    __slots__ = ("re", "im", "tol")
    __hash__ = None

    def __init__(self, re=0.0, im=0.0, tol: float = 1e-12):
        if isinstance(re, (GaussianRational, ApproxComplex)):
            re, im = float(re.re), float(re.im) + float(im)
        self.re = float(re)
        self.im = float(im)
        self.tol = tol

    def _lift(self, other):
        if type(other) is ApproxComplex:
            return other
        if isinstance(other, GaussianRational):
            return ApproxComplex(float(other.re), float(other.im), self.tol)
        if isinstance(other, complex):
            return ApproxComplex(other.real, other.imag, self.tol)
        if isinstance(other, (int, float, Rational)) or type(other) is mpq:
            return ApproxComplex(float(other), 0.0, self.tol)
        return None

    def _mk(self, re, im):
        z = object.__new__(ApproxComplex)
        z.re, z.im, z.tol = re, im, self.tol
        return z

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._mk(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._mk(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return self._mk(-self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0.0:
            raise ZeroDivisionError("inverse of zero")
        return self._mk(self.re / n, -self.im / n)

    def conjugate(self):
        return self._mk(self.re, -self.im)

    def abs2(self) -> float:
        return self.re * self.re + self.im * self.im

    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    def __bool__(self):
        return abs(self.re) > self.tol or abs(self.im) > self.tol

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return abs(self.re - o.re) <= self.tol and abs(self.im - o.im) <= self.tol

    @property
    def is_real(self) -> bool:
        return abs(self.im) <= self.tol

    def __repr__(self):
        return f"ApproxComplex({self.re!r}, {self.im!r}, tol={self.tol!r})"

    def __str__(self):
        return f"{self.re:.12g}{self.im:+.12g}i"

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


Scalar = GaussianRational | ApproxComplex


def exact(x) -> GaussianRational:
    """Coerce a rational-ish value (or a GaussianRational) to GaussianRational."""
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


def scalar_to_json(z):
    """Real rationals become ``"p/q"``; complex values ``{"re": .., "im": ..}``."""
    if isinstance(z, ApproxComplex):
        return {"re": z.re, "im": z.im}
    z = exact(z)
    if z.is_real:
        return _fmt(z.re)
    return {"re": _fmt(z.re), "im": _fmt(z.im)}


def scalar_from_json(obj, tol: float | None = None):
    """Inverse of :func:`scalar_to_json`.

    Floats (or any value when ``tol`` is given) produce an ApproxComplex.
    """
    if isinstance(obj, dict):
        re, im = obj.get("re", 0), obj.get("im", 0)
    else:
        re, im = obj, 0
    if tol is not None or isinstance(re, float) or isinstance(im, float):
        return ApproxComplex(_as_float(re), _as_float(im), tol if tol is not None else 1e-12)
    return GaussianRational(re, im)


def _as_float(x) -> float:
    if isinstance(x, str):
        return float(mpq(x))
    return float(x)


# ---------------------------------------------------------------------------
# rational points on spheres

_SPHERE_DIMS = {"circle": 2, "sphere2": 3, "sphere3": 4}


def _rational_sqrt(q: mpq):
    """Exact square root of a nonnegative rational, or None."""
    n, d = mpz(q.numerator), mpz(q.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def _upper_rational_sqrt(q: mpq, denom: int = 100) -> mpq:
    """A rational r >= sqrt(q), within about 1/denom of it."""
    r = mpq(isqrt(mpz(q * denom * denom)) + 1, denom)
    assert r * r >= q
    return r


def sphere_point(kind: str, seed) -> tuple[mpq, ...]:
    """Rational unit vector in the direction of ``seed``.

    When ``|seed|^2`` is a rational square the seed is simply normalised.
    Otherwise the half-angle (inverse stereographic) map from the pole
    ``-e_0`` is applied to ``seed[1:] / (seed[0] + r)`` with ``r`` a rational
    upper approximation of ``|seed|``; this lands exactly on the sphere and
    close to the seed direction.
    """
    try:
        dim = _SPHERE_DIMS[kind]
    except KeyError:
        raise ValueError(f"unknown sphere kind {kind!r}; expected one of {sorted(_SPHERE_DIMS)}") from None
    s = [to_mpq(x) for x in seed]
    if len(s) != dim:
        raise ValueError(f"{kind} needs a seed of length {dim}, got {len(s)}")
    if not any(s):
        raise ZeroSeed(f"{kind} seed is the zero vector")
    n2 = sum(x * x for x in s)
    root = _rational_sqrt(n2)
    if root is not None:
        return tuple(x / root for x in s)
    r = _upper_rational_sqrt(n2)
    t = [x / (s[0] + r) for x in s[1:]]
    t2 = sum(x * x for x in t)
    denom = 1 + t2
    return ((1 - t2) / denom, *(2 * x / denom for x in t))
