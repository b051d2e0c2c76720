from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from ncprod.errors import ZeroSeed
from ncprod.scalar import (
    I,
    ApproxComplex,
    GaussianRational,
    scalar_from_json,
    scalar_to_json,
    sphere_point,
    to_mpq,
)

rationals = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gaussians = st.builds(GaussianRational, rationals, rationals)
nonzero = gaussians.filter(bool)


def test_normalized_denominators():
    z = GaussianRational("6/-4", "10/20")
    assert z.re == mpq(-3, 2) and z.re.denominator == 2
    assert z.im == mpq(1, 2)


def test_float_rejected():
    with pytest.raises(TypeError):
        to_mpq(0.5)


def test_i_squared():
    assert I * I == -1
    assert (3 + 4 * I).abs2() == 25


@given(gaussians, gaussians, gaussians)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == 1
    assert a / a == 1


@given(gaussians)
def test_conjugation(a):
    assert a.conjugate().conjugate() == a
    n = a * a.conjugate()
    assert n.is_real and n.re == a.abs2()


@given(gaussians)
def test_json_roundtrip(a):
    assert scalar_from_json(scalar_to_json(a)) == a


def test_json_formats():
    assert scalar_to_json(GaussianRational("3/5")) == "3/5"
    assert scalar_to_json(GaussianRational(0, "-4/5")) == {"re": "0", "im": "-4/5"}
    assert scalar_from_json({"re": "1/2", "im": "1/3"}) == GaussianRational(Fraction(1, 2), Fraction(1, 3))


def test_approx_tolerance():
    a = ApproxComplex(0.1 + 0.2, 0.0)
    assert a == ApproxComplex(0.3, 0.0)
    assert not (a - ApproxComplex(0.3, 0.0))
    assert ApproxComplex(1.0, 0.0, tol=1e-3) == ApproxComplex(1.0005, 0.0, tol=1e-3)
    assert ApproxComplex(1.0, 0.0) != ApproxComplex(1.001, 0.0)


def test_sphere_examples():
    assert sphere_point("circle", (1, 0)) == (1, 0)
    assert sphere_point("circle", (3, 4)) == (mpq(3, 5), mpq(4, 5))
    assert sphere_point("sphere2", (1, 2, 2)) == (mpq(1, 3), mpq(2, 3), mpq(2, 3))


def test_sphere_zero_seed():
    with pytest.raises(ZeroSeed):
        sphere_point("sphere3", (0, 0, 0, 0))


DIMS = {"circle": 2, "sphere2": 3, "sphere3": 4}
sphere_cases = st.sampled_from(sorted(DIMS)).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(rationals, min_size=DIMS[k], max_size=DIMS[k]))
)


@given(sphere_cases)
def test_sphere_point_unit(case):
    kind, seed = case
    if not any(seed):
        with pytest.raises(ZeroSeed):
            sphere_point(kind, seed)
        return
    u = sphere_point(kind, seed)
    assert sum(x * x for x in u) == 1
    assert len(u) == len(seed)


def test_sphere_point_non_square_direction():
    # norm^2 = 2 is not a rational square: stereographic branch, still close in direction
    u = sphere_point("circle", (1, 1))
    assert sum(x * x for x in u) == 1
    assert abs(float(u[0]) - float(u[1])) < 0.05
