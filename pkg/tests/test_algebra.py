import itertools
import random
from math import comb

import pytest
from helpers import squares_defective_abcd, small_battery, template, theta_raw
from hypothesis import given
from hypothesis import strategies as st

from ncprod import algebra
from ncprod.algebra import (
    AlgebraElement,
    algebra_of,
    block_exchange,
    block_substitution,
    check_confluence_sample,
    check_relation_invariance,
    compare_strategies,
    double_rewrite_defects,
    maps_relations,
    reduce_mod_spheres,
    reflection_matrix,
    symmetry_matrix,
)
from ncprod.errors import AxiomsNotVerified, IdealNotCentral, NotUnit
from ncprod.families import make
from ncprod.linalg import Matrix
from ncprod.quaternion import Quaternion
from ncprod.rmatrix import RMatrix
from ncprod.scalar import I, GaussianRational

THETA = make("theta4", u="3/5", v="4/5")
QUAT = template("quaternionic", "+")
QUAT_M = template("quaternionic", "-")
SMALL = small_battery()
F = GaussianRational


def test_theta_cross_relation():
    nf = algebra.normal_form(THETA, [(1, 0), (2, 0)])
    assert nf == AlgebraElement({((0,), (0,)): F("3/5"), ((1,), (1,)): -I * F("4/5")})


def test_same_block_commutes():
    alg = algebra_of(THETA)
    assert alg.normal_form([(1, 1), (1, 0)]) == alg.normal_form([(1, 0), (1, 1)])
    assert alg.normal_form([(2, 0), (1, 0)]) == AlgebraElement.monomial([0], [0])


@pytest.mark.parametrize("label,cap", [("theta4", 6), ("classical(1,1)", 6), ("classical(3,2)", 4), ("abcd", 5)])
def test_graded_dimensions(label, cap):
    r = SMALL[label]
    n = r.n1 + r.n2
    assert [algebra.graded_dimension(r, d) for d in range(cap + 1)] == [comb(n + d - 1, d) for d in range(cap + 1)]


def test_normal_monomials_count_matches_rank():
    alg = algebra_of(QUAT)
    for d in range(4):
        assert len(alg.normal_monomials(d)) == alg.graded_dimension(d)


@pytest.mark.parametrize("label", sorted(SMALL))
def test_no_overlap_failures(label):
    assert algebra_of(SMALL[label]).rewriting.overlap_failures() == []


@pytest.mark.parametrize("label", sorted(SMALL))
def test_norms_central(label):
    alg = algebra_of(SMALL[label])
    assert alg.is_central(alg.norm_x1())
    assert alg.is_central(alg.norm_x2())
    assert alg.is_central(alg.norm())


def test_single_generator_not_central():
    alg = algebra_of(THETA)
    assert not alg.is_central(alg.generator(1, 0))


def test_defective_squares_breaks_centrality():
    r = squares_defective_abcd()
    with pytest.raises(AxiomsNotVerified):
        algebra_of(r)
    alg = algebra.QuadraticAlgebra(r, require_axioms=False)
    assert not alg.is_central(alg.norm_x1())


def test_cache_rechecks_axioms():
    r = theta_raw(1, 1)
    algebra_of(r, require_axioms=False)
    with pytest.raises(AxiomsNotVerified):
        algebra_of(r)


# -- random elements --------------------------------------------------------


def elements(r: RMatrix, max_degree: int):
    alg = algebra_of(r)
    word = st.lists(st.integers(0, alg.ngens - 1), max_size=max_degree)
    coeff = st.builds(F, st.integers(-3, 3), st.integers(-3, 3))

    def build(pairs):
        out = AlgebraElement({})
        for w, c in pairs:
            out = out + alg.normal_form(w).scale(c)
        return out

    return st.lists(st.tuples(word, coeff), min_size=1, max_size=3).map(build)


@given(elements(THETA, 3), elements(THETA, 3), elements(THETA, 3))
def test_associativity_theta(a, b, c):
    m = algebra.multiply
    assert m(THETA, m(THETA, a, b), c) == m(THETA, a, m(THETA, b, c))


@given(elements(QUAT, 2), elements(QUAT, 2), elements(QUAT, 2))
def test_associativity_quaternionic(a, b, c):
    m = algebra.multiply
    assert m(QUAT, m(QUAT, a, b), c) == m(QUAT, a, m(QUAT, b, c))


def test_element_json_roundtrip():
    alg = algebra_of(THETA)
    e = alg.normal_form([(1, 0), (2, 1), (1, 1)]) + AlgebraElement.one().scale(I)
    assert AlgebraElement.from_json(e.to_json(2, 2)) == e


# -- quotients --------------------------------------------------------------


def test_torus_examples():
    alg = algebra_of(THETA)
    assert reduce_mod_spheres(THETA, alg.norm_x1(), "torus") == AlgebraElement.one()
    x2 = alg.generator(2, 0)
    assert reduce_mod_spheres(THETA, alg.multiply(x2, alg.norm_x1()), "torus") == x2


def test_seven_sphere_substitution():
    alg = algebra_of(QUAT)
    top = AlgebraElement.monomial((), (3, 3))
    expected = AlgebraElement.one()
    for l in range(3):
        expected = expected - AlgebraElement.monomial((), (l, l))
    for a in range(4):
        expected = expected - AlgebraElement.monomial((a, a), ())
    assert reduce_mod_spheres(QUAT, top, "seven_sphere") == expected
    assert reduce_mod_spheres(QUAT, alg.norm(), "seven_sphere") == AlgebraElement.one()


def test_non_central_ideal_rejected():
    # x1 x2 = i x2 x1 satisfies reality and Yang-Baxter but x1^2 anticommutes with x2
    r = RMatrix(1, 1, {(0, 0, 0, 0): I})
    alg = algebra_of(r)
    assert not alg.is_central(alg.norm_x1())
    with pytest.raises(IdealNotCentral):
        reduce_mod_spheres(r, alg.norm_x1(), "torus")


@pytest.mark.parametrize("ideal", algebra.IDEALS)
@given(data=st.data())
def test_quotient_idempotent_and_multiplicative(ideal, data):
    r = QUAT
    a = data.draw(elements(r, 2))
    b = data.draw(elements(r, 2))
    red = lambda x: reduce_mod_spheres(r, x, ideal)  # noqa: E731
    assert red(red(a)) == red(a)
    assert red(algebra.multiply(r, a, b)) == red(algebra.multiply(r, red(a), red(b)))


# -- symmetry ---------------------------------------------------------------

PAIRS = [
    (Quaternion(1), Quaternion(1)),
    (Quaternion("3/5", "4/5", 0, 0), Quaternion(0, 0, "3/5", "4/5")),
    (Quaternion("1/2", "1/2", "1/2", "1/2"), Quaternion(0, "3/5", 0, "-4/5")),
]


def tensor_invariant(r: RMatrix, m1: Matrix, m2: Matrix) -> bool:
    """Independent route: (M1 (x) M2) R = R (M2 (x) M1) on the index layout of R."""
    n = 4
    for l, a, d, e in itertools.product(range(n), repeat=4):
        lhs = sum((m1[l, k] * m2[a, c] * r[k, c, d, e] for k in range(n) for c in range(n)), F(0))
        rhs = sum((r[l, a, b, m] * m2[b, d] * m1[m, e] for b in range(n) for m in range(n)), F(0))
        if lhs != rhs:
            return False
    return True


def test_identity_pair_invariant():
    for r in (QUAT, QUAT_M):
        for side in ("left", "right"):
            assert check_relation_invariance(r, Quaternion(1), Quaternion(1), side)


@pytest.mark.parametrize("q1,q2", PAIRS)
def test_stated_invariance(q1, q2):
    assert check_relation_invariance(QUAT, q1, q2, "right")
    assert check_relation_invariance(QUAT_M, q1, q2, "left")


@pytest.mark.parametrize("r,side", [(QUAT, "left"), (QUAT, "right"), (QUAT_M, "left"), (QUAT_M, "right")])
def test_invariance_agrees_with_tensor_oracle(r, side):
    for q1, q2 in PAIRS:
        m1, m2 = symmetry_matrix(side, q1), symmetry_matrix(side, q2)
        assert check_relation_invariance(r, q1, q2, side) == tensor_invariant(r, m1, m2)


def test_complementary_action_recorded():
    q1, q2 = PAIRS[1]
    # value taken from both routes above; not a claim made for the family itself
    plus_left = check_relation_invariance(QUAT, q1, q2, "left")
    minus_right = check_relation_invariance(QUAT_M, q1, q2, "right")
    assert plus_left == tensor_invariant(QUAT, symmetry_matrix("left", q1), symmetry_matrix("left", q2))
    assert minus_right == tensor_invariant(QUAT_M, symmetry_matrix("right", q1), symmetry_matrix("right", q2))


def test_non_unit_quaternion_rejected():
    with pytest.raises(NotUnit):
        check_relation_invariance(QUAT, Quaternion(1, 1, 0, 0), Quaternion(1), "right")


# -- isomorphisms -------------------------------------------------------------


def test_reflection_maps_plus_to_minus():
    p = reflection_matrix(4)
    assert maps_relations(QUAT, QUAT_M, block_substitution(4, p, p))
    assert not maps_relations(QUAT, QUAT_M, block_substitution(4, Matrix.identity(4), Matrix.identity(4)))


def test_block_exchange_toric():
    plus = make("toric8", "+", u="3/5", v="4/5", n=[0, 0, 1])
    minus_neg = make("toric8", "-", u="3/5", v="-4/5", n=[0, 0, 1])
    assert maps_relations(plus, minus_neg, block_exchange(4))


# -- confluence ---------------------------------------------------------------


def test_confluence_classical():
    assert check_confluence_sample(RMatrix.classical(2, 3), trials=100, max_len=5).passed


def test_confluence_quaternionic():
    rep = check_confluence_sample(QUAT, trials=100, max_len=4)
    assert rep.passed and rep.mismatches == []


def _non_ybe() -> RMatrix:
    return RMatrix.from_function(2, 2, lambda l, a, b, m: F(1 + l + 2 * a, b - m) if (l + a + b + m) % 2 == 0 else 0)


def test_confluence_detects_non_ybe():
    r = _non_ybe()
    alg = algebra.QuadraticAlgebra(r, require_axioms=False)
    bad = alg.rewriting.overlap_failures()
    assert bad
    word = bad[0][0]
    left, right = compare_strategies(alg, word)
    assert left != right
    rep = check_confluence_sample(r, trials=200, max_len=5, require_axioms=False)
    assert not rep.passed and rep.mismatches


@pytest.mark.parametrize("label", sorted(SMALL))
def test_double_rewrite(label):
    assert double_rewrite_defects(SMALL[label]) == []


def test_double_rewrite_detects_unnormalized():
    assert double_rewrite_defects(theta_raw(1, 1))


def test_random_strategy_is_seeded():
    alg = algebra_of(QUAT)
    w = (5, 1, 7, 0, 2)
    a = alg.rewrite_normal_form(w, "random", random.Random(3))
    assert a == alg.normal_form(w)
