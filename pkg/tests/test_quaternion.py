import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncprod.errors import NotAntisymmetric, NotUnit
from ncprod.linalg import Matrix
from ncprod.quaternion import (
    UNIT_BASIS,
    Quaternion,
    TwoForm,
    action_matrix,
    eps3,
    hodge_star,
    j_matrix,
    j_of_quaternion,
    j_of_vector,
    pairing,
)

ONE4 = Matrix.identity(4)
ZERO4 = Matrix.zeros(4)


def test_j_plus_1():
    assert j_matrix("+", 1) == Matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_j_minus_1():
    assert j_matrix("-", 1) == Matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


@pytest.mark.parametrize("sign,a", list(itertools.product("+-", (1, 2, 3))))
def test_antisymmetric(sign, a):
    assert j_matrix(sign, a).is_antisymmetric()


@pytest.mark.parametrize("sign", "+-")
def test_quaternion_relations(sign):
    # the relation that holds for the component formula: J_a J_b = -d_ab 1 - eps_abc J_c
    for a, b in itertools.product((1, 2, 3), repeat=2):
        rhs = ONE4 * (-1 if a == b else 0)
        for c in (1, 2, 3):
            rhs = rhs - j_matrix(sign, c) * eps3(a, b, c)
        assert j_matrix(sign, a) @ j_matrix(sign, b) == rhs


def test_commute():
    for a, b in itertools.product((1, 2, 3), repeat=2):
        jp, jm = j_matrix("+", a), j_matrix("-", b)
        assert jp @ jm == jm @ jp


@pytest.mark.parametrize("sign", "+-")
def test_trace_normalization(sign):
    for a, b in itertools.product((1, 2, 3), repeat=2):
        assert -(j_matrix(sign, a) @ j_matrix(sign, b)).trace() / 4 == (1 if a == b else 0)


def test_orthonormal_basis():
    basis = [ONE4] + [j_matrix(s, a) for s in "+-" for a in (1, 2, 3)]
    basis += [j_matrix("+", a) @ j_matrix("-", b) for a in (1, 2, 3) for b in (1, 2, 3)]
    assert len(basis) == 16
    for i, m in enumerate(basis):
        for j, n in enumerate(basis):
            assert pairing(m, n) == (1 if i == j else 0)


def test_mixed_products_symmetric_traceless():
    for a, b in itertools.product((1, 2, 3), repeat=2):
        m = j_matrix("+", a) @ j_matrix("-", b)
        assert m.is_symmetric() and m.trace() == 0


def test_j_of_vector():
    assert j_of_vector("+", (0, 0, 0)) == ZERO4
    assert j_of_vector("+", (1, 0, 0)) == j_matrix("+", 1)
    j = j_of_vector("+", ("3/5", "4/5", 0))
    assert j @ j == -ONE4


def test_action_matrix():
    assert action_matrix("left", Quaternion(1)) == ONE4
    e1 = UNIT_BASIS[1]
    m = action_matrix("left", e1)
    for b, eb in enumerate(UNIT_BASIS):
        img = e1 * eb
        assert [m[r, b] for r in range(4)] == list(img.coords)
    q = Quaternion("3/5", "4/5", 0, 0)
    r = action_matrix("right", q)
    assert r.T @ r == ONE4


def test_j_of_quaternion_is_multiplication():
    q = Quaternion("1/2", "1/2", "-1/2", "1/2")
    assert j_of_quaternion("+", q) == action_matrix("right", q)
    assert j_of_quaternion("-", q) == action_matrix("left", q.conjugate())


def test_require_unit():
    with pytest.raises(NotUnit):
        Quaternion(1, 1, 0, 0).require_unit()
    assert Quaternion("3/5", 0, "4/5", 0).is_unit


def test_hodge():
    assert hodge_star(j_matrix("+", 1)) == j_matrix("+", 1)
    assert hodge_star(j_matrix("-", 2)) == -j_matrix("-", 2)
    for a in (1, 2, 3):
        assert hodge_star(j_matrix("+", a)) == j_matrix("+", a)
        assert hodge_star(j_matrix("-", a)) == -j_matrix("-", a)


def test_hodge_rejects_symmetric():
    with pytest.raises(NotAntisymmetric):
        hodge_star(ONE4)


small = st.integers(-5, 5)


@given(st.lists(small, min_size=6, max_size=6))
def test_hodge_involution(xs):
    f = [[0] * 4 for _ in range(4)]
    for (i, j), x in zip(itertools.combinations(range(4), 2), xs):
        f[i][j], f[j][i] = x, -x
    F = TwoForm(f)
    assert hodge_star(hodge_star(F)) == F


quats = st.builds(Quaternion, small, small, small, small)


@given(quats, quats, quats)
def test_quaternion_associative_and_multiplicative_norm(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert (p * q).norm2() == p.norm2() * q.norm2()
    # left and right actions commute and compose
    assert action_matrix("left", p) @ action_matrix("right", q) == action_matrix("right", q) @ action_matrix("left", p)
    assert action_matrix("left", p * q) == action_matrix("left", p) @ action_matrix("left", q)
