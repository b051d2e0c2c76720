"""The quadratic algebra of an R-matrix as a PBW rewriting engine.

Generators are written ``(1, l)`` for x1^l and ``(2, a)`` for x2^a, with
0-based indices.  Internally a generator is the integer ``l`` or
``n1 + a`` (the same layout as the big R).  A normal monomial is the sorted
x2 block followed by the sorted x1 block; it is stored as the pair of
sorted index tuples ``(w2, w1)``.

Two engines compute normal forms:

* ``QuadraticAlgebra.rewriting`` is the generic word rewriting system, able
  to follow any reduction strategy;
* the PBW engine multiplies normal monomials by one generator at a time,
  moving a new x2 letter left through the x1 block with a memoised table.
  It reproduces the leftmost strategy exactly, for any tensor.
"""

from __future__ import annotations

import random
import weakref
from bisect import insort
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import AxiomsNotVerified, IdealNotCentral
from .linalg import ONE, ZERO, Echelon, Matrix
from .quaternion import Quaternion, j_of_quaternion
from .rewriting import RewriteSystem, add_into
from .rmatrix import RMatrix, assemble_big_r, check_axioms
from .scalar import scalar_from_json, scalar_to_json

Key = tuple  # (w2, w1)
UNIT_KEY: Key = ((), ())


def _sorted_add(t: tuple, x: int) -> tuple:
    lst = list(t)
    insort(lst, x)
    return tuple(lst)


@dataclass(frozen=True)
class NormalMonomial:
    """Multidegrees over x2 (length n2) and x1 (length n1)."""

    m2: tuple
    m1: tuple

    @classmethod
    def from_key(cls, key: Key, n1: int, n2: int) -> NormalMonomial:
        w2, w1 = key
        return cls(tuple(w2.count(i) for i in range(n2)), tuple(w1.count(i) for i in range(n1)))

    def key(self) -> Key:
        w2 = tuple(i for i, k in enumerate(self.m2) for _ in range(k))
        w1 = tuple(i for i, k in enumerate(self.m1) for _ in range(k))
        return (w2, w1)

    @property
    def degree(self) -> int:
        return sum(self.m2) + sum(self.m1)


class AlgebraElement:
    """Finite combination of normal monomials, ``terms[(w2, w1)] = coeff``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls) -> AlgebraElement:
        return cls({UNIT_KEY: ONE})

    @classmethod
    def monomial(cls, w2: Iterable[int] = (), w1: Iterable[int] = (), coeff=ONE) -> AlgebraElement:
        return cls({(tuple(sorted(w2)), tuple(sorted(w1))): coeff})

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            add_into(out, k, v)
        return AlgebraElement(out)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            add_into(out, k, -v)
        return AlgebraElement(out)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement({k: -v for k, v in self.terms.items()})

    def scale(self, c) -> AlgebraElement:
        return AlgebraElement({k: v * c for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return not (self - other).terms

    __hash__ = None

    @property
    def degree(self) -> int:
        return max((len(w2) + len(w1) for w2, w1 in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w2, w1), c in sorted(self.terms.items()):
            mono = "".join(f"x2[{i}]" for i in w2) + "".join(f"x1[{i}]" for i in w1)
            parts.append(f"({c}){mono or '1'}")
        return " + ".join(parts)

    def to_json(self, n1: int, n2: int) -> list:
        out = []
        for key, c in sorted(self.terms.items()):
            m = NormalMonomial.from_key(key, n1, n2)
            out.append({"m2": list(m.m2), "m1": list(m.m1), "coeff": scalar_to_json(c)})
        return out

    @classmethod
    def from_json(cls, obj: list) -> AlgebraElement:
        terms: dict = {}
        for t in obj:
            key = NormalMonomial(tuple(t["m2"]), tuple(t["m1"])).key()
            add_into(terms, key, scalar_from_json(t["coeff"]))
        return cls(terms)


class QuadraticAlgebra:
    """Normal forms, products and dimensions in the algebra of ``r``."""

    def __init__(self, r: RMatrix, require_axioms: bool = True):
        self.r = r
        self.checked = False
        if require_axioms:
            self.verify()
        self.n1, self.n2 = r.n1, r.n2
        self.ngens = r.n1 + r.n2
        self._cross_rows: dict = {}
        for (l, a, b, m), v in r.nonzero().items():
            self._cross_rows.setdefault((l, a), []).append((b, m, v))
        self._cross_memo: dict = {}
        self._rewriting: RewriteSystem | None = None

    def verify(self) -> None:
        """Require reality and the Yang-Baxter families, which make the rewriting confluent."""
        if self.checked:
            return
        rep = check_axioms(self.r)
        needed = [c.name for c in (rep.reality, *rep.yang_baxter.values()) if not c.passed]
        if needed:
            raise AxiomsNotVerified(f"R-matrix fails: {', '.join(needed)}")
        self.checked = True

    # -- generators ---------------------------------------------------------
    def gen(self, block: int, index: int) -> int:
        if block == 1 and 0 <= index < self.n1:
            return index
        if block == 2 and 0 <= index < self.n2:
            return self.n1 + index
        raise IndexError(f"generator ({block}, {index}) out of range for n1={self.n1}, n2={self.n2}")

    def word(self, letters: Sequence) -> tuple[int, ...]:
        """Accept ``[(block, index), ...]`` or already-encoded integers."""
        return tuple(x if isinstance(x, int) else self.gen(*x) for x in letters)

    def generator(self, block: int, index: int) -> AlgebraElement:
        return AlgebraElement(self._mul_gen({UNIT_KEY: ONE}, self.gen(block, index)))

    def key_to_word(self, key: Key) -> tuple[int, ...]:
        w2, w1 = key
        return tuple(self.n1 + b for b in w2) + tuple(w1)

    def word_to_key(self, w: Sequence[int]) -> Key:
        """Key of an already sorted word (x2 block then x1 block)."""
        n1 = self.n1
        return (tuple(g - n1 for g in w if g >= n1), tuple(g for g in w if g < n1))

    # -- PBW engine -------------------------------------------------------------
    def _cross(self, w1: tuple, beta: int) -> dict:
        """x1-block(w1) * x2^beta as {(beta', w1'): coeff} meaning x2^beta' x1-block(w1')."""
        key = (w1, beta)
        memo = self._cross_memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        if not w1:
            res = {(beta, ()): ONE}
        else:
            last, prefix = w1[-1], w1[:-1]
            res = {}
            for b1, m1, v in self._cross_rows.get((last, beta), ()):
                for (b2, rest), c in self._cross(prefix, b1).items():
                    add_into(res, (b2, _sorted_add(rest, m1)), v * c)
        memo[key] = res
        return res

    def _mul_gen(self, elem: dict, g: int) -> dict:
        out: dict = {}
        n1 = self.n1
        if g < n1:
            for (w2, w1), c in elem.items():
                add_into(out, (w2, _sorted_add(w1, g)), c)
            return out
        beta = g - n1
        for (w2, w1), c in elem.items():
            for (b2, w1n), k in self._cross(w1, beta).items():
                add_into(out, (_sorted_add(w2, b2), w1n), c * k)
        return out

    def _mul_word(self, elem: dict, w: Iterable[int]) -> dict:
        for g in w:
            elem = self._mul_gen(elem, g)
        return elem

    def normal_form(self, w: Sequence) -> AlgebraElement:
        return AlgebraElement(self._mul_word({UNIT_KEY: ONE}, self.word(w)))

    def normal_form_of(self, elem: dict) -> AlgebraElement:
        """Normal form of a free-algebra combination ``{word: coeff}``."""
        out: dict = {}
        for w, c in elem.items():
            for k, v in self._mul_word({UNIT_KEY: c}, w).items():
                add_into(out, k, v)
        return AlgebraElement(out)

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        out: dict = {}
        for key, c in b.terms.items():
            part = self._mul_word({k: v * c for k, v in a.terms.items()}, self.key_to_word(key))
            for k, v in part.items():
                add_into(out, k, v)
        return AlgebraElement(out)

    # -- generic rewriting --------------------------------------------------------
    @property
    def rewriting(self) -> RewriteSystem:
        if self._rewriting is None:
            n1, n2 = self.n1, self.n2
            rules: dict = {}
            for a in range(n1):
                for b in range(a):
                    rules[a, b] = [(ONE, (b, a))]
            for a in range(n2):
                for b in range(a):
                    rules[n1 + a, n1 + b] = [(ONE, (n1 + b, n1 + a))]
            for l in range(n1):
                for a in range(n2):
                    rules[l, n1 + a] = [(v, (n1 + b, m)) for b, m, v in self._cross_rows.get((l, a), ())]
            self._rewriting = RewriteSystem(self.ngens, rules)
        return self._rewriting

    def rewrite_normal_form(self, w: Sequence, strategy: str = "leftmost", rng=None) -> AlgebraElement:
        nf = self.rewriting.normal_form(self.word(w), strategy, rng)
        out: dict = {}
        for word, c in nf.items():
            add_into(out, self.word_to_key(word), c)
        return AlgebraElement(out)

    # -- dimensions ------------------------------------------------------------------
    def graded_dimension(self, n: int) -> int:
        """Rank of the span of the normal forms of all words of degree n."""
        ech = Echelon()
        for elem in self._all_word_normal_forms(n):
            ech.add(elem)
        return ech.rank

    def _all_word_normal_forms(self, n: int):
        def rec(elem, depth):
            if depth == n:
                yield elem
                return
            for g in range(self.ngens):
                yield from rec(self._mul_gen(elem, g), depth + 1)

        yield from rec({UNIT_KEY: ONE}, 0)

    def normal_monomials(self, n: int) -> list[Key]:
        out = []
        for k in range(n + 1):
            for w2 in _multisets(self.n2, k):
                for w1 in _multisets(self.n1, n - k):
                    out.append((w2, w1))
        return out

    # -- centrality, norms --------------------------------------------------------
    def is_central(self, a: AlgebraElement) -> bool:
        for g in range(self.ngens):
            x = AlgebraElement({self.word_to_key((g,)): ONE})
            if self.multiply(x, a) != self.multiply(a, x):
                return False
        return True

    def norm_x1(self) -> AlgebraElement:
        return AlgebraElement({((), (l, l)): ONE for l in range(self.n1)})

    def norm_x2(self) -> AlgebraElement:
        return AlgebraElement({((a, a), ()): ONE for a in range(self.n2)})

    def norm(self) -> AlgebraElement:
        return self.norm_x1() + self.norm_x2()

    # -- relations -------------------------------------------------------------------
    def relations(self) -> list[dict]:
        """Defining relations as free-algebra combinations ``{word: coeff}``."""
        n1, n2 = self.n1, self.n2
        rels = []
        for a in range(n1):
            for b in range(a + 1, n1):
                rels.append({(a, b): ONE, (b, a): -ONE})
        for a in range(n2):
            for b in range(a + 1, n2):
                rels.append({(n1 + a, n1 + b): ONE, (n1 + b, n1 + a): -ONE})
        for l in range(n1):
            for a in range(n2):
                rel = {(l, n1 + a): ONE}
                for b, m, v in self._cross_rows.get((l, a), ()):
                    add_into(rel, (n1 + b, m), -v)
                rels.append(rel)
        return rels


def _multisets(n: int, k: int):
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, n):
            for rest in rec(i, left - 1):
                yield (i,) + rest

    return list(rec(0, k))


# ---------------------------------------------------------------------------
# one algebra per RMatrix object

_ALGEBRAS: dict[int, QuadraticAlgebra] = {}


def algebra_of(r: RMatrix, require_axioms: bool = True) -> QuadraticAlgebra:
    key = id(r)
    alg = _ALGEBRAS.get(key)
    if alg is None or alg.r is not r:
        alg = QuadraticAlgebra(r, require_axioms)
        _ALGEBRAS[key] = alg
        weakref.finalize(r, _ALGEBRAS.pop, key, None)
    elif require_axioms:
        alg.verify()
    return alg


def normal_form(r: RMatrix, w: Sequence) -> AlgebraElement:
    return algebra_of(r).normal_form(w)


def multiply(r: RMatrix, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return algebra_of(r).multiply(a, b)


def graded_dimension(r: RMatrix, n: int) -> int:
    return algebra_of(r).graded_dimension(n)


def is_central(r: RMatrix, a: AlgebraElement) -> bool:
    return algebra_of(r).is_central(a)


# ---------------------------------------------------------------------------
# quotients by sphere relations

IDEALS = ("torus", "product_spheres", "seven_sphere")


def _ideal_generators(alg: QuadraticAlgebra, ideal: str) -> list[AlgebraElement]:
    if ideal in ("torus", "product_spheres"):
        return [alg.norm_x1(), alg.norm_x2()]
    if ideal == "seven_sphere":
        return [alg.norm()]
    raise ValueError(f"unknown ideal {ideal!r}; expected one of {IDEALS}")


_CENTRAL_OK: dict[tuple[int, str], bool] = {}


def reduce_mod_spheres(r: RMatrix, a: AlgebraElement, ideal: str) -> AlgebraElement:
    """Canonical representative of ``a`` modulo the sphere relations.

    torus / product_spheres: x1^top x1^top -> 1 - sum_{l<top} (x1^l)^2 and
    likewise in the x2 block.  seven_sphere: x1^top x1^top -> 1 - the other
    squares of both blocks.  The ideal generators are checked to be central.
    """
    alg = algebra_of(r)
    ck = (id(r), ideal)
    if ck not in _CENTRAL_OK:
        _CENTRAL_OK[ck] = all(alg.is_central(g) for g in _ideal_generators(alg, ideal))
        weakref.finalize(r, _CENTRAL_OK.pop, ck, None)
    if not _CENTRAL_OK[ck]:
        raise IdealNotCentral(f"the {ideal} relations are not central for this R-matrix")
    t1, t2 = alg.n1 - 1, alg.n2 - 1
    out: dict = {}
    todo = dict(a.terms)
    while todo:
        nxt: dict = {}
        for (w2, w1), c in todo.items():
            if w1.count(t1) >= 2:
                i = w1.index(t1)
                rest1 = w1[:i] + w1[i + 2 :]
                add_into(nxt, (w2, rest1), c)
                for l in range(t1):
                    add_into(nxt, (w2, _sorted_add(_sorted_add(rest1, l), l)), -c)
                if ideal == "seven_sphere":
                    for b in range(alg.n2):
                        add_into(nxt, (_sorted_add(_sorted_add(w2, b), b), rest1), -c)
            elif ideal != "seven_sphere" and w2.count(t2) >= 2:
                i = w2.index(t2)
                rest2 = w2[:i] + w2[i + 2 :]
                add_into(nxt, (rest2, w1), c)
                for b in range(t2):
                    add_into(nxt, (_sorted_add(_sorted_add(rest2, b), b), w1), -c)
            else:
                add_into(out, (w2, w1), c)
        todo = nxt
    return AlgebraElement(out)


# ---------------------------------------------------------------------------
# linear substitutions of generators


def substitution_image(alg_src: QuadraticAlgebra, alg_dst: QuadraticAlgebra, subst: dict) -> list[AlgebraElement]:
    """Normal forms in ``alg_dst`` of the relations of ``alg_src`` after x^g -> subst[g].

    ``subst[g]`` is a list of ``(coeff, h)``: the image of generator g is
    sum coeff * x^h.  Every image vanishes iff the substitution maps the
    relation space of the source into that of the target.
    """
    images = []
    for rel in alg_src.relations():
        expanded: dict = {}
        for w, c in rel.items():
            for choice in product(*(subst[g] for g in w)):
                coeff = c
                for k, _ in choice:
                    coeff = coeff * k
                add_into(expanded, tuple(h for _, h in choice), coeff)
        images.append(alg_dst.normal_form_of(expanded))
    return images


def block_substitution(n1: int, m1: Matrix, m2: Matrix) -> dict:
    """x1^l -> sum_k m1[l,k] x1^k and x2^a -> sum_b m2[a,b] x2^b."""
    subst = {}
    for l in range(m1.shape[0]):
        subst[l] = [(m1[l, k], k) for k in range(m1.shape[1]) if m1[l, k]]
    for a in range(m2.shape[0]):
        subst[n1 + a] = [(m2[a, b], n1 + b) for b in range(m2.shape[1]) if m2[a, b]]
    return subst


def maps_relations(r_src: RMatrix, r_dst: RMatrix, subst: dict) -> bool:
    src = algebra_of(r_src)
    dst = src if r_dst is r_src else algebra_of(r_dst)
    return not any(substitution_image(src, dst, subst))


def symmetry_matrix(side: str, q: Quaternion):
    """Matrix of the SU(2) action used by the invariance check.

    side "right": x -> J^-_q x (left multiplication by the conjugate of q,
    which is a right action of the unit quaternions);
    side "left":  x -> J^+_q x (right multiplication by q).
    """
    if side == "right":
        return j_of_quaternion("-", q)
    if side == "left":
        return j_of_quaternion("+", q)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def check_relation_invariance(r: RMatrix, q1: Quaternion, q2: Quaternion, side: str) -> bool:
    if (r.n1, r.n2) != (4, 4):
        raise ValueError("the SU(2) x SU(2) action needs n1 = n2 = 4")
    q1.require_unit()
    q2.require_unit()
    m1, m2 = symmetry_matrix(side, q1), symmetry_matrix(side, q2)
    return maps_relations(r, r, block_substitution(4, m1, m2))


def reflection_matrix(n: int = 4) -> Matrix:
    """diag(1, -1, ..., -1): conjugates J^+ into J^-."""
    return Matrix([[ONE if i == j == 0 else (-ONE if i == j else ZERO) for j in range(n)] for i in range(n)])


def block_exchange(n: int) -> dict:
    """x1^i <-> x2^i for equal block sizes n."""
    return {**{i: [(ONE, n + i)] for i in range(n)}, **{n + i: [(ONE, i)] for i in range(n)}}


# ---------------------------------------------------------------------------
# confluence diagnostics


@dataclass
class ConfluenceReport:
    passed: bool
    trials: int
    mismatches: list = field(default_factory=list)


def compare_strategies(alg: QuadraticAlgebra, w: Sequence, strategies=("leftmost", "rightmost"), rng=None) -> list:
    return [alg.rewrite_normal_form(w, s, rng) for s in strategies]


def check_confluence_sample(
    r: RMatrix,
    trials: int = 100,
    max_len: int = 5,
    seed: int = 0,
    strategies: Sequence[str] = ("leftmost", "rightmost", "random"),
    require_axioms: bool = True,
) -> ConfluenceReport:
    """Random words reduced under several strategies, plus the PBW engine."""
    alg = algebra_of(r, require_axioms)
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        n = rng.randint(2, max_len)
        w = tuple(rng.randrange(alg.ngens) for _ in range(n))
        forms = [alg.rewrite_normal_form(w, s, rng) for s in strategies]
        forms.append(alg.normal_form(w))
        if any(f != forms[0] for f in forms[1:]):
            bad.append(w)
    return ConfluenceReport(not bad, trials, bad)


def double_rewrite_defects(r: RMatrix) -> list[tuple[int, int]]:
    """Pairs (l, a) where rewriting x1^l x2^a forward then back fails to return it.

    The backward step uses the conjugate block of the big R, so this is the
    involution property restricted to the cross-block words.
    """
    big = assemble_big_r(r).entries
    n1 = r.n1
    back: dict = {}
    for (a, b, c, d), v in big.items():
        if a >= n1 > b:
            back.setdefault((a, b), []).append((c, d, v))
    bad = []
    for l in range(r.n1):
        for al in range(r.n2):
            out: dict = {}
            for (ll, aa, b, m), v in r.nonzero().items():
                if ll == l and aa == al:
                    for c, d, w in back.get((n1 + b, m), ()):
                        add_into(out, (c, d), v * w)
            add_into(out, (l, n1 + al), -ONE)
            if out:
                bad.append((l, al))
    return bad
