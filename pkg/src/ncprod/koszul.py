"""Koszul dual, Koszul complex, and the Clifford algebra of an R-matrix.

Dual generators theta and Clifford generators Gamma use the combined index
layout of the big R (block 1 first, then block 2); their normal words are
strictly increasing.  Tensors in E^{(x)n} are sparse dicts keyed by index
tuples.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .algebra import UNIT_KEY, QuadraticAlgebra, algebra_of
from .errors import AxiomsNotVerified
from .linalg import ONE, ZERO, Echelon, nullspace
from .rewriting import RewriteSystem, add_into
from .rmatrix import RMatrix, check_axioms

# ---------------------------------------------------------------------------
# precondition

_AXIOMS_OK: dict[int, bool] = {}


def require_axioms(r: RMatrix) -> None:
    key = id(r)
    if key not in _AXIOMS_OK:
        rep = check_axioms(r)
        _AXIOMS_OK[key] = rep.passed
        weakref.finalize(r, _AXIOMS_OK.pop, key, None)
        if not rep.passed:
            raise AxiomsNotVerified(f"R-matrix fails: {', '.join(rep.failures())}")
    elif not _AXIOMS_OK[key]:
        raise AxiomsNotVerified("R-matrix fails the axiom battery")


# ---------------------------------------------------------------------------
# relation spaces in E (x) E


def relation_space(r: RMatrix) -> list[dict]:
    """Basis of the relation space R of the quadratic algebra, keyed by (c, d)."""
    return algebra_of(r, require_axioms=False).relations()


def orthogonal_relations(r: RMatrix) -> list[dict]:
    """Basis of the annihilator of R under <theta_a theta_b, x^c x^d> = d_ac d_bd.

    Same-block symmetric tensors theta_a theta_b + theta_b theta_a (a <= b),
    and for the mixed pairs theta2_b theta1_m + sum R[l,a,b,m] theta1_l theta2_a.
    """
    n1, n2 = r.n1, r.n2
    out = []
    for lo, hi in ((0, n1), (n1, n1 + n2)):
        for a in range(lo, hi):
            for b in range(a, hi):
                out.append({(a, a): ONE} if a == b else {(a, b): ONE, (b, a): ONE})
    rows: dict = {}
    for (l, a, b, m), v in r.nonzero().items():
        rows.setdefault((b, m), {})[(l, n1 + a)] = v
    for b in range(n2):
        for m in range(n1):
            w = {(n1 + b, m): ONE}
            for k, v in rows.get((b, m), {}).items():
                add_into(w, k, v)
            out.append(w)
    return out


def pairing_defects(r: RMatrix) -> list[tuple[int, int]]:
    """Index pairs (i, j) where dual relation i pairs nontrivially with relation j."""
    bad = []
    rels = relation_space(r)
    for i, w in enumerate(orthogonal_relations(r)):
        for j, rho in enumerate(rels):
            s = ZERO
            for k, v in w.items():
                x = rho.get(k)
                if x:
                    s = s + v * x
            if s:
                bad.append((i, j))
    return bad


# ---------------------------------------------------------------------------
# Koszul dual as a rewriting system


def koszul_dual_relations(r: RMatrix) -> RewriteSystem:
    """Rules rewriting theta words to the strictly increasing basis.

    theta_a theta_a -> 0, theta_b theta_a -> -theta_a theta_b (same block,
    b > a), theta2_b theta1_m -> -sum R[l,a,b,m] theta1_l theta2_a.
    """
    n1, n2 = r.n1, r.n2
    rules: dict = {}
    for lo, hi in ((0, n1), (n1, n1 + n2)):
        for a in range(lo, hi):
            rules[a, a] = []
            for b in range(a + 1, hi):
                rules[b, a] = [(-ONE, (a, b))]
    for b in range(n2):
        for m in range(n1):
            rules[n1 + b, m] = []
    for (l, a, b, m), v in r.nonzero().items():
        rules[n1 + b, m].append((-v, (l, n1 + a)))
    return RewriteSystem(n1 + n2, rules)


def dual_normal_form(r: RMatrix, word: Iterable[int]) -> dict:
    return koszul_dual_relations(r).normal_form(tuple(word))


def dual_dimension(r: RMatrix, n: int) -> int:
    """Number of irreducible theta words of length n (strictly increasing)."""
    return koszul_dual_relations(r).count_irreducible(n)


# ---------------------------------------------------------------------------
# intersection towers


def intersection_tower(annihilators: list[dict], ngens: int, nmax: int) -> list[list[dict]]:
    """Bases of V_n = {v in E^{(x)n} : every adjacent slot pair pairs to 0 with each annihilator}.

    V_0 = C, V_1 = E and V_n is solved inside V_{n-1} (x) E, so only the
    last slot pair needs a new constraint.  With annihilators spanning the
    orthogonal of R this gives the Koszul components; with R itself it
    gives the graded duals of the algebra pieces.
    """
    tower = [[{(): ONE}], [{(i,): ONE} for i in range(ngens)]]
    by_first: dict[int, list[tuple[int, int, object]]] = {}
    for k, w in enumerate(annihilators):
        for (c, d), v in w.items():
            by_first.setdefault(c, []).append((k, d, v))
    for n in range(2, nmax + 1):
        prev = tower[n - 1]
        rows: dict = {}
        for j, vec in enumerate(prev):
            for word, val in vec.items():
                p, c = word[:-1], word[-1]
                for k, d, w in by_first.get(c, ()):
                    add_into(rows.setdefault((p, k), {}), (j, d), val * w)
        cols = [(j, b) for j in range(len(prev)) for b in range(ngens)]
        basis = []
        for y in nullspace([r for r in rows.values() if r], cols):
            v: dict = {}
            for (j, b), coeff in y.items():
                for word, val in prev[j].items():
                    add_into(v, word + (b,), val * coeff)
            basis.append(v)
        tower.append(basis)
    return tower[: nmax + 1]


def koszul_components(r: RMatrix, nmax: int) -> list[list[dict]]:
    """Bases of the dual pieces (A^!_n)^* as intersections of E^i (x) R (x) E^j."""
    return intersection_tower(orthogonal_relations(r), r.n1 + r.n2, nmax)


def algebra_dual_components(r: RMatrix, nmax: int) -> list[list[dict]]:
    """Bases of (A_n)^*: tensors killed by R in every adjacent slot pair."""
    return intersection_tower(relation_space(r), r.n1 + r.n2, nmax)


# ---------------------------------------------------------------------------
# Koszul complex


@dataclass
class HomologyPiece:
    weight: int
    n: int
    dim_h: int
    dims: list[int]

    def to_json(self) -> dict:
        return {"weight": self.weight, "n": self.n, "dim_H": self.dim_h, "dims": list(self.dims)}

    @classmethod
    def from_json(cls, obj: dict) -> HomologyPiece:
        return cls(obj["weight"], obj["n"], obj["dim_H"], list(obj["dims"]))


@dataclass
class HomologyTable:
    pieces: list[HomologyPiece]
    boundary_squares_zero: bool
    component_dims: list[int] = field(default_factory=list)

    def dim(self, weight: int, n: int) -> int:
        for p in self.pieces:
            if p.weight == weight and p.n == n:
                return p.dim_h
        return 0

    @property
    def acyclic(self) -> bool:
        """H_n = 0 for n >= 1, H_0 = 0 in positive weight and C in weight 0."""
        return all(p.dim_h == (1 if (p.n, p.weight) == (0, 0) else 0) for p in self.pieces)

    def to_json(self) -> list:
        return [p.to_json() for p in self.pieces]


def _boundary_images(alg: QuadraticAlgebra, mons: list, comp: list[dict]) -> list[dict]:
    """b(a (x) v) = sum v[i0, rest] (a x_{i0}) (x) e_rest, in A (x) E^{(x)(n-1)} coordinates."""
    out = []
    for key in mons:
        for v in comp:
            img: dict = {}
            for word, val in v.items():
                prod_ = alg._mul_gen({key: val}, word[0])
                rest = word[1:]
                for k2, c in prod_.items():
                    add_into(img, (k2, rest), c)
            out.append(img)
    return out


def _boundary_twice(alg: QuadraticAlgebra, key, v: dict) -> dict:
    img: dict = {}
    for word, val in v.items():
        for k2, c in alg._mul_word({key: val}, word[:2]).items():
            add_into(img, (k2, word[2:]), c)
    return img


def koszul_homology(r: RMatrix, max_weight: int, check_axioms_first: bool = True) -> HomologyTable:
    """Homology of A (x) (A^!)^* in every internal weight w <= max_weight."""
    if check_axioms_first:
        require_axioms(r)
    alg = algebra_of(r, require_axioms=check_axioms_first)
    ngens = alg.ngens
    top = min(max_weight, ngens)
    comps = koszul_components(r, top)
    mons = [alg.normal_monomials(d) for d in range(max_weight + 1)]
    squares_zero = True
    pieces = []
    for w in range(max_weight + 1):
        nmax = min(w, top)
        dims = [len(mons[w - n]) * len(comps[n]) for n in range(nmax + 1)]
        ranks = [0] * (nmax + 2)
        for n in range(1, nmax + 1):
            if not dims[n]:
                continue
            ranks[n] = Echelon(_boundary_images(alg, mons[w - n], comps[n])).rank
            if n >= 2:
                for key in mons[w - n]:
                    for v in comps[n]:
                        if _boundary_twice(alg, key, v):
                            squares_zero = False
        for n in range(nmax + 1):
            pieces.append(HomologyPiece(w, n, dims[n] - ranks[n] - ranks[n + 1], dims))
    return HomologyTable(pieces, squares_zero, [len(c) for c in comps])


# ---------------------------------------------------------------------------
# Clifford algebra


def clifford_system(r: RMatrix, metric: dict | None = None) -> RewriteSystem:
    """Gamma_a Gamma_b + Gamma_b Gamma_a = 2 g_ab inside each block, mixed as the dual.

    ``metric`` maps same-block pairs (a, b) with a <= b to g_ab (default the
    identity); Gamma_a Gamma_a -> g_aa and, for b > a,
    Gamma_b Gamma_a -> -Gamma_a Gamma_b + 2 g_ab.
    """
    n1, n2 = r.n1, r.n2
    g = metric or {}
    rules: dict = {}
    for lo, hi in ((0, n1), (n1, n1 + n2)):
        for a in range(lo, hi):
            gaa = g.get((a, a), ONE)
            rules[a, a] = [(gaa, ())] if gaa else []
            for b in range(a + 1, hi):
                rule = [(-ONE, (a, b))]
                gab = g.get((a, b), ZERO)
                if gab:
                    rule.append((gab * 2, ()))
                rules[b, a] = rule
    for b in range(n2):
        for m in range(n1):
            rules[n1 + b, m] = []
    for (l, a, b, m), v in r.nonzero().items():
        rules[n1 + b, m].append((-v, (l, n1 + a)))
    return RewriteSystem(n1 + n2, rules)


def clifford_normal_form(r: RMatrix, word: Iterable[int], check_axioms_first: bool = True) -> dict:
    if check_axioms_first:
        require_axioms(r)
    return clifford_system(r).normal_form(tuple(word))


def clifford_basis_size(r: RMatrix) -> int:
    sys_ = clifford_system(r)
    return sum(sys_.count_irreducible(n) for n in range(r.n1 + r.n2 + 1))


def clifford_span_dimension(r: RMatrix, max_len: int) -> int:
    """Rank of the span of the normal forms of all Gamma words of length <= max_len."""
    sys_ = clifford_system(r)
    ech = Echelon()
    n = r.n1 + r.n2
    for k in range(max_len + 1):
        for w in product(range(n), repeat=k):
            ech.add({(len(x), x): c for x, c in sys_.normal_form(w).items()})
    return ech.rank


@dataclass
class GammaSquareReport:
    total: bool
    block1: bool
    block2: bool
    mixed: bool

    @property
    def passed(self) -> bool:
        return self.total and self.block1 and self.block2 and self.mixed

    def as_dict(self) -> dict[str, bool]:
        return {"total": self.total, "block1": self.block1, "block2": self.block2, "mixed": self.mixed}


def verify_gamma_square(r: RMatrix, check_axioms_first: bool = True) -> GammaSquareReport:
    """Expand Gamma(x)^2 in Cl (x) A and compare with 1 (x) |x|^2, blockwise too."""
    if check_axioms_first:
        require_axioms(r)
    alg = algebra_of(r, require_axioms=check_axioms_first)
    cl = clifford_system(r)
    n1, n = r.n1, r.n1 + r.n2
    block1, block2 = range(n1), range(n1, n)

    def square(left: Iterable[int], right: Iterable[int]) -> dict:
        out: dict = {}
        for a in left:
            for b in right:
                cw = cl.normal_form((a, b))
                aw = alg._mul_word({UNIT_KEY: ONE}, (a, b))
                for x, c in cw.items():
                    for k, v in aw.items():
                        add_into(out, (x, k), c * v)
        return out

    def plus(*ds: dict) -> dict:
        out: dict = {}
        for d in ds:
            for k, v in d.items():
                add_into(out, k, v)
        return out

    def unit_times(elem) -> dict:
        return {((), k): v for k, v in elem.terms.items()}

    n11, n22 = square(block1, block1), square(block2, block2)
    mixed = plus(square(block1, block2), square(block2, block1))
    total = square(range(n), range(n))
    return GammaSquareReport(
        total=total == unit_times(alg.norm()),
        block1=n11 == unit_times(alg.norm_x1()),
        block2=n22 == unit_times(alg.norm_x2()),
        mixed=not mixed,
    )


# ---------------------------------------------------------------------------
# PBW conditions for the nonhomogeneous Clifford relations


@dataclass
class PBWReport:
    condition_i: bool
    condition_ii: bool

    @property
    def passed(self) -> bool:
        return self.condition_i and self.condition_ii


def clifford_relation_space(r: RMatrix, metric: dict | None = None) -> list[dict]:
    """P = { rho + psi0(rho) } over all ordered generator pairs; words as keys."""
    n1, n2 = r.n1, r.n2
    g = metric or {}
    out = []
    for lo, hi in ((0, n1), (n1, n1 + n2)):
        for a in range(lo, hi):
            for b in range(lo, hi):
                rel: dict = {}
                add_into(rel, (a, b), ONE)
                add_into(rel, (b, a), ONE)
                gab = g.get((a, b), ONE if a == b else ZERO)
                add_into(rel, (), -gab * 2)
                out.append(rel)
    out.extend(_mixed_rows(r).values())
    return out


def _mixed_rows(r: RMatrix) -> dict:
    n1 = r.n1
    rows = {(b, m): {(n1 + b, m): ONE} for b in range(r.n2) for m in range(n1)}
    for (l, a, b, m), v in r.nonzero().items():
        add_into(rows[b, m], (l, n1 + a), v)
    return rows


def _filtered_key(word: tuple, top: int):
    # words of the top degree sort first so echelon pivots prefer them
    return (0 if len(word) == top else 1, len(word), word)


def check_pbw_conditions(r: RMatrix, metric: dict | None = None) -> PBWReport:
    """(i) P meets F^1 trivially; (ii) (P E + E P) meets F^2 inside P."""
    ngens = r.n1 + r.n2
    P = clifford_relation_space(r, metric)

    full = Echelon({_filtered_key(w, 2): v for w, v in rel.items()} for rel in P)
    quad = Echelon({w: v for w, v in rel.items() if len(w) == 2} for rel in P)
    cond_i = full.rank == quad.rank

    W = []
    for rel in P:
        for c in range(ngens):
            W.append({_filtered_key(w + (c,), 3): v for w, v in rel.items()})
            W.append({_filtered_key((c,) + w, 3): v for w, v in rel.items()})
    ech = Echelon(W)
    cond_ii = True
    for piv, row in ech.rows.items():
        if piv[0] == 0:
            continue
        vec = {_filtered_key(k[2], 2): v for k, v in row.items()}
        if not full.contains(vec):
            cond_ii = False
            break
    return PBWReport(cond_i, cond_ii)

