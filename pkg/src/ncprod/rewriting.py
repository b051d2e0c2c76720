"""Quadratic (possibly nonhomogeneous) rewriting systems on words.

A rule maps an adjacent letter pair ``(a, b)`` to a linear combination of
words of length 2 or 0, so the same engine serves the quadratic algebra,
its Koszul dual (where some pairs rewrite to zero) and Clifford algebras
(where squares rewrite to scalars).  Elements are ``dict`` objects mapping
letter tuples to nonzero coefficients.
"""

from __future__ import annotations

import random
from itertools import product
from typing import Iterable, Iterator

from .linalg import ONE

Word = tuple
Rule = list  # list of (coefficient, word)

STRATEGIES = ("leftmost", "rightmost", "random")


def add_into(acc: dict, key, v) -> None:
    if key in acc:
        s = acc[key] + v
        if s:
            acc[key] = s
        else:
            del acc[key]
    elif v:
        acc[key] = v


class RewriteSystem:
    def __init__(self, ngens: int, rules: dict[tuple[int, int], Rule]):
        self.ngens = ngens
        self.rules = rules

    def redex_positions(self, w: Word) -> list[int]:
        rules = self.rules
        return [i for i in range(len(w) - 1) if (w[i], w[i + 1]) in rules]

    def is_irreducible(self, w: Word) -> bool:
        rules = self.rules
        return all((w[i], w[i + 1]) not in rules for i in range(len(w) - 1))

    def _pick(self, w: Word, strategy: str, rng: random.Random | None) -> int | None:
        rules = self.rules
        if strategy == "leftmost":
            for i in range(len(w) - 1):
                if (w[i], w[i + 1]) in rules:
                    return i
            return None
        if strategy == "rightmost":
            for i in range(len(w) - 2, -1, -1):
                if (w[i], w[i + 1]) in rules:
                    return i
            return None
        if strategy == "random":
            pos = self.redex_positions(w)
            return (rng or random).choice(pos) if pos else None
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")

    def reduce(self, elem: dict, strategy: str = "leftmost", rng: random.Random | None = None) -> dict:
        """Rewrite every word of ``elem`` until irreducible."""
        done: dict = {}
        todo = dict(elem)
        while todo:
            nxt: dict = {}
            for w, c in todo.items():
                i = self._pick(w, strategy, rng)
                if i is None:
                    add_into(done, w, c)
                    continue
                head, tail = w[:i], w[i + 2 :]
                for k, mid in self.rules[w[i], w[i + 1]]:
                    add_into(nxt, head + tuple(mid) + tail, c * k)
            todo = nxt
        return done

    def normal_form(self, w: Iterable[int], strategy: str = "leftmost", rng: random.Random | None = None) -> dict:
        return self.reduce({tuple(w): ONE}, strategy, rng)

    def ambiguities(self) -> Iterator[Word]:
        """Overlap words abc where both ab and bc are redexes."""
        by_first: dict[int, list[int]] = {}
        for a, b in self.rules:
            by_first.setdefault(a, []).append(b)
        for a, b in self.rules:
            for c in by_first.get(b, ()):
                yield (a, b, c)

    def overlap_failures(self) -> list[tuple[Word, dict]]:
        """Ambiguities whose two one-step reducts have different normal forms.

        An empty list certifies (diamond lemma) that irreducible words form a
        basis of the quotient algebra.
        """
        bad = []
        for a, b, c in self.ambiguities():
            left = {}
            for k, mid in self.rules[a, b]:
                add_into(left, tuple(mid) + (c,), k)
            right = {}
            for k, mid in self.rules[b, c]:
                add_into(right, (a,) + tuple(mid), k)
            diff = self.reduce(left)
            for w, v in self.reduce(right).items():
                add_into(diff, w, -v)
            if diff:
                bad.append(((a, b, c), diff))
        return bad

    def irreducible_words(self, n: int) -> Iterator[Word]:
        """Irreducible words of length n, in lexicographic order."""
        if n == 0:
            yield ()
            return
        succ = {a: [b for b in range(self.ngens) if (a, b) not in self.rules] for a in range(self.ngens)}

        def rec(w):
            if len(w) == n:
                yield w
                return
            for b in succ[w[-1]]:
                yield from rec(w + (b,))

        for a in range(self.ngens):
            yield from rec((a,))

    def count_irreducible(self, n: int) -> int:
        """Number of irreducible words of length n (transfer-matrix count)."""
        if n == 0:
            return 1
        counts = [1] * self.ngens
        for _ in range(n - 1):
            counts = [
                sum(counts[b] for b in range(self.ngens) if (a, b) not in self.rules) for a in range(self.ngens)
            ]
        return sum(counts)


def all_words(ngens: int, n: int) -> Iterator[Word]:
    return product(range(ngens), repeat=n)
