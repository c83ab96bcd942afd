"""Rooted trees and forests in canonical level-sequence form.

A rooted tree is stored as its level sequence: the depths (root = 1) of the
vertices visited in preorder, with the children of every vertex emitted in
descending lexicographic order of their own level sequences.  Two trees are
isomorphic iff their canonical sequences coincide, so equality and hashing
are plain tuple operations.  The empty tree has the empty sequence.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Iterable, Sequence


class RootedTree:
    __slots__ = ("levels", "_hash")

    def __init__(self, levels: Iterable[int] = ()):
        levels = tuple(int(x) for x in levels)
        if levels:
            _check_level_sequence(levels)
            levels = _canonical(levels)
        self.levels = levels
        self._hash = hash(levels)

    @classmethod
    def _raw(cls, levels: tuple[int, ...]) -> RootedTree:
        obj = cls.__new__(cls)
        obj.levels = levels
        obj._hash = hash(levels)
        return obj

    @classmethod
    def from_children(cls, children: Iterable[RootedTree]) -> RootedTree:
        """Tree whose root carries the given subtrees."""
        kids = sorted((c.levels for c in children if c.levels), reverse=True)
        seq = [1]
        for k in kids:
            seq.extend(x + 1 for x in k)
        return cls._raw(tuple(seq))

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def order(self) -> int:
        return len(self.levels)

    def is_empty(self) -> bool:
        return not self.levels

    def children(self) -> list[RootedTree]:
        """Subtrees hanging from the root, in canonical (descending) order."""
        return [RootedTree._raw(c) for c in _split_children(self.levels)]

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedTree) and self.levels == other.levels

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: RootedTree) -> bool:
        return (len(self.levels), self.levels) < (len(other.levels), other.levels)

    def __repr__(self) -> str:
        return f"RootedTree({list(self.levels)})"

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.levels)) + "]"

    def to_json(self) -> list[int]:
        return list(self.levels)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> RootedTree:
        return cls(data)


EMPTY = RootedTree._raw(())
LEAF = RootedTree._raw((1,))


def _check_level_sequence(levels: tuple[int, ...]) -> None:
    if levels[0] != 1:
        raise ValueError(f"level sequence must start at 1: {levels}")
    for prev, cur in zip(levels, levels[1:]):
        if cur < 2 or cur > prev + 1:
            raise ValueError(f"invalid level sequence {levels}")


def _split_children(levels: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Level sequences (rebased to 1) of the root's subtrees, in stored order."""
    out = []
    start = None
    for i in range(1, len(levels)):
        if levels[i] == 2:
            if start is not None:
                out.append(tuple(x - 1 for x in levels[start:i]))
            start = i
    if start is not None:
        out.append(tuple(x - 1 for x in levels[start:]))
    return out


@lru_cache(maxsize=None)
def _canonical(levels: tuple[int, ...]) -> tuple[int, ...]:
    kids = sorted((_canonical(c) for c in _split_children(levels)), reverse=True)
    seq = [1]
    for k in kids:
        seq.extend(x + 1 for x in k)
    return tuple(seq)


class Forest(tuple):
    """Multiset of nonempty rooted trees; equality ignores order."""

    def __new__(cls, trees: Iterable[RootedTree] = ()):
        trees = [t for t in trees if not t.is_empty()]
        return super().__new__(cls, sorted(trees))

    @property
    def order(self) -> int:
        return sum(len(t) for t in self)

    def __repr__(self) -> str:
        return "Forest(" + ", ".join(str(t) for t in self) + ")"


@lru_cache(maxsize=None)
def enumerate_trees(n: int) -> tuple[RootedTree, ...]:
    """All rooted trees with ``n`` vertices, descending lexicographic order.

    For n <= 4 this is the column order of the classical table (tall chain
    first, bushy tree last).  ``n = 0`` gives ``(EMPTY,)``.
    """
    if n < 0:
        raise ValueError("tree order must be nonnegative")
    if n == 0:
        return (EMPTY,)
    out = {RootedTree.from_children(f) for f in _forests(n - 1, n - 1)}
    return tuple(sorted(out, key=lambda t: t.levels, reverse=True))


@lru_cache(maxsize=None)
def _forests(n: int, max_part: int) -> tuple[tuple[RootedTree, ...], ...]:
    """Forests of total order n whose trees all have order <= max_part.

    Trees are chosen in nonincreasing (order, index) to avoid duplicates.
    """
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, max_part), 0, -1):
        trees = enumerate_trees(k)
        for i, t in enumerate(trees):
            for rest in _forests(n - k, k):
                # rest trees must not precede t in the (order, index) ranking
                if rest and len(rest[0]) == k and enumerate_trees(k).index(rest[0]) < i:
                    continue
                out.append((t,) + rest)
    return tuple(out)


def trees_up_to(n: int, include_empty: bool = True) -> list[RootedTree]:
    """Trees of order <= n sorted by order, each order block in enumeration order."""
    out = [EMPTY] if include_empty else []
    for k in range(1, n + 1):
        out.extend(enumerate_trees(k))
    return out


@lru_cache(maxsize=None)
def symmetry(u: RootedTree) -> int:
    if u.is_empty():
        return 1
    counts = Counter(u.children())
    return prod(factorial(m) * symmetry(c) ** m for c, m in counts.items())


@lru_cache(maxsize=None)
def density(u: RootedTree) -> int:
    if u.is_empty():
        return 1
    return len(u) * prod(density(c) for c in u.children())


def butcher_product(u: RootedTree, v: RootedTree) -> RootedTree:
    """Graft the root of ``v`` onto the root of ``u``."""
    if u.is_empty() or v.is_empty():
        raise ValueError("Butcher product is defined for nonempty trees only")
    return RootedTree.from_children(u.children() + [v])


@lru_cache(maxsize=None)
def _rooted_cuts(u: RootedTree) -> Counter:
    """Admissible cuts that keep the root: Counter of (remainder, removed trees)."""
    options_per_child = []
    for c in u.children():
        opts: Counter = Counter({(None, (c,)): 1})
        for (rem, cut), m in _rooted_cuts(c).items():
            opts[(rem, cut)] += m
        options_per_child.append(opts)
    out: Counter = Counter()
    for choice in product(*(list(o.items()) for o in options_per_child)):
        kept = []
        removed: list[RootedTree] = []
        mult = 1
        for (rem, cut), m in choice:
            if rem is not None:
                kept.append(rem)
            removed.extend(cut)
            mult *= m
        out[(RootedTree.from_children(kept), tuple(removed))] += mult
    return out


@lru_cache(maxsize=None)
def coproduct(u: RootedTree) -> tuple[tuple[RootedTree, Forest, int], ...]:
    """Pruning coproduct of ``u``.

    Returns ``(remainder, removed_forest, multiplicity)`` triples; the remainder
    is the part still attached to the root (``EMPTY`` for complete uprooting).
    Multiplicities count distinct cuts giving the same pair.
    """
    if u.is_empty():
        return ((EMPTY, Forest(), 1),)
    acc: Counter = Counter()
    for (rem, cut), m in _rooted_cuts(u).items():
        acc[(rem, Forest(cut))] += m
    acc[(EMPTY, Forest([u]))] += 1
    return tuple((r, f, m) for (r, f), m in sorted(acc.items(), key=lambda kv: (len(kv[0][0]), kv[0][0].levels, kv[0][1])))
