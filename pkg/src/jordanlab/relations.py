"""Binary relations on the point set {0, ..., n-1}.

A relation is stored as a read-only boolean n x n matrix; ``r.matrix[a, b]``
is true iff ``(a, b)`` belongs to the relation.
"""
from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .errors import DomainMismatch, JordanLabError, PointOutOfRange


class Relation:
    __slots__ = ("n", "matrix", "_key")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise JordanLabError(f"relation matrix must be square and non-empty, got shape {m.shape}")
        m.setflags(write=False)
        self.n = m.shape[0]
        self.matrix = m
        self._key = None

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        m = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise PointOutOfRange(f"pair {(a, b)} outside a {n}-point set")
            m[a, b] = True
        return cls(m)

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def from_function(cls, images: Iterable[int]) -> "Relation":
        """The graph {(x, f(x))} of a map given by its image list."""
        images = list(images)
        n = len(images)
        return cls.from_pairs(n, enumerate(images))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.matrix))]

    def __len__(self):
        return int(self.matrix.sum())

    def __contains__(self, pair):
        a, b = pair
        return bool(self.matrix[a, b])

    def __or__(self, other: "Relation") -> "Relation":
        _same_domain(self, other)
        return Relation(self.matrix | other.matrix)

    def __and__(self, other: "Relation") -> "Relation":
        _same_domain(self, other)
        return Relation(self.matrix & other.matrix)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        if self._key is None:
            self._key = hash((self.n, np.packbits(self.matrix).tobytes()))
        return self._key

    def __repr__(self):
        return f"Relation(n={self.n}, pairs={self.pairs()})"

    def as_permutation(self) -> Optional[tuple[int, ...]]:
        """Image tuple if the relation is a bijection of the point set."""
        if not (self.matrix.sum(axis=1) == 1).all() or not (self.matrix.sum(axis=0) == 1).all():
            return None
        return tuple(int(i) for i in self.matrix.argmax(axis=1))


def _same_domain(a: Relation, b: Relation):
    if a.n != b.n:
        raise DomainMismatch(f"relations on {a.n} and {b.n} points")


def transpose(r: Relation) -> Relation:
    return Relation(r.matrix.T)


def relational_product(a: Relation, b: Relation) -> Relation:
    """{(x, z) : (x, y) in a and (y, z) in b for some y}."""
    _same_domain(a, b)
    prod = a.matrix.astype(np.int64) @ b.matrix.astype(np.int64)
    return Relation(prod > 0)


def jordan_union_product(a: Relation, b: Relation) -> Relation:
    return relational_product(a, b) | relational_product(b, a)


def neighborhood(r: Relation, point: int) -> frozenset[int]:
    if not 0 <= point < r.n:
        raise PointOutOfRange(f"point {point} outside a {r.n}-point set")
    return frozenset(int(b) for b in np.nonzero(r.matrix[point])[0])


def is_regular(r: Relation) -> Optional[int]:
    """Common out-valency of ``r``, or None when it varies between points."""
    degrees = r.matrix.sum(axis=1)
    if (degrees == degrees[0]).all():
        return int(degrees[0])
    return None


def is_thin(r: Relation) -> bool:
    return bool((r.matrix.sum(axis=1) <= 1).all() and (r.matrix.sum(axis=0) <= 1).all())


def permutation_relation(perm: Iterable[int]) -> Relation:
    return Relation.from_function(perm)


def adjacency(r: Relation) -> np.ndarray:
    """0/1 integer adjacency matrix."""
    return r.matrix.astype(np.int64)
