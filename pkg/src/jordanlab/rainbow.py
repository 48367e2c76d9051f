"""Rainbows: partitions of the square of a point set that contain the diagonal
as a union of classes and are closed under transposition.

``ColorMatrix`` is the carrier used everywhere else in the package: an n x n
integer array whose entry (a, b) is the index of the class containing (a, b).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import bounds
from .errors import (
    DiagonalNotUnionOfClasses,
    DomainMismatch,
    JordanLabError,
    NotAPartition,
    NotTransposeClosed,
    OrderTooLarge,
)
from .relations import Relation


class ColorMatrix:
    """A validated rainbow. Build instances with :func:`validate_rainbow`."""

    __slots__ = ("colors", "n", "rank", "diagonal_colors", "transpose_map", "_key")

    def __init__(self, colors: np.ndarray, diagonal_colors, transpose_map):
        colors.setflags(write=False)
        self.colors = colors
        self.n = colors.shape[0]
        self.rank = len(transpose_map)
        self.diagonal_colors = frozenset(diagonal_colors)
        self.transpose_map = tuple(transpose_map)
        self._key = None

    @property
    def order(self) -> int:
        return self.n

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.colors.ravel(), minlength=self.rank)

    def relation(self, color: int) -> Relation:
        return Relation(self.colors == color)

    def relations(self) -> list[Relation]:
        return [self.relation(c) for c in range(self.rank)]

    def indicator(self, color: int) -> np.ndarray:
        return (self.colors == color).astype(np.int64)

    def indicators(self) -> np.ndarray:
        """Stacked 0/1 adjacency matrices, shape (rank, n, n)."""
        return (self.colors[None, :, :] == np.arange(self.rank)[:, None, None]).astype(np.int64)

    def tolist(self) -> list[list[int]]:
        return self.colors.tolist()

    def __eq__(self, other):
        if not isinstance(other, ColorMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.colors, other.colors))

    def __hash__(self):
        if self._key is None:
            self._key = hash((self.n, self.colors.tobytes()))
        return self._key

    def __repr__(self):
        return f"ColorMatrix(n={self.n}, rank={self.rank}, colors={self.colors.tolist()})"


def validate_rainbow(colors) -> ColorMatrix:
    """Check the rainbow axioms on a color matrix and wrap it.

    Color labels are kept as given; use :func:`canonical` for the
    deterministic numbering.
    """
    arr = np.array(colors)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotAPartition(f"color matrix must be square and non-empty, got shape {arr.shape}")
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(arr == np.round(arr)):
            arr = arr.astype(np.int64)
        else:
            raise NotAPartition("color entries must be integers")
    arr = arr.astype(np.int64)
    used = np.unique(arr)
    rank = int(used.size)
    if used[0] != 0 or used[-1] != rank - 1:
        missing = sorted(set(range(int(used[-1]) + 1)) - set(used.tolist()))
        raise NotAPartition(
            f"colors must form a contiguous range starting at 0; found min {used[0]}, missing {missing[:5]}"
        )
    n = arr.shape[0]
    diag = set(np.diag(arr).tolist())
    off = arr[~np.eye(n, dtype=bool)]
    mixed = diag.intersection(off.tolist())
    if mixed:
        raise DiagonalNotUnionOfClasses(
            f"color(s) {sorted(mixed)} occur both on and off the diagonal"
        )
    # the transpose of class c must land inside a single class
    pairs = np.unique(np.stack([arr.ravel(), arr.T.ravel()]), axis=1)
    if pairs.shape[1] != rank:
        c = int(pairs[0][np.nonzero(np.diff(pairs[0]) == 0)[0][0]])
        raise NotTransposeClosed(f"the transpose of class {c} is not a single class")
    tmap = pairs[1].tolist()
    if any(tmap[tmap[c]] != c for c in range(rank)):
        raise NotTransposeClosed("class transposition is not an involution")
    return ColorMatrix(arr, diag, tmap)


def relabel_colors(colors: np.ndarray) -> np.ndarray:
    """Canonical numbering: diagonal colors first, then by first cell in row-major order."""
    n = colors.shape[0]
    flat = colors.ravel()
    labels, first = np.unique(flat, return_index=True)
    on_diag = (first // n) == (first % n)
    order = np.lexsort((first, ~on_diag))
    new = np.empty(labels.max() + 1, dtype=np.int64)
    new[labels[order]] = np.arange(len(labels))
    return new[colors]


def canonical(cm: ColorMatrix) -> ColorMatrix:
    return validate_rainbow(relabel_colors(cm.colors))


def rainbow_from_labels(labels: np.ndarray) -> ColorMatrix:
    """Canonical rainbow from an arbitrary integer labelling that already is one."""
    return validate_rainbow(relabel_colors(np.asarray(labels)))


def same_partition(a: ColorMatrix, b: ColorMatrix) -> bool:
    return a.n == b.n and a.rank == b.rank and is_fusion_of(a, b)


def relabel_points(cm: ColorMatrix, perm: Sequence[int]) -> ColorMatrix:
    """Move point x to ``perm[x]``; colors are kept."""
    perm = np.asarray(perm)
    new = np.empty_like(cm.colors)
    new[np.ix_(perm, perm)] = cm.colors
    return validate_rainbow(new)


def trivial_rainbow(n: int) -> ColorMatrix:
    return validate_rainbow(1 - np.eye(n, dtype=np.int64))


def discrete_rainbow(n: int) -> ColorMatrix:
    return rainbow_from_labels(np.arange(n * n).reshape(n, n))


def thin_rainbow(perms: Sequence[Sequence[int]]) -> ColorMatrix:
    """Rainbow whose classes are the given permutations (one per color).

    Raises if the permutations do not partition the square.
    """
    n = len(perms[0])
    colors = np.full((n, n), -1, dtype=np.int64)
    for c, p in enumerate(perms):
        rows = np.arange(n)
        if np.any(colors[rows, p] != -1):
            raise NotAPartition("permutations overlap")
        colors[rows, p] = c
    if np.any(colors < 0):
        raise NotAPartition("permutations do not cover all pairs")
    return rainbow_from_labels(colors)


class ExactMatrix:
    """Square matrix with ``Fraction`` entries (numpy object array)."""

    __slots__ = ("entries", "n")

    def __init__(self, entries):
        arr = np.array(entries, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise JordanLabError(f"exact matrix must be square, got shape {arr.shape}")
        self.entries = np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr
        self.n = arr.shape[0]

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def ones(cls, n):
        return cls(np.ones((n, n), dtype=np.int64))

    @classmethod
    def from_relation(cls, r: Relation):
        return cls(r.matrix.astype(np.int64))

    def _check(self, other):
        if self.n != other.n:
            raise DomainMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __add__(self, other):
        self._check(other)
        return ExactMatrix(self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix(self.entries - other.entries)

    def __mul__(self, scalar):
        return ExactMatrix(self.entries * Fraction(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return ExactMatrix(self.entries.dot(other.entries))

    def jordan(self, other):
        """(AB + BA) / 2."""
        return (self @ other + other @ self) * Fraction(1, 2)

    def hadamard(self, other):
        self._check(other)
        return ExactMatrix(self.entries * other.entries)

    @property
    def T(self):
        return ExactMatrix(self.entries.T)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.n == other.n and bool((self.entries == other.entries).all())

    __hash__ = None

    def __repr__(self):
        return f"ExactMatrix({[[str(x) for x in row] for row in self.entries.tolist()]})"


def _value_codes(values: np.ndarray) -> np.ndarray:
    codes: dict = {}
    flat = [codes.setdefault(v, len(codes)) for v in values.ravel().tolist()]
    return np.array(flat, dtype=np.int64).reshape(values.shape)


def standard_basis(mats: Iterable, n: Optional[int] = None) -> ColorMatrix:
    """Rainbow of the smallest rainbow algebra containing ``mats``.

    Cells are grouped by their joint values in every generator (plus I and
    J, which are always adjoined), then split once more by the values at the
    transposed cell so the class set is closed under transposition.
    """
    arrays = []
    for m in mats:
        arr = m.entries if isinstance(m, ExactMatrix) else np.asarray(m, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainMismatch(f"generator is not square: shape {arr.shape}")
        arrays.append(arr)
    if n is None:
        if not arrays:
            raise DomainMismatch("need the order when no generators are given")
        n = arrays[0].shape[0]
    if any(a.shape[0] != n for a in arrays):
        raise DomainMismatch("generators of different sizes")
    layers = [np.eye(n, dtype=np.int64)]
    layers += [_value_codes(np.vectorize(Fraction, otypes=[object])(a)) for a in arrays]
    stacked = np.stack(layers)
    keys = np.concatenate([stacked, stacked.transpose(0, 2, 1)]).reshape(len(layers) * 2, n * n)
    _, labels = np.unique(keys.T, axis=0, return_inverse=True)
    return rainbow_from_labels(labels.reshape(n, n))


def is_fusion_of(coarse: ColorMatrix, fine: ColorMatrix) -> bool:
    """True iff every class of ``fine`` lies inside a class of ``coarse``."""
    if coarse.n != fine.n:
        raise DomainMismatch(f"rainbows on {coarse.n} and {fine.n} points")
    pairs = np.unique(np.stack([fine.colors.ravel(), coarse.colors.ravel()]), axis=1)
    return pairs.shape[1] == fine.rank


@dataclass(frozen=True)
class RainbowClass:
    homogeneous: bool
    regular: bool
    thin: bool
    symmetric: bool
    rank: int
    order: int
    ratio: Fraction


def degree_table(cm: ColorMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Out- and in-degree of every point in every class, each of shape (n, rank)."""
    n, r = cm.n, cm.rank
    rows = np.repeat(np.arange(n), n)
    out_deg = np.bincount(rows * r + cm.colors.ravel(), minlength=n * r).reshape(n, r)
    in_deg = np.bincount(rows * r + cm.colors.T.ravel(), minlength=n * r).reshape(n, r)
    return out_deg, in_deg


def classify_rainbow(cm: ColorMatrix) -> RainbowClass:
    out_deg, in_deg = degree_table(cm)
    return RainbowClass(
        homogeneous=len(cm.diagonal_colors) == 1,
        regular=bool((out_deg == out_deg[0]).all()),
        thin=bool(out_deg.max() <= 1 and in_deg.max() <= 1),
        symmetric=all(cm.transpose_map[c] == c for c in range(cm.rank)),
        rank=cm.rank,
        order=cm.n,
        ratio=Fraction(cm.rank, cm.n),
    )


def _point_invariants(cm: ColorMatrix) -> list[tuple]:
    sizes = cm.class_sizes()
    out = []
    for x in range(cm.n):
        row = sorted(sizes[cm.colors[x]].tolist())
        col = sorted(sizes[cm.colors[:, x]].tolist())
        out.append((int(sizes[cm.colors[x, x]]), tuple(row), tuple(col)))
    return out


def combinatorial_isomorphism(a: ColorMatrix, b: ColorMatrix, max_order: Optional[int] = None
                              ) -> Optional[tuple[int, ...]]:
    """Lexicographically least point bijection f with f(S_a) = S_b, if any.

    Colors need not agree; only the partitions are matched.
    """
    bound = bounds.brute_order_bound() if max_order is None else max_order
    if max(a.n, b.n) > bound:
        raise OrderTooLarge(f"isomorphism search limited to order {bound}")
    if a.n != b.n or a.rank != b.rank:
        return None
    if sorted(a.class_sizes().tolist()) != sorted(b.class_sizes().tolist()):
        return None
    n = a.n
    inv_a, inv_b = _point_invariants(a), _point_invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    size_a, size_b = a.class_sizes(), b.class_sizes()
    ca, cb = a.colors, b.colors
    image = [-1] * n
    used = [False] * n
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def bind(c, d, trail):
        if c in fwd:
            return fwd[c] == d
        if d in bwd or size_a[c] != size_b[d]:
            return False
        fwd[c] = d
        bwd[d] = c
        trail.append(c)
        return True

    def extend(x):
        if x == n:
            return True
        for y in range(n):
            if used[y] or inv_a[x] != inv_b[y]:
                continue
            trail: list[int] = []
            ok = bind(int(ca[x, x]), int(cb[y, y]), trail)
            for x2 in range(x):
                if not ok:
                    break
                y2 = image[x2]
                ok = bind(int(ca[x, x2]), int(cb[y, y2]), trail) and bind(int(ca[x2, x]), int(cb[y2, y]), trail)
            if ok:
                image[x] = y
                used[y] = True
                if extend(x + 1):
                    return True
                used[y] = False
                image[x] = -1
            for c in trail:
                del bwd[fwd.pop(c)]
        return False

    if extend(0):
        return tuple(image)
    return None
