"""Structure constants, scheme predicates and the constructions built on
closed rainbows: the doubled algebra J(G), its recognizer, symmetrization and
the membership checks for products in a Jordan-closed span.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .cayley import CayleyTable, is_associative, is_commutative
from .closures import ClosureKind, closure, path_signatures
from .errors import (
    KTooLarge,
    NotAbelian,
    NotAGroup,
    NotAJC,
    NotAJordanScheme,
    NotNonRegularThinJS,
)
from .rainbow import (
    ColorMatrix,
    ExactMatrix,
    classify_rainbow,
    degree_table,
    rainbow_from_labels,
    relabel_points,
    same_partition,
)

MAX_SYMMETRIZATION_K = 6


@dataclass(frozen=True)
class StructureTensor:
    """Intersection numbers keyed by (i, j, t).

    For the Jordan kind the key has i <= j and the value is
    p^t_{i,j} + p^t_{j,i} (no factor 1/2).
    """
    kind: ClosureKind
    rank: int
    values: dict = field(hash=False, compare=True)

    def __getitem__(self, key) -> int:
        i, j, t = key
        if self.kind is ClosureKind.JORDAN and i > j:
            i, j = j, i
        return self.values.get((i, j, t), 0)

    def dense(self) -> np.ndarray:
        r = self.rank
        out = np.zeros((r, r, r), dtype=np.int64)
        for (i, j, t), v in self.values.items():
            out[i, j, t] = v
            if self.kind is ClosureKind.JORDAN:
                out[j, i, t] = v
        return out


@dataclass(frozen=True)
class NonClosedWitness:
    """Two cells of class ``t`` that see a different number of (i, j) 2-paths."""
    i: int
    j: int
    t: int
    cells: tuple[tuple[int, int], tuple[int, int]]
    counts: tuple[int, int]


def _signature_rows(cm: ColorMatrix, kind: ClosureKind) -> np.ndarray:
    return path_signatures(cm.colors, cm.rank, kind).reshape(cm.n * cm.n, cm.n)


def _pair_counts(codes: np.ndarray, rank: int, kind: ClosureKind) -> dict:
    out = {}
    for code, count in Counter(codes.tolist()).items():
        i, j = divmod(code, rank)
        if kind is ClosureKind.JORDAN and i == j:
            count *= 2
        out[(i, j)] = count
    return out


def intersection_numbers(cm: ColorMatrix, kind: ClosureKind) -> Optional[StructureTensor]:
    """Structure constants, or None when some count varies inside a class."""
    sig = _signature_rows(cm, kind)
    flat = cm.colors.ravel()
    first = np.unique(flat, return_index=True)[1]
    if not (sig == sig[first[flat]]).all():
        return None
    values = {}
    for t in range(cm.rank):
        for (i, j), v in _pair_counts(sig[first[t]], cm.rank, kind).items():
            values[(i, j, t)] = v
    return StructureTensor(kind, cm.rank, values)


def closure_witness(cm: ColorMatrix, kind: ClosureKind) -> Optional[NonClosedWitness]:
    sig = _signature_rows(cm, kind)
    flat = cm.colors.ravel()
    first = np.unique(flat, return_index=True)[1]
    bad = np.nonzero((sig != sig[first[flat]]).any(axis=1))[0]
    if bad.size == 0:
        return None
    cell = int(bad[0])
    t = int(flat[cell])
    ref = int(first[t])
    c1 = _pair_counts(sig[ref], cm.rank, kind)
    c2 = _pair_counts(sig[cell], cm.rank, kind)
    i, j = min(k for k in set(c1) | set(c2) if c1.get(k, 0) != c2.get(k, 0))
    n = cm.n
    return NonClosedWitness(i, j, t, (divmod(ref, n), divmod(cell, n)), (c1.get((i, j), 0), c2.get((i, j), 0)))


def is_homogeneous(cm: ColorMatrix) -> bool:
    return len(cm.diagonal_colors) == 1


@dataclass(frozen=True)
class SchemeRecord:
    cm: ColorMatrix
    tensor_assoc: Optional[StructureTensor]
    tensor_jordan: Optional[StructureTensor]
    is_cc: bool
    is_jc: bool
    is_as: bool
    is_js: bool
    proper_js: Optional[bool] = None


def analyze(cm: ColorMatrix) -> SchemeRecord:
    ta = intersection_numbers(cm, ClosureKind.ASSOCIATIVE)
    tj = intersection_numbers(cm, ClosureKind.JORDAN)
    homog = is_homogeneous(cm)
    is_js = tj is not None and homog
    return SchemeRecord(
        cm=cm,
        tensor_assoc=ta,
        tensor_jordan=tj,
        is_cc=ta is not None,
        is_jc=tj is not None,
        is_as=ta is not None and homog,
        is_js=is_js,
        proper_js=is_proper_js(cm) if is_js else None,
    )


def is_jordan_scheme(cm: ColorMatrix) -> bool:
    return is_homogeneous(cm) and intersection_numbers(cm, ClosureKind.JORDAN) is not None


def symmetrize(cm: ColorMatrix) -> ColorMatrix:
    """Merge every class with its transpose."""
    tmap = np.array(cm.transpose_map)
    return rainbow_from_labels(np.minimum(cm.colors, tmap[cm.colors]))


def improper_witness(cm: ColorMatrix) -> Optional[ColorMatrix]:
    """An association scheme whose symmetrization is ``cm``, if one exists.

    If X is such a scheme, each class of ``cm`` is x or x + x^t for a class x
    of X, and X refines the WL closure W of ``cm``; hence W has at most two
    classes inside each class of ``cm``, a two-way split is a transposed pair,
    and W is homogeneous. Those conditions make W itself a witness, so
    checking W alone decides the question.
    """
    if not all(cm.transpose_map[c] == c for c in range(cm.rank)):
        return None
    wl = closure(cm, ClosureKind.ASSOCIATIVE)
    if is_homogeneous(wl) and same_partition(symmetrize(wl), cm):
        return wl
    return None


def is_proper_js(cm: ColorMatrix) -> bool:
    """True unless ``cm`` is the symmetrization of an association scheme."""
    if not is_jordan_scheme(cm):
        raise NotAJordanScheme("properness is defined for Jordan schemes only")
    return improper_witness(cm) is None


@dataclass(frozen=True)
class RatioReport:
    ratio: Fraction
    bound_tight: bool
    split: Optional[tuple[tuple[int, ...], tuple[int, ...]]]


def regular_classes(cm: ColorMatrix) -> list[bool]:
    out_deg, _ = degree_table(cm)
    return [bool(x) for x in (out_deg == out_deg[0]).all(axis=0)]


def fiber_split(cm: ColorMatrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Point halves (first containing point 0) such that regular classes stay
    inside a half and non-regular ones cross between halves."""
    reg = regular_classes(cm)
    zero_side = tuple(b for b in range(cm.n) if reg[cm.colors[0, b]])
    other = tuple(b for b in range(cm.n) if not reg[cm.colors[0, b]])
    return zero_side, other


def ratio_report(cm: ColorMatrix) -> RatioReport:
    if not is_jordan_scheme(cm):
        raise NotAJordanScheme("rank-to-order ratio bound applies to Jordan schemes")
    info = classify_rainbow(cm)
    if info.ratio > Fraction(3, 2):
        raise AssertionError(f"Jordan scheme with ratio {info.ratio} > 3/2")
    split = None if info.regular else fiber_split(cm)
    return RatioReport(info.ratio, info.ratio == Fraction(3, 2), split)


def _jcal_colors(G: CayleyTable) -> np.ndarray:
    n = G.n
    t = G.table
    colors = np.empty((2 * n, 2 * n), dtype=np.int64)
    x = np.arange(n)
    for a in range(n):
        colors[x, t[a]] = a
        colors[n + x, n + t[a]] = a
        colors[x, n + t[a]] = n + a
        colors[n + x, t[a]] = 2 * n + a
    return colors


def construct_jcal(G: CayleyTable) -> SchemeRecord:
    """J(G) on 2|G| points: classes [A 0; 0 A], [0 C; 0 0], [0 0; D 0] for
    A, C, D running over the regular permutations of the abelian group G."""
    if not is_associative(G):
        raise NotAGroup("J(G) needs a group")
    if not is_commutative(G):
        raise NotAbelian("J(G) needs an abelian group")
    return analyze(rainbow_from_labels(_jcal_colors(G)))


@dataclass(frozen=True)
class Recognition:
    group: CayleyTable
    conjugator: tuple[int, ...]


def recognize_nonregular_thin(cm: ColorMatrix) -> Recognition:
    """Find G and a point relabeling taking ``cm`` onto J(G).

    Split the points into the two fibers, identify the second fiber with the
    first along the crossing class through (first point, first point of the
    other fiber); after this relabeling the diagonal blocks coincide and the
    group is read off the first block.
    """
    info = classify_rainbow(cm)
    if not (info.thin and not info.regular and is_jordan_scheme(cm)):
        raise NotNonRegularThinJS("input is not a non-regular thin Jordan scheme")
    omega0, omega1 = fiber_split(cm)
    n = len(omega0)
    if 2 * n != cm.n:
        raise NotNonRegularThinJS("fibers of unequal size")
    colors = cm.colors
    link = colors[omega0[0], omega1[0]]
    perm = [-1] * cm.n
    for i, p in enumerate(omega0):
        q = int(np.nonzero(colors[p] == link)[0][0])
        perm[p] = i
        perm[q] = n + i
    moved = relabel_points(cm, perm).colors
    block = moved[:n, :n]
    # position[x, c] = the y with block[x, y] == c
    position = {}
    for x in range(n):
        for y in range(n):
            position[(x, int(block[x, y]))] = y
    table = np.array([[position[(b, int(block[0, a]))] for b in range(n)] for a in range(n)], dtype=np.int64)
    G = CayleyTable(table)
    if not (is_associative(G) and is_commutative(G)):
        raise NotNonRegularThinJS("diagonal block does not carry an abelian group")
    if not same_partition(rainbow_from_labels(moved), rainbow_from_labels(_jcal_colors(G))):
        raise NotNonRegularThinJS("relabeled scheme differs from J(G)")
    return Recognition(G, tuple(perm))


def materialize(cm: ColorMatrix, coeffs: Sequence) -> ExactMatrix:
    values = np.array([Fraction(c) for c in coeffs], dtype=object)
    return ExactMatrix(values[cm.colors])


def span_membership(cm: ColorMatrix, m) -> Optional[list[Fraction]]:
    """Coefficients of ``m`` in the class-indicator basis, or None."""
    entries = m.entries if isinstance(m, ExactMatrix) else np.asarray(m, dtype=object)
    if entries.shape != cm.colors.shape:
        return None
    coeffs: list = [None] * cm.rank
    for c, v in zip(cm.colors.ravel().tolist(), entries.ravel().tolist()):
        v = Fraction(v)
        if coeffs[c] is None:
            coeffs[c] = v
        elif coeffs[c] != v:
            return None
    return coeffs


def _in_span(cm: ColorMatrix, m: np.ndarray) -> bool:
    flat = cm.colors.ravel()
    vals = m.ravel()
    first = np.unique(flat, return_index=True)[1]
    return bool((vals == vals[first[flat]]).all())


def _integral(cm: ColorMatrix, coeffs: Sequence) -> np.ndarray:
    """Indicator combination scaled to integers (membership is scale-free)."""
    fr = [Fraction(c) for c in coeffs]
    if len(fr) != cm.rank:
        raise ValueError(f"expected {cm.rank} coefficients, got {len(fr)}")
    scale = math.lcm(*(f.denominator for f in fr))
    ints = np.array([int(f * scale) for f in fr], dtype=object)
    return ints[cm.colors]


def _product_dtype(cm: ColorMatrix, mats: Sequence[np.ndarray], k: int):
    largest = max(max(abs(int(x)) for x in m.ravel()) for m in mats) or 1
    bound = math.factorial(k) * cm.n ** (k - 1) * largest ** k
    return np.int64 if bound < 2 ** 62 else object


def _require_jc(cm: ColorMatrix):
    if intersection_numbers(cm, ClosureKind.JORDAN) is None:
        raise NotAJC("the rainbow is not closed under the Jordan product")


def jordan_triple_check(cm: ColorMatrix, a, b, c) -> bool:
    """Whether A C B + B C A lies in the span (A, B, C given by coefficients)."""
    _require_jc(cm)
    A, B, C = (_integral(cm, x) for x in (a, b, c))
    dtype = _product_dtype(cm, (A, B, C), 3)
    A, B, C = (x.astype(dtype) for x in (A, B, C))
    return _in_span(cm, A.dot(C).dot(B) + B.dot(C).dot(A))


def symmetrized_sum(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Sum of the products over all orderings of ``mats``.

    Computed over subsets: the sum for a set is the sum over its members m of
    m times the sum for the set without m.
    """
    k = len(mats)
    n = mats[0].shape[0]
    memo = {0: np.eye(n, dtype=mats[0].dtype)}
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            mask = sum(1 << i for i in subset)
            total = None
            for i in subset:
                term = mats[i].dot(memo[mask & ~(1 << i)])
                total = term if total is None else total + term
            memo[mask] = total
    return memo[(1 << k) - 1]


def symmetrization_membership_check(cm: ColorMatrix, *coeff_vectors) -> bool:
    k = len(coeff_vectors)
    if k > MAX_SYMMETRIZATION_K:
        raise KTooLarge(f"symmetrization over {k}! orderings; limit is {MAX_SYMMETRIZATION_K}")
    if k == 0:
        raise KTooLarge("need at least one element")
    _require_jc(cm)
    mats = [_integral(cm, v) for v in coeff_vectors]
    dtype = _product_dtype(cm, mats, k)
    return _in_span(cm, symmetrized_sum([m.astype(dtype) for m in mats]))


def palindromic_membership(cm: ColorMatrix, *coeff_vectors) -> bool:
    """Whether a_1...a_k + a_k...a_1 lies in the span (open for k >= 4)."""
    _require_jc(cm)
    mats = [_integral(cm, v) for v in coeff_vectors]
    dtype = _product_dtype(cm, mats, len(mats))
    mats = [m.astype(dtype) for m in mats]
    fwd = mats[0]
    for m in mats[1:]:
        fwd = fwd.dot(m)
    bwd = mats[-1]
    for m in reversed(mats[:-1]):
        bwd = bwd.dot(m)
    return _in_span(cm, fwd + bwd)
