"""Coherent (WL) and coherent Jordan closures by fixed-point color refinement.

One refinement round recolors each cell (a, b) by its old color together with
the multiset of color pairs (col(a, c), col(c, b)) over all points c. The
count of a pair (i, j) in that multiset is the (a, b) entry of A_i A_j, so a
round changes nothing exactly when the span of the class indicators is closed
under the matrix product. For the Jordan closure the pairs are taken
unordered, which records the entries of A_i A_j + A_j A_i instead.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import bounds
from .errors import NotAPermutation, NotTransitive, OrderTooLarge
from .rainbow import ColorMatrix, rainbow_from_labels, same_partition, standard_basis
from .relations import Relation


class ClosureKind(enum.Enum):
    ASSOCIATIVE = "wl"
    JORDAN = "jordan"


def path_signatures(colors: np.ndarray, rank: int, kind: ClosureKind) -> np.ndarray:
    """Sorted 2-path color codes through every midpoint, shape (n, n, n)."""
    first = colors[:, None, :]      # col(a, c) at [a, ., c]
    second = colors.T[None, :, :]   # col(c, b) at [., b, c]
    if kind is ClosureKind.JORDAN:
        first, second = np.minimum(first, second), np.maximum(first, second)
    codes = first * rank + second
    codes.sort(axis=2)
    return codes


def _refine_labels(cm: ColorMatrix, kind: ClosureKind) -> np.ndarray:
    n = cm.n
    sig = path_signatures(cm.colors, cm.rank, kind).reshape(n * n, n)
    keys = np.concatenate([cm.colors.reshape(n * n, 1), sig], axis=1)
    _, labels = np.unique(keys, axis=0, return_inverse=True)
    return labels.reshape(n, n)


def refine_step(current: ColorMatrix, kind: ClosureKind) -> ColorMatrix:
    """One refinement round; returns a canonically numbered rainbow."""
    return rainbow_from_labels(_refine_labels(current, kind))


def _as_seed(seed) -> ColorMatrix:
    if isinstance(seed, ColorMatrix):
        return seed
    return standard_basis(seed)


def closure(seed: Union[ColorMatrix, Iterable], kind: ClosureKind) -> ColorMatrix:
    """Coarsest fission of ``seed`` whose span is closed under the product of ``kind``."""
    cm = _as_seed(seed)
    limit = bounds.closure_order_bound()
    if cm.n > limit:
        raise OrderTooLarge(f"closures limited to order {limit} (set {bounds.ENV_VAR} to raise it)")
    current = rainbow_from_labels(cm.colors)
    while True:
        nxt = refine_step(current, kind)
        if nxt.rank == current.rank:
            return current
        current = nxt


def is_closed(cm: ColorMatrix, kind: ClosureKind) -> bool:
    return refine_step(cm, kind).rank == cm.rank


def _as_perm(p) -> tuple[int, ...]:
    if isinstance(p, Relation):
        perm = p.as_permutation()
        if perm is None:
            raise NotAPermutation(f"relation with {len(p)} pairs is not a permutation")
        return perm
    perm = tuple(int(x) for x in p)
    if sorted(perm) != list(range(len(perm))):
        raise NotAPermutation(f"{perm} is not a permutation")
    return perm


def orbit(point: int, gens: Sequence[Sequence[int]]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def centralizer_of_transitive(gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All permutations commuting with every generator of a transitive group.

    Such a permutation is fixed by the image of point 0, so each candidate
    image is propagated along the generators and kept if consistent.
    """
    n = len(gens[0])
    result = []
    for y0 in range(n):
        phi = [-1] * n
        phi[0] = y0
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for g in gens:
                gx, gphi = g[x], g[phi[x]]
                if phi[gx] == -1:
                    phi[gx] = gphi
                    stack.append(gx)
                elif phi[gx] != gphi:
                    ok = False
                    break
        if ok and -1 not in phi and len(set(phi)) == n:
            result.append(tuple(phi))
    return result


def two_orbit_partition(group: Sequence[Sequence[int]], n: int) -> ColorMatrix:
    """Rainbow of the orbits of a permutation group (given as all its elements) on pairs."""
    elems = np.array(list(group), dtype=np.int64)
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    # orbit label of (a, b) is the smallest flat index among its images
    images = elems[:, a] * n + elems[:, b]
    return rainbow_from_labels(images.min(axis=0))


@dataclass(frozen=True)
class PermutationClosure:
    closure: ColorMatrix
    centralizer: tuple[tuple[int, ...], ...]
    orbits: ColorMatrix
    agree: bool


def wl_closure_of_permutation_set(perms: Iterable) -> PermutationClosure:
    """WL closure of a set of permutations, cross-checked against the 2-orbits of
    the centralizer of the group they generate."""
    gens = [_as_perm(p) for p in perms]
    if not gens:
        raise NotAPermutation("empty permutation set")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise NotAPermutation("permutations of different degrees")
    if len(orbit(0, gens)) != n:
        raise NotTransitive("the generated group is not transitive")
    seed = standard_basis([Relation.from_function(g).matrix.astype(np.int64) for g in gens], n)
    wl = closure(seed, ClosureKind.ASSOCIATIVE)
    cent = centralizer_of_transitive(gens)
    orbits = two_orbit_partition(cent, n)
    return PermutationClosure(wl, tuple(cent), orbits, same_partition(wl, orbits))
