"""Cayley tables of finite loops and groups.

Elements are 0..n-1 and element 0 is always the identity; ``table[a, b]`` is
the product a * b.
"""
from __future__ import annotations

import logging
from collections import Counter
from typing import Optional, Sequence

import numpy as np

from .errors import NoTwoSidedIdentity, NotAbelian, NotAGroup, NotLatinSquare

logger = logging.getLogger(__name__)


class CayleyTable:
    __slots__ = ("table", "n", "relabeling")

    def __init__(self, table: np.ndarray, relabeling: Optional[tuple[int, ...]] = None):
        table.setflags(write=False)
        self.table = table
        self.n = table.shape[0]
        # old label -> new label, when the identity had to be moved to 0
        self.relabeling = relabeling

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def tolist(self) -> list[list[int]]:
        return self.table.tolist()

    def __eq__(self, other):
        if not isinstance(other, CayleyTable):
            return NotImplemented
        return bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"CayleyTable(n={self.n}, table={self.table.tolist()})"


def loop_from_table(table) -> CayleyTable:
    """Validate a loop table and move its identity to index 0 if needed."""
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare(f"table must be square and non-empty, got shape {t.shape}")
    n = t.shape[0]
    full = np.arange(n)
    if t.min() < 0 or t.max() >= n:
        raise NotLatinSquare(f"entries must lie in 0..{n - 1}")
    rows_ok = (np.sort(t, axis=1) == full).all(axis=1)
    if not rows_ok.all():
        raise NotLatinSquare(f"row {int(np.argmin(rows_ok))} repeats an entry")
    cols_ok = (np.sort(t, axis=0) == full[:, None]).all(axis=0)
    if not cols_ok.all():
        raise NotLatinSquare(f"column {int(np.argmin(cols_ok))} repeats an entry")
    left = [e for e in range(n) if (t[e] == full).all()]
    right = [e for e in range(n) if (t[:, e] == full).all()]
    both = sorted(set(left) & set(right))
    if not both:
        raise NoTwoSidedIdentity(f"left identities {left}, right identities {right}")
    e = both[0]
    if e == 0:
        return CayleyTable(t)
    swap = full.copy()
    swap[0], swap[e] = e, 0
    relabeled = np.empty_like(t)
    relabeled[np.ix_(swap, swap)] = swap[t]
    logger.info("identity element %d relabeled to 0", e)
    return CayleyTable(relabeled, tuple(int(x) for x in swap))


def is_associative(L: CayleyTable) -> bool:
    return bool(associator_mask(L).all())


def associator_mask(L: CayleyTable) -> np.ndarray:
    """mask[u, v, w] is true iff (u v) w == u (v w)."""
    t = L.table
    return t[t] == t[np.arange(L.n)[:, None, None], t[None, :, :]]


def is_commutative(L: CayleyTable) -> bool:
    return bool((L.table == L.table.T).all())


def left_inverses(L: CayleyTable) -> np.ndarray:
    """inv[a] is the x with x * a == 0."""
    return np.argmin(L.table != 0, axis=0)


def right_inverses(L: CayleyTable) -> np.ndarray:
    """inv[a] is the x with a * x == 0."""
    return np.argmin(L.table != 0, axis=1)


def require_group(G: CayleyTable):
    if not is_associative(G):
        raise NotAGroup("table is not associative")


def commuting_elements(L: CayleyTable) -> np.ndarray:
    return (L.table == L.table.T).all(axis=1)


def group_center(G: CayleyTable) -> list[int]:
    return [int(x) for x in np.nonzero(commuting_elements(G))[0]]


def element_orders(G: CayleyTable) -> list[int]:
    """Order of each element, via repeated left multiplication from the identity."""
    orders = []
    for g in range(G.n):
        k, x = 1, g
        while x != 0:
            x = int(G.table[g, x])
            k += 1
        orders.append(k)
    return orders


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            if p not in out:
                out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(G: CayleyTable) -> list[int]:
    """Prime-power invariants of a finite abelian group, ascending (Z6 -> [2, 3]).

    For each prime p the number of elements with order dividing p^k equals
    p^(sum_i min(k, e_i)); the exponents e_i follow from these counts.
    """
    require_group(G)
    if not is_commutative(G):
        raise NotAbelian("group is not abelian")
    orders = element_orders(G)
    result = []
    for p in _prime_factors(G.n):
        logs = [0]
        k = 1
        while True:
            count = sum(1 for o in orders if (p ** k) % o == 0)
            e = 0
            while p ** e < count:
                e += 1
            logs.append(e)
            if logs[-1] == logs[-2]:
                break
            k += 1
        # logs[k] - logs[k-1] = number of cyclic factors with exponent >= k
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        for k in range(len(at_least)):
            nxt = at_least[k + 1] if k + 1 < len(at_least) else 0
            result += [p ** (k + 1)] * (at_least[k] - nxt)
    return sorted(result)


def table_from_permutations(perms: Sequence[Sequence[int]]) -> CayleyTable:
    """Cayley table of the group generated by ``perms`` (elements in BFS order,
    identity first); composition is (a * b)(x) = a(b(x))."""
    n = len(perms[0])
    ident = tuple(range(n))
    elems = [ident]
    index = {ident: 0}
    queue = [ident]
    gens = [tuple(p) for p in perms]
    while queue:
        g = queue.pop(0)
        for h in gens:
            gh = tuple(g[h[x]] for x in range(n))
            if gh not in index:
                index[gh] = len(elems)
                elems.append(gh)
                queue.append(gh)
    m = len(elems)
    t = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            t[i, j] = index[tuple(a[b[x]] for x in range(n))]
    return CayleyTable(t)


def cyclic_group(n: int) -> CayleyTable:
    a = np.arange(n)
    return CayleyTable((a[:, None] + a[None, :]) % n)


def abelian_group(*factors: int) -> CayleyTable:
    """Direct product Z_n1 x Z_n2 x ... with mixed-radix element numbering."""
    factors = tuple(factors) or (1,)
    digits = np.array(np.unravel_index(np.arange(int(np.prod(factors))), factors)).T
    mods = np.array(factors)
    total = (digits[:, None, :] + digits[None, :, :]) % mods
    return CayleyTable(np.ravel_multi_index(tuple(total.transpose(2, 0, 1)), factors).astype(np.int64))


def invariant_profile(L: CayleyTable) -> Counter:
    return Counter(element_orders(L))
