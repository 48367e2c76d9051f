"""Finite loops: identities and nuclei, the loop carried by a thin regular
Jordan scheme, the RA test, the doubled loops L(G, *, g0), and the scheme of
left translations of a loop.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import NamedTuple, Optional

import numpy as np

from . import bounds
from .cayley import (
    CayleyTable,
    associator_mask,
    commuting_elements,
    element_orders,
    group_center,
    is_associative,
    left_inverses,
    loop_from_table,
    require_group,
)
from .closures import ClosureKind, is_closed
from .errors import (
    G0NotCentral,
    NotALoop,
    NotTransposeClosed,
    NotRegularThinJS,
    OrderTooLarge,
    QuotientNotKleinFour,
)
from .rainbow import ColorMatrix, classify_rainbow, validate_rainbow
from .relations import Relation
from .schemes import SchemeRecord, analyze, is_jordan_scheme

__all__ = [
    "LoopPropertyReport", "RATest", "LoopScheme",
    "loop_from_table", "translations", "diamond_from_scheme", "scheme_from_loop",
    "loop_properties", "is_ra_loop", "construct_LGg", "star_involution",
    "commutator_element", "inverse_antihomomorphism_check", "associator_set",
    "loop_isomorphism", "c_assoc_witness", "left_translation_rainbow",
]


def translations(L: CayleyTable) -> tuple[list[Relation], list[Relation]]:
    """Left translations x -> a x and right translations x -> x a, as relations."""
    t = L.table
    left = [Relation.from_function(t[a]) for a in range(L.n)]
    right = [Relation.from_function(t[:, a]) for a in range(L.n)]
    return left, right


def diamond_from_scheme(cm: ColorMatrix, base: int = 0) -> CayleyTable:
    """The product a . b = S(base, a(b(base))) on the classes of a regular thin JS.

    Elements are the color indices; if the diagonal color is not 0 it is
    swapped with 0 (see ``CayleyTable.relabeling``).
    """
    info = classify_rainbow(cm)
    if not (info.thin and info.regular and is_jordan_scheme(cm)):
        raise NotRegularThinJS("the ring of classes is not a regular thin Jordan scheme")
    if not 0 <= base < cm.n:
        raise NotRegularThinJS(f"base point {base} out of range")
    colors = cm.colors
    # image[c, x] = the y with colors[x, y] == c
    image = np.empty((cm.rank, cm.n), dtype=np.int64)
    rows, cols = np.indices(colors.shape)
    image[colors, rows] = cols
    b_of_base = image[:, base]                       # b(base) for each class b
    ab = image[:, b_of_base]                         # a(b(base)) at [a, b]
    return loop_from_table(colors[base][ab])


def c_assoc_witness(L: CayleyTable) -> Optional[tuple[int, int, int]]:
    """First (u, v, w) with {u(vw), v(uw)} != {(uv)w, (vu)w}."""
    t = L.table
    n = L.n
    u = np.arange(n)[:, None, None]
    v = np.arange(n)[None, :, None]
    w = np.arange(n)[None, None, :]
    l1 = t[u, t[v, w]]
    l2 = t[v, t[u, w]]
    r1 = t[t[u, v], w]
    r2 = t[t[v, u], w]
    ok = ((l1 == r1) & (l2 == r2)) | ((l1 == r2) & (l2 == r1))
    bad = np.argwhere(~ok)
    if bad.size == 0:
        return None
    return tuple(int(x) for x in bad[0])


class LoopScheme(NamedTuple):
    scheme: Optional[SchemeRecord]
    witness: Optional[tuple[int, int, int]]


def left_translation_rainbow(L: CayleyTable) -> np.ndarray:
    """Color matrix with (x, y) colored by the a such that a x = y."""
    t = L.table
    colors = np.empty_like(t)
    cols = np.arange(L.n)
    for a in range(L.n):
        colors[cols, t[a]] = a
    return colors


def scheme_from_loop(L: CayleyTable) -> LoopScheme:
    """The left translations as a thin Jordan scheme, or a violating triple.

    The translations always partition the square (columns of a Latin square
    are permutations) and the identity is the only class meeting the
    diagonal; the scheme exists iff the Jordan refinement fixes the partition.
    """
    if not isinstance(L, CayleyTable):
        raise NotALoop("expected a CayleyTable")
    colors = left_translation_rainbow(L)
    witness = c_assoc_witness(L)
    try:
        cm = validate_rainbow(colors)
    except NotTransposeClosed:
        return LoopScheme(None, witness)
    if not is_closed(cm, ClosureKind.JORDAN):
        return LoopScheme(None, witness)
    return LoopScheme(analyze(cm), None)


@dataclass(frozen=True)
class LoopPropertyReport:
    lip: bool
    left_alt: bool
    right_alt: bool
    flexible: bool
    left_bol: bool
    right_bol: bool
    moufang: bool
    ra: bool
    associative: bool
    commutative: bool
    center: tuple[int, ...]
    left_nucleus: tuple[int, ...]
    middle_nucleus: tuple[int, ...]
    right_nucleus: tuple[int, ...]
    exponent_two: bool


def _all(mask) -> bool:
    return bool(np.all(mask))


def _nuclei(L: CayleyTable):
    assoc = associator_mask(L)  # [u, v, w]: (uv)w == u(vw)
    left = np.nonzero(assoc.all(axis=(1, 2)))[0]
    middle = np.nonzero(assoc.all(axis=(0, 2)))[0]
    right = np.nonzero(assoc.all(axis=(0, 1)))[0]
    return assoc, tuple(int(x) for x in left), tuple(int(x) for x in middle), tuple(int(x) for x in right)


def loop_properties(L: CayleyTable) -> LoopPropertyReport:
    t = L.table
    n = L.n
    x = np.arange(n)
    u = x[:, None]
    v = x[None, :]
    sq = t[x, x]
    left_alt = _all(t[sq[:, None], v] == t[u, t[u, v]])
    right_alt = _all(t[t[v, u], u] == t[v, sq[u]])
    flexible = _all(t[t[u, v], u] == t[u, t[v, u]])
    linv = left_inverses(L)
    lip = _all(t[linv[:, None], t[u, v]] == v)
    # left Bol: y(z(yx)) = (y(zy))x, indices [y, z, x]
    Y = x[:, None, None]
    Z = x[None, :, None]
    X = x[None, None, :]
    left_bol = _all(t[Y, t[Z, t[Y, X]]] == t[t[Y, t[Z, Y]], X])
    # right Bol: ((xy)z)y = x((yz)y), indices [x, y, z]
    X3 = x[:, None, None]
    Y3 = x[None, :, None]
    Z3 = x[None, None, :]
    right_bol = _all(t[t[t[X3, Y3], Z3], Y3] == t[X3, t[t[Y3, Z3], Y3]])
    moufang = left_bol and right_bol
    exponent_two = _all(sq == 0)
    assoc, ln, mn, rn = _nuclei(L)
    if moufang and exponent_two:
        associative = True  # Moufang loops of exponent two are groups
    else:
        associative = bool(assoc.all())
    commutes = commuting_elements(L)
    center = tuple(z for z in ln if commutes[z] and z in mn and z in rn)
    return LoopPropertyReport(
        lip=lip, left_alt=left_alt, right_alt=right_alt, flexible=flexible,
        left_bol=left_bol, right_bol=right_bol, moufang=moufang,
        ra=is_ra_loop(L).ra, associative=associative,
        commutative=bool(commutes.all()),
        center=center, left_nucleus=ln, middle_nucleus=mn, right_nucleus=rn,
        exponent_two=exponent_two,
    )


@dataclass(frozen=True)
class RATest:
    ra: bool
    witness: Optional[tuple[int, int, int]]


_ORDERS = list(permutations(range(3)))


def is_ra_loop(L: CayleyTable) -> RATest:
    """Chein-Goodaire test: triples associating in one order associate in all,
    and a non-associating (u, v, w) satisfies (uv)w = u(wv) = v(uw)."""
    assoc = associator_mask(L)
    if assoc.all():
        return RATest(True, None)
    stacked = np.stack([assoc.transpose(p) for p in _ORDERS])
    some = stacked.any(axis=0)
    every = stacked.all(axis=0)
    t = L.table
    n = L.n
    u = np.arange(n)[:, None, None]
    v = np.arange(n)[None, :, None]
    w = np.arange(n)[None, None, :]
    lhs = t[t[u, v], w]
    cond2 = (lhs == t[u, t[w, v]]) & (lhs == t[v, t[u, w]])
    bad = (some & ~every) | (~assoc & ~cond2)
    hits = np.argwhere(bad)
    if hits.size == 0:
        return RATest(True, None)
    return RATest(False, tuple(int(x) for x in hits[0]))


def associator_set(L: CayleyTable, u: int, v: int) -> frozenset[int]:
    """{w : u(vw) = (uv)w}."""
    t = L.table
    w = np.arange(L.n)
    return frozenset(int(x) for x in np.nonzero(t[u, t[v, w]] == t[t[u, v], w])[0])


def commutator_element(G: CayleyTable) -> int:
    """The unique non-identity commutator of a group with G/Z(G) = Z2 x Z2."""
    require_group(G)
    center = set(group_center(G))
    if len(center) * 4 != G.n:
        raise QuotientNotKleinFour(f"|G : Z(G)| = {G.n // len(center)}, expected 4")
    t = G.table
    sq = t[np.arange(G.n), np.arange(G.n)]
    if any(int(s) not in center for s in sq):
        raise QuotientNotKleinFour("G/Z(G) does not have exponent 2")
    inv = left_inverses(G)
    comms = set()
    for g in range(G.n):
        for h in range(G.n):
            comms.add(int(t[t[inv[g], inv[h]], t[g, h]]))
    comms.discard(0)
    if len(comms) != 1:
        raise QuotientNotKleinFour(f"expected a single non-trivial commutator, found {sorted(comms)}")
    s = comms.pop()
    if s not in center:
        raise QuotientNotKleinFour("commutator is not central")
    return s


def star_involution(G: CayleyTable) -> tuple[int, ...]:
    """g* = g for central g, g s otherwise; checked to reverse products."""
    s = commutator_element(G)
    central = commuting_elements(G)
    t = G.table
    star = np.array([g if central[g] else int(t[g, s]) for g in range(G.n)])
    if not (star[t] == t[star[None, :], star[:, None]]).all():
        raise AssertionError("star map is not an anti-automorphism")
    return tuple(int(x) for x in star)


def construct_LGg(G: CayleyTable, g0: int) -> CayleyTable:
    """L(G, *, g0) on G x {0, 1}; element (g, x) has index g + x |G|."""
    require_group(G)
    star = np.array(star_involution(G))
    if not commuting_elements(G)[g0]:
        raise G0NotCentral(f"g0 = {g0} is not central")
    n = G.n
    t = G.table
    g = np.arange(n)[:, None]
    h = np.arange(n)[None, :]
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    table[:n, :n] = t[g, h]
    table[:n, n:] = n + t[h, g]
    table[n:, :n] = n + t[g, star[h]]
    table[n:, n:] = t[t[g0, star[h]], g]
    L = loop_from_table(table)
    report = loop_properties(L)
    if not (report.moufang and report.ra):
        raise AssertionError("L(G, *, g0) failed the Moufang/RA post-check")
    return L


def inverse_antihomomorphism_check(L: CayleyTable) -> bool:
    """(v u)^-1 = u^-1 v^-1 for all u, v, with x^-1 the left inverse."""
    t = L.table
    inv = left_inverses(L)
    x = np.arange(L.n)
    u = x[None, :]
    v = x[:, None]
    return _all(inv[t[v, u]] == t[inv[u], inv[v]])


def _element_profile(L: CayleyTable) -> list[tuple]:
    orders = element_orders(L)
    t = L.table
    commutes = (t == t.T).sum(axis=1)
    sq = t[np.arange(L.n), np.arange(L.n)]
    return [(orders[a], orders[int(sq[a])], int(commutes[a])) for a in range(L.n)]


def _generators(L: CayleyTable) -> tuple[list[int], list[tuple[int, int, int]]]:
    """Greedy generating set plus derivation steps (product, left, right)."""
    t = L.table
    reached = [0]
    seen = {0}
    gens: list[int] = []
    steps: list[tuple[int, int, int]] = []
    while len(seen) < L.n:
        g = next(a for a in range(L.n) if a not in seen)
        gens.append(g)
        seen.add(g)
        reached.append(g)
        grew = True
        while grew:
            grew = False
            for a in list(reached):
                for b in list(reached):
                    c = int(t[a, b])
                    if c not in seen:
                        seen.add(c)
                        reached.append(c)
                        steps.append((c, a, b))
                        grew = True
    return gens, steps


def loop_isomorphism(A: CayleyTable, B: CayleyTable, max_order: Optional[int] = None
                     ) -> Optional[tuple[int, ...]]:
    """An isomorphism A -> B as an image tuple, or None.

    Generator images are tried among elements with the same order, square
    order and commutant size; everything else follows from the products.
    """
    bound = bounds.DEFAULT_LOOP_ISO_ORDER if max_order is None else max_order
    if max(A.n, B.n) > bound:
        raise OrderTooLarge(f"loop isomorphism limited to order {bound}")
    if A.n != B.n:
        return None
    pa, pb = _element_profile(A), _element_profile(B)
    if sorted(pa) != sorted(pb):
        return None
    if len(group_center_like(A)) != len(group_center_like(B)):
        return None
    gens, steps = _generators(A)
    candidates = [[y for y in range(B.n) if pb[y] == pa[g]] for g in gens]
    ta, tb = A.table, B.table
    for images in product(*candidates):
        if len(set(images)) != len(images):
            continue
        phi = [-1] * A.n
        phi[0] = 0
        for g, y in zip(gens, images):
            phi[g] = y
        for c, left, right in steps:
            phi[c] = int(tb[phi[left], phi[right]])
        if len(set(phi)) != A.n:
            continue
        p = np.array(phi)
        if (p[ta] == tb[p[:, None], p[None, :]]).all():
            return tuple(phi)
    return None


def group_center_like(L: CayleyTable) -> tuple[int, ...]:
    """Elements commuting with everything (the commutant)."""
    return tuple(int(x) for x in np.nonzero(commuting_elements(L))[0])
