"""Algebraic (Jordan) automorphisms of configurations, algebraic fusions,
2-orbit configurations of semiregular groups and autonomy verdicts.

Color permutations are tuples ``sigma`` with ``sigma[c]`` the image of
color c; composition ``compose(a, b)`` applies b first.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import bounds
from .closures import ClosureKind, closure, two_orbit_partition
from .errors import (
    GroupTooLarge,
    NotAFusion,
    NotAJC,
    NotASubgroupOfJAut,
    NotAPermutation,
    NotSemiregular,
    NotThinRegularJS,
    OrderTooLarge,
    RankTooLarge,
)
from .loops import diamond_from_scheme, loop_properties
from .rainbow import ColorMatrix, classify_rainbow, is_fusion_of, rainbow_from_labels
from .relations import Relation
from .schemes import SchemeRecord, analyze, intersection_numbers

logger = logging.getLogger(__name__)

ColorPermutation = tuple  # sigma[c] = image of color c


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(a[x] for x in b)


def inverse(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def identity_perm(r: int) -> tuple[int, ...]:
    return tuple(range(r))


@dataclass(frozen=True)
class AutGroupReport:
    jaut: list
    aaut: Optional[list]
    taut: Optional[list]
    tau: tuple


def _color_invariants(cm: ColorMatrix, tensor: np.ndarray) -> list[tuple]:
    sizes = cm.class_sizes()
    out = []
    for c in range(cm.rank):
        sym = cm.transpose_map[c] == c
        out.append((
            int(sizes[c]),
            c in cm.diagonal_colors,
            sym,
            tuple(sorted(tensor[c].ravel().tolist())),
            tuple(sorted(tensor[:, :, c].ravel().tolist())),
        ))
    return out


def _tensor_search(cm: ColorMatrix, tensor: np.ndarray, *, allowed=None, fixed=None,
                   first_only: bool = False) -> list[tuple[int, ...]]:
    """All color permutations preserving ``tensor``, the transpose pairing and
    the invariants of each color.

    ``allowed[c]`` optionally restricts the images of c; ``fixed`` pins some
    images in advance.
    """
    r = cm.rank
    inv = _color_invariants(cm, tensor)
    tmap = cm.transpose_map
    candidates = []
    for c in range(r):
        cands = [d for d in range(r) if inv[d] == inv[c]]
        if allowed is not None:
            cands = [d for d in cands if d in allowed[c]]
        if fixed and c in fixed:
            cands = [fixed[c]] if fixed[c] in cands else []
        if not cands:
            return []
        candidates.append(cands)
    order = sorted(range(r), key=lambda c: (len(candidates[c]), c))
    if fixed:
        order = [c for c in order if c in fixed] + [c for c in order if c not in fixed]
    sigma = [-1] * r
    used = [False] * r
    results: list[tuple[int, ...]] = []
    assigned: list[int] = []

    def consistent(c: int, d: int) -> bool:
        t = tmap[c]
        if sigma[t] != -1 and sigma[t] != tmap[d]:
            return False
        if t == c and tmap[d] != d:
            return False
        dom = np.array(assigned + [c])
        img = np.array([sigma[x] for x in assigned] + [d])
        # entries involving c against everything assigned so far
        if not np.array_equal(tensor[c][np.ix_(dom, dom)], tensor[d][np.ix_(img, img)]):
            return False
        if not np.array_equal(tensor[:, c][:, dom][dom], tensor[:, d][:, img][img]):
            return False
        return np.array_equal(tensor[:, :, c][np.ix_(dom, dom)], tensor[:, :, d][np.ix_(img, img)])

    def extend(k: int) -> bool:
        if k == r:
            results.append(tuple(sigma))
            return first_only
        c = order[k]
        for d in candidates[c]:
            if used[d] or not consistent(c, d):
                continue
            sigma[c] = d
            used[d] = True
            assigned.append(c)
            if extend(k + 1):
                return True
            assigned.pop()
            used[d] = False
            sigma[c] = -1
        return False

    extend(0)
    return sorted(results)


def _jordan_tensor(cm: ColorMatrix) -> np.ndarray:
    t = intersection_numbers(cm, ClosureKind.JORDAN)
    if t is None:
        raise NotAJC("the span is not closed under the Jordan product")
    return t.dense()


def jaut_enumerate(cm: ColorMatrix, max_rank: Optional[int] = None) -> AutGroupReport:
    bound = bounds.DEFAULT_JAUT_RANK if max_rank is None else max_rank
    jt = _jordan_tensor(cm)
    if cm.rank > bound:
        raise RankTooLarge(f"rank {cm.rank} exceeds the automorphism search bound {bound}")
    jaut = _tensor_search(cm, jt)
    tau = tuple(cm.transpose_map)
    at = intersection_numbers(cm, ClosureKind.ASSOCIATIVE)
    aaut = taut = None
    if at is not None:
        aaut = _tensor_search(cm, at.dense())
        taut = sorted(set(aaut) | {compose(a, tau) for a in aaut})
    return AutGroupReport(jaut, aaut, taut, tau)


def _group_closure(gens: Iterable[tuple[int, ...]], r: int) -> list[tuple[int, ...]]:
    ident = identity_perm(r)
    gens = list(gens)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = compose(g, h)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(seen)


def _is_group(elements: set) -> bool:
    if not elements:
        return False
    r = len(next(iter(elements)))
    if identity_perm(r) not in elements:
        return False
    return all(compose(a, b) in elements for a in elements for b in elements)


def color_orbits(phi: Iterable[Sequence[int]], r: int) -> list[int]:
    """Orbit label (least member) of every color under the group ``phi``."""
    phi = list(phi)
    if not phi:
        return list(range(r))
    # the orbit of c is {g(c) : g in phi}
    label = [min(g[c] for g in phi) for c in range(r)]
    return label


def algebraic_fusion(cm: ColorMatrix, phi: Sequence[Sequence[int]]) -> ColorMatrix:
    """Rainbow whose classes are the unions of Phi-orbits of classes."""
    elems = {tuple(int(x) for x in g) for g in phi}
    if any(sorted(g) != list(range(cm.rank)) for g in elems):
        raise NotASubgroupOfJAut(f"expected permutations of {cm.rank} colors")
    if not _is_group(elems):
        raise NotASubgroupOfJAut("the given maps are not closed under composition or miss the identity")
    jt = _jordan_tensor(cm)
    diag = cm.diagonal_colors
    for g in elems:
        p = np.array(g)
        if not np.array_equal(jt[np.ix_(p, p, p)], jt) or {g[c] for c in diag} != diag:
            raise NotASubgroupOfJAut(f"{g} does not preserve the Jordan structure constants")
    label = np.array(color_orbits(elems, cm.rank))
    fused = rainbow_from_labels(label[cm.colors])
    for c in range(fused.rank):
        rel = fused.colors == c
        t = rel.T
        if not (np.array_equal(rel, t) or not (rel & t).any()):
            raise AssertionError(f"fused class {c} is neither symmetric nor anti-symmetric")
    if intersection_numbers(fused, ClosureKind.JORDAN) is None:
        raise AssertionError("algebraic fusion is not Jordan closed")
    return fused


def enumerate_subgroups(auts, max_size: Optional[int] = None) -> list[list[tuple[int, ...]]]:
    """All subgroups of a permutation group, ordered by size then elements.

    Every subgroup is a join of cyclic subgroups, so starting from the cyclic
    ones and joining known subgroups with cyclic ones until nothing new
    appears reaches all of them. Joins are closed under right multiplication
    by the accumulated generators, which suffices in a finite group.
    """
    group = auts.jaut if isinstance(auts, AutGroupReport) else list(auts)
    bound = bounds.DEFAULT_GROUP_SIZE if max_size is None else max_size
    if len(group) > bound:
        raise GroupTooLarge(f"group of order {len(group)} exceeds {bound}")
    elems = sorted({tuple(g) for g in group})
    index = {g: i for i, g in enumerate(elems)}
    m = len(elems)
    mult = np.array([[index[compose(a, b)] for b in elems] for a in elems], dtype=np.int64)

    def generated(start: np.ndarray, gens: list[int]) -> np.ndarray:
        # start is a subgroup closed under gens[:-1], so only gens[-1] is new
        members = start.copy()
        images = mult[np.nonzero(members)[0], gens[-1]]
        frontier = np.unique(images[~members[images]])
        members[frontier] = True
        while frontier.size:
            images = mult[np.ix_(frontier, gens)].ravel()
            fresh = np.unique(images[~members[images]])
            members[fresh] = True
            frontier = fresh
        return members

    ident = index[identity_perm(len(elems[0]))]
    base = np.zeros(m, dtype=bool)
    base[ident] = True
    found: dict[bytes, tuple[np.ndarray, list[int]]] = {}
    cyclic = []
    for i in range(m):
        sub = generated(base, [i])
        key = np.packbits(sub).tobytes()
        if key not in found:
            found[key] = (sub, [i])
            cyclic.append((sub, i))
    frontier = list(found.values())
    while frontier:
        nxt = []
        for sub, gens in frontier:
            for csub, g in cyclic:
                if sub[g]:
                    continue
                joined = generated(sub, gens + [g])
                key = np.packbits(joined).tobytes()
                if key not in found:
                    found[key] = (joined, gens + [g])
                    nxt.append(found[key])
        frontier = nxt
    subgroups = [[elems[i] for i in np.nonzero(sub)[0]] for sub, _ in found.values()]
    subgroups.sort(key=lambda s: (len(s), s))
    return subgroups


def _single_search(cm, tensor, allowed, c, d):
    found = _tensor_search(cm, tensor, allowed=allowed, fixed={c: d}, first_only=True)
    return found[0] if found else None


def fusion_search(target: ColorMatrix, candidate: ColorMatrix) -> Optional[list[tuple[int, ...]]]:
    """Some Phi <= JAut(candidate) whose algebraic fusion is ``target``.

    Elements of JAut(candidate) that map every class into the same target
    class form a group K, and a suitable Phi exists iff the K-orbits are
    exactly the target classes. The orbits are explored one element at a
    time; the returned Phi is generated by the elements found.
    """
    if target.n != candidate.n:
        raise NotAFusion("the rainbows live on different point sets")
    if intersection_numbers(candidate, ClosureKind.ASSOCIATIVE) is None:
        raise NotAFusion("the candidate is not a coherent configuration")
    if intersection_numbers(target, ClosureKind.JORDAN) is None:
        raise NotAFusion("the target is not Jordan closed")
    if not is_fusion_of(target, candidate):
        raise NotAFusion("the target is not a fusion of the candidate")
    r = candidate.rank
    block = [-1] * r
    for c in range(r):
        cell = np.argwhere(candidate.colors == c)[0]
        block[c] = int(target.colors[cell[0], cell[1]])
    members: dict[int, list[int]] = {}
    for c, b in enumerate(block):
        members.setdefault(b, []).append(c)
    allowed = [set(members[block[c]]) for c in range(r)]
    jt = _jordan_tensor(candidate)
    gens: list[tuple[int, ...]] = []
    parent = list(range(r))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cls in members.values():
        c0 = cls[0]
        for d in cls[1:]:
            if find(d) == find(c0):
                continue
            g = _single_search(candidate, jt, allowed, c0, d)
            if g is None:
                return None
            gens.append(g)
            for x in range(r):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[a] = b
    return _group_closure(gens, r)


def _perm_group(gens: Sequence[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(g[h[x]] for x in range(n))
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(seen)


def semiregular_two_orbit_config(gens: Iterable, n: Optional[int] = None) -> ColorMatrix:
    """CC of the 2-orbits of a semiregular permutation group."""
    perms = []
    for g in gens:
        if isinstance(g, Relation):
            p = g.as_permutation()
            if p is None:
                raise NotAPermutation("generator is not a permutation")
        else:
            p = tuple(int(x) for x in g)
            if sorted(p) != list(range(len(p))):
                raise NotAPermutation(f"{p} is not a permutation")
        perms.append(p)
    if n is None:
        if not perms:
            raise NotSemiregular("need the number of points when no generators are given")
        n = len(perms[0])
    if any(len(p) != n for p in perms):
        raise NotAPermutation("generators of different degrees")
    group = _perm_group(perms, n)
    ident = tuple(range(n))
    for g in group:
        if g != ident and any(g[x] == x for x in range(n)):
            raise NotSemiregular(f"{g} fixes a point")
    return two_orbit_partition(group, n)


@dataclass(frozen=True)
class AutonomyVerdict:
    verdict: str  # autonomous | non_autonomous | not_applicable | undetermined
    witness: Optional[ColorMatrix] = None
    phi: Optional[list] = None
    certificate: dict = field(default_factory=dict)


def _record(js) -> SchemeRecord:
    return js if isinstance(js, SchemeRecord) else analyze(js)


def autonomy_thin_regular(js) -> AutonomyVerdict:
    """Autonomy of a thin regular Jordan scheme via its loop's right nucleus.

    The WL closure of such a scheme has all classes of size |N_rho|; a
    fusion from a CC would need a class of half the order, so
    |N_rho| < n / 2 settles autonomy.
    """
    rec = _record(js)
    cm = rec.cm
    info = classify_rainbow(cm)
    if not (rec.is_js and info.thin and info.regular):
        raise NotThinRegularJS("autonomy test needs a thin regular Jordan scheme")
    n = cm.n
    if rec.is_cc:
        return AutonomyVerdict("non_autonomous", cm, [identity_perm(cm.rank)],
                               {"order": n, "reason": "coherent"})
    loop = diamond_from_scheme(cm, 0)
    props = loop_properties(loop)
    nucleus = len(props.right_nucleus)
    wl = closure(cm, ClosureKind.ASSOCIATIVE)
    sizes = sorted(set(int(s) for s in wl.class_sizes()))
    if sizes != [nucleus]:
        raise AssertionError(f"WL classes of sizes {sizes}, expected all {nucleus}")
    if props.ra:
        assert nucleus * 8 == n and len(props.center) == nucleus, "RA loop nucleus is not |S|/8"
    cert = {
        "order": n,
        "right_nucleus_size": nucleus,
        "wl_rank": wl.rank,
        "wl_class_sizes": sizes,
    }
    if 2 * nucleus < n:
        return AutonomyVerdict("autonomous", certificate=cert)
    return AutonomyVerdict("undetermined", certificate=cert)


def _split_children(cm: ColorMatrix):
    """WL closures of every split of one class into two parts.

    The part holding the first cell of the class is kept fixed so each
    2-coloring appears once.
    """
    n = cm.n
    flat = cm.colors.ravel()
    for c in range(cm.rank):
        cells = np.nonzero(flat == c)[0]
        m = len(cells)
        if m < 2:
            continue
        for mask in range(1, 1 << (m - 1)):
            labels = flat * 2
            picked = [cells[k + 1] for k in range(m - 1) if mask >> k & 1]
            labels = labels.copy()
            labels[picked] += 1
            grid = labels.reshape(n, n)
            # refine by the transposed labels so the seed is a rainbow
            key = grid * (2 * cm.rank) + grid.T
            yield closure(rainbow_from_labels(key), ClosureKind.ASSOCIATIVE)


def brute_force_autonomy(js, order_bound: Optional[int] = None,
                         fallback_visits: int = 64) -> AutonomyVerdict:
    """Exhaustive search over coherent fissions, coarsest first.

    A coherent fission finer than WL(js) always contains one of the WL
    closures of a single-class split, so expanding those children
    recursively visits every coherent fission. Witnesses with a non-trivial
    Phi are preferred; when js is itself coherent the search gives up after
    ``fallback_visits`` further candidates and returns js with Phi = {id}.
    """
    rec = _record(js)
    cm = rec.cm
    bound = bounds.brute_order_bound() if order_bound is None else order_bound
    if cm.n > bound:
        raise OrderTooLarge(f"brute-force autonomy limited to order {bound}")
    if not rec.is_jc:
        raise NotAJC("autonomy is defined for Jordan-closed rainbows")
    start = closure(cm, ClosureKind.ASSOCIATIVE)
    heap = [(start.rank, start.colors.tobytes(), start)]
    seen = {start.colors.tobytes()}
    visited = 0
    fallback = None
    while heap:
        _, _, cand = heapq.heappop(heap)
        visited += 1
        phi = fusion_search(cm, cand)
        if phi is not None:
            if len(phi) > 1:
                return AutonomyVerdict("non_autonomous", cand, phi, {"visited": visited})
            # cand is cm itself; keep looking for a proper fusion for a while
            fallback = visited
        if fallback is not None and visited - fallback >= fallback_visits:
            break
        for child in _split_children(cand):
            key = child.colors.tobytes()
            if key not in seen:
                seen.add(key)
                heapq.heappush(heap, (child.rank, key, child))
    if fallback is not None:
        return AutonomyVerdict("non_autonomous", cm, [identity_perm(cm.rank)], {"visited": visited})
    return AutonomyVerdict("autonomous", certificate={"visited": visited})


def autonomy_verdict(cm: ColorMatrix, brute_force: bool = False) -> AutonomyVerdict:
    """Dispatch used by the command line: thin regular Jordan schemes go to
    the structural test, others to the exhaustive search when requested and
    small enough, and the rest are reported as undetermined."""
    rec = analyze(cm)
    if not rec.is_jc:
        return AutonomyVerdict("not_applicable", certificate={"reason": "not Jordan closed"})
    info = classify_rainbow(cm)
    if rec.is_cc:
        return AutonomyVerdict("non_autonomous", cm, [identity_perm(cm.rank)], {"reason": "coherent"})
    if rec.is_js and info.thin and info.regular:
        verdict = autonomy_thin_regular(rec)
        if verdict.verdict != "undetermined" or not brute_force:
            return verdict
    if brute_force and cm.n <= bounds.brute_order_bound():
        return brute_force_autonomy(rec)
    if not brute_force and not (info.thin and info.regular):
        return AutonomyVerdict("not_applicable", certificate={"reason": "not thin regular"})
    return AutonomyVerdict("undetermined", certificate={"reason": "beyond the brute-force bound"})
