"""Small named groups and loops used by the CLI and the tests.

Element numbering:
  S3     0 = id, 1 = (0 1 2), 2 = (0 2 1), 3 = (1 2), 4 = (0 2), 5 = (0 1)
         acting on {0, 1, 2}, composed right to left
  D8     r^k s^f has index k + 4 f (rotations 0..3, reflections 4..7)
  Q8     0 = 1, 1 = -1, 2 = i, 3 = -i, 4 = j, 5 = -j, 6 = k, 7 = -k
  Chein12  (g, 0) = g and (g, 1) = 6 + g over S3 as above
"""
from __future__ import annotations

import random
import re
from typing import Optional

import numpy as np

from .cayley import CayleyTable, abelian_group, cyclic_group, left_inverses, loop_from_table, require_group
from .errors import JordanLabError, NotAGroup

S3_TABLE = [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 5, 3, 4],
    [2, 0, 1, 4, 5, 3],
    [3, 4, 5, 0, 1, 2],
    [4, 5, 3, 2, 0, 1],
    [5, 3, 4, 1, 2, 0],
]

# (g,0)(h,0) = (gh,0), (g,0)(h,1) = (hg,1), (g,1)(h,0) = (gh^-1,1), (g,1)(h,1) = (h^-1 g,0)
CHEIN12_TABLE = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
    [1, 2, 0, 5, 3, 4, 7, 8, 6, 10, 11, 9],
    [2, 0, 1, 4, 5, 3, 8, 6, 7, 11, 9, 10],
    [3, 4, 5, 0, 1, 2, 9, 11, 10, 6, 8, 7],
    [4, 5, 3, 2, 0, 1, 10, 9, 11, 7, 6, 8],
    [5, 3, 4, 1, 2, 0, 11, 10, 9, 8, 7, 6],
    [6, 8, 7, 9, 10, 11, 0, 2, 1, 3, 4, 5],
    [7, 6, 8, 11, 9, 10, 1, 0, 2, 4, 5, 3],
    [8, 7, 6, 10, 11, 9, 2, 1, 0, 5, 3, 4],
    [9, 11, 10, 6, 7, 8, 3, 4, 5, 0, 2, 1],
    [10, 9, 11, 8, 6, 7, 4, 5, 3, 1, 0, 2],
    [11, 10, 9, 7, 8, 6, 5, 3, 4, 2, 1, 0],
]


def s3() -> CayleyTable:
    return CayleyTable(np.array(S3_TABLE, dtype=np.int64))


def dihedral8() -> CayleyTable:
    t = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        a, f = x % 4, x // 4
        for y in range(8):
            b, g = y % 4, y // 4
            t[x, y] = (a + (-b if f else b)) % 4 + 4 * ((f + g) % 2)
    return CayleyTable(t)


# unit products among 1, i, j, k as (sign, unit)
_UNIT = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> CayleyTable:
    t = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        ux, sx = x // 2, -1 if x % 2 else 1
        for y in range(8):
            uy, sy = y // 2, -1 if y % 2 else 1
            s, u = _UNIT[(ux, uy)]
            t[x, y] = 2 * u + (1 if s * sx * sy < 0 else 0)
    return CayleyTable(t)


def chein_loop(G: CayleyTable) -> CayleyTable:
    """The Chein double M(G, 2) of a group."""
    require_group(G)
    n = G.n
    t = G.table
    inv = left_inverses(G)
    g = np.arange(n)[:, None]
    h = np.arange(n)[None, :]
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    table[:n, :n] = t[g, h]
    table[:n, n:] = n + t[h, g]
    table[n:, :n] = n + t[g, inv[h]]
    table[n:, n:] = t[inv[h], g]
    return loop_from_table(table)


def chein12() -> CayleyTable:
    return loop_from_table(CHEIN12_TABLE)


NAMED = {
    "S3": s3,
    "D8": dihedral8,
    "Q8": quaternion8,
    "Chein12": chein12,
}


def parse_group_spec(spec: str) -> CayleyTable:
    """cyclic:N, abelian:N1xN2x..., named:NAME or file:PATH."""
    kind, _, arg = spec.partition(":")
    if kind == "cyclic" and re.fullmatch(r"\d+", arg) and int(arg) > 0:
        return cyclic_group(int(arg))
    if kind == "abelian" and re.fullmatch(r"\d+(x\d+)*", arg):
        return abelian_group(*(int(f) for f in arg.split("x")))
    if kind == "named":
        if arg not in NAMED:
            raise JordanLabError(f"unknown named group {arg!r}; choose from {sorted(NAMED)}")
        return NAMED[arg]()
    if kind == "file":
        from .fileformats import parse_loop_file
        with open(arg) as fh:
            return parse_loop_file(fh.read())
    raise JordanLabError(f"cannot parse group spec {spec!r}")


def random_loop(n: int, seed: Optional[int] = None, max_tries: int = 1000) -> CayleyTable:
    """A random loop of order n (identity 0), by randomized backtracking."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        t = [[-1] * n for _ in range(n)]
        for i in range(n):
            t[0][i] = i
            t[i][0] = i
        if _fill(t, n, 1, 1, rng):
            return loop_from_table(t)
    raise JordanLabError("random loop generation failed")


def _fill(t, n, i, j, rng) -> bool:
    if i == n:
        return True
    ni, nj = (i, j + 1) if j + 1 < n else (i + 1, 1)
    used = set(t[i][:j]) | {t[r][j] for r in range(i)}
    options = [v for v in range(n) if v not in used]
    rng.shuffle(options)
    for v in options:
        t[i][j] = v
        if _fill(t, n, ni, nj, rng):
            return True
    t[i][j] = -1
    return False
