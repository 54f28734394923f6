"""Tiling systems and brute-force square/corridor solvers.

Rows are numbered from 1 (the first row ``f``) down to ``m`` (the bottom row
``b``); a tile's south label must match the north label of the tile below it.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

DEFAULT_SQUARE_BUDGET = 10**6


class TilingError(ValueError):
    code = "invalid_tiling"


class SearchBudgetExceeded(RuntimeError):
    code = "budget_exceeded"


class Tile(NamedTuple):
    w: str
    e: str
    s: str
    n: str


@dataclass(frozen=True)
class TilingSystem:
    labels: tuple
    tiles: tuple
    width: int
    first: tuple
    bottom: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "tiles", tuple(Tile(*map(str, t)) for t in self.tiles))
        object.__setattr__(self, "first", tuple(int(i) for i in self.first))
        object.__setattr__(self, "bottom", tuple(int(i) for i in self.bottom))
        if self.width < 1:
            raise TilingError("width must be at least 1")
        if len(self.first) != self.width or len(self.bottom) != self.width:
            raise TilingError("first and bottom rows must have exactly `width` tiles")
        if len(set(self.labels)) != len(self.labels):
            raise TilingError("duplicate labels")
        if len(set(self.tiles)) != len(self.tiles):
            raise TilingError("duplicate tiles")
        known = set(self.labels)
        for t in self.tiles:
            if not set(t) <= known:
                raise TilingError(f"tile {t} uses an undeclared label")
        for i in self.first + self.bottom:
            if not 0 <= i < len(self.tiles):
                raise TilingError(f"tile index {i} out of range")

    def h_ok(self, left: int, right: int) -> bool:
        return self.tiles[left].e == self.tiles[right].w

    def v_ok(self, upper: int, lower: int) -> bool:
        return self.tiles[upper].s == self.tiles[lower].n

    def row_consistent(self, row: Sequence[int]) -> bool:
        return all(self.h_ok(row[j], row[j + 1]) for j in range(len(row) - 1))


@dataclass(frozen=True)
class Tiling:
    grid: tuple  # grid[i][j], 0-based, tile indices

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(tuple(int(x) for x in row) for row in self.grid))

    @property
    def rows(self) -> int:
        return len(self.grid)


@dataclass(frozen=True)
class Violation:
    condition: int
    i: int  # 1-based row
    j: int  # 1-based column


def check_tiling(T: TilingSystem, t: Tiling) -> Violation | None:
    """First violated condition (1 first row, 2 horizontal, 3 vertical, 4 bottom row)."""
    if t.rows < 1 or any(len(row) != T.width for row in t.grid):
        raise TilingError("tiling dimensions do not match the system width")
    if any(not 0 <= x < len(T.tiles) for row in t.grid for x in row):
        raise TilingError("tile index out of range")
    g = t.grid
    for j in range(T.width):
        if g[0][j] != T.first[j]:
            return Violation(1, 1, j + 1)
    for i, row in enumerate(g):
        for j in range(T.width - 1):
            if not T.h_ok(row[j], row[j + 1]):
                return Violation(2, i + 1, j + 1)
    for i in range(t.rows - 1):
        for j in range(T.width):
            if not T.v_ok(g[i][j], g[i + 1][j]):
                return Violation(3, i + 1, j + 1)
    for j in range(T.width):
        if g[-1][j] != T.bottom[j]:
            return Violation(4, t.rows, j + 1)
    return None


def solve_square(T: TilingSystem, budget: int = DEFAULT_SQUARE_BUDGET) -> Tiling | None:
    """An n-tiling (n = width) found by row-major backtracking, or None."""
    n = T.width
    f, b = T.first, T.bottom
    if not (T.row_consistent(f) and T.row_consistent(b)):
        return None
    if n == 1:
        return Tiling((f,)) if f == b else None
    grid = [list(f)] + [[-1] * n for _ in range(n - 2)] + [list(b)]
    ntiles = len(T.tiles)
    nodes = 0

    def fits(i, j, x):
        if j > 0 and not T.h_ok(grid[i][j - 1], x):
            return False
        if not T.v_ok(grid[i - 1][j], x):
            return False
        # the row above the bottom row must also match it
        return i != n - 2 or T.v_ok(x, b[j])

    def place(pos):
        nonlocal nodes
        if pos == (n - 2) * n:
            return True
        i, j = divmod(pos, n)
        i += 1
        for x in range(ntiles):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"square search exceeded {budget} nodes")
            if fits(i, j, x):
                grid[i][j] = x
                if place(pos + 1):
                    return True
        grid[i][j] = -1
        return False

    if n == 2:
        ok = all(T.v_ok(f[j], b[j]) for j in range(n))
        return Tiling((f, b)) if ok else None
    return Tiling(tuple(map(tuple, grid))) if place(0) else None


def _next_rows(T: TilingSystem, row: tuple):
    """All horizontally consistent rows that fit below ``row``, in lexicographic order."""
    cands = [[x for x in range(len(T.tiles)) if T.v_ok(row[j], x)] for j in range(T.width)]
    out = [()]
    for j in range(T.width):
        out = [p + (x,) for p in out for x in cands[j] if not p or T.h_ok(p[-1], x)]
    return out


def solve_corridor(T: TilingSystem) -> tuple[int, Tiling] | None:
    """Minimal m with an m-tiling, by BFS over horizontally consistent rows."""
    f, b = T.first, T.bottom
    if not (T.row_consistent(f) and T.row_consistent(b)):
        return None
    parent = {f: None}
    queue = deque([f])
    while queue:
        row = queue.popleft()
        if row == b:
            path = []
            while row is not None:
                path.append(row)
                row = parent[row]
            path.reverse()
            return len(path), Tiling(tuple(path))
        for nxt in _next_rows(T, row):
            if nxt not in parent:
                parent[nxt] = row
                queue.append(nxt)
    return None


def enumerate_tilings(T: TilingSystem, m: int):
    """Every m-tiling, by exhaustive enumeration over all grids (oracle use only)."""
    for cells in itertools.product(range(len(T.tiles)), repeat=m * T.width):
        t = Tiling(tuple(cells[i * T.width:(i + 1) * T.width] for i in range(m)))
        if check_tiling(T, t) is None:
            yield t
