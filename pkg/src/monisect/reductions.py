"""Constructive reductions between the problem variants.

* monoid instance -> list of DFAs, and singleton instance -> transformation
  membership (thin wrappers over :mod:`monisect.models`);
* square tiling -> intersection instance over ``M`` and ``M x M``;
* corridor tiling -> intersection instance over copies of B21 with singleton
  accepting sets.

Letters of the tiling alphabets are strings ``"t:i:j"`` (tile index, row or
row marker, column).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .models import DFA, Transformation, instance_to_transformation, monoid_to_dfa
from .monoid import Monoid, Morphism, b21, direct_product, u1
from .solver import Instance, Recognizer
from .tiling import Tile, Tiling, TilingSystem, check_tiling


class ReductionError(ValueError):
    code = "reduction_error"


class DecodeError(ReductionError):
    code = "decode_error"


# -- monoid instances to DFAs / transformations -----------------------------------


def instance_to_dfas(I: Instance) -> list[DFA]:
    return [monoid_to_dfa(r.morphism, r.accepting) for r in I.recognizers]


def instance_to_membership(I: Instance) -> tuple[dict, Transformation]:
    return instance_to_transformation(I)


# -- B21 recognizers for the building-block languages ------------------------------


class Variant(enum.Enum):
    LEFT = "LEFT"    # E* B (D u E)*
    RIGHT = "RIGHT"  # (D u E)* C E*
    BLOCK = "BLOCK"  # (E* B (E u F)* C E*  u  E* D E*)+


@dataclass(frozen=True)
class Lemma6Spec:
    alphabet: tuple
    variant: Variant
    B: frozenset = frozenset()
    C: frozenset = frozenset()
    D: frozenset = frozenset()
    E: frozenset = frozenset()
    F: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "variant", Variant(self.variant))
        for name in "BCDEF":
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        sets = [self.B, self.C, self.D, self.E, self.F]
        for x, y in itertools.combinations(sets, 2):
            if x & y:
                raise ReductionError("letter sets must be pairwise disjoint")
        extra = frozenset().union(*sets) - set(self.alphabet)
        if extra:
            raise ReductionError(f"letters outside the alphabet: {sorted(extra)}")


_B21 = b21()

# letter-set -> B21 element; everything else goes to 0
_MAPS = {
    Variant.LEFT: ({"E": "1", "B": "b", "D": "ab"}, "b"),
    Variant.RIGHT: ({"E": "1", "C": "b", "D": "ba"}, "b"),
    Variant.BLOCK: ({"E": "1", "B": "a", "C": "b", "D": "ab", "F": "ba"}, "ab"),
}


def lemma6_recognizer(spec: Lemma6Spec) -> tuple[Morphism, int]:
    """Morphism into B21 and the accepting element for one of the three block languages."""
    mapping, acc = _MAPS[spec.variant]
    images = []
    for a in spec.alphabet:
        img = "0"
        for name, elem in mapping.items():
            if a in getattr(spec, name):
                img = elem
        images.append(_B21.index(img))
    return Morphism(spec.alphabet, _B21, tuple(images)), _B21.index(acc)


def lemma7_recognizers(alphabet: Sequence, parts: Sequence) -> list[tuple[Morphism, int]]:
    """Recognizers whose intersection is ``(A_1 A_2 ... A_n)+``."""
    parts = [frozenset(p) for p in parts]
    n = len(parts)
    if n == 0:
        raise ReductionError("need at least one letter set")
    for x, y in itertools.combinations(parts, 2):
        if x & y:
            raise ReductionError("letter sets must be pairwise disjoint")
    alphabet = tuple(alphabet)
    if n == 1:
        # A_1+ as the block language with D = A_1 and nothing else
        return [lemma6_recognizer(Lemma6Spec(alphabet, Variant.BLOCK, D=parts[0]))]
    union = frozenset().union(*parts)
    out = []
    for i in range(n - 1):
        rest = union - parts[i] - parts[i + 1]
        out.append(lemma6_recognizer(Lemma6Spec(alphabet, Variant.BLOCK, B=parts[i], C=parts[i + 1], D=rest)))
    rest = union - parts[0] - parts[-1]
    out.append(lemma6_recognizer(Lemma6Spec(alphabet, Variant.BLOCK, B=parts[0], C=parts[-1], F=rest)))
    return out


# -- square tiling -----------------------------------------------------------------

DIRECTIONS = ("w", "e", "s", "n")


def square_letter(t: int, i: int, j: int) -> str:
    return f"{t}:{i}:{j}"


def parse_letter(letter: str) -> tuple[int, int, int]:
    try:
        t, i, j = (int(x) for x in str(letter).split(":"))
    except ValueError:
        raise DecodeError(f"not a tiling letter: {letter!r}") from None
    return t, i, j


def square_alphabet(T: TilingSystem) -> tuple:
    n = T.width
    return tuple(square_letter(t, i, j) for t in range(len(T.tiles))
                 for i in range(1, n + 1) for j in range(1, n + 1))


def square_tiling_to_instance(T: TilingSystem, M: Monoid | None = None, x=None) -> Instance:
    """Instance that is non-empty iff ``T`` has an n-tiling (n = width)."""
    if M is None:
        M = u1()
        x = M.index("0") if x is None else M.index(x)
    elif x is None:
        raise ReductionError("an element x must be given with a custom monoid")
    else:
        x = M.index(x)
    if M.is_trivial():
        raise ReductionError("the monoid must be non-trivial")
    if x == M.identity:
        raise ReductionError("x must differ from the identity")
    n = T.width
    tiles = T.tiles
    A = square_alphabet(T)
    letters = [(t, i, j) for t in range(len(tiles)) for i in range(1, n + 1) for j in range(1, n + 1)]
    one = M.identity
    MM = direct_product(M, M)
    nn = len(M)

    def pair(a, b):
        return a * nn + b

    one2, x1, one_x, xx = pair(one, one), pair(x, one), pair(one, x), pair(x, x)
    recs: list[Recognizer] = []

    def rec(target, images, accepting):
        recs.append(Recognizer(Morphism(A, target, tuple(images)), frozenset(accepting)))

    for row, ref in ((1, T.first), (n, T.bottom)):
        for j in range(1, n + 1):
            for d in DIRECTIONS:
                want = getattr(tiles[ref[j - 1]], d)
                rec(M, [x if (i == row and l == j and getattr(tiles[t], d) == want) else one
                        for t, i, l in letters], {x})
    # the first-row family comes before the bottom-row family (f then b)
    for i in range(1, n + 1):
        for j in range(1, n):
            for mu in T.labels:
                rec(MM, [x1 if (k == i and l == j and tiles[t].e == mu)
                         else one_x if (k == i and l == j + 1 and tiles[t].w == mu) else one2
                         for t, k, l in letters], {one2, xx})
    for i in range(1, n):
        for j in range(1, n + 1):
            for mu in T.labels:
                rec(MM, [x1 if (k == i and l == j and tiles[t].s == mu)
                         else one_x if (k == i + 1 and l == j and tiles[t].n == mu) else one2
                         for t, k, l in letters], {one2, xx})
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for d in DIRECTIONS:
                for mu, mu2 in itertools.permutations(T.labels, 2):
                    rec(MM, [x1 if (k == i and l == j and getattr(tiles[t], d) == mu)
                             else one_x if (k == i and l == j and getattr(tiles[t], d) == mu2) else one2
                             for t, k, l in letters], {one2, one_x, x1})
    return Instance(A, recs)


def square_instance_size(n: int, labels: int) -> int:
    return 8 * n + 2 * n * (n - 1) * labels + 4 * n * n * labels * (labels - 1)


def encode_square_word(T: TilingSystem, tiling: Tiling) -> tuple:
    return tuple(square_letter(t, i + 1, j + 1) for i, row in enumerate(tiling.grid) for j, t in enumerate(row))


def decode_square_witness(T: TilingSystem, word, M: Monoid | None = None, x=None) -> Tiling:
    """Read a tiling off a word accepted by the square instance.

    Position ``(i, j)`` carries label ``mu`` in direction ``d`` when the letters
    at that position with that label multiply to ``x``.
    """
    if M is None:
        M = u1()
        x = M.index("0")
    else:
        x = M.index(x)
    n = T.width
    count: dict = {}
    for letter in word:
        t, i, j = parse_letter(letter)
        if not (0 <= t < len(T.tiles) and 1 <= i <= n and 1 <= j <= n):
            raise DecodeError(f"letter {letter!r} outside the square alphabet")
        for d in DIRECTIONS:
            key = (i, j, d, getattr(T.tiles[t], d))
            count[key] = count.get(key, 0) + 1
    tile_of = {tile: idx for idx, tile in enumerate(T.tiles)}
    grid = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            labels = []
            for d in DIRECTIONS:
                got = [mu for mu in T.labels if M.power(x, count.get((i, j, d, mu), 0)) == x]
                if len(got) != 1:
                    what = "missing" if not got else "inconsistent"
                    raise DecodeError(f"position ({i},{j}) has {what} labels in direction {d}")
                labels.append(got[0])
            tile = Tile(*labels)
            if tile not in tile_of:
                raise DecodeError(f"position ({i},{j}) decodes to {tuple(tile)}, which is not a tile")
            row.append(tile_of[tile])
        grid.append(tuple(row))
    tiling = Tiling(tuple(grid))
    v = check_tiling(T, tiling)
    if v is not None:
        raise DecodeError(f"decoded grid violates condition {v.condition} at ({v.i},{v.j})")
    return tiling


# -- corridor tiling -----------------------------------------------------------------


@dataclass(frozen=True)
class PreparedSystem:
    """A transformed tiling system plus the way back to the original.

    ``origin[t]`` is the original tile a new tile copies, or None for frame
    tiles.  ``framed`` means two extra rows were added above and below.
    """

    system: TilingSystem
    source: TilingSystem
    origin: tuple
    framed: bool


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def frame_tiling(T: TilingSystem) -> PreparedSystem:
    """Add a fresh first and bottom row, so ``f`` and ``b`` become inner rows.

    m-tilings of ``T`` correspond to (m+2)-tilings of the result; an m = 1
    tiling uses tiles that copy ``f`` on top and ``b`` below at once.
    """
    n = T.width
    taken = set(T.labels)
    beta = [_fresh(f"#top{j}", taken) for j in range(n + 1)]
    gamma = [_fresh(f"#bot{j}", taken) for j in range(n + 1)]
    sigma = [_fresh(f"#fs{j}", taken) for j in range(1, n + 1)]
    rho = [_fresh(f"#bn{j}", taken) for j in range(1, n + 1)]
    alpha = _fresh("#roof", taken)
    delta = _fresh("#floor", taken)
    tiles = list(T.tiles)
    origin: list = list(range(len(tiles)))

    def add(tile, orig):
        tiles.append(Tile(*tile))
        origin.append(orig)
        return len(tiles) - 1

    phi = [add((beta[j], beta[j + 1], sigma[j], alpha), None) for j in range(n)]
    psi = [add((gamma[j], gamma[j + 1], delta, rho[j]), None) for j in range(n)]
    for j in range(n):
        ft = T.tiles[T.first[j]]
        add((ft.w, ft.e, ft.s, sigma[j]), T.first[j])
        bt = T.tiles[T.bottom[j]]
        add((bt.w, bt.e, rho[j], bt.n), T.bottom[j])
    if T.first == T.bottom:
        for j in range(n):
            ft = T.tiles[T.first[j]]
            add((ft.w, ft.e, rho[j], sigma[j]), T.first[j])
    labels = tuple(T.labels) + tuple(beta + gamma + sigma + rho + [alpha, delta])
    system = TilingSystem(labels, tuple(tiles), n, tuple(phi), tuple(psi))
    return PreparedSystem(system, T, tuple(origin), True)


_H = ("w", "e")
_V = ("s", "n")


def _prime(tiles, origin, mu, mu2, pair):
    """Split every tile carrying ``mu`` on a side of ``pair`` and drop the self-matching ones."""
    a, b = pair
    for side in pair:
        new_tiles, new_origin = [], []
        for t, o in zip(tiles, origin):
            new_tiles.append(t)
            new_origin.append(o)
            if getattr(t, side) == mu:
                new_tiles.append(t._replace(**{side: mu2}))
                new_origin.append(o)
        tiles, origin = new_tiles, new_origin
    keep = [k for k, t in enumerate(tiles) if not (getattr(t, a) == getattr(t, b) and getattr(t, a) in (mu, mu2))]
    return [tiles[k] for k in keep], [origin[k] for k in keep]


def _pick_row(tiles, row_tiles, avoid_north, avoid_south):
    """Copies for a fixed row: horizontally consistent, original vertical labels kept where possible."""
    chosen = []
    for j, cands in enumerate(row_tiles):
        ok = [c for c in cands if not chosen or tiles[chosen[-1]].e == tiles[c].w]
        if not ok:
            return None
        # prefer copies whose vertical labels are unprimed
        ok.sort(key=lambda c: (tiles[c].n in avoid_north, tiles[c].s in avoid_south, c))
        chosen.append(ok[0])
    return tuple(chosen)


def normalize_tiling(T: TilingSystem, frame: bool | None = None) -> PreparedSystem:
    """Equivalent system in which no tile has equal west/east or equal south/north labels.

    A label ``mu`` shared by both sides of some tile gets a copy ``mu'``; tiles are
    duplicated to use either copy and the self-matching ones are removed.  When
    the fixed first or bottom row would need a particular copy in the vertical
    direction, the system is framed first (``frame=None`` decides this).
    """
    if frame is None:
        vert = {t.s for t in T.tiles if t.s == t.n}
        f_s = {T.tiles[x].s for x in T.first}
        b_n = {T.tiles[x].n for x in T.bottom}
        frame = bool(vert & (f_s | b_n))
    if frame:
        framed = frame_tiling(T)
        inner = normalize_tiling(framed.system, frame=False)
        origin = tuple(None if o is None else framed.origin[o] for o in inner.origin)
        return PreparedSystem(inner.system, T, origin, True)
    horiz = [mu for mu in T.labels if any(t.w == t.e == mu for t in T.tiles)]
    vert = [mu for mu in T.labels if any(t.s == t.n == mu for t in T.tiles)]
    if not horiz and not vert:
        return PreparedSystem(T, T, tuple(range(len(T.tiles))), False)
    taken = set(T.labels)
    labels = list(T.labels)
    tiles = list(T.tiles)
    origin = list(range(len(tiles)))
    primes = {}
    for mu in dict.fromkeys(horiz + vert):
        primes[mu] = _fresh(mu + "'", taken)
        labels.append(primes[mu])
    for mu in horiz:
        tiles, origin = _prime(tiles, origin, mu, primes[mu], _H)
    for mu in vert:
        tiles, origin = _prime(tiles, origin, mu, primes[mu], _V)
    seen = {}
    for t, o in zip(tiles, origin):
        seen.setdefault(t, o)
    tiles, origin = list(seen), list(seen.values())
    primed_v = {primes[mu] for mu in vert}
    copies = {}
    for k, o in enumerate(origin):
        copies.setdefault(o, []).append(k)
    first = _pick_row(tiles, [copies.get(x, []) for x in T.first], primed_v, primed_v)
    bottom = _pick_row(tiles, [copies.get(x, []) for x in T.bottom], primed_v, primed_v)
    # a fixed row that is not horizontally consistent stays unsolvable with any copies
    first = first or tuple(copies[x][0] for x in T.first)
    bottom = bottom or tuple(copies[x][0] for x in T.bottom)
    system = TilingSystem(tuple(labels), tuple(tiles), T.width, first, bottom)
    return PreparedSystem(system, T, tuple(origin), False)


def corridor_letter(t: int, marker: int, j: int) -> str:
    return f"{t}:{marker}:{j}"


@dataclass
class CorridorAlphabetMap:
    """The letter sets the corridor instance is assembled from."""

    alphabet: tuple
    C: dict = field(default_factory=dict)
    D: dict = field(default_factory=dict)
    W: dict = field(default_factory=dict)
    E: dict = field(default_factory=dict)
    X: dict = field(default_factory=dict)
    N: dict = field(default_factory=dict)
    S: dict = field(default_factory=dict)
    Y: dict = field(default_factory=dict)
    F: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)
    Fbar: dict = field(default_factory=dict)
    Bbar: dict = field(default_factory=dict)


def corridor_alphabet_map(T: TilingSystem) -> CorridorAlphabetMap:
    n = T.width
    letters = [(t, i, j) for t in range(len(T.tiles)) for i in (0, 1, 2) for j in range(1, n + 1)]
    name = {x: corridor_letter(*x) for x in letters}
    A = tuple(name[x] for x in letters)
    tl = T.tiles
    m = CorridorAlphabetMap(A)

    def sel(pred):
        return frozenset(name[x] for x in letters if pred(*x))

    for j in range(1, n + 1):
        m.C[j] = sel(lambda t, i, l: l == j)
        m.D[j] = frozenset(A) - m.C[j]
        m.F[j] = frozenset({corridor_letter(T.first[j - 1], 0, j)})
        m.B[j] = frozenset({corridor_letter(T.bottom[j - 1], 2, j)})
        m.Fbar[j] = sel(lambda t, i, l: l == j and i > 0)
        m.Bbar[j] = sel(lambda t, i, l: l == j and i < 2)
    for mu in T.labels:
        m.W[mu] = sel(lambda t, i, l: tl[t].w == mu and l > 1)
        m.E[mu] = sel(lambda t, i, l: tl[t].e == mu and l < n)
        m.X[mu] = frozenset(A) - m.W[mu] - m.E[mu]
        for j in range(1, n + 1):
            m.N[j, mu] = sel(lambda t, i, l: l == j and tl[t].n == mu and i > 0)
            m.S[j, mu] = sel(lambda t, i, l: l == j and tl[t].s == mu and i < 2)
            m.Y[j, mu] = m.C[j] - m.N[j, mu] - m.S[j, mu]
    return m


def prepare_corridor(T: TilingSystem) -> PreparedSystem:
    """Frame, then normalize: the system the corridor instance is built from."""
    framed = frame_tiling(T)
    inner = normalize_tiling(framed.system, frame=False)
    origin = tuple(None if o is None else framed.origin[o] for o in inner.origin)
    return PreparedSystem(inner.system, T, origin, True)


def corridor_tiling_to_instance(T: TilingSystem, prepared: PreparedSystem | None = None) -> Instance:
    """Instance with singleton accepting sets, non-empty iff ``T`` has a corridor tiling."""
    P = prepared if prepared is not None else prepare_corridor(T)
    S = P.system
    n = S.width
    m = corridor_alphabet_map(S)
    A = m.alphabet
    recs = []

    def add(spec):
        h, acc = lemma6_recognizer(spec)
        recs.append(Recognizer(h, frozenset({acc})))

    for j in range(1, n + 1):
        add(Lemma6Spec(A, Variant.LEFT, E=m.D[j], B=m.F[j], D=m.Fbar[j]))
    for j in range(1, n + 1):
        add(Lemma6Spec(A, Variant.RIGHT, E=m.D[j], C=m.B[j], D=m.Bbar[j]))
    for mu in S.labels:
        add(Lemma6Spec(A, Variant.BLOCK, B=m.E[mu], C=m.W[mu], D=m.X[mu]))
    for mu in S.labels:
        for j in range(1, n + 1):
            add(Lemma6Spec(A, Variant.BLOCK, E=m.D[j], B=m.S[j, mu], C=m.N[j, mu], D=m.Y[j, mu]))
    for h, acc in lemma7_recognizers(A, [m.C[j] for j in range(1, n + 1)]):
        recs.append(Recognizer(h, frozenset({acc})))
    return Instance(A, recs)


def _lift(P: PreparedSystem, tiling: Tiling) -> Tiling:
    """A tiling of the prepared system whose cells copy the given tiling's cells."""
    S = P.system
    rows = [list(r) for r in tiling.grid]
    by_origin: dict = {}
    for k, o in enumerate(P.origin):
        by_origin.setdefault(o, []).append(k)
    cand_rows = [[by_origin.get(t, []) for t in row] for row in rows]
    if P.framed:
        cand_rows = [[[c] for c in S.first]] + cand_rows + [[[c] for c in S.bottom]]
    else:
        cand_rows[0] = [[c] for c in S.first]

    def row_options(cands, above):
        out = [()]
        for j, cs in enumerate(cands):
            out = [p + (c,) for p in out for c in cs
                   if (not p or S.h_ok(p[-1], c)) and (above is None or S.v_ok(above[j], c))]
        return out

    failed = set()

    def dfs(r, above):
        if r == len(cand_rows):
            return []
        if (r, above) in failed:
            return None
        for opt in row_options(cand_rows[r], above):
            if r == len(cand_rows) - 1 and opt != tuple(S.bottom):
                continue
            rest = dfs(r + 1, opt)
            if rest is not None:
                return [opt] + rest
        failed.add((r, above))
        return None

    grid = dfs(0, None)
    if grid is None or tuple(grid[0]) != tuple(S.first):
        raise ReductionError("tiling cannot be lifted to the prepared system")
    return Tiling(tuple(grid))


def encode_corridor_word(T: TilingSystem, tiling: Tiling, prepared: PreparedSystem | None = None) -> tuple:
    v = check_tiling(T, tiling)
    if v is not None:
        raise ReductionError(f"not a valid tiling: condition {v.condition} fails at ({v.i},{v.j})")
    P = prepared if prepared is not None else prepare_corridor(T)
    lifted = _lift(P, tiling)
    m = lifted.rows
    out = []
    for i, row in enumerate(lifted.grid):
        marker = 0 if i == 0 else 2 if i == m - 1 else 1
        out.extend(corridor_letter(t, marker, j + 1) for j, t in enumerate(row))
    return tuple(out)


def decode_corridor_witness(T: TilingSystem, word, prepared: PreparedSystem | None = None) -> Tiling:
    P = prepared if prepared is not None else prepare_corridor(T)
    S = P.system
    n = S.width
    word = list(word)
    if not word or len(word) % n:
        raise DecodeError("word length is not a positive multiple of the width")
    grid = []
    for r in range(len(word) // n):
        row = []
        for j in range(n):
            t, _, col = parse_letter(word[r * n + j])
            if col != j + 1 or not 0 <= t < len(S.tiles):
                raise DecodeError(f"letter {word[r * n + j]!r} is out of place")
            row.append(t)
        grid.append(tuple(row))
    v = check_tiling(S, Tiling(tuple(grid)))
    if v is not None:
        raise DecodeError(f"word encodes an invalid grid: condition {v.condition} at ({v.i},{v.j})")
    inner = grid[1:-1] if P.framed else grid
    # with a frame, a single inner row copies f and b at once: an m = 1 tiling
    inner = [tuple(P.origin[t] for t in row) for row in inner]
    if any(t is None for row in inner for t in row):
        raise DecodeError("frame tile inside the tiling")
    tiling = Tiling(tuple(inner))
    v = check_tiling(T, tiling)
    if v is not None:
        raise DecodeError(f"decoded tiling violates condition {v.condition} at ({v.i},{v.j})")
    return tiling


def encode_tiling_word(T: TilingSystem, tiling: Tiling, kind: str = "square") -> tuple:
    if kind == "square":
        return encode_square_word(T, tiling)
    if kind == "corridor":
        return encode_corridor_word(T, tiling)
    raise ValueError(f"unknown kind {kind!r}")


def decode_witness(T: TilingSystem, word, kind: str = "square", **kw) -> Tiling:
    if kind == "square":
        return decode_square_witness(T, word, **kw)
    if kind == "corridor":
        return decode_corridor_witness(T, word, **kw)
    raise ValueError(f"unknown kind {kind!r}")
