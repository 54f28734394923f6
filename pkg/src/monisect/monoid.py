"""Finite monoids given by multiplication tables, and morphisms from free monoids.

Elements are addressed by integer index everywhere internally; names are only
used at the boundary (JSON, reports).  A :class:`Monoid` is immutable once built.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels

DEFAULT_PRODUCT_CAP = 100_000
DEFAULT_DIVIDES_CAP = 64


class MonoidError(ValueError):
    """Base class for malformed monoid data."""

    code = "invalid_monoid"


class NotAssociative(MonoidError):
    code = "not_associative"

    def __init__(self, triple):
        self.triple = tuple(triple)
        super().__init__(f"table is not associative at {self.triple}")


class NoIdentity(MonoidError):
    code = "no_identity"


class CapExceeded(RuntimeError):
    """A desk-scale search was asked to go beyond its configured cap."""

    code = "cap_exceeded"


class UnknownLetter(KeyError):
    code = "unknown_letter"


def as_word(word) -> tuple:
    """Normalize a word: a ``str`` is read as a sequence of one-character letters."""
    if isinstance(word, str):
        return tuple(word)
    return tuple(word)


class Monoid:
    """A finite monoid as a multiplication table over element indices.

    ``table[m][n]`` is the index of ``m * n``.  Associativity and the identity
    law are verified on construction unless ``check=False``.
    """

    __slots__ = ("elements", "identity", "table", "_index", "__dict__")

    def __init__(self, elements: Sequence[str], table, identity: int = 0, check: bool = True):
        self.elements = tuple(str(e) for e in elements)
        n = len(self.elements)
        if n == 0:
            raise MonoidError("a monoid has at least one element")
        if len(set(self.elements)) != n:
            raise MonoidError("element names must be distinct")
        tab = np.array(table, dtype=np.int32)
        if tab.shape != (n, n):
            raise MonoidError(f"table must be {n}x{n}, got {tab.shape}")
        if tab.size and (tab.min() < 0 or tab.max() >= n):
            raise MonoidError("table entry out of range")
        if not 0 <= identity < n:
            raise MonoidError("identity index out of range")
        tab.setflags(write=False)
        self.table = tab
        self.identity = int(identity)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if check:
            self._check_identity()
            self._check_associative()

    def _check_identity(self):
        e = self.identity
        idx = np.arange(len(self), dtype=np.int32)
        if not (np.array_equal(self.table[e], idx) and np.array_equal(self.table[:, e], idx)):
            raise NoIdentity(f"{self.elements[e]!r} is not a two-sided identity")

    def _check_associative(self):
        t = self.table
        for m in range(len(self)):
            # (m n) p  versus  m (n p), for all n, p at once
            left = t[t[m]]
            right = t[m][t]
            if not np.array_equal(left, right):
                n, p = map(int, np.argwhere(left != right)[0])
                raise NotAssociative((self.elements[m], self.elements[n], self.elements[p]))

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Monoid({len(self)} elements)"

    def __eq__(self, other):
        if not isinstance(other, Monoid):
            return NotImplemented
        return (
            self.elements == other.elements
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.elements, self.identity, self.table.tobytes()))

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name) -> int:
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if not 0 <= name < len(self):
                raise IndexError(f"element index {name} out of range")
            return int(name)
        try:
            return self._index[str(name)]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def name(self, m: int) -> str:
        return self.elements[m]

    def mul(self, m: int, n: int) -> int:
        return int(self.table[m, n])

    def product(self, items: Iterable[int]) -> int:
        acc = self.identity
        t = self.table
        for x in items:
            acc = int(t[acc, x])
        return acc

    def power(self, m: int, e: int) -> int:
        """``m**e`` for an arbitrary-precision exponent ``e >= 0``."""
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return self.identity
        index, period = self.index_period(m)
        if e >= index:
            e = index + (e - index) % period
        acc, base = self.identity, m
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def index_period(self, m: int) -> tuple[int, int]:
        """Smallest ``i >= 1`` and ``p >= 1`` with ``m**(i+p) == m**i``."""
        seen = {}
        x, k = m, 1
        while x not in seen:
            seen[x] = k
            x = self.mul(x, m)
            k += 1
        i = seen[x]
        return i, k - i

    # -- idempotents, omega, J-order -------------------------------------

    @cached_property
    def idempotent_mask(self) -> np.ndarray:
        n = len(self)
        return self.table[np.arange(n), np.arange(n)] == np.arange(n)

    def idempotents(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.idempotent_mask)]

    def is_idempotent(self, m: int) -> bool:
        return bool(self.idempotent_mask[m])

    @cached_property
    def _omega(self) -> tuple[int, ...]:
        out = []
        for m in range(len(self)):
            x = m
            # the powers of m run into a cycle that contains exactly one idempotent
            while not self.idempotent_mask[x]:
                x = self.mul(x, m)
            out.append(x)
        return tuple(out)

    def omega(self, m: int) -> int:
        return self._omega[m]

    @cached_property
    def _j_matrix(self) -> np.ndarray:
        t = self.table
        n = len(self)
        below = np.zeros((n, n), dtype=bool)
        for j in range(n):
            # M j M as the set of all x j y
            ideal = np.unique(t[t[:, j]])
            below[ideal, j] = True
        below.setflags(write=False)
        return below

    def j_below(self, m: int, n: int) -> bool:
        """``m <=_J n``: ``m`` lies in the two-sided ideal generated by ``n``."""
        return bool(self._j_matrix[m, n])

    def j_equivalent(self, m: int, n: int) -> bool:
        return self.j_below(m, n) and self.j_below(n, m)

    def j_classes(self) -> list[list[int]]:
        seen = set()
        out = []
        for m in range(len(self)):
            if m in seen:
                continue
            cls = [n for n in range(len(self)) if self.j_equivalent(m, n)]
            seen.update(cls)
            out.append(cls)
        return out

    def is_trivial(self) -> bool:
        return len(self) == 1


# -- named constructions ----------------------------------------------------


def u1() -> Monoid:
    """``{1, 0}`` under integer multiplication."""
    return Monoid(["1", "0"], [[0, 1], [1, 1]])


def b21() -> Monoid:
    """The six-element Brandt monoid ``{1, a, b, ab, ba, 0}``.

    Realized as 2x2 matrix units plus zero and an adjoined identity:
    ``a = E12``, ``b = E21``, ``ab = E11``, ``ba = E22``.
    """
    names = ["1", "a", "b", "ab", "ba", "0"]
    units = {1: (0, 1), 2: (1, 0), 3: (0, 0), 4: (1, 1)}
    back = {v: k for k, v in units.items()}

    def mul(x, y):
        if x == 0:
            return y
        if y == 0:
            return x
        if x == 5 or y == 5:
            return 5
        (i, j), (k, l) = units[x], units[y]
        return back[(i, l)] if j == k else 5

    return Monoid(names, [[mul(x, y) for y in range(6)] for x in range(6)])


def cyclic(n: int) -> Monoid:
    """The cyclic group of order ``n`` with generator ``g``."""
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    names = ["1"] + ["g" if k == 1 else f"g^{k}" for k in range(1, n)]
    return Monoid(names, [[(x + y) % n for y in range(n)] for x in range(n)])


def symmetric(n: int) -> Monoid:
    """The symmetric group on ``n`` points; ``p*q`` applies ``p`` first."""
    perms = sorted(itertools.permutations(range(n)))
    ident = tuple(range(n))
    perms.remove(ident)
    perms.insert(0, ident)
    pos = {p: i for i, p in enumerate(perms)}
    names = ["1"] + ["".join(str(x) for x in p) for p in perms[1:]]
    table = [[pos[tuple(q[p[x]] for x in range(n))] for q in perms] for p in perms]
    return Monoid(names, table)


def trivial() -> Monoid:
    return Monoid(["1"], [[0]])


def from_transformations(maps: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> Monoid:
    """Monoid of a composition-closed set of transformations (first map is identity).

    ``m * n`` means apply ``m`` then ``n``.
    """
    arr = np.asarray(maps, dtype=np.int32)
    key = {row.tobytes(): i for i, row in enumerate(arr)}
    n = len(arr)
    table = np.empty((n, n), dtype=np.int32)
    for m in range(n):
        composed = arr[:, arr[m]]  # row q: q[m[x]]
        for q in range(n):
            try:
                table[m, q] = key[composed[q].tobytes()]
            except KeyError:
                raise MonoidError("transformations are not closed under composition") from None
    if names is None:
        names = ["(" + ",".join(map(str, row)) + ")" for row in arr]
    return Monoid(names, table, identity=0, check=False)


# -- morphisms --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Morphism:
    """A monoid morphism from the free monoid over ``alphabet`` into ``target``."""

    alphabet: tuple
    target: Monoid
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "images", tuple(int(self.target.index(x)) for x in self.images))
        if len(self.images) != len(self.alphabet):
            raise ValueError("every letter needs exactly one image")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")

    @classmethod
    def from_mapping(cls, target: Monoid, mapping: dict, alphabet: Sequence | None = None) -> "Morphism":
        alphabet = tuple(mapping) if alphabet is None else tuple(alphabet)
        missing = [a for a in alphabet if a not in mapping]
        if missing:
            raise ValueError(f"letters without image: {missing}")
        return cls(alphabet, target, tuple(target.index(mapping[a]) for a in alphabet))

    @cached_property
    def letter_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def image_array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int32)

    def image(self, letter) -> int:
        try:
            return self.images[self.letter_index[letter]]
        except KeyError:
            raise UnknownLetter(f"letter {letter!r} not in alphabet") from None

    def encode(self, word) -> np.ndarray:
        idx = self.letter_index
        try:
            return np.fromiter((idx[a] for a in as_word(word)), dtype=np.int32)
        except KeyError as exc:
            raise UnknownLetter(f"letter {exc.args[0]!r} not in alphabet") from None

    def eval_word(self, word) -> int:
        return kernels.fold(self.target.table, self.image_array, self.encode(word), self.target.identity)

    def restrict(self, alphabet: Sequence) -> "Morphism":
        return Morphism(tuple(alphabet), self.target, tuple(self.image(a) for a in alphabet))

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.alphabet == other.alphabet and self.images == other.images and self.target == other.target

    def __hash__(self):
        return hash((self.alphabet, self.images))


def eval_word(h: Morphism, word) -> int:
    return h.eval_word(word)


# -- congruences, products, submonoids, quotients ---------------------------


@dataclass(frozen=True, eq=False)
class Congruence:
    monoid: Monoid
    class_of: tuple

    def __post_init__(self):
        cls = tuple(int(c) for c in self.class_of)
        object.__setattr__(self, "class_of", cls)
        if len(cls) != len(self.monoid):
            raise ValueError("class_of must cover every element")
        # relabel classes to 0..r-1 by first occurrence
        seen = {}
        canon = tuple(seen.setdefault(c, len(seen)) for c in cls)
        object.__setattr__(self, "class_of", canon)
        self._check_compatible()

    def _check_compatible(self):
        t = self.monoid.table
        c = np.asarray(self.class_of)
        induced = {}
        for m in range(len(c)):
            prods = c[t[m]]
            for n in range(len(c)):
                key = (c[m], c[n])
                got = induced.setdefault(key, prods[n])
                if got != prods[n]:
                    raise MonoidError(
                        f"not a congruence: classes of {self.monoid.name(m)}*{self.monoid.name(n)} disagree"
                    )

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1

    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(self.num_classes)]
        for m, c in enumerate(self.class_of):
            out[c].append(m)
        return out


def multiply(M: Monoid, m: int, n: int) -> int:
    return M.mul(M.index(m), M.index(n))


def direct_product(M: Monoid, N: Monoid, cap: int = DEFAULT_PRODUCT_CAP) -> Monoid:
    size = len(M) * len(N)
    if size > cap:
        raise CapExceeded(f"direct product would have {size} elements (cap {cap})")
    nn = len(N)
    names = [f"({a},{b})" for a in M.elements for b in N.elements]
    # (m, n) -> m * |N| + n
    tm = np.repeat(np.repeat(M.table, nn, axis=0), nn, axis=1)
    tn = np.tile(N.table, (len(M), len(M)))
    table = tm * nn + tn
    return Monoid(names, table, identity=M.identity * nn + N.identity, check=False)


def generated_submonoid(M: Monoid, gens: Iterable[int]) -> tuple[Monoid, tuple]:
    """Smallest submonoid containing ``gens``, elements in BFS discovery order.

    Returns the submonoid and the embedding (submonoid index -> index in ``M``).
    """
    gens = sorted({M.index(g) for g in gens})
    order = [M.identity]
    seen = {M.identity: 0}
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = M.mul(x, g)
            if y not in seen:
                seen[y] = len(order)
                order.append(y)
                queue.append(y)
    emb = np.asarray(order, dtype=np.int64)
    sub = M.table[np.ix_(emb, emb)]
    lookup = np.full(len(M), -1, dtype=np.int64)
    lookup[emb] = np.arange(len(emb))
    table = lookup[sub]
    return Monoid([M.name(x) for x in order], table, identity=0, check=False), tuple(order)


def quotient_monoid(M: Monoid, c: Congruence) -> tuple[Monoid, tuple]:
    """Quotient by a congruence; returns the quotient and the projection."""
    if c.monoid is not M and c.monoid != M:
        raise ValueError("congruence belongs to a different monoid")
    classes = c.classes()
    reps = [cls[0] for cls in classes]
    proj = np.asarray(c.class_of)
    table = [[int(proj[M.mul(a, b)]) for b in reps] for a in reps]
    names = ["[" + "|".join(M.name(x) for x in cls) + "]" for cls in classes]
    return Monoid(names, table, identity=int(proj[M.identity]), check=False), c.class_of


def generating_set(M: Monoid) -> list[int]:
    """A small (irredundant) generating set, found greedily."""
    gens: list[int] = []
    closure = {M.identity}
    # elements high in the J-order first; they tend to generate the rest
    order = sorted(range(len(M)), key=lambda m: -int(M._j_matrix[:, m].sum()))
    for m in order:
        if m not in closure:
            gens.append(m)
            _, emb = generated_submonoid(M, gens)
            closure = set(emb)
    # drop generators made redundant by later ones
    for g in list(gens):
        rest = [x for x in gens if x != g]
        if len(set(generated_submonoid(M, rest)[1])) == len(M):
            gens = rest
    return gens


def _extend_to_morphism(src: Monoid, gens: Sequence[int], dst: Monoid, images: Sequence[int],
                        injective: bool = False):
    """Try to extend ``gens[i] -> images[i]`` to a morphism on the submonoid of ``src``
    generated by ``gens``.  Returns the map as a dict, or None if ill-defined."""
    phi = {src.identity: dst.identity}
    inv = {dst.identity: src.identity} if injective else None
    queue = deque([src.identity])
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for g, gi in zip(gens, images):
            y = src.mul(x, g)
            fy = dst.mul(fx, gi)
            got = phi.get(y)
            if got is None:
                if inv is not None:
                    if fy in inv:
                        return None
                    inv[fy] = y
                phi[y] = fy
                queue.append(y)
            elif got != fy:
                return None
    return phi


def _element_profile(M: Monoid, m: int) -> tuple:
    return (M.index_period(m), bool(M.idempotent_mask[m]), int(M._j_matrix[:, m].sum()), int(M._j_matrix[m].sum()))


def isomorphic(M: Monoid, N: Monoid, cap: int = DEFAULT_DIVIDES_CAP * 16) -> bool:
    if len(M) != len(N):
        return False
    if max(len(M), len(N)) > cap:
        raise CapExceeded(f"isomorphism search limited to {cap} elements")
    if len(M.idempotents()) != len(N.idempotents()):
        return False
    if sorted(map(len, M.j_classes())) != sorted(map(len, N.j_classes())):
        return False
    prof_m = [_element_profile(M, m) for m in range(len(M))]
    prof_n = [_element_profile(N, n) for n in range(len(N))]
    if sorted(prof_m) != sorted(prof_n):
        return False
    gens = generating_set(M)
    cands = [[n for n in range(len(N)) if prof_n[n] == prof_m[g]] for g in gens]
    for choice in itertools.product(*cands):
        if len(set(choice)) != len(choice):
            continue
        phi = _extend_to_morphism(M, gens, N, choice, injective=True)
        if phi is not None and len(phi) == len(M):
            return True
    return False


def divides(N: Monoid, M: Monoid, cap: int = DEFAULT_DIVIDES_CAP) -> bool:
    """Whether ``N`` is a quotient of a submonoid of ``M``.

    A surjection from a submonoid onto ``N`` restricts to one from the submonoid
    generated by one preimage per generator of ``N``; so it suffices to try every
    assignment of the generators of ``N`` to elements of ``M`` and check that the
    induced relation is a function.  Cost is ``|M| ** len(generating_set(N))``.
    """
    if len(M) > cap:
        raise CapExceeded(f"divisibility search limited to {cap} elements, got {len(M)}")
    if len(N) == 1:
        return True
    gens = generating_set(N)
    for pre in itertools.product(range(len(M)), repeat=len(gens)):
        if _extend_to_morphism(M, pre, N, gens) is not None:
            return True
    return False


def image_submonoid(h: Morphism) -> tuple[Monoid, tuple]:
    return generated_submonoid(h.target, set(h.images))
