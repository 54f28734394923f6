"""Witness compression for monoids in DO.

The group case keeps one table of SLP fragments per group element and reduces
any input to a product of ``k`` table entries (a Schreier-Sims style sift).
The general case splits the word at the positions where the set of
(prefix image, suffix image) pairs grows; every factor between two such
positions is compressed in a group quotient of its context.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .monoid import (
    Congruence,
    Monoid,
    Morphism,
    as_word,
    generated_submonoid,
    quotient_monoid,
)
from .slp import SLP, SLPBuilder, Var, epsilon_slp, literal
from .solver import Instance
from .varieties import in_DO, is_group

DEFAULT_SIFT_BUDGET = 10**7
ALPHABET_CAP = 10


class CompressError(ValueError):
    code = "compress_error"


class NotInDO(CompressError):
    code = "not_in_DO"


class NotAGroup(CompressError):
    code = "not_a_group"


class IsolationViolated(CompressError):
    """A context quotient that should be a group is not."""

    code = "isolation_violated"


class SiftBudgetExceeded(RuntimeError):
    code = "budget_exceeded"


class InvariantViolation(AssertionError):
    pass


# -- the group case -----------------------------------------------------------


class GroupSiftState:
    """Table of fragments for groups ``G_1..G_k`` and morphisms ``h_i: A* -> G_i``.

    Mutable; one caller at a time.  With ``assertions=True`` every sift round
    re-verifies the table, step, identity and return invariants.
    """

    def __init__(self, morphisms: Sequence[Morphism], builder: SLPBuilder | None = None,
                 lcm_omega: bool = False, assertions: bool = False):
        if not morphisms:
            raise CompressError("need at least one morphism")
        self.morphisms = tuple(morphisms)
        self.alphabet = self.morphisms[0].alphabet
        for h in self.morphisms:
            if h.alphabet != self.alphabet:
                raise CompressError("morphisms must share the alphabet")
            if not is_group(h.target):
                raise NotAGroup("every target must be a group")
        self.groups = tuple(h.target for h in self.morphisms)
        self.N = sum(len(G) for G in self.groups)
        if lcm_omega:
            self.omega = math.lcm(*(len(G) for G in self.groups))
        else:
            self.omega = math.factorial(self.N)
        self.builder = builder if builder is not None else SLPBuilder(self.alphabet)
        self.table: list[list[Var | None]] = [[None] * len(G) for G in self.groups]
        self.assertions = assertions
        self.sift_calls = 0

    @property
    def k(self) -> int:
        return len(self.groups)

    def filled(self) -> int:
        return sum(x is not None for row in self.table for x in row)

    def image(self, i: int, symbols) -> int:
        G, h, b = self.groups[i], self.morphisms[i], self.builder
        acc = G.identity
        for s in symbols:
            acc = G.mul(acc, b.image(h, s))
        return acc

    def sift(self, alpha) -> tuple:
        """Reduce the symbol sequence ``alpha`` to a product of ``k`` table entries.

        ``alpha`` is only materialized as a rule if some round has to fill an
        empty entry with it.
        """
        alpha = tuple(alpha)
        self.sift_calls += 1
        alpha_var: Var | None = None
        R: list[Var] = []
        for i in range(self.k):
            G = self.groups[i]
            r_img = self.image(i, R)
            a_img = self.image(i, alpha)
            s_img = G.mul(G.power(r_img, self.omega - 1), a_img)
            if self.table[i][s_img] is None:
                if alpha_var is None:
                    alpha_var = alpha[0] if len(alpha) == 1 and isinstance(alpha[0], Var) else self.builder.rule(alpha)
                b = self.builder
                if R:
                    base = b.rule(R)
                    s_var = b.rule((b.power(base, self.omega - 1), alpha_var))
                else:
                    s_var = alpha_var
                self.table[i][s_img] = s_var
            R.append(self.table[i][s_img])
            if self.assertions:
                self._check_round(i, R, alpha)
        if self.assertions:
            self._check_return(R, alpha)
        return tuple(R)

    def _check_round(self, i, R, alpha):
        if self.image(i, R) != self.image(i, alpha):
            raise InvariantViolation(f"round {i + 1}: prefix product image differs from the input image")
        self.check_table()

    def _check_return(self, R, alpha):
        for i in range(self.k):
            if self.image(i, R) != self.image(i, alpha):
                raise InvariantViolation(f"sift result has the wrong image under morphism {i + 1}")

    def check_table(self):
        """Every entry maps to its own element and to the identity in earlier groups."""
        for j, row in enumerate(self.table):
            for g, var in enumerate(row):
                if var is None:
                    continue
                if self.image(j, (var,)) != g:
                    raise InvariantViolation(f"entry for element {g} of group {j + 1} has the wrong image")
                for i in range(j):
                    if self.image(i, (var,)) != self.groups[i].identity:
                        raise InvariantViolation(
                            f"entry for group {j + 1} is not neutral under morphism {i + 1}")

    def _sweep(self, budget: int):
        letters = self.alphabet
        for combo in itertools.product(*(range(len(G)) for G in self.groups)):
            prefix = tuple(self.table[i][g] for i, g in enumerate(combo) if self.table[i][g] is not None)
            for a in letters:
                if self.sift_calls >= budget:
                    raise SiftBudgetExceeded(f"initialization exceeded {budget} sift calls")
                self.sift(prefix + (a,))

    def init(self, budget: int = DEFAULT_SIFT_BUDGET) -> "GroupSiftState":
        c = self.filled()
        while True:
            cp = c
            self._sweep(budget)
            c = self.filled()
            if c == cp:
                return self

    def probe(self, budget: int = DEFAULT_SIFT_BUDGET) -> int:
        """Run one more sweep and return how many new entries it defined."""
        before = self.filled()
        self._sweep(self.sift_calls + budget)
        return self.filled() - before


def sift(state: GroupSiftState, alpha) -> tuple:
    return state.sift(alpha)


def init(state: GroupSiftState, budget: int = DEFAULT_SIFT_BUDGET) -> GroupSiftState:
    return state.init(budget)


def compress_group_word(morphisms: Sequence[Morphism], word, lcm_omega: bool = False,
                        budget: int = DEFAULT_SIFT_BUDGET, prune: bool = False) -> SLP:
    """SLP with the same image as ``word`` under every morphism into a group.

    The result is the whole table store plus a start rule of ``k`` entries, so
    its size does not depend on the length of ``word``.
    """
    state = GroupSiftState(morphisms, lcm_omega=lcm_omega)
    state.init(budget)
    R = state.sift(as_word(word))
    b = state.builder
    return b.build(b.rule(R), prune=prune)


# -- isolating factorizations --------------------------------------------------


@dataclass(frozen=True)
class IsolatingFactorization:
    """``word = a_1 u_1 a_2 ... u_{l-1} a_l`` with isolation witnesses.

    ``breakpoints`` are the 1-based positions of the ``a_j``.  ``t[j][i]`` is the
    1-based breakpoint index used for the witnesses of factor ``j+1`` under
    morphism ``i``.  Words are stored as index ranges into ``word``.
    """

    word: tuple
    breakpoints: tuple
    t: tuple
    prefix_images: tuple  # [j][i] = h_i(p_j)
    suffix_images: tuple  # [j][i] = h_i(q_j)

    @property
    def length(self) -> int:
        return len(self.breakpoints)

    @property
    def letters(self) -> tuple:
        return tuple(self.word[r - 1] for r in self.breakpoints)

    def factor_range(self, j: int) -> tuple[int, int]:
        """0-based slice of ``u_{j+1}`` (j counts from 0)."""
        return self.breakpoints[j], self.breakpoints[j + 1] - 1

    def factor(self, j: int) -> tuple:
        lo, hi = self.factor_range(j)
        return self.word[lo:hi]

    @property
    def factors(self) -> tuple:
        return tuple(self.factor(j) for j in range(self.length - 1))

    def prefix(self, j: int) -> tuple:
        return self.word[:self.breakpoints[j]]

    def suffix(self, j: int) -> tuple:
        return self.word[self.breakpoints[j + 1] - 1:]

    def witness_v(self, j: int, i: int) -> tuple:
        g = self.t[j][i]
        return self.factor(j) + self.word[self.breakpoints[g - 1]:self.breakpoints[j]]

    def witness_w(self, j: int, i: int) -> tuple:
        g = self.t[j][i]
        return self.word[self.breakpoints[g - 1]:self.breakpoints[j + 1] - 1]

    def reassemble(self) -> tuple:
        out = []
        for j, a in enumerate(self.letters):
            out.append(a)
            if j < self.length - 1:
                out.extend(self.factor(j))
        return tuple(out)

    def verify(self, morphisms: Sequence[Morphism]) -> None:
        """Raise InvariantViolation unless every stated property holds."""
        if self.reassemble() != self.word:
            raise InvariantViolation("factorization does not reassemble to the word")
        N = sum(len(h.target) for h in morphisms)
        # with a single trivial monoid, l = 2 > N^2 = 1 is unavoidable
        if N >= 2 and self.length > N * N:
            raise InvariantViolation(f"factorization length {self.length} exceeds N^2 = {N * N}")
        for j in range(self.length - 1):
            u = set(self.factor(j))
            p, q = self.prefix(j), self.suffix(j)
            for i, h in enumerate(morphisms):
                v, w = self.witness_v(j, i), self.witness_w(j, i)
                if set(v) != set(w) or not u <= set(v):
                    raise InvariantViolation(f"content condition fails for factor {j + 1}, morphism {i + 1}")
                if h.eval_word(p + v) != h.eval_word(p):
                    raise InvariantViolation(f"left absorption fails for factor {j + 1}, morphism {i + 1}")
                if h.eval_word(w + q) != h.eval_word(q):
                    raise InvariantViolation(f"right absorption fails for factor {j + 1}, morphism {i + 1}")


def _prefix_suffix(h: Morphism, enc: np.ndarray):
    M = h.target
    pre = kernels.prefix_images(M.table, h.image_array, enc, M.identity)
    suf = kernels.suffix_images(M.table, h.image_array, enc, M.identity)
    return pre, suf


def isolating_factorization(morphisms: Sequence[Morphism], word) -> IsolatingFactorization:
    w = as_word(word)
    m = len(w)
    if m == 0:
        raise CompressError("the empty word has no factorization")
    images = [_prefix_suffix(h, h.encode(w)) for h in morphisms]
    # first position s (1..m) at which each tagged pair (i, prefix image, suffix image) occurs
    first: dict = {}
    for i, (pre, suf) in enumerate(images):
        keys = pre[1:].astype(np.int64) * (1 << 20) + suf[1:].astype(np.int64)
        _, idx = np.unique(keys, return_index=True)
        for s0 in idx.tolist():
            first[(i, int(pre[s0 + 1]), int(suf[s0 + 1]))] = s0 + 1
    bps = sorted(set(first.values()) | {1, m})
    where = {r: g for g, r in enumerate(bps, start=1)}
    t, P, Q = [], [], []
    for j in range(len(bps) - 1):
        s = bps[j + 1] - 1  # p_j u_j has length s
        row = []
        for i, (pre, suf) in enumerate(images):
            row.append(where[first[(i, int(pre[s]), int(suf[s]))]])
        t.append(tuple(row))
        P.append(tuple(int(pre[bps[j]]) for pre, _ in images))
        Q.append(tuple(int(suf[s]) for _, suf in images))
    return IsolatingFactorization(w, tuple(bps), tuple(t), tuple(P), tuple(Q))


def is_isolated(p, u, q, morphisms: Sequence[Morphism], alphabet_cap: int = ALPHABET_CAP) -> bool:
    """Whether every morphism admits absorbing words ``v``, ``w`` of one common content covering ``u``."""
    p, u, q = as_word(p), as_word(u), as_word(q)
    for h in morphisms:
        A = h.alphabet
        if len(A) > alphabet_cap:
            raise CompressError(f"isolation check limited to {alphabet_cap} letters")
        M = h.target
        need = 0
        for a in set(u):
            need |= 1 << h.letter_index[a]
        P, Q = h.eval_word(p), h.eval_word(q)
        # reachable (image, content) pairs from (1, {})
        seen = {(M.identity, 0)}
        stack = [(M.identity, 0)]
        while stack:
            x, c = stack.pop()
            for ai, img in enumerate(h.images):
                nxt = (M.mul(x, img), c | (1 << ai))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        left = {c for x, c in seen if M.mul(P, x) == P and c & need == need}
        right = {c for x, c in seen if M.mul(x, Q) == Q and c & need == need}
        if not left & right:
            return False
    return True


def _context(h: Morphism, B: Sequence, P: int, Q: int):
    """Submonoid generated by ``h(B)``, its embedding, and the context classes."""
    M = h.target
    T, emb = generated_submonoid(M, {h.image(b) for b in B})
    e = np.asarray(emb, dtype=np.int64)
    t = M.table
    PX = t[P, e]  # P x, indexed by x
    # sig[m, x, y] = P x m y Q
    sig = np.empty((len(e), len(e), len(e)), dtype=np.int32)
    for mi, m in enumerate(e):
        PXm = t[PX, m]
        sig[mi] = t[t[PXm[:, None], e[None, :]], Q]
    flat = sig.reshape(len(e), -1)
    _, cls = np.unique(flat, axis=0, return_inverse=True)
    return T, emb, Congruence(T, tuple(int(c) for c in np.asarray(cls).ravel()))


def context_congruence(h: Morphism, B: Sequence, P: int, Q: int) -> Congruence:
    """``m ~ n`` on ``h(B*)`` iff ``P x m y Q = P x n y Q`` for all ``x, y`` in ``h(B*)``."""
    return _context(h, B, int(P), int(Q))[2]


def quotient_group(h: Morphism, B: Sequence, P: int, Q: int) -> tuple[Monoid, Morphism]:
    """The context quotient of ``h(B*)`` and the induced morphism from ``B*``.

    Raises IsolationViolated if the quotient is not a group.
    """
    B = tuple(B)
    T, emb, cong = _context(h, B, int(P), int(Q))
    Qm, proj = quotient_monoid(T, cong)
    if not is_group(Qm):
        raise IsolationViolated("context quotient is not a group; the occurrence is not isolated")
    where = {x: i for i, x in enumerate(emb)}
    images = tuple(proj[where[h.image(b)]] for b in B)
    return Qm, Morphism(B, Qm, images)


# -- the general case ------------------------------------------------------------


@dataclass
class CompressionReport:
    original_length: int
    slp_size: int
    factorization_length: int
    images: tuple


def compress_witness(I: Instance, word, lcm_omega: bool = False, budget: int = DEFAULT_SIFT_BUDGET,
                     check: bool = True) -> SLP:
    """SLP with the same image as ``word`` under every morphism of ``I`` (all targets in DO)."""
    for idx, r in enumerate(I.recognizers):
        if not in_DO(r.monoid):
            raise NotInDO(f"monoid of recognizer {idx + 1} is not in DO")
    w = as_word(word)
    if not w:
        return epsilon_slp(I.alphabet)
    if len(w) <= 2:
        return literal(w, I.alphabet)
    hs = I.morphisms
    fac = isolating_factorization(hs, w)
    if check:
        fac.verify(hs)
    b = SLPBuilder(I.alphabet)
    top: list = []
    for j, a in enumerate(fac.letters):
        top.append(a)
        if j == fac.length - 1:
            break
        u = fac.factor(j)
        if not u:
            continue
        B = tuple(x for x in I.alphabet if x in set(u))
        psis = []
        for i, h in enumerate(hs):
            hB = h.restrict(B)
            _, psi = quotient_group(hB, B, fac.prefix_images[j][i], fac.suffix_images[j][i])
            psis.append(psi)
        state = GroupSiftState(psis, builder=b, lcm_omega=lcm_omega)
        state.init(budget)
        top.extend(state.sift(u))
    S = b.build(b.rule(top))
    if check:
        for i, h in enumerate(hs):
            if S.eval_morphism(h) != h.eval_word(w):
                raise InvariantViolation(f"compressed witness changes the image under morphism {i + 1}")
    return S
