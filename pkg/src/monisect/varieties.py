"""Membership tests for the varieties G, A, DS and DO.

Each test returns a :class:`Verdict`, which is truthy iff the monoid belongs
to the variety and otherwise carries the element tuple violating the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .monoid import DEFAULT_DIVIDES_CAP, Monoid, b21, direct_product, divides


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


_YES = Verdict(True)


def is_group(M: Monoid) -> Verdict:
    for e in M.idempotents():
        if e != M.identity:
            return Verdict(False, (e,))
    return _YES


def is_aperiodic(M: Monoid) -> Verdict:
    for m in range(len(M)):
        w = M.omega(m)
        if M.mul(w, m) != w:
            return Verdict(False, (m,))
    return _YES


def _j_equivalent_idempotent_pairs(M: Monoid):
    E = M.idempotents()
    for e in E:
        for f in E:
            if M.j_equivalent(e, f):
                yield e, f


def _idempotents_first(M: Monoid) -> list[int]:
    # so that witnesses are idempotent pairs whenever one exists
    mask = M.idempotent_mask
    return [m for m in range(len(M)) if mask[m]] + [m for m in range(len(M)) if not mask[m]]


def in_DS(M: Monoid) -> Verdict:
    """J-equivalent idempotents e, f satisfy ``(efe)^omega = e``."""
    for e, f in _j_equivalent_idempotent_pairs(M):
        if M.omega(M.product((e, f, e))) != e:
            return Verdict(False, (e, f))
    return _YES


def in_DS_char2(M: Monoid) -> Verdict:
    """For idempotent e and any x above e in the J-order, ``(exe)^omega = e``."""
    for e in M.idempotents():
        for x in _idempotents_first(M):
            if M.j_below(e, x) and M.omega(M.product((e, x, e))) != e:
                return Verdict(False, (e, x))
    return _YES


def in_DS_char3(M: Monoid) -> Verdict:
    """For every idempotent e, the elements above e in the J-order are closed under product."""
    for e in M.idempotents():
        above = [x for x in _idempotents_first(M) if M.j_below(e, x)]
        for x in above:
            for y in above:
                if not M.j_below(e, M.mul(x, y)):
                    return Verdict(False, (e, x, y))
    return _YES


def in_DS_char4(M: Monoid, cap: int = DEFAULT_DIVIDES_CAP) -> Verdict:
    """B21 does not divide M x M.  Exponential; raises CapExceeded past ``cap``."""
    if divides(b21(), direct_product(M, M), cap=cap):
        return Verdict(False, None)
    return _YES


def in_DO(M: Monoid) -> Verdict:
    """J-equivalent idempotents e, f satisfy ``efe = e``."""
    for e, f in _j_equivalent_idempotent_pairs(M):
        if M.product((e, f, e)) != e:
            return Verdict(False, (e, f))
    return _YES


@dataclass
class VarietyReport:
    is_group: bool
    is_aperiodic: bool
    in_DS: bool
    in_DO: bool
    in_DS_char4: bool | None = None
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> dict:
        out = {
            "is_group": self.is_group,
            "is_aperiodic": self.is_aperiodic,
            "in_DS": self.in_DS,
            "in_DO": self.in_DO,
        }
        if self.in_DS_char4 is not None:
            out["in_DS_char4"] = self.in_DS_char4
        return out


def classify(M: Monoid, char4: bool = False, divides_cap: int = DEFAULT_DIVIDES_CAP) -> VarietyReport:
    tests = {"is_group": is_group(M), "is_aperiodic": is_aperiodic(M), "in_DS": in_DS(M), "in_DO": in_DO(M)}
    if char4:
        tests["in_DS_char4"] = in_DS_char4(M, cap=divides_cap)
    witnesses = {k: v.witness for k, v in tests.items() if not v and v.witness is not None}
    return VarietyReport(
        is_group=bool(tests["is_group"]),
        is_aperiodic=bool(tests["is_aperiodic"]),
        in_DS=bool(tests["in_DS"]),
        in_DO=bool(tests["in_DO"]),
        in_DS_char4=bool(tests["in_DS_char4"]) if char4 else None,
        witnesses=witnesses,
    )
