"""Intersection non-emptiness for regular languages given by monoid morphisms.

Decision by product search, compressed witnesses (straight-line programs) for
monoids in DO, variety tests, and the reductions from tiling problems.
"""
from .kernels import BACKEND
from .monoid import Monoid, Morphism, b21, cyclic, direct_product, symmetric, trivial, u1
from .slp import SLP, SLPBuilder, Var
from .solver import Instance, Recognizer, member_slp, member_word, nonempty_bfs
from .varieties import classify

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Monoid", "Morphism", "b21", "cyclic", "direct_product", "symmetric", "trivial", "u1",
    "SLP", "SLPBuilder", "Var", "Instance", "Recognizer", "member_slp", "member_word", "nonempty_bfs",
    "classify",
]
