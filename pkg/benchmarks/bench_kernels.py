"""Compiled kernels versus the pure-Python fallback on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--length 200000] [--states 50000]

Prints the best-of-N time per kernel and backend, the speedup, and checks that
both backends return the same result.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from monisect import _pykernels
from monisect.generate import random_tiling_system
from monisect.monoid import Morphism, b21, direct_product, symmetric
from monisect.reductions import corridor_tiling_to_instance
from monisect.solver import right_action

try:
    from monisect import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(x, y):
    if isinstance(x, tuple):
        return len(x) == len(y) and all(same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return np.array_equal(np.asarray(x), np.asarray(y))
    return x == y


def workloads(length, states, seed):
    rng = random.Random(seed)
    M = direct_product(symmetric(3), b21())
    h = Morphism(("a", "b", "c"), M, tuple(rng.randrange(len(M)) for _ in range(3)))
    table = np.ascontiguousarray(M.table)
    images = np.asarray(h.images, dtype=np.int32)
    word = np.asarray([rng.randrange(3) for _ in range(length)], dtype=np.int32)
    yield "fold", lambda k: k.fold(table, images, word, M.identity)
    yield "prefix_images", lambda k: k.prefix_images(table, images, word, M.identity)
    yield "suffix_images", lambda k: k.suffix_images(table, images, word, M.identity)

    # the first `states` vectors of an unpruned corridor search (ends over budget)
    I = corridor_tiling_to_instance(random_tiling_system(seed, n=2, labels=2, tiles=2))
    steps = [right_action(r.morphism) for r in I.recognizers]
    start = np.asarray([r.monoid.identity for r in I.recognizers], dtype=np.int32)
    accept = [np.zeros(s.shape[0], dtype=bool) for s in steps]
    yield "coordinate_bfs", lambda k: k.coordinate_bfs(steps, start, accept, None, states, False)[:2]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--length", type=int, default=200_000)
    p.add_argument("--states", type=int, default=50_000, help="search states for coordinate_bfs")
    p.add_argument("--seed", type=int, default=3)
    a = p.parse_args(argv)
    if _ckernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    print(f"{'kernel':<16}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}  agree")
    for name, call in workloads(a.length, a.states, a.seed):
        tc, rc = best_of(lambda: call(_ckernels), a.repeat)
        tp, rp = best_of(lambda: call(_pykernels), a.repeat)
        print(f"{name:<16}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x  {'yes' if same(rc, rp) else 'NO'}")


if __name__ == "__main__":
    main()
