"""Pure-Python reference implementations of the hot loops.

Must stay behaviourally identical to ``_ckernels.pyx``; the test-suite runs
both against each other.
"""
from __future__ import annotations

from collections import deque

import numpy as np

FOUND_NONE = -1
OVER_BUDGET = -2


def fold(table, images, word, start):
    t = table.tolist() if hasattr(table, "tolist") else table
    img = images.tolist() if hasattr(images, "tolist") else images
    acc = int(start)
    for a in (word.tolist() if hasattr(word, "tolist") else word):
        acc = t[acc][img[a]]
    return acc


def prefix_images(table, images, word, start):
    t = table.tolist()
    img = images.tolist()
    out = [int(start)]
    acc = int(start)
    for a in word.tolist():
        acc = t[acc][img[a]]
        out.append(acc)
    return np.asarray(out, dtype=np.int32)


def suffix_images(table, images, word, end):
    """``out[s]`` is the image of ``word[s:]`` multiplied on the right by ``end``."""
    t = table.tolist()
    img = images.tolist()
    w = word.tolist()
    out = [0] * (len(w) + 1)
    acc = int(end)
    out[len(w)] = acc
    for s in range(len(w) - 1, -1, -1):
        acc = t[img[w[s]]][acc]
        out[s] = acc
    return np.asarray(out, dtype=np.int32)


def coordinate_bfs(steps, start, accept, live, budget, stop_on_accept):
    """Breadth-first search over integer vectors, one coordinate per step table.

    ``steps[i][s, a]`` is the successor of value ``s`` in coordinate ``i``
    under letter ``a``.  Letters are tried in index order, so the first accepting
    vector discovered is reached by the length-lexicographically least word.
    Vectors with a coordinate outside ``live`` are never stored.

    Returns ``(found, states, parent, via)`` where ``found`` is the index of the
    accepting vector, ``FOUND_NONE`` or ``OVER_BUDGET``.
    """
    k = len(steps)
    tabs = [s.tolist() for s in steps]
    nletters = steps[0].shape[1] if k else 0
    acc = [a.tolist() for a in accept] if accept is not None else None
    lv = [a.tolist() for a in live] if live is not None else None
    start_t = tuple(int(x) for x in start)

    def accepting(v):
        return acc is not None and all(acc[i][v[i]] for i in range(k))

    states = [start_t]
    parent = [-1]
    via = [-1]
    index = {start_t: 0}
    found = FOUND_NONE
    if lv is not None and not all(lv[i][start_t[i]] for i in range(k)):
        return _pack(found, [], [], [], k)
    if accepting(start_t):
        found = 0
        if stop_on_accept:
            return _pack(found, states, parent, via, k)
    queue = deque([0])
    rng = range(k)
    while queue:
        cur = queue.popleft()
        v = states[cur]
        for a in range(nletters):
            nxt = tuple([tabs[i][v[i]][a] for i in rng])
            if nxt in index:
                continue
            if lv is not None and not all(lv[i][nxt[i]] for i in rng):
                continue
            if len(states) >= budget:
                return _pack(OVER_BUDGET, states, parent, via, k)
            index[nxt] = len(states)
            states.append(nxt)
            parent.append(cur)
            via.append(a)
            if found == FOUND_NONE and accepting(nxt):
                found = len(states) - 1
                if stop_on_accept:
                    return _pack(found, states, parent, via, k)
            queue.append(len(states) - 1)
    return _pack(found, states, parent, via, k)


def _pack(found, states, parent, via, k):
    arr = np.asarray(states, dtype=np.int32).reshape(len(states), k)
    return found, arr, np.asarray(parent, dtype=np.int64), np.asarray(via, dtype=np.int32)
