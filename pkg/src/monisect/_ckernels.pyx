# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops in ``_pykernels``.

The BFS keeps states in one growable int32 buffer and indexes them with an
open-addressing hash table of row numbers.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memcmp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint32_t, uint64_t

cnp.import_array()

cdef enum:
    C_FOUND_NONE = -1
    C_OVER_BUDGET = -2
    C_NO_MEMORY = -3

FOUND_NONE = C_FOUND_NONE
OVER_BUDGET = C_OVER_BUDGET


def fold(const int32_t[:, ::1] table, const int32_t[::1] images, const int32_t[::1] word, int start):
    cdef Py_ssize_t i, n = word.shape[0]
    cdef int32_t acc = start
    for i in range(n):
        acc = table[acc, images[word[i]]]
    return int(acc)


def prefix_images(const int32_t[:, ::1] table, const int32_t[::1] images, const int32_t[::1] word, int start):
    cdef Py_ssize_t i, n = word.shape[0]
    out = np.empty(n + 1, dtype=np.int32)
    cdef int32_t[::1] o = out
    cdef int32_t acc = start
    o[0] = acc
    for i in range(n):
        acc = table[acc, images[word[i]]]
        o[i + 1] = acc
    return out


def suffix_images(const int32_t[:, ::1] table, const int32_t[::1] images, const int32_t[::1] word, int end):
    cdef Py_ssize_t i, n = word.shape[0]
    out = np.empty(n + 1, dtype=np.int32)
    cdef int32_t[::1] o = out
    cdef int32_t acc = end
    o[n] = acc
    for i in range(n - 1, -1, -1):
        acc = table[images[word[i]], acc]
        o[i] = acc
    return out


cdef inline uint64_t _hash(const int32_t* v, Py_ssize_t k) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef Py_ssize_t i
    for i in range(k):
        h ^= <uint64_t>(<uint32_t>v[i])
        h *= 1099511628211ULL
        h ^= h >> 29
    return h


cdef struct Store:
    int32_t* rows        # n * k values
    int64_t* parent
    int32_t* via
    int64_t n
    int64_t cap
    int64_t* slots       # hash table of row indices, -1 = empty
    uint64_t mask


cdef int _store_grow(Store* s, Py_ssize_t k) nogil:
    cdef int64_t newcap = s.cap * 2
    cdef int32_t* r = <int32_t*>realloc(s.rows, newcap * k * sizeof(int32_t))
    if r == NULL:
        return -1
    s.rows = r
    cdef int64_t* p = <int64_t*>realloc(s.parent, newcap * sizeof(int64_t))
    if p == NULL:
        return -1
    s.parent = p
    cdef int32_t* v = <int32_t*>realloc(s.via, newcap * sizeof(int32_t))
    if v == NULL:
        return -1
    s.via = v
    s.cap = newcap
    return 0


cdef int _rehash(Store* s, Py_ssize_t k) nogil:
    cdef uint64_t newsize = (s.mask + 1) * 2
    cdef int64_t* slots = <int64_t*>malloc(newsize * sizeof(int64_t))
    if slots == NULL:
        return -1
    cdef uint64_t i, h
    for i in range(newsize):
        slots[i] = -1
    cdef int64_t r
    for r in range(s.n):
        h = _hash(s.rows + r * k, k) & (newsize - 1)
        while slots[h] != -1:
            h = (h + 1) & (newsize - 1)
        slots[h] = r
    free(s.slots)
    s.slots = slots
    s.mask = newsize - 1
    return 0


cdef int64_t _lookup_or_insert(Store* s, const int32_t* v, Py_ssize_t k, bint* inserted) nogil:
    """Row index of ``v``; inserts it (without parent info) if absent.  -1 on OOM."""
    cdef uint64_t h = _hash(v, k) & s.mask
    cdef int64_t r
    while True:
        r = s.slots[h]
        if r == -1:
            break
        if memcmp(s.rows + r * k, v, k * sizeof(int32_t)) == 0:
            inserted[0] = False
            return r
        h = (h + 1) & s.mask
    if s.n == s.cap:
        if _store_grow(s, k) != 0:
            return -1
    memcpy(s.rows + s.n * k, v, k * sizeof(int32_t))
    s.slots[h] = s.n
    s.n += 1
    inserted[0] = True
    if <uint64_t>(s.n * 2) > s.mask:
        if _rehash(s, k) != 0:
            return -1
    return s.n - 1


def coordinate_bfs(steps, start, accept, live, int64_t budget, bint stop_on_accept):
    cdef Py_ssize_t k = len(steps)
    cdef Py_ssize_t nletters = steps[0].shape[1] if k else 0
    cdef Py_ssize_t i, a

    # flatten per-coordinate tables
    offs_np = np.zeros(k + 1, dtype=np.int64)
    for i in range(k):
        offs_np[i + 1] = offs_np[i] + steps[i].shape[0]
    flat_np = np.ascontiguousarray(
        np.concatenate([np.asarray(t, dtype=np.int32).ravel() for t in steps]) if k else np.zeros(0, np.int32),
        dtype=np.int32,
    )
    cdef const int64_t[::1] offs = offs_np
    cdef const int32_t[::1] flat = flat_np
    cdef bint has_acc = accept is not None
    cdef bint has_live = live is not None
    acc_np = np.ascontiguousarray(np.concatenate([np.asarray(x, dtype=np.uint8) for x in accept])) \
        if has_acc and k else np.zeros(1, np.uint8)
    live_np = np.ascontiguousarray(np.concatenate([np.asarray(x, dtype=np.uint8) for x in live])) \
        if has_live and k else np.zeros(1, np.uint8)
    cdef const uint8_t[::1] accf = acc_np
    cdef const uint8_t[::1] livef = live_np
    start_np = np.ascontiguousarray(start, dtype=np.int32)
    cdef const int32_t[::1] st = start_np

    cdef Store s
    s.cap = 1024
    s.n = 0
    s.rows = <int32_t*>malloc(s.cap * (k if k else 1) * sizeof(int32_t))
    s.parent = <int64_t*>malloc(s.cap * sizeof(int64_t))
    s.via = <int32_t*>malloc(s.cap * sizeof(int32_t))
    s.mask = 4095
    s.slots = <int64_t*>malloc((s.mask + 1) * sizeof(int64_t))
    cdef int32_t* buf = <int32_t*>malloc((k if k else 1) * sizeof(int32_t))
    if s.rows == NULL or s.parent == NULL or s.via == NULL or s.slots == NULL or buf == NULL:
        raise MemoryError()
    cdef uint64_t j
    for j in range(s.mask + 1):
        s.slots[j] = -1

    cdef int64_t found = C_FOUND_NONE
    cdef int64_t head = 0, cur, r
    cdef bint inserted, ok, acc_ok
    cdef const int32_t* v
    cdef int32_t val
    try:
        for i in range(k):
            buf[i] = st[i]
        ok = True
        if has_live:
            for i in range(k):
                if not livef[offs[i] + buf[i]]:
                    ok = False
                    break
        if not ok:
            return _pack(found, &s, k)
        r = _lookup_or_insert(&s, buf, k, &inserted)
        if r < 0:
            raise MemoryError()
        s.parent[0] = -1
        s.via[0] = -1
        if has_acc:
            acc_ok = True
            for i in range(k):
                if not accf[offs[i] + buf[i]]:
                    acc_ok = False
                    break
            if acc_ok:
                found = 0
                if stop_on_accept:
                    return _pack(found, &s, k)
        with nogil:
            while head < s.n:
                cur = head
                head += 1
                for a in range(nletters):
                    v = s.rows + cur * k
                    ok = True
                    for i in range(k):
                        val = flat[(offs[i] + v[i]) * nletters + a]
                        buf[i] = val
                        if has_live and not livef[offs[i] + val]:
                            ok = False
                            break
                    if not ok:
                        continue
                    if s.n >= budget:
                        # only an error if this vector is genuinely new
                        r = _probe(&s, buf, k)
                        if r < 0:
                            found = C_OVER_BUDGET
                            break
                        continue
                    r = _lookup_or_insert(&s, buf, k, &inserted)
                    if r < 0:
                        found = C_NO_MEMORY
                        break
                    if not inserted:
                        continue
                    s.parent[r] = cur
                    s.via[r] = <int32_t>a
                    if has_acc and found == C_FOUND_NONE:
                        acc_ok = True
                        for i in range(k):
                            if not accf[offs[i] + buf[i]]:
                                acc_ok = False
                                break
                        if acc_ok:
                            found = r
                            if stop_on_accept:
                                break
                if found == C_OVER_BUDGET or found == C_NO_MEMORY:
                    break
                if stop_on_accept and found >= 0:
                    break
        if found == C_NO_MEMORY:
            raise MemoryError()
        return _pack(found, &s, k)
    finally:
        free(s.rows)
        free(s.parent)
        free(s.via)
        free(s.slots)
        free(buf)


cdef int64_t _probe(Store* s, const int32_t* v, Py_ssize_t k) nogil:
    cdef uint64_t h = _hash(v, k) & s.mask
    cdef int64_t r
    while True:
        r = s.slots[h]
        if r == -1:
            return -1
        if memcmp(s.rows + r * k, v, k * sizeof(int32_t)) == 0:
            return r
        h = (h + 1) & s.mask


cdef _pack(int64_t found, Store* s, Py_ssize_t k):
    n = s.n
    states = np.empty((n, k), dtype=np.int32)
    parent = np.empty(n, dtype=np.int64)
    via = np.empty(n, dtype=np.int32)
    cdef int32_t[:, ::1] sv = states
    cdef int64_t[::1] pv = parent
    cdef int32_t[::1] vv = via
    if n and k:
        memcpy(&sv[0, 0], s.rows, n * k * sizeof(int32_t))
    if n:
        memcpy(&pv[0], s.parent, n * sizeof(int64_t))
        memcpy(&vv[0], s.via, n * sizeof(int32_t))
    return int(found), states, parent, via
