# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: group closure, orbit labelling, table closure.

Matrices are packed as ``((a*N + b)*N + c)*N + d``; vectors as ``x*N + y``.
Every function here has a drop-in twin in ``_pykernels``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport calloc, malloc, realloc, free
from libc.stdint cimport int64_t, uint64_t, uint8_t, int32_t

cnp.import_array()

cdef enum:
    EMPTY = -1
    DENSE_LIMIT = 1 << 28


cdef inline int64_t _mul(int64_t x, int64_t y, int64_t n) noexcept nogil:
    cdef int64_t n2 = n * n
    cdef int64_t n3 = n2 * n
    cdef int64_t a = x // n3, b = (x // n2) % n, c = (x // n) % n, d = x % n
    cdef int64_t e = y // n3, f = (y // n2) % n, g = (y // n) % n, h = y % n
    return ((((a * e + b * g) % n) * n + (a * f + b * h) % n) * n
            + (c * e + d * g) % n) * n + (c * f + d * h) % n


cdef inline uint64_t _mix(uint64_t x) noexcept nogil:
    x ^= x >> 33
    x *= 0xff51afd7ed558ccdULL
    x ^= x >> 33
    x *= 0xc4ceb9fe1a85ec53ULL
    x ^= x >> 33
    return x


cdef struct HashSet:
    int64_t* slots
    Py_ssize_t mask


cdef int _hs_init(HashSet* hs, Py_ssize_t cap_pow2) noexcept nogil:
    cdef Py_ssize_t i
    hs.slots = <int64_t*> malloc(cap_pow2 * sizeof(int64_t))
    if hs.slots == NULL:
        return -1
    for i in range(cap_pow2):
        hs.slots[i] = EMPTY
    hs.mask = cap_pow2 - 1
    return 0


cdef int _hs_insert(HashSet* hs, int64_t key) noexcept nogil:
    # 1 if inserted, 0 if present
    cdef Py_ssize_t i = <Py_ssize_t> (_mix(<uint64_t> key) & <uint64_t> hs.mask)
    while hs.slots[i] != EMPTY:
        if hs.slots[i] == key:
            return 0
        i = (i + 1) & hs.mask
    hs.slots[i] = key
    return 1


cdef int _hs_grow(HashSet* hs) noexcept nogil:
    cdef Py_ssize_t old_cap = hs.mask + 1
    cdef int64_t* old = hs.slots
    cdef Py_ssize_t i
    if _hs_init(hs, old_cap * 2) != 0:
        hs.slots = old
        hs.mask = old_cap - 1
        return -1
    for i in range(old_cap):
        if old[i] != EMPTY:
            _hs_insert(hs, old[i])
    free(old)
    return 0


def closure_codes(cnp.int64_t[::1] gens, int64_t n, Py_ssize_t cap):
    """Sorted codes of the group generated by ``gens``; ``None`` past ``cap``."""
    cdef int64_t space = n * n * n * n
    cdef int64_t ident = (n * n * n) + 1  # (1, 0, 0, 1)
    cdef Py_ssize_t k = gens.shape[0]
    cdef Py_ssize_t size = 1, head = 0, buf_cap = 1024, j
    cdef int64_t x, y
    cdef int64_t* buf = <int64_t*> malloc(buf_cap * sizeof(int64_t))
    cdef int64_t* tmp
    cdef uint8_t* seen = NULL
    cdef HashSet hs
    cdef bint dense = space <= DENSE_LIMIT
    cdef bint overflow = False
    cdef bint oom = False
    hs.slots = NULL
    if buf == NULL:
        raise MemoryError()
    if dense:
        seen = <uint8_t*> calloc(space // 8 + 1, 1)
        if seen == NULL:
            free(buf)
            raise MemoryError()
        seen[ident >> 3] |= (1 << (ident & 7))
    else:
        if _hs_init(&hs, 1 << 12) != 0:
            free(buf)
            raise MemoryError()
        _hs_insert(&hs, ident)
    buf[0] = ident
    with nogil:
        while head < size:
            x = buf[head]
            head += 1
            for j in range(k):
                y = _mul(x, gens[j], n)
                if dense:
                    if seen[y >> 3] & (1 << (y & 7)):
                        continue
                    seen[y >> 3] |= (1 << (y & 7))
                else:
                    if not _hs_insert(&hs, y):
                        continue
                    if 2 * (size + 1) > hs.mask + 1:
                        if _hs_grow(&hs) != 0:
                            oom = True
                            break
                if size >= cap:
                    overflow = True
                    break
                if size == buf_cap:
                    tmp = <int64_t*> realloc(buf, 2 * buf_cap * sizeof(int64_t))
                    if tmp == NULL:
                        oom = True
                        break
                    buf = tmp
                    buf_cap *= 2
                buf[size] = y
                size += 1
            if overflow or oom:
                break
    if seen != NULL:
        free(seen)
    if hs.slots != NULL:
        free(hs.slots)
    if oom:
        free(buf)
        raise MemoryError()
    if overflow:
        free(buf)
        return None
    out = np.empty(size, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    for j in range(size):
        ov[j] = buf[j]
    free(buf)
    out.sort()
    return out


def orbit_labels(cnp.int64_t[:, ::1] gens, int64_t n):
    """Label every vector index ``x*n + y`` with the least index in its orbit."""
    cdef Py_ssize_t total = n * n, k = gens.shape[0]
    labels = np.full(total, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] lab = labels
    cdef int64_t* queue = <int64_t*> malloc(total * sizeof(int64_t))
    cdef Py_ssize_t start, head, tail, j
    cdef int64_t v, x, y, w
    if queue == NULL:
        raise MemoryError()
    with nogil:
        for start in range(total):
            if lab[start] >= 0:
                continue
            lab[start] = start
            queue[0] = start
            head = 0
            tail = 1
            while head < tail:
                v = queue[head]
                head += 1
                x = v // n
                y = v % n
                for j in range(k):
                    w = ((gens[j, 0] * x + gens[j, 1] * y) % n) * n \
                        + (gens[j, 2] * x + gens[j, 3] * y) % n
                    if lab[w] < 0:
                        lab[w] = start
                        queue[tail] = w
                        tail += 1
    free(queue)
    return labels


def closure_in_table(cnp.int32_t[:, ::1] table, cnp.uint8_t[::1] start, cnp.int32_t[::1] gens):
    """Right-multiplication closure of the ``start`` mask inside a Cayley table."""
    cdef Py_ssize_t n = table.shape[0], k = gens.shape[0]
    mask = np.array(start, dtype=np.uint8, copy=True)
    cdef cnp.uint8_t[::1] m = mask
    cdef int32_t* queue = <int32_t*> malloc(n * sizeof(int32_t))
    cdef Py_ssize_t head = 0, tail = 0, i, j
    cdef int32_t x, y
    if queue == NULL:
        raise MemoryError()
    with nogil:
        for i in range(n):
            if m[i]:
                queue[tail] = <int32_t> i
                tail += 1
        while head < tail:
            x = queue[head]
            head += 1
            for j in range(k):
                y = table[x, gens[j]]
                if not m[y]:
                    m[y] = 1
                    queue[tail] = y
                    tail += 1
    free(queue)
    return mask
