"""Pure-Python/numpy versions of the compiled kernels in ``_ckernels``.

Same signatures, same outputs. Used when the extension is not built or when
``ISOPOINT_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import numpy as np

_DENSE_LIMIT = 1 << 27


def _mul_codes(xs: np.ndarray, g: int, n: int) -> np.ndarray:
    n2, n3 = n * n, n * n * n
    a, b, c, d = xs // n3, (xs // n2) % n, (xs // n) % n, xs % n
    e, f, gg, h = g // n3, (g // n2) % n, (g // n) % n, g % n
    return ((((a * e + b * gg) % n) * n + (a * f + b * h) % n) * n
            + (c * e + d * gg) % n) * n + (c * f + d * h) % n


def closure_codes(gens: np.ndarray, n: int, cap: int):
    ident = n ** 3 + 1
    gens = [int(g) for g in gens]
    if n ** 4 <= _DENSE_LIMIT:
        seen = np.zeros(n ** 4, dtype=bool)
        seen[ident] = True
        frontier = np.array([ident], dtype=np.int64)
        size = 1
        while frontier.size:
            prods = np.unique(np.concatenate([_mul_codes(frontier, g, n) for g in gens])) \
                if gens else np.empty(0, dtype=np.int64)
            new = prods[~seen[prods]]
            size += new.size
            if size > cap:
                return None
            seen[new] = True
            frontier = new
        return np.flatnonzero(seen).astype(np.int64)
    known = np.array([ident], dtype=np.int64)
    frontier = known
    while frontier.size:
        prods = np.unique(np.concatenate([_mul_codes(frontier, g, n) for g in gens])) \
            if gens else np.empty(0, dtype=np.int64)
        new = prods[~np.isin(prods, known, assume_unique=True)]
        if known.size + new.size > cap:
            return None
        known = np.union1d(known, new)
        frontier = new
    return known


def orbit_labels(gens: np.ndarray, n: int) -> np.ndarray:
    total = n * n
    idx = np.arange(total, dtype=np.int64)
    x, y = idx // n, idx % n
    perms = [((g[0] * x + g[1] * y) % n) * n + (g[2] * x + g[3] * y) % n
             for g in np.asarray(gens, dtype=np.int64).reshape(-1, 4)]
    parent = list(range(total))

    def find(i: int) -> int:
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    for perm in perms:
        for i, j in enumerate(perm.tolist()):
            ri, rj = find(i), find(j)
            if ri != rj:
                if ri < rj:
                    parent[rj] = ri
                else:
                    parent[ri] = rj
    return np.array([find(i) for i in range(total)], dtype=np.int64)


def closure_in_table(table: np.ndarray, start: np.ndarray, gens: np.ndarray) -> np.ndarray:
    mask = np.array(start, dtype=np.uint8, copy=True)
    queue = np.flatnonzero(mask).tolist()
    cols = [table[:, g].tolist() for g in np.asarray(gens).tolist()]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for col in cols:
            y = col[x]
            if not mask[y]:
                mask[y] = 1
                queue.append(y)
    return mask
