"""Independent slow references. None of these import the code they check beyond Mat2-free tuples."""

from itertools import product
from math import gcd


def mul(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def all_invertible(n):
    return [m for m in product(range(n), repeat=4) if gcd((m[0] * m[3] - m[1] * m[2]) % n, n) == 1]


def naive_closure(gens, n):
    ident = (1, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g, n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def exact_order(v, n):
    return n // gcd(gcd(v[0], v[1]), n)


def act(m, v, n):
    a, b, c, d = m
    return ((a * v[0] + b * v[1]) % n, (c * v[0] + d * v[1]) % n)


def naive_point_degrees(elements, n):
    """Sorted list of degrees, one per closed point: sizes of G-orbits on +-classes."""
    def cls(v):
        w = ((-v[0]) % n, (-v[1]) % n)
        return min(v, w)

    todo = {cls(v) for v in product(range(n), repeat=2) if exact_order(v, n) == n}
    out = []
    while todo:
        v = todo.pop()
        orb = {cls(act(g, v, n)) for g in elements}
        todo -= orb
        out.append(len(orb))
    return sorted(out)


def coset_genus_x1(n):
    """Genus of X1(n) from the permutation action of S and T on +-bottom rows."""
    def cls(v):
        w = ((-v[0]) % n, (-v[1]) % n)
        return min(v, w)

    pts = sorted({cls(v) for v in product(range(n), repeat=2) if exact_order(v, n) == n})
    idx = {p: i for i, p in enumerate(pts)}
    # row vector (c, d) times S = [[0,-1],[1,0]] and T = [[1,1],[0,1]]
    s = [idx[cls((d % n, (-c) % n))] for c, d in pts]
    t = [idx[cls((c, (c + d) % n))] for c, d in pts]
    st = [t[s[i]] for i in range(len(pts))]
    mu = len(pts)
    e2 = sum(1 for i in range(mu) if s[i] == i)
    e3 = sum(1 for i in range(mu) if st[i] == i)
    seen, cusps = set(), 0
    for i in range(mu):
        if i in seen:
            continue
        cusps += 1
        j = i
        while j not in seen:
            seen.add(j)
            j = t[j]
    g2 = 12 + mu - 3 * e2 - 4 * e3 - 6 * cusps
    assert g2 % 12 == 0
    return g2 // 12, mu, cusps
