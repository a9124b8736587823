"""Search GL2(F13) for generators of 13S4: the full preimage of an S4 in PGL2(F13).

Random pairs (x, y) with projective orders 4 and 3 are closed together with
the scalars; the first pair generating a group of order 12 * 24 = 288 wins.
All S4 subgroups of PGL2(F13) are conjugate, so any hit represents the class.
"""

import random
import sys

from isopoint.errors import ClosureTooLarge
from isopoint.gl2_core import Mat2, closure
from isopoint.atlas import primitive_root

ELL = 13


def projective_order(m: Mat2) -> int:
    k, x = 1, m
    while not (x.b == 0 and x.c == 0 and x.a == x.d):
        x = x @ m
        k += 1
    return k


def search(seed: int = 0, tries: int = 20000):
    rng = random.Random(seed)
    scalar = Mat2(primitive_root(ELL), 0, 0, primitive_root(ELL), ELL)
    pool = []
    while len(pool) < 400:
        m = Mat2(*(rng.randrange(ELL) for _ in range(4)), ELL)
        if m.is_invertible:
            pool.append(m)
    fours = [m for m in pool if projective_order(m) == 4]
    threes = [m for m in pool if projective_order(m) == 3]
    for _ in range(tries):
        x, y = rng.choice(fours), rng.choice(threes)
        try:
            g = closure([scalar, x, y], ELL, cap=300)
        except ClosureTooLarge:
            continue
        if g.order == 288:
            return g
    return None


if __name__ == "__main__":
    g = search(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
    if g is None:
        sys.exit("no hit")
    print(g.order, [m.rows() for m in g.generators])
