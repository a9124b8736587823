"""Regenerate src/isopoint/data/images.json.

Borel images use Sutherland's label convention (Zywina's tables):
lB.a.b = <[[1,1],[0,1]], diag(a, 1/a), diag(b, r/b)>, r the least primitive
root mod l. The 13S4 group is the full preimage in GL2(F13) of an S4 inside
PGL2(F13); the generators below were found by a search like find_exceptional_13.py and give one
representative of its conjugacy class.
"""

import json
import sys
from pathlib import Path

from isopoint.atlas import primitive_root

OUT = Path(__file__).resolve().parents[1] / "src" / "isopoint" / "data" / "images.json"
ZYWINA = "Zywina, On the possible images of the mod l representations associated to elliptic curves over Q, arXiv:1508.07660"
BANWAIT_CREMONA = "Banwait-Cremona, Tetrahedral elliptic curves and the local-global principle for isogenies, Algebra Number Theory 8 (2014)"

S4_13 = [[2, 0, 0, 2], [0, 9, 8, 5], [0, 4, 1, 10]]


def borel_gens(ell, a, b):
    r = primitive_root(ell)
    return [[1, 1, 0, 1], [a, 0, 0, pow(a, -1, ell)], [b, 0, 0, r * pow(b, -1, ell) % ell]]


def records():
    out = []
    for ell, a, b, j, fact in [
        (17, 4, 2, "-297756989/2", "-17^2*101^3/2"),
        (17, 4, 6, "-882216989/131072", "-17*373^3/2^17"),
        (37, 8, 1, str(-7 * 11 ** 3), "-7*11^3"),
        (37, 8, 2, str(-7 * 137 ** 3 * 2083 ** 3), "-7*137^3*2083^3"),
    ]:
        out.append({"label": f"{ell}B.{a}.{b}", "class": "Borel", "ell": ell, "level": ell,
                    "j": j, "j_factored": fact, "generators": borel_gens(ell, a, b), "source": ZYWINA})
    for j, fact in [
        (str(2 ** 4 * 5 * 13 ** 4 * 17 ** 3) + "/" + str(3 ** 13), "2^4*5*13^4*17^3/3^13"),
        (str(-(2 ** 12) * 5 ** 3 * 11 * 13 ** 4) + "/" + str(3 ** 13), "-2^12*5^3*11*13^4/3^13"),
        (str(2 ** 18 * 3 ** 3 * 13 ** 4 * 127 ** 3 * 139 ** 3 * 157 ** 3 * 283 ** 3 * 929)
         + "/" + str(5 ** 13 * 61 ** 13),
         "2^18*3^3*13^4*127^3*139^3*157^3*283^3*929/(5^13*61^13)"),
    ]:
        out.append({"label": "13S4", "class": "Exceptional", "ell": 13, "level": 13,
                    "j": j, "j_factored": fact, "generators": S4_13,
                    "source": f"{BANWAIT_CREMONA}; {ZYWINA}"})
    return out


def dump(recs) -> str:
    # one record per line keeps load errors line-precise
    return "[\n" + ",\n".join(json.dumps(r) for r in recs) + "\n]\n"


if __name__ == "__main__":
    text = dump(records())
    if "--check" in sys.argv:
        sys.exit(0 if OUT.read_text() == text else 1)
    OUT.write_text(text)
    print(f"wrote {OUT}")
