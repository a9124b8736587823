"""Named subgroups of GL2(Z/l^n Z) and structured subgroup enumeration.

Conventions: epsilon is the least quadratic non-residue mod l, the nonsplit
Cartan is ``{[[a, eps*b], [b, a]]}``, its normalizer adds ``w = [[1, 0], [0, -1]]``
and the split-Cartan normalizer adds ``[[0, 1], [1, 0]]``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationTooLarge, OutOfScopeError
from .gl2_core import (Mat2, Modulus, Subgroup, closure, divisors, is_prime, pack,
                       unpack)

KINDS = ("Borel", "SplitCartan", "SplitCartanNormalizer", "NonsplitCartan",
         "NonsplitCartanNormalizer", "SemiCartan", "SemiCartanPower", "FullGL2")

CNS_PLUS_BOUND = 41
BOREL_BOUND = 17


def nonresidue(ell: int) -> int:
    """Least positive quadratic non-residue mod an odd prime."""
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"need an odd prime, got {ell}")
    squares = {x * x % ell for x in range(1, ell)}
    return next(a for a in range(2, ell) if a not in squares)


def nonresidues(ell: int) -> list[int]:
    squares = {x * x % ell for x in range(1, ell)}
    return [a for a in range(2, ell) if a not in squares]


def primitive_root(n: int) -> int:
    """Least generator of (Z/nZ)* for n = l^k, l odd."""
    units = [a for a in range(1, n) if np.gcd(a, n) == 1]
    phi = len(units)
    primes = [p for p in range(2, phi + 1) if phi % p == 0 and is_prime(p)]
    for g in range(2, n):
        if np.gcd(g, n) == 1 and all(pow(g, phi // p, n) != 1 for p in primes):
            return g
    raise ValueError(f"(Z/{n})* is not cyclic")


@dataclass(frozen=True)
class NamedSubgroupKind:
    kind: str
    ell: int
    epsilon: int | None = None
    f: int | None = None
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not is_prime(self.ell) or self.ell == 2:
            raise ValueError(f"ell must be an odd prime, got {self.ell}")
        if self.n < 1:
            raise ValueError("exponent must be >= 1")
        if self.kind.startswith("Nonsplit"):
            eps = nonresidue(self.ell) if self.epsilon is None else self.epsilon % self.ell
            if eps not in nonresidues(self.ell):
                raise ValueError(f"{self.epsilon} is a square mod {self.ell}")
            object.__setattr__(self, "epsilon", eps)
        if self.kind == "SemiCartanPower":
            if self.f is None or self.f < 1 or (self.ell - 1) % self.f:
                raise ValueError(f"f={self.f} must divide {self.ell - 1}")

    @property
    def level(self) -> int:
        return self.ell ** self.n

    @property
    def label(self) -> str:
        short = {"Borel": "borel", "SplitCartan": "cs", "SplitCartanNormalizer": "cs+",
                 "NonsplitCartan": "cns", "NonsplitCartanNormalizer": "cns+",
                 "SemiCartan": "semicartan", "SemiCartanPower": "semicartan",
                 "FullGL2": "gl2"}[self.kind]
        if self.kind == "SemiCartanPower":
            short += f"^{self.f}"
        level = str(self.ell) if self.n == 1 else f"{self.ell}^{self.n}"
        return f"{short}@{level}"


def _units(n: int) -> np.ndarray:
    r = np.arange(n, dtype=np.int64)
    return r[np.gcd(r, n) == 1]


def _cns_generator(ell: int, eps: int) -> Mat2:
    q = ell * ell - 1
    for a, b in itertools.product(range(ell), range(1, ell)):
        m = Mat2(a, eps * b, b, a, ell)
        if m.is_invertible and m.order() == q:
            return m
    raise AssertionError("nonsplit Cartan has no generator")


def build_named(kind: NamedSubgroupKind) -> Subgroup:
    """Element set straight from the defining formula, with explicit generators."""
    ell, big = kind.ell, kind.level
    r = primitive_root(big)
    units = _units(big)
    full = np.arange(big, dtype=np.int64)
    w = Mat2(1, 0, 0, -1, big)
    swap = Mat2(0, 1, 1, 0, big)
    k = kind.kind

    if k == "FullGL2":
        a, b, c, d = unpack(np.arange(big ** 4, dtype=np.int64), big)
        keep = np.gcd((a * d - b * c) % big, big) == 1
        elems = np.flatnonzero(keep).astype(np.int64)
        gens = [Mat2(1, 1, 0, 1, big), Mat2(1, 0, 1, 1, big), Mat2(r, 0, 0, 1, big)]
    elif k == "Borel":
        a, b, d = (x.ravel() for x in np.meshgrid(units, full, units, indexing="ij"))
        elems = pack(a, b, 0, d, big)
        gens = [Mat2(1, 1, 0, 1, big), Mat2(r, 0, 0, 1, big), Mat2(1, 0, 0, r, big)]
    elif k in ("SplitCartan", "SplitCartanNormalizer"):
        a, d = (x.ravel() for x in np.meshgrid(units, units, indexing="ij"))
        elems = pack(a, 0, 0, d, big)
        gens = [Mat2(r, 0, 0, 1, big), Mat2(1, 0, 0, r, big)]
        if k == "SplitCartanNormalizer":
            elems = np.concatenate([elems, pack(0, a, d, 0, big)])
            gens.append(swap)
    elif k in ("NonsplitCartan", "NonsplitCartanNormalizer"):
        eps = kind.epsilon
        a, b = (x.ravel() for x in np.meshgrid(full, full, indexing="ij"))
        unit = (a % ell != 0) | (b % ell != 0)
        a, b = a[unit], b[unit]
        elems = pack(a, eps * b, b, a, big)
        g0 = _cns_generator(ell, eps)
        gens = [Mat2(g0.a, g0.b, g0.c, g0.d, big)]
        if kind.n > 1:
            gens += [Mat2(1 + ell, 0, 0, 1 + ell, big), Mat2(1, eps * ell, ell, 1, big)]
        if k == "NonsplitCartanNormalizer":
            elems = np.concatenate([elems, pack(a, eps * b, -b, -a, big)])
            gens.append(w)
    elif k in ("SemiCartan", "SemiCartanPower"):
        f = kind.f or 1
        powers = np.unique(np.array([pow(int(x), f, big) for x in units], dtype=np.int64))
        elems = pack(powers, 0, 0, 1, big)
        gens = [Mat2(pow(r, f, big), 0, 0, 1, big)]
    else:  # pragma: no cover
        raise ValueError(k)

    return Subgroup(big, gens, np.unique(elems), kind.label)


_ID_RE = re.compile(r"^(borel|cs\+?|cns\+?|semicartan(?:\^(\d+))?|gl2)@(\d+)(?:\^(\d+))?$")
_ID_KIND = {"borel": "Borel", "cs": "SplitCartan", "cs+": "SplitCartanNormalizer",
            "cns": "NonsplitCartan", "cns+": "NonsplitCartanNormalizer", "gl2": "FullGL2"}


def parse_group_id(text: str) -> NamedSubgroupKind:
    """Parse identifiers like ``borel@17``, ``cns+@37``, ``semicartan^6@13``, ``gl2@5^2``."""
    m = _ID_RE.match(text.strip())
    if not m:
        raise ValueError(f"unrecognised subgroup id {text!r}")
    name, f, ell, n = m.group(1), m.group(2), int(m.group(3)), int(m.group(4) or 1)
    if name.startswith("semicartan"):
        if f is None:
            return NamedSubgroupKind("SemiCartan", ell, n=n)
        return NamedSubgroupKind("SemiCartanPower", ell, f=int(f), n=n)
    return NamedSubgroupKind(_ID_KIND[name], ell, n=n)


def named(text: str) -> Subgroup:
    return build_named(parse_group_id(text))


# --- C+_ns enumeration -------------------------------------------------------

def _cns_log_table(gamma: Mat2) -> dict[int, int]:
    out, x = {}, Mat2.identity(gamma.n)
    for e in range(gamma.n ** 2 - 1):
        out[x.code] = e
        x = x @ gamma
    return out


def enumerate_subgroups_cns_plus(ell: int, *, epsilon: int | None = None,
                                 bound: int = CNS_PLUS_BOUND) -> list[Subgroup]:
    """Subgroups of C+_ns(l) up to C+_ns-conjugacy, ordered by (order, label).

    Inside the cyclic C_ns there is one subgroup per divisor d of l^2 - 1. A
    subgroup leaving C_ns is ``H_d u H_d*w*g^k`` with ``g^(k(l+1)) in H_d``;
    the classes of k come from the conjugation action of the two generators.
    """
    if ell > bound:
        raise EnumerationTooLarge(f"l={ell} above enumeration bound {bound}")
    kind = NamedSubgroupKind("NonsplitCartanNormalizer", ell, epsilon=epsilon)
    eps = kind.epsilon
    q = ell * ell - 1
    gamma = _cns_generator(ell, eps)
    w = Mat2(1, 0, 0, -1, ell)
    log = _cns_log_table(gamma)
    w_inv = w.inverse()

    def outer_exponent(m: Mat2) -> int:
        return log[(w_inv @ m).code]

    out: list[Subgroup] = []
    for d in divisors(q):
        s = q // d
        h = gamma ** s
        out.append(closure([h], ell, label=f"cns+@{ell}:C{d}"))
        valid = [k for k in range(s) if (k * (ell + 1)) % s == 0]
        seen: set[int] = set()
        for k in valid:
            if k in seen:
                continue
            orbit, stack = {k}, [k]
            while stack:
                j = stack.pop()
                m = w @ gamma ** j
                for x in (gamma, w):
                    j2 = outer_exponent(x @ m @ x.inverse()) % s
                    if j2 not in orbit:
                        orbit.add(j2)
                        stack.append(j2)
            seen |= orbit
            out.append(closure([h, w @ gamma ** k], ell, label=f"cns+@{ell}:C{d}.w{k}"))
    out.sort(key=lambda g: (g.order, g.label))
    return out


# --- Borel enumeration --------------------------------------------------------

def _subgroups_zm2(m: int) -> list[frozenset[tuple[int, int]]]:
    """All subgroups of Z/m x Z/m (each is generated by at most two elements)."""
    elems = list(itertools.product(range(m), repeat=2))

    def cyc(g):
        out, x = set(), (0, 0)
        while True:
            out.add(x)
            x = ((x[0] + g[0]) % m, (x[1] + g[1]) % m)
            if x == (0, 0):
                return frozenset(out)

    cyclic = sorted({cyc(g) for g in elems}, key=lambda s: (len(s), sorted(s)))
    found = set(cyclic)
    for c1, c2 in itertools.combinations(cyclic, 2):
        found.add(frozenset(((x[0] + y[0]) % m, (x[1] + y[1]) % m) for x in c1 for y in c2))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _zm2_generators(sub: frozenset, m: int) -> list[tuple[int, int]]:
    gens: list[tuple[int, int]] = []
    span = {(0, 0)}
    for g in sorted(sub):
        if g in span:
            continue
        gens.append(g)
        span = {((x[0] + k * g[0]) % m, (x[1] + k * g[1]) % m) for x in span for k in range(m)}
        if len(span) == len(sub):
            break
    return gens


def enumerate_subgroups_borel(ell: int, *, bound: int = BOREL_BOUND) -> list[Subgroup]:
    """Subgroups of the upper-triangular Borel mod l up to Borel-conjugacy.

    Each class is ``T'`` or ``U x| T'`` for a diagonal subgroup ``T'`` (U is the
    unipotent radical); complements to U are conjugate to diagonal ones.
    """
    if ell > bound:
        raise EnumerationTooLarge(f"l={ell} above enumeration bound {bound}")
    r = primitive_root(ell)
    m = ell - 1
    unip = Mat2(1, 1, 0, 1, ell)
    out: list[Subgroup] = []
    for sub in _subgroups_zm2(m):
        diag = [Mat2(pow(r, i, ell), 0, 0, pow(r, j, ell), ell) for i, j in _zm2_generators(sub, m)]
        tag = ",".join(f"{i}.{j}" for i, j in _zm2_generators(sub, m)) or "1"
        out.append(closure(diag, ell, label=f"borel@{ell}:T[{tag}]"))
        out.append(closure([unip] + diag, ell, label=f"borel@{ell}:UT[{tag}]"))
    out.sort(key=lambda g: (g.order, g.label))
    return out


# --- admissibility ------------------------------------------------------------

@dataclass(frozen=True)
class GaloisAdmissibility:
    det_surjective: bool
    has_complex_conjugation: bool
    contains_minus_identity: bool

    @property
    def admissible(self) -> bool:
        """Surjective determinant and a complex-conjugation element."""
        return self.det_surjective and self.has_complex_conjugation


def complex_conjugations(g: Subgroup) -> np.ndarray:
    """Codes of elements with trace 0, det -1 and order 2."""
    n = g.n
    a, b, c, d = g.entry_arrays
    hit = ((a + d) % n == 0) & ((a * d - b * c) % n == n - 1)
    # order 2 check: M^2 = I
    sq_a = (a * a + b * c) % n
    sq_b = (a * b + b * d) % n
    sq_c = (c * a + d * c) % n
    sq_d = (c * b + d * d) % n
    hit &= (sq_a == 1) & (sq_b == 0) & (sq_c == 0) & (sq_d == 1)
    return g.elements[hit]


def admissibility(g: Subgroup) -> GaloisAdmissibility:
    n = g.n
    if n % 2 == 0:
        raise OutOfScopeError("admissibility is defined for odd level")
    dets = np.unique(g.dets())
    det_surj = dets.size == _units(n).size
    minus = Mat2(-1, 0, 0, -1, n) in g
    return GaloisAdmissibility(bool(det_surj), bool(complex_conjugations(g).size), minus)


def standard_involution(ell: int) -> Mat2:
    return Mat2(1, 0, 0, -1, ell)


def modulus_of(kind: NamedSubgroupKind) -> Modulus:
    return Modulus(kind.level)
