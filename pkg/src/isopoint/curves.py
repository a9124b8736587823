"""Index, cusp count and genus of X1(N); covering degrees between prime-power levels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfScopeError
from .gl2_core import Modulus, divisors, factor, is_prime


def euler_phi(n: int) -> int:
    out = n
    for p in factor(n):
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class CurveInvariants:
    level: Modulus
    index: int
    cusps: int
    genus: int

    def to_dict(self) -> dict:
        n = self.level.value
        bound = genus_bound(n) if is_prime(n) else None
        return {"level": n, "index": self.index, "cusps": self.cusps, "genus": self.genus,
                "bound": None if bound is None else _num(bound)}


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


def invariants_x1(n: "int | Modulus") -> CurveInvariants:
    """Invariants of X1(N) for N >= 5 (no elliptic points, -I not in Gamma1(N))."""
    level = Modulus.of(n)
    n = level.value
    if n <= 4:
        raise OutOfScopeError(f"small-level special case N={n}")
    index2 = n * n
    for p in factor(n):
        index2 = index2 // (p * p) * (p * p - 1)
    assert index2 % 2 == 0
    index = index2 // 2
    cusp2 = sum(euler_phi(d) * euler_phi(n // d) for d in divisors(n))
    assert cusp2 % 2 == 0
    cusps = cusp2 // 2
    genus = 1 + Fraction(index, 12) - Fraction(cusps, 2)
    if genus.denominator != 1 or genus < 0:
        raise ArithmeticError(f"non-integral genus {genus} at N={n}")
    return CurveInvariants(level, index, cusps, int(genus))


def genus_bound(ell: int) -> Fraction:
    return Fraction(ell * ell - 1, 24)


def covering_degree(ell: int, n: int, m: int) -> int:
    """Degree of X1(l^n) -> X1(l^m)."""
    if n < m:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    if m < 1:
        raise ValueError("levels start at 1")
    return ell ** (2 * (n - m))


@dataclass(frozen=True)
class GenusBound:
    ok: bool
    genus: int
    bound: Fraction
    margin: Fraction


def genus_bound_ok(ell: int) -> GenusBound:
    if ell < 5 or not is_prime(ell):
        raise ValueError(f"need a prime >= 5, got {ell}")
    g = invariants_x1(ell).genus
    bound = genus_bound(ell)
    return GenusBound(g < bound, g, bound, bound - g)

