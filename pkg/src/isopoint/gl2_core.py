"""Exact 2x2 matrix algebra over Z/NZ, group closure and orbits.

Group elements are stored packed as ``((a*N + b)*N + c)*N + d`` in int64, so
integer order on codes is lexicographic order on ``(a, b, c, d)``. A
:class:`Subgroup` keeps its elements as a sorted read-only int64 array.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import ClosureTooLarge, DataError, NotClosedError, SingularElementError

DEFAULT_CLOSURE_CAP = 1 << 24
MAX_MODULUS = 1 << 15  # keeps N**4 well inside int64


def closure_cap() -> int:
    env = os.environ.get("ISOPOINT_CLOSURE_CAP")
    return int(env) if env else DEFAULT_CLOSURE_CAP


def factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factor(n) == {n: 1}


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class Modulus:
    value: int
    ell: int | None = field(default=None, compare=False)
    n: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.value < 2:
            raise ValueError(f"modulus must be >= 2, got {self.value}")
        if self.value >= MAX_MODULUS:
            raise ValueError(f"modulus {self.value} too large for packed encoding")
        fac = factor(self.value)
        if len(fac) == 1:
            (p, e), = fac.items()
            object.__setattr__(self, "ell", p)
            object.__setattr__(self, "n", e)

    @classmethod
    def of(cls, value: "int | Modulus") -> "Modulus":
        return value if isinstance(value, Modulus) else cls(int(value))

    @property
    def is_prime_power(self) -> bool:
        return self.ell is not None

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, order=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int
    n: int

    def __post_init__(self):
        n = self.n
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % n)

    @classmethod
    def identity(cls, n: int) -> "Mat2":
        return cls(1, 0, 0, 1, n)

    @classmethod
    def from_rows(cls, rows: Sequence, n: int) -> "Mat2":
        """Accepts ``[a, b, c, d]`` or ``[[a, b], [c, d]]``."""
        flat = [x for r in rows for x in r] if isinstance(rows[0], (list, tuple)) else list(rows)
        if len(flat) != 4 or not all(isinstance(x, int) for x in flat):
            raise DataError(f"matrix must have four integer entries, got {rows!r}")
        return cls(*flat, n)

    @classmethod
    def from_code(cls, code: int, n: int) -> "Mat2":
        code = int(code)
        return cls(code // n ** 3, (code // n ** 2) % n, (code // n) % n, code % n, n)

    @property
    def code(self) -> int:
        n = self.n
        return ((self.a * n + self.b) * n + self.c) * n + self.d

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.n

    @property
    def is_invertible(self) -> bool:
        return math.gcd(self.det, self.n) == 1

    def rows(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __matmul__(self, other: "Mat2") -> "Mat2":
        if other.n != self.n:
            raise ValueError("moduli differ")
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.n)

    def inverse(self) -> "Mat2":
        if not self.is_invertible:
            raise SingularElementError(f"{self.rows()} mod {self.n}")
        u = pow(self.det, -1, self.n)
        return Mat2(self.d * u, -self.b * u, -self.c * u, self.a * u, self.n)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Mat2.identity(self.n), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def order(self) -> int:
        if not self.is_invertible:
            raise SingularElementError(f"{self.rows()} mod {self.n}")
        ident = Mat2.identity(self.n)
        x, k = self, 1
        while x != ident:
            x = x @ self
            k += 1
        return k

    def act(self, v: "Vec2") -> "Vec2":
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y, self.n)

    def __repr__(self) -> str:
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.n})"


@dataclass(frozen=True, order=True)
class Vec2:
    x: int
    y: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "x", self.x % self.n)
        object.__setattr__(self, "y", self.y % self.n)

    @property
    def exact_order(self) -> int:
        return self.n // math.gcd(math.gcd(self.x, self.y), self.n)

    @property
    def index(self) -> int:
        return self.x * self.n + self.y

    @classmethod
    def from_index(cls, i: int, n: int) -> "Vec2":
        return cls(int(i) // n, int(i) % n, n)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y, self.n)


@dataclass(frozen=True)
class MatOps:
    product: Mat2
    det: int
    trace: int
    char_poly: tuple[int, int]
    _inverse: Mat2 | None = field(repr=False)

    @property
    def inverse(self) -> Mat2:
        if self._inverse is None:
            raise SingularElementError()
        return self._inverse


def mat_ops(m1: Mat2, m2: Mat2, n: "int | Modulus | None" = None) -> MatOps:
    """Product, inverse, determinant, trace and (trace, det) of ``m1``."""
    if n is not None and int(n) != m1.n:
        raise ValueError("modulus mismatch")
    inv = m1.inverse() if m1.is_invertible else None
    return MatOps(m1 @ m2, m1.det, m1.trace, (m1.trace, m1.det), inv)


def gl2_order(n: int) -> int:
    out = n ** 4
    for p in factor(n):
        out = out * (p * p - 1) * (p * p - p) // p ** 4
    return out


def unpack(codes: np.ndarray, n: int) -> tuple[np.ndarray, ...]:
    codes = np.asarray(codes, dtype=np.int64)
    return codes // n ** 3, (codes // n ** 2) % n, (codes // n) % n, codes % n


def pack(a, b, c, d, n: int) -> np.ndarray:
    return ((np.asarray(a, dtype=np.int64) % n * n + np.asarray(b) % n) * n
            + np.asarray(c) % n) * n + np.asarray(d) % n


class Subgroup:
    """A closed subgroup of GL2(Z/NZ): generators plus the sorted element codes.

    Build instances with :func:`closure`, :func:`full_preimage` or the atlas
    constructors; the plain constructor trusts its caller.
    """

    def __init__(self, modulus, generators: Iterable[Mat2], elements: np.ndarray,
                 label: str | None = None):
        self.modulus = Modulus.of(modulus)
        self.generators = tuple(generators)
        arr = np.array(elements, dtype=np.int64)
        arr.setflags(write=False)
        self.elements = arr
        self.label = label

    @property
    def n(self) -> int:
        return self.modulus.value

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, m: Mat2) -> bool:
        if m.n != self.n:
            return False
        i = int(np.searchsorted(self.elements, m.code))
        return i < self.elements.size and int(self.elements[i]) == m.code

    def __iter__(self) -> Iterator[Mat2]:
        n = self.n
        return (Mat2.from_code(c, n) for c in self.elements.tolist())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.n == other.n
                and np.array_equal(self.elements, other.elements))

    def __hash__(self) -> int:
        return hash((self.n, self.elements.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"<Subgroup{tag} order={self.order} mod {self.n}>"

    def with_label(self, label: str) -> "Subgroup":
        return Subgroup(self.modulus, self.generators, self.elements, label)

    @cached_property
    def entry_arrays(self) -> tuple[np.ndarray, ...]:
        return unpack(self.elements, self.n)

    @cached_property
    def generator_array(self) -> np.ndarray:
        if not self.generators:
            return np.array([[1, 0, 0, 1]], dtype=np.int64)
        return np.array([g.rows() for g in self.generators], dtype=np.int64)

    def dets(self) -> np.ndarray:
        a, b, c, d = self.entry_arrays
        return (a * d - b * c) % self.n

    def traces(self) -> np.ndarray:
        a, _, _, d = self.entry_arrays
        return (a + d) % self.n

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.n == other.n and bool(np.isin(self.elements, other.elements).all())

    def check(self) -> None:
        """Assert the closure invariants; raises NotClosedError on failure."""
        n = self.n
        if Mat2.identity(n) not in self:
            raise NotClosedError("identity missing")
        if any(g not in self for g in self.generators):
            raise NotClosedError("generator outside element set")
        for g in self.generators:
            prods = _right_multiply(self.elements, g, n)
            if not np.isin(prods, self.elements).all():
                raise NotClosedError("not closed under multiplication")
        if gl2_order(n) % self.order:
            raise NotClosedError("order does not divide |GL2|")


def _right_multiply(codes: np.ndarray, g: Mat2, n: int) -> np.ndarray:
    a, b, c, d = unpack(codes, n)
    return pack(a * g.a + b * g.c, a * g.b + b * g.d, c * g.a + d * g.c, c * g.b + d * g.d, n)


def closure(gens: Iterable[Mat2], n: "int | Modulus", *, cap: int | None = None,
            label: str | None = None) -> Subgroup:
    """The subgroup generated by ``gens`` with its full canonical element list."""
    modulus = Modulus.of(n)
    gens = tuple(gens)
    for g in gens:
        if g.n != modulus.value:
            raise ValueError(f"generator {g!r} not mod {modulus.value}")
        if not g.is_invertible:
            raise SingularElementError(repr(g))
    cap = closure_cap() if cap is None else cap
    codes = np.array([g.code for g in gens], dtype=np.int64)
    elems = kernels.closure_codes(codes, modulus.value, cap)
    if elems is None:
        raise ClosureTooLarge(f"closure exceeds cap of {cap} elements")
    return Subgroup(modulus, gens, elems, label)


def trivial_group(n: int) -> Subgroup:
    return closure([], n, label="trivial")


def orbit(g: Subgroup, v: Vec2) -> tuple[Vec2, ...]:
    """The G-orbit of ``v``, sorted by (x, y)."""
    if not isinstance(g, Subgroup):
        raise NotClosedError("orbit needs a closed Subgroup")
    gens = g.generators or (Mat2.identity(g.n),)
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for m in gens:
            w = m.act(u)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return tuple(sorted(seen))


def orbit_labels(g: Subgroup) -> np.ndarray:
    """For each vector index ``x*N + y`` the least index of its G-orbit."""
    return kernels.orbit_labels(g.generator_array, g.n)


def find_element_with_charpoly(g: Subgroup, t: int, d: int,
                               order_req: int | None = None) -> Mat2 | None:
    """First element (canonical order) with trace ``t``, det ``d`` and given order."""
    n = g.n
    hits = np.flatnonzero((g.traces() == t % n) & (g.dets() == d % n))
    for i in hits.tolist():
        m = Mat2.from_code(g.elements[i], n)
        if order_req is None or m.order() == order_req:
            return m
    return None


def has_element_with_charpoly(g: Subgroup, t: int, d: int,
                              order_req: int | None = None) -> bool:
    return find_element_with_charpoly(g, t, d, order_req) is not None


def reduce_group(g: Subgroup, m: int, label: str | None = None) -> Subgroup:
    """Image of ``g`` under reduction Z/NZ -> Z/mZ."""
    if g.n % m:
        raise ValueError(f"{m} does not divide {g.n}")
    a, b, c, d = g.entry_arrays
    elems = np.unique(pack(a, b, c, d, m))
    gens = tuple(Mat2(x.a, x.b, x.c, x.d, m) for x in g.generators)
    return Subgroup(m, gens, elems, label)


def full_preimage(g: Subgroup, big: int, label: str | None = None) -> Subgroup:
    """Full preimage of ``g`` under GL2(Z/big) -> GL2(Z/N), built element-wise."""
    n = g.n
    if big % n:
        raise ValueError(f"{n} does not divide {big}")
    k = big // n
    total = g.order * k ** 4
    cap = closure_cap()
    if total > cap:
        raise ClosureTooLarge(f"preimage of order {total} exceeds cap {cap}")
    a, b, c, d = g.entry_arrays
    lift = np.arange(k, dtype=np.int64) * n
    grid = np.stack(np.meshgrid(lift, lift, lift, lift, indexing="ij"), -1).reshape(-1, 4)
    aa = (a[:, None] + grid[None, :, 0]).ravel()
    bb = (b[:, None] + grid[None, :, 1]).ravel()
    cc = (c[:, None] + grid[None, :, 2]).ravel()
    dd = (d[:, None] + grid[None, :, 3]).ravel()
    elems = np.sort(pack(aa, bb, cc, dd, big))
    gens = [Mat2(x.a, x.b, x.c, x.d, big) for x in g.generators]
    gens += [Mat2(1 + n, 0, 0, 1, big), Mat2(1, n, 0, 1, big),
             Mat2(1, 0, n, 1, big), Mat2(1, 0, 0, 1 + n, big)]
    return Subgroup(big, gens, elems, label)


def subgroup_to_dict(g: Subgroup) -> dict:
    return {"modulus": g.n, "generators": [m.rows() for m in g.generators], "label": g.label}


def subgroup_from_dict(obj: dict) -> Subgroup:
    try:
        n = int(obj["modulus"])
        gens = [Mat2.from_rows(r, n) for r in obj["generators"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise DataError(f"bad subgroup record: {exc}") from exc
    return closure(gens, n, label=obj.get("label"))


def subgroup_to_json(g: Subgroup) -> str:
    return json.dumps(subgroup_to_dict(g), sort_keys=True)


def subgroup_from_json(text: str) -> Subgroup:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}") from exc
    return subgroup_from_dict(obj)
