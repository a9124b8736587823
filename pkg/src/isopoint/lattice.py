"""Brute-force subgroup lattice of a small finite matrix group.

Works on a Cayley table, so it knows nothing about Cartan or Borel structure;
this is what makes it a usable cross-check for the structured enumerations in
:mod:`isopoint.atlas`. Practical up to a few hundred elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .gl2_core import Mat2, Subgroup, pack


@dataclass
class CayleyTable:
    group: Subgroup
    table: np.ndarray    # table[i, j] = index of elements[i] * elements[j]
    inverse: np.ndarray
    identity: int

    @classmethod
    def of(cls, group: Subgroup) -> "CayleyTable":
        n, codes = group.n, group.elements
        a, b, c, d = group.entry_arrays
        e, f, g, h = (x[None, :] for x in (a, b, c, d))
        a, b, c, d = (x[:, None] for x in (a, b, c, d))
        prod = pack(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, n)
        table = np.searchsorted(codes, prod).astype(np.int32)
        ident = int(np.searchsorted(codes, Mat2.identity(n).code))
        inverse = np.argmax(table == ident, axis=1).astype(np.int32)
        return cls(group, np.ascontiguousarray(table), inverse, ident)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def generated(self, gens: list[int], start: np.ndarray | None = None) -> np.ndarray:
        if start is None:
            start = np.zeros(self.size, dtype=np.uint8)
            start[self.identity] = 1
        return kernels.closure_in_table(self.table, start, np.array(gens, dtype=np.int32))

    def conjugation(self) -> np.ndarray:
        """conj[x, i] = index of x * g_i * x^-1."""
        t = self.table
        return t[t, self.inverse[:, None]]


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask.astype(bool)).tobytes()


class SubgroupLattice:
    """All subgroups of ``group``, found by the cyclic-extension method."""

    def __init__(self, group: Subgroup):
        self.group = group
        self.cayley = CayleyTable.of(group)
        self.conj = self.cayley.conjugation()
        self._classes: list[tuple[np.ndarray, list[int]]] | None = None

    def canonical(self, members: np.ndarray) -> bytes:
        """Conjugation-invariant key: least sorted conjugate of the member list."""
        rows = np.sort(self.conj[:, members], axis=1)
        order = np.lexsort(rows.T[::-1])
        return rows[order[0]].tobytes()

    def classes(self) -> list[tuple[np.ndarray, list[int]]]:
        """One (member indices, generator indices) pair per conjugacy class."""
        if self._classes is not None:
            return self._classes
        ct = self.cayley
        cyclic: dict[bytes, tuple[np.ndarray, int]] = {}
        for g in range(ct.size):
            mask = ct.generated([g])
            cyclic.setdefault(_key(mask), (mask, g))
        trivial = ct.generated([])
        reps: dict[bytes, tuple[np.ndarray, list[int]]] = {
            self.canonical(np.flatnonzero(trivial)): (trivial, [])}
        seen_exact = {_key(trivial)}
        queue = [(trivial, [])]
        while queue:
            mask, gens = queue.pop()
            for cmask, g in cyclic.values():
                if mask[g]:
                    continue
                new = ct.generated(gens + [g], start=mask)
                k = _key(new)
                if k in seen_exact:
                    continue
                seen_exact.add(k)
                canon = self.canonical(np.flatnonzero(new))
                if canon not in reps:
                    reps[canon] = (new, gens + [g])
                    queue.append((new, gens + [g]))
        out = [(np.flatnonzero(m), gs) for m, gs in reps.values()]
        out.sort(key=lambda t: (t[0].size, t[0].tolist()))
        self._classes = out
        return out

    def class_keys(self) -> list[bytes]:
        return sorted(self.canonical(members) for members, _ in self.classes())

    def all_subgroups(self) -> list[tuple[np.ndarray, list[int]]]:
        """Every subgroup (not just class representatives), with generators."""
        out: dict[bytes, tuple[np.ndarray, list[int]]] = {}
        for members, gens in self.classes():
            for x in range(self.cayley.size):
                conj_members = np.sort(self.conj[x, members])
                key = conj_members.tobytes()
                if key not in out:
                    out[key] = (conj_members, [int(self.conj[x, g]) for g in gens])
        return sorted(out.values(), key=lambda t: (t[0].size, t[0].tolist()))

    def to_subgroup(self, members: np.ndarray, gens: list[int], label: str | None = None) -> Subgroup:
        n = self.group.n
        codes = self.group.elements
        return Subgroup(n, [Mat2.from_code(codes[g], n) for g in gens], codes[members], label)

    def key_of(self, sub: Subgroup) -> bytes:
        """Canonical class key of a subgroup given as a Subgroup of the same group."""
        members = np.searchsorted(self.group.elements, sub.elements)
        if not np.array_equal(self.group.elements[members], sub.elements):
            raise ValueError("not a subgroup of the lattice's group")
        return self.canonical(members)
