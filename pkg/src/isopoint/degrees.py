"""Degrees of closed points of X1(N) above a j-invariant with given mod-N image.

A closed point is a G-orbit of +-classes of vectors of exact order N. For the
G-orbit O of v, [k(P):k] = |O| and the point has degree |O|/2 when -v is in O
(c_x = 1/2), else |O|; O and -O then give the same closed point.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .atlas import GaloisAdmissibility, admissibility
from .errors import IsopointError, NotClosedError, OutOfScopeError
from .gl2_core import Modulus, Subgroup, orbit_labels

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DegreeEntry:
    degree: int
    orbit_field_degree: int
    cx: Fraction
    count: int

    def to_dict(self) -> dict:
        return {"degree": self.degree, "orbit_field_degree": self.orbit_field_degree,
                "cx": "1/2" if self.cx == HALF else "1", "count": self.count}


@dataclass(frozen=True)
class DegreeProfile:
    level: Modulus
    group_label: str
    entries: tuple[DegreeEntry, ...]

    @property
    def min_degree(self) -> int:
        return min(e.degree for e in self.entries)

    @property
    def degrees(self) -> list[int]:
        return sorted({e.degree for e in self.entries})

    def degree_sum(self) -> int:
        return sum(e.degree * e.count for e in self.entries)

    def num_points(self) -> int:
        return sum(e.count for e in self.entries)

    def to_dict(self) -> dict:
        return {"level": self.level.value, "group_label": self.group_label,
                "min_degree": self.min_degree, "entries": [e.to_dict() for e in self.entries]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["degree", "orbit_field_degree", "cx", "count"])
        for e in self.entries:
            d = e.to_dict()
            writer.writerow([d["degree"], d["orbit_field_degree"], d["cx"], d["count"]])
        return buf.getvalue()


def exact_order_mask(n: int) -> np.ndarray:
    """Boolean mask over vector indices ``x*n + y`` of exact order n."""
    ell = Modulus(n).ell
    idx = np.arange(n * n)
    x, y = idx // n, idx % n
    if ell is None:
        return np.gcd(np.gcd(x, y), n) == 1
    return (x % ell != 0) | (y % ell != 0)


def exact_order_count(n: int) -> int:
    m = Modulus(n)
    if m.ell is None:
        return int(exact_order_mask(n).sum())
    return m.ell ** (2 * m.n) - m.ell ** (2 * (m.n - 1))


def degree_profile(g: Subgroup, n: "int | Modulus | None" = None) -> DegreeProfile:
    if not isinstance(g, Subgroup):
        raise NotClosedError("degree_profile needs a closed Subgroup")
    level = Modulus.of(g.n if n is None else n)
    n = level.value
    if g.n != n:
        raise ValueError(f"group is mod {g.n}, level is {n}")
    if n % 2 == 0:
        raise OutOfScopeError("even level is out of scope")
    if not level.is_prime_power:
        raise OutOfScopeError("level must be a prime power")
    # 2P != O holds for every P of exact odd order n >= 3
    assert n >= 3

    labels = orbit_labels(g)
    mask = exact_order_mask(n)
    reps, sizes = np.unique(labels[mask], return_counts=True)
    x, y = reps // n, reps % n
    neg_labels = labels[((-x) % n) * n + (-y) % n]

    counter: Counter = Counter()
    for rep, size, neg in zip(reps.tolist(), sizes.tolist(), neg_labels.tolist()):
        if neg == rep:
            assert size % 2 == 0
            counter[(size // 2, size, HALF)] += 1
        elif rep < neg:
            counter[(size, size, Fraction(1))] += 1
    entries = tuple(DegreeEntry(d, o, cx, c) for (d, o, cx), c in sorted(counter.items()))
    return DegreeProfile(level, g.label or "", entries)


@dataclass(frozen=True)
class ScanRow:
    group_label: str
    order: int
    min_degree: int
    admissibility: GaloisAdmissibility
    excluded: bool

    def to_dict(self) -> dict:
        a = self.admissibility
        return {"group_label": self.group_label, "order": self.order,
                "min_degree": self.min_degree, "excluded": self.excluded,
                "det_surjective": a.det_surjective,
                "has_complex_conjugation": a.has_complex_conjugation,
                "contains_minus_identity": a.contains_minus_identity}


def min_degree_scan(groups: Sequence[Subgroup], n: "int | Modulus",
                    filter: Callable[[GaloisAdmissibility], bool] | None = None) -> list[ScanRow]:
    """Minimum closed-point degree per group; groups failing ``filter`` stay, flagged."""
    if not groups:
        raise IsopointError("empty group list")
    level = Modulus.of(n)
    rows = []
    for g in groups:
        if g.n != level.value:
            raise ValueError(f"group {g.label!r} is mod {g.n}, expected {level.value}")
        adm = admissibility(g)
        excluded = filter is not None and not filter(adm)
        rows.append(ScanRow(g.label or "", g.order, degree_profile(g, level).min_degree, adm, excluded))
    return sorted(rows, key=lambda r: r.group_label)


def standard_filter(adm: GaloisAdmissibility) -> bool:
    return adm.admissible
