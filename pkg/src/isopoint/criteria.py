"""Elimination rules for isolated points on X1(l^n), and the semi-Cartan scan.

Rules are pure functions of small JSON-able inputs so a report's trace can be
replayed (see :func:`replay_step`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .atlas import NamedSubgroupKind, build_named, nonresidue
from .curves import covering_degree
from .facts import FACTS
from .gl2_core import Mat2, Subgroup, find_element_with_charpoly, is_prime

RAMIFICATION_INDICES = (1, 2, 3, 4, 6)


class ImageClass(str, Enum):
    SURJECTIVE = "Surjective"
    BOREL = "Borel"
    SPLIT_CARTAN_NORMALIZER = "SplitCartanNormalizer"
    NONSPLIT_CARTAN_NORMALIZER = "NonsplitCartanNormalizer"
    EXCEPTIONAL = "Exceptional"

    def __str__(self) -> str:
        return self.value


class Outcome(str, Enum):
    ELIMINATES = "eliminates"
    SURVIVES = "survives"
    NOT_APPLICABLE = "not_applicable"
    DESCENDS = "descends"
    INSUFFICIENT_DATA = "insufficient_data"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RuleVerdict:
    rule_id: str
    outcome: Outcome
    citations: tuple[str, ...] = ()
    witnesses: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    image_class: ImageClass | None = None
    note: str = ""

    def __post_init__(self):
        if not self.citations and not self.witnesses:
            raise ValueError(f"verdict {self.rule_id} has neither citation nor witness")

    def to_dict(self) -> dict:
        return {"rule_id": self.rule_id, "outcome": self.outcome.value,
                "image_class": None if self.image_class is None else self.image_class.value,
                "inputs": self.inputs, "citations": list(self.citations),
                "witnesses": self.witnesses, "note": self.note}


@dataclass(frozen=True)
class RamificationData:
    e: int
    f: int

    @classmethod
    def of(cls, ell: int, e: int) -> "RamificationData":
        if e not in RAMIFICATION_INDICES:
            raise ValueError(f"ramification index must be in {RAMIFICATION_INDICES}")
        return cls(e, gcd(ell - 1, e))


def admissible_f(ell: int) -> set[int]:
    return {gcd(ell - 1, e) for e in RAMIFICATION_INDICES}


# --- semi-Cartan ----------------------------------------------------------------

@dataclass(frozen=True)
class SemiCartanResult:
    ell: int
    f: int
    epsilon: int
    subgroup_order: int
    embeds: bool
    witness: Mat2 | None

    def to_dict(self) -> dict:
        return {"ell": self.ell, "f": self.f, "epsilon": self.epsilon,
                "subgroup_order": self.subgroup_order, "embeds": self.embeds,
                "witness": None if self.witness is None else self.witness.rows()}


@lru_cache(maxsize=64)
def _cns_plus(ell: int, epsilon: int) -> Subgroup:
    return build_named(NamedSubgroupKind("NonsplitCartanNormalizer", ell, epsilon=epsilon))


def semi_cartan_embeds(ell: int, f: int, epsilon: int | None = None) -> SemiCartanResult:
    """Does C+_ns(l) contain a conjugate of D^f = {diag(a^f, 1)}?

    D^f is cyclic of order h = (l-1)/f, generated by diag(a, 1) for any a of
    order h. For h > 1 the eigenvalues 1, a are distinct, so an element is
    GL2-conjugate to diag(a, 1) iff its characteristic polynomial is
    (x-1)(x-a); matching (trace, det, order) is then a complete test.
    """
    if f not in admissible_f(ell):
        raise ValueError(f"f={f} is not admissible for l={ell}: {sorted(admissible_f(ell))}")
    eps = nonresidue(ell) if epsilon is None else epsilon
    group = _cns_plus(ell, eps)
    h = (ell - 1) // f
    if h == 1:
        return SemiCartanResult(ell, f, eps, 1, True, Mat2.identity(ell))
    for a in range(2, ell):
        if _mult_order(a, ell) != h:
            continue
        m = find_element_with_charpoly(group, 1 + a, a, order_req=h)
        if m is not None:
            return SemiCartanResult(ell, f, eps, h, True, m)
    return SemiCartanResult(ell, f, eps, h, False, None)


def _mult_order(a: int, n: int) -> int:
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def no_split_eigenvalues_in_cns(ell: int, epsilon: int | None = None) -> bool:
    """No element of C_ns(l) has characteristic polynomial (x-1)(x-a) with a != 1."""
    eps = nonresidue(ell) if epsilon is None else epsilon
    cns = build_named(NamedSubgroupKind("NonsplitCartan", ell, epsilon=eps))
    t, d = cns.traces(), cns.dets()
    # (x-1)(x-a) has trace 1+a and det a, i.e. t == 1 + d, with a = d != 1
    return not bool(np.any((t == (1 + d) % ell) & (d != 1)))


@dataclass(frozen=True)
class SupersingularResult:
    ell: int
    forced: bool | None
    override: str | None
    scans: tuple[SemiCartanResult, ...]

    def verdict(self) -> RuleVerdict:
        if self.forced is None:
            return RuleVerdict("supersingular_forced", Outcome.NOT_APPLICABLE,
                               witnesses={"ell": self.ell}, inputs={"ell": self.ell},
                               note="only defined for l > 7")
        cites = [FACTS.citation("semi_cartan")]
        if self.override:
            cites.append(self.override)
        return RuleVerdict(
            "supersingular_forced", Outcome.SURVIVES if self.forced else Outcome.ELIMINATES,
            tuple(cites), {"embeds": {s.f: s.embeds for s in self.scans}},
            {"ell": self.ell},
            note="override: no non-CM curves with this image" if self.override else "")


def supersingular_forced(ell: int, epsilon: int | None = None) -> SupersingularResult:
    """Whether an image inside C+_ns(l) forces potential supersingular reduction."""
    if ell <= 7:
        return SupersingularResult(ell, None, None, ())
    scans = tuple(semi_cartan_embeds(ell, f, epsilon) for f in sorted(admissible_f(ell)))
    if ell == 13:
        return SupersingularResult(ell, True, FACTS.citation("nonsplit_13_empty"), scans)
    return SupersingularResult(ell, not any(s.embeds for s in scans), None, scans)


# --- pure rules (replayable) ------------------------------------------------------

def riemann_roch_eliminates(degree: int, genus: int) -> bool:
    """True iff a point of this degree cannot be isolated (degree > genus)."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    return degree > genus


def class_admissible(image_class: ImageClass, ell: int) -> tuple[bool, str]:
    """Whether mod-l images of this class occur for non-CM E/Q, with the source."""
    c = ImageClass(image_class)
    if c is ImageClass.SURJECTIVE:
        return True, SERRE_OPEN_IMAGE
    if c is ImageClass.BOREL:
        return ell in FACTS.mazur_borel_primes, FACTS.citation("borel_primes")
    if c is ImageClass.SPLIT_CARTAN_NORMALIZER:
        return ell <= 7, FACTS.citation("split_cartan")
    if c is ImageClass.NONSPLIT_CARTAN_NORMALIZER:
        return True, FACTS.citation("potential_good")
    if c is ImageClass.EXCEPTIONAL:
        return ell == 13 or ell <= 7, FACTS.citation("exceptional")
    raise ValueError(f"unknown image class {image_class!r}")


SERRE_OPEN_IMAGE = "Serre 1972: the mod-l image of a non-CM E/Q is GL2 or lies in a maximal subgroup"


def level_lowering_ok(image_class: ImageClass, ell: int, n: int = 1) -> RuleVerdict:
    """Whether an isolated point on X1(l^n) maps to an isolated point on X1(l)."""
    try:
        c = ImageClass(image_class)
    except ValueError:
        raise ValueError(f"unknown image class {image_class!r}") from None
    inputs = {"image_class": c.value, "ell": ell, "n": n}
    wit = {"covering_degree": covering_degree(ell, n, 1)}
    lvl = FACTS.citation("level_lowering")
    if c is ImageClass.SURJECTIVE and ell > 3:
        return RuleVerdict("level_lowering", Outcome.DESCENDS, (lvl,), wit, inputs, c,
                           "surjective mod l, l > 3: l-adic image is the full preimage")
    if c is ImageClass.BOREL and ell > 5:
        return RuleVerdict("level_lowering", Outcome.DESCENDS, (FACTS.citation("greenberg"), lvl),
                           wit, inputs, c, "l > 5 isogeny: l-adic image as large as the mod-l image allows")
    if c is ImageClass.NONSPLIT_CARTAN_NORMALIZER and ell > 7:
        wit = dict(wit, degree_multiplicative=True)
        return RuleVerdict("level_lowering", Outcome.DESCENDS,
                           (FACTS.citation("supersingular_ramification"), FACTS.citation("degree_formula"), lvl),
                           wit, inputs, c, "deg(x) = deg(pi(x)) * deg(pi) for every n > m")
    if c is ImageClass.EXCEPTIONAL and ell == 13:
        return RuleVerdict("level_lowering", Outcome.DESCENDS, (FACTS.citation("exceptional_ladic"), lvl),
                           wit, inputs, c, "13-adic image is the full preimage of the mod-13 image")
    return RuleVerdict("level_lowering", Outcome.NOT_APPLICABLE, (lvl,), wit, inputs, c,
                       "no level-lowering statement for this class and prime")


def riemann_roch_verdict(degree: int, genus: int, image_class: ImageClass | None = None,
                         note: str = "") -> RuleVerdict:
    out = Outcome.ELIMINATES if riemann_roch_eliminates(degree, genus) else Outcome.SURVIVES
    return RuleVerdict("riemann_roch", out, (FACTS.citation("riemann_roch"),),
                       {"degree": degree, "genus": genus}, {"degree": degree, "genus": genus},
                       image_class, note)


def nonsplit_bound_verdict(ell: int, genus: int) -> RuleVerdict:
    bound = FACTS.nonsplit_degree_bound(ell)
    out = Outcome.ELIMINATES if bound > genus else Outcome.SURVIVES
    return RuleVerdict("nonsplit_degree_bound", out,
                       (FACTS.citation("nonsplit_degree_bound"), FACTS.citation("riemann_roch")),
                       {"degree_lower_bound": str(bound), "genus": genus}, {"ell": ell, "genus": genus},
                       ImageClass.NONSPLIT_CARTAN_NORMALIZER)


def dkm_verdict(ell: int, degree: int) -> RuleVerdict:
    applies = ell == 17 and degree == 4
    return RuleVerdict("dkm_x1_17_degree4", Outcome.ELIMINATES if applies else Outcome.NOT_APPLICABLE,
                       (FACTS.citation("dkm_x1_17"),), {"ell": ell, "degree": degree},
                       {"ell": ell, "degree": degree}, ImageClass.BOREL)


def exceptional_13_verdict(degrees: list[int], genus: int) -> RuleVerdict:
    low = min(degrees)
    ok = low > 3 and genus == 2
    return RuleVerdict("x1_13_exceptional_degree", Outcome.ELIMINATES if ok else Outcome.SURVIVES,
                       (FACTS.citation("riemann_roch"), FACTS.citation("exceptional")),
                       {"min_degree": low, "degree_threshold": 3, "genus": genus},
                       {"degrees": sorted(degrees), "genus": genus}, ImageClass.EXCEPTIONAL)


def mazur_torsion_verdict(ell: int, genus: int) -> RuleVerdict:
    bound = 2 if ell >= 11 else 1
    out = Outcome.ELIMINATES if riemann_roch_eliminates(bound, genus) else Outcome.SURVIVES
    return RuleVerdict("mazur_torsion_degree_bound", out,
                       (FACTS.citation("mazur_torsion"), FACTS.citation("riemann_roch")),
                       {"degree_lower_bound": bound, "genus": genus}, {"ell": ell, "genus": genus},
                       ImageClass.BOREL)


def class_admissible_verdict(image_class: ImageClass, ell: int) -> RuleVerdict:
    ok, cite = class_admissible(image_class, ell)
    return RuleVerdict("class_admissible", Outcome.SURVIVES if ok else Outcome.ELIMINATES, (cite,),
                       {"ell": ell}, {"image_class": ImageClass(image_class).value, "ell": ell},
                       ImageClass(image_class), "" if ok else "class inadmissible at this prime")


RULES = {
    "riemann_roch": lambda i: riemann_roch_verdict(i["degree"], i["genus"]),
    "nonsplit_degree_bound": lambda i: nonsplit_bound_verdict(i["ell"], i["genus"]),
    "dkm_x1_17_degree4": lambda i: dkm_verdict(i["ell"], i["degree"]),
    "x1_13_exceptional_degree": lambda i: exceptional_13_verdict(i["degrees"], i["genus"]),
    "mazur_torsion_degree_bound": lambda i: mazur_torsion_verdict(i["ell"], i["genus"]),
    "class_admissible": lambda i: class_admissible_verdict(ImageClass(i["image_class"]), i["ell"]),
    "level_lowering": lambda i: level_lowering_ok(ImageClass(i["image_class"]), i["ell"], i["n"]),
    "supersingular_forced": lambda i: supersingular_forced(i["ell"]).verdict(),
}


def replay_step(step: dict) -> str:
    """Re-evaluate one serialized trace step; returns the recomputed outcome."""
    rule = RULES.get(step["rule_id"])
    if rule is None:
        raise KeyError(f"rule {step['rule_id']!r} is not replayable")
    return rule(step["inputs"]).outcome.value


def tame_inertia_compatible(g: Subgroup, ell: int) -> bool:
    """Does g meet C_ns(l) in a subgroup of order divisible by (l^2-1)/e, e in {1,2,3,4,6}?

    For potential supersingular reduction the tame inertia image is cyclic of
    that order inside the nonsplit Cartan (Serre 1972, level-2 fundamental
    character). Only meaningful for g inside the canonical C+_ns(l).
    """
    eps = nonresidue(ell)
    cns = build_named(NamedSubgroupKind("NonsplitCartan", ell, epsilon=eps))
    inner = int(np.isin(g.elements, cns.elements).sum())
    q = ell * ell - 1
    return any(inner % (q // e) == 0 for e in RAMIFICATION_INDICES)


def degree_ratio(big: int, small: int) -> Fraction:
    return Fraction(big, small)


def is_odd_prime(ell: int) -> bool:
    return ell > 2 and is_prime(ell)
