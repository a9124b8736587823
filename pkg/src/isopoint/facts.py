"""Cited external results, stored as data. Nothing here is verified by the code."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

FACT_TABLE_VERSION = "1.0"

MAZUR_ISOGENY = "Mazur, Rational isogenies of prime degree, Invent. Math. 44 (1978)"
MAZUR_TORSION = "Mazur, Modular curves and the Eisenstein ideal, Publ. Math. IHES 47 (1977)"
ZYWINA = "Zywina, On the possible images of the mod l representations associated to elliptic curves over Q, arXiv:1508.07660"
SERRE = "Serre, Proprietes galoisiennes des points d'ordre fini des courbes elliptiques, Invent. Math. 15 (1972)"
BILU_PARENT = "Bilu-Parent, Serre's uniformity problem in the split Cartan case, Ann. of Math. 173 (2011)"
BILU_PARENT_REBOLLEDO = "Bilu-Parent-Rebolledo, Rational points on X0+(p^r), Ann. Inst. Fourier 63 (2013)"
BDMTV = "Balakrishnan-Dogra-Muller-Tuitman-Vonk, Explicit Chabauty-Kim for the split Cartan modular curve of level 13, Ann. of Math. 189 (2019)"
LR_2013 = "Lozano-Robledo, On the field of definition of p-torsion points on elliptic curves over the rationals, Math. Ann. 357 (2013), Thm 7.3"
LR_2013_SERRE = "Lozano-Robledo, Math. Ann. 357 (2013), Thm 3.1 (after Serre 1972)"
LR_2016 = "Lozano-Robledo, Ramification in the division fields of elliptic curves with potential supersingular reduction, Res. Number Theory 2 (2016), Thm 1.2(2)"
LEMOS = "Lemos, Serre's uniformity conjecture for elliptic curves with rational cyclic isogenies, Trans. AMS 371 (2019), Prop 2.2"
GREENBERG = "Greenberg, The image of Galois representations attached to elliptic curves with an isogeny, Amer. J. Math. 134 (2012); Greenberg, On elliptic curves with an isogeny of degree 7, Amer. J. Math. 136 (2014)"
RSZB = "Rouse-Sutherland-Zureick-Brown, l-adic images of Galois for elliptic curves over Q, arXiv:2106.11141"
DKM = "Derickx-Kamienny-Mazur, Rational families of 17-torsion points of elliptic curves over number fields, Contemp. Math. (2018), Prop 6"
BELOV_DEGREE = "Bourdon-Ejder-Liu-Odumodu-Viray, On the level of modular curves that give rise to isolated j-invariants, Adv. Math. 357 (2019), Lemma 2.1 and Prop 2.2"
BELOV_LEVEL = "Bourdon-Ejder-Liu-Odumodu-Viray, Adv. Math. 357 (2019), Thm 4.3 and Cor 5.3"
BELOV_37 = "Bourdon-Ejder-Liu-Odumodu-Viray, Adv. Math. 357 (2019), Prop 8.4"
RIEMANN_ROCH = "Riemann-Roch: a point of degree d > g on a curve of genus g > 0 lies in a P^1-family, so is not isolated"


@dataclass(frozen=True)
class JInvariant:
    ell: int
    value: Fraction
    factored: str
    citation: str
    alt_renderings: tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {"ell": self.ell, "value": str(self.value), "factored": self.factored,
                "alt_renderings": list(self.alt_renderings), "citation": self.citation,
                "note": self.note}


@dataclass(frozen=True)
class Fact:
    key: str
    statement: str
    citation: str


@dataclass(frozen=True)
class FactTable:
    version: str
    mazur_borel_primes: frozenset[int]
    borel_j_invariants_17_37: tuple[JInvariant, ...]
    exceptional_j_count_13: int
    isolation_known: frozenset[Fraction]
    rules: tuple[Fact, ...] = field(default=())

    def citation(self, key: str) -> str:
        for f in self.rules:
            if f.key == key:
                return f.citation
        raise KeyError(key)

    def statement(self, key: str) -> str:
        for f in self.rules:
            if f.key == key:
                return f.statement
        raise KeyError(key)

    def borel_j(self, ell: int) -> tuple[JInvariant, ...]:
        return tuple(j for j in self.borel_j_invariants_17_37 if j.ell == ell)

    def nonsplit_degree_bound(self, ell: int) -> Fraction:
        return Fraction(ell * ell - 1, 12)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "mazur_borel_primes": {"value": sorted(self.mazur_borel_primes), "citation": MAZUR_ISOGENY},
            "borel_j_invariants_17_37": [j.to_dict() for j in self.borel_j_invariants_17_37],
            "exceptional_j_count_13": {"value": self.exceptional_j_count_13, "citation": ZYWINA},
            "rules": [{"key": f.key, "statement": f.statement, "citation": f.citation} for f in self.rules],
        }


_J37_A = JInvariant(
    37, Fraction(7 * 11 ** 3), "7*11^3", f"{ZYWINA}; {MAZUR_ISOGENY}",
    alt_renderings=("-7*11^3",),
    note="sign differs between renderings of this j-invariant in the literature; "
         "both are kept, the unsigned form is the reported one")
_J37_B = JInvariant(37, Fraction(-7 * 137 ** 3 * 2083 ** 3), "-7*137^3*2083^3",
                    f"{ZYWINA}; {MAZUR_ISOGENY}")

FACTS = FactTable(
    version=FACT_TABLE_VERSION,
    mazur_borel_primes=frozenset({2, 3, 5, 7, 11, 17, 37}),
    borel_j_invariants_17_37=(
        JInvariant(17, Fraction(-17 * 373 ** 3, 2 ** 17), "-17*373^3/2^17", ZYWINA),
        JInvariant(17, Fraction(-17 ** 2 * 101 ** 3, 2), "-17^2*101^3/2", ZYWINA),
        _J37_A,
        _J37_B,
    ),
    exceptional_j_count_13=3,
    isolation_known=frozenset({_J37_A.value}),
    rules=(
        Fact("borel_primes", "mod-l image in a Borel subgroup forces l in {2,3,5,7,11,17,37}", MAZUR_ISOGENY),
        Fact("split_cartan", "mod-l image in a split Cartan normalizer forces l <= 7 or l = 13, "
             "and l = 13 does not occur for non-CM curves", f"{BILU_PARENT}; {BILU_PARENT_REBOLLEDO}; {BDMTV}"),
        Fact("exceptional", "exceptional mod-l image forces l <= 13; among l > 7 only l = 13 occurs",
             f"{SERRE}; {ZYWINA}"),
        Fact("nonsplit_degree_bound", "image in C+_ns(l): every point on X1(l) has degree >= (l^2-1)/12", LR_2013),
        Fact("nonsplit_13_empty", "no non-CM E/Q has mod-13 image in C+_ns(13)", BDMTV),
        Fact("mazur_torsion", "no E/Q (nor any quadratic twist) has a rational point of prime order l >= 11, "
             "so non-cuspidal points on X1(l) with rational j have degree >= 2", MAZUR_TORSION),
        Fact("dkm_x1_17", "X1(17) has no P^1-isolated points of degree 4 and J1(17)(Q) is finite, "
             "so it has no isolated points of degree 4", DKM),
        Fact("semi_cartan", "potential ordinary or multiplicative reduction at l forces G_{E,l} to contain "
             "a conjugate of D^f, f = gcd(l-1, e), e in {1,2,3,4,6}", LR_2013_SERRE),
        Fact("potential_good", "image in C+_ns(l), l >= 5, forces potential good reduction at l", LEMOS),
        Fact("supersingular_ramification", "potential supersingular reduction at l > 7: "
             "[Q(R):Q([l]R)] = l^2 for R of order l^n", LR_2016),
        Fact("level_lowering", "if deg(x) = deg(f(x)) deg(f) for a finite map f, an isolated x maps "
             "to an isolated f(x); full preimage images satisfy this, e.g. surjective mod l, l > 3",
             BELOV_LEVEL),
        Fact("greenberg", "l > 5 and a rational l-isogeny: the l-adic image contains a Sylow pro-l "
             "subgroup of GL2(Z_l)", GREENBERG),
        Fact("exceptional_ladic", "exceptional mod-13 image: the 13-adic image is the full preimage", RSZB),
        Fact("degree_formula", "deg(x) = c_x [k(P):k]; X1(l^n) -> X1(l^m) has degree l^(2(n-m))", BELOV_DEGREE),
        Fact("riemann_roch", "an isolated point of degree d on a curve of genus g > 0 has d <= g", RIEMANN_ROCH),
        Fact("isolated_37", "j = 7*11^3 gives an isolated point on X1(37)", BELOV_37),
    ),
)
