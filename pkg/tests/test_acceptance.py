"""The nine acceptance criteria, each with its runtime limit. One PASS/FAIL line per criterion
is printed (and repeated in the terminal summary)."""

import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from isopoint.atlas import (KINDS, NamedSubgroupKind, admissibility, build_named,
                            enumerate_subgroups_cns_plus, named)
from isopoint.classify import bundled_table, classify, classify_range, primes_between
from isopoint.criteria import ImageClass, Outcome, admissible_f, semi_cartan_embeds, tame_inertia_compatible
from isopoint.curves import genus_bound, invariants_x1
from isopoint.degrees import degree_profile, min_degree_scan, standard_filter
from isopoint.gl2_core import Mat2, closure, divisors, full_preimage, is_prime, reduce_group
from isopoint.lattice import SubgroupLattice

from oracles import all_invertible


def record(k: int, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    within = elapsed < limit
    line = f"AC{k} {'PASS' if ok and within else 'FAIL'}: {detail} [{elapsed:.2f}s / limit {limit:g}s]"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line
    assert within, line


def primes(lo, hi):
    return [p for p in range(lo, hi + 1) if is_prime(p)]


def test_ac1_genus():
    t = time.perf_counter()
    stated = {n: invariants_x1(n).genus for n in (11, 13, 17)}
    bounded = all(invariants_x1(p).genus < genus_bound(p) for p in primes(5, 97))
    ok = stated == {11: 1, 13: 2, 17: 5} and bounded
    record(1, ok, f"genera {stated}, genus < (l^2-1)/24 for 5 <= l <= 97: {bounded}",
           time.perf_counter() - t, 1)


def test_ac2_group_orders():
    t = time.perf_counter()
    bad = []
    for ell in primes(5, 41):
        cns = closure(build_named(NamedSubgroupKind("NonsplitCartan", ell)).generators, ell)
        plus = closure(build_named(NamedSubgroupKind("NonsplitCartanNormalizer", ell)).generators, ell)
        if cns.order != ell * ell - 1 or plus.order != 2 * (ell * ell - 1):
            bad.append(ell)
    for ell in (3, 5, 7):
        g = closure([Mat2(1, 1, 0, 1, ell), Mat2(1, 0, 1, 1, ell), Mat2(2 if ell != 7 else 3, 0, 0, 1, ell)], ell)
        if g.order != (ell ** 2 - 1) * (ell ** 2 - ell):
            bad.append(("gl2", ell))
        if ell in (3, 5):
            brute = {Mat2(*m, ell).code for m in all_invertible(ell)}
            if set(g.elements.tolist()) != brute:
                bad.append(("brute", ell))
    record(2, not bad, f"C_ns, C+_ns orders for 5 <= l <= 41 and GL2(F3,F5,F7); mismatches {bad}",
           time.perf_counter() - t, 10)


def test_ac3_semi_cartan():
    t = time.perf_counter()
    wrong = []
    for ell in (11, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        for f in admissible_f(ell):
            a = semi_cartan_embeds(ell, f)
            b = semi_cartan_embeds(ell, f, epsilon=_second_nonresidue(ell))
            if a.embeds or b.embeds:
                wrong.append((ell, f))
    r = semi_cartan_embeds(13, 6)
    r2 = semi_cartan_embeds(13, 6, epsilon=_second_nonresidue(13))
    w = r.witness
    witness_ok = (r.embeds and r2.embeds and w is not None and w.trace == 0 and w.det == 12
                  and w.order() == 2)
    record(3, not wrong and witness_ok,
           f"no embedding for l in 11..47 (l != 13) under two choices of eps; (13, 6) witness {w and w.rows()}",
           time.perf_counter() - t, 30)


def _second_nonresidue(ell):
    sq = {x * x % ell for x in range(1, ell)}
    return [a for a in range(2, ell) if a not in sq][1]


def test_ac4_degree_sum():
    t = time.perf_counter()
    lat = SubgroupLattice(named("gl2@5"))
    subs = lat.all_subgroups()
    bad = []
    for members, gens in subs:
        g = lat.to_subgroup(members, gens)
        if degree_profile(g).degree_sum() != (5 ** 2 - 1) // 2:
            bad.append(g.order)
    count = 0
    for level in (7, 11, 13, 25, 49):
        ell = 7 if level == 49 else 5 if level == 25 else level
        n = 2 if level in (25, 49) else 1
        for kind in KINDS:
            fs = divisors(ell - 1) if kind == "SemiCartanPower" else [None]
            for f in fs:
                g = build_named(NamedSubgroupKind(kind, ell, f=f, n=n))
                count += 1
                want = (ell ** (2 * n) - ell ** (2 * (n - 1))) // 2
                if degree_profile(g).degree_sum() != want:
                    bad.append(g.label)
    record(4, not bad, f"{len(subs)} subgroups of GL2(F5) and {count} named groups at N in 7,11,13,25,49; "
                       f"failures {bad}", time.perf_counter() - t, 60)


@pytest.mark.xfail(strict=True, reason="admissible subgroups of C+_ns(l) below (l^2-1)/12 exist; see README")
def test_ac5_nonsplit_bound():
    t = time.perf_counter()
    violators, filtered = [], []
    for ell in (11, 17, 19):
        bound = Fraction(ell * ell - 1, 12)
        for row in min_degree_scan(enumerate_subgroups_cns_plus(ell), ell, standard_filter):
            if row.min_degree < bound:
                (filtered if row.excluded else violators).append((row.group_label, row.min_degree))
    for label, d in filtered:
        print(f"  filtered-out violator {label}: min degree {d}")
    for label, d in violators:
        print(f"  admissible violator {label}: min degree {d}")
    record(5, not violators, f"{len(violators)} admissible violators {violators}; "
                             f"{len(filtered)} filtered-out violators reported", time.perf_counter() - t, 120)


def test_ac5_diagnostic_tame_inertia():
    """Not an acceptance criterion: the bound does hold once the tame-inertia condition is imposed."""
    for ell in (11, 17, 19):
        bound = Fraction(ell * ell - 1, 12)
        for g in enumerate_subgroups_cns_plus(ell):
            if admissibility(g).admissible and tame_inertia_compatible(g, ell):
                assert degree_profile(g).min_degree >= bound, g.label


def test_ac6_tower():
    t = time.perf_counter()
    bad, checked = [], 0
    for ell in (11, 13):
        for g in enumerate_subgroups_cns_plus(ell):
            big = full_preimage(g, ell * ell)
            assert reduce_group(big, ell) == g
            lo = set(degree_profile(g, ell).degrees)
            hi = degree_profile(big, ell * ell).degrees
            checked += 1
            if not all(d % (ell * ell) == 0 and d // (ell * ell) in lo for d in hi):
                bad.append(g.label)
    record(6, not bad, f"{checked} full preimages at l^2 for l in 11,13; failures {bad}",
           time.perf_counter() - t, 120)


def test_ac7_borel_17():
    t = time.perf_counter()
    table = bundled_table()
    mins = set()
    for rec in table:
        if rec.ell == 17 and rec.image_class is ImageClass.BOREL:
            g = rec.group()
            if admissibility(g).admissible:
                mins.add(degree_profile(g).min_degree)
    report = classify(17, 1, table)
    steps = [s for s in report.trace if s.image_class is ImageClass.BOREL]
    dkm = any(s.rule_id == "dkm_x1_17_degree4" and s.outcome is Outcome.ELIMINATES for s in steps)
    rr8 = any(s.rule_id == "riemann_roch" and s.witnesses.get("degree") == 8
              and s.outcome is Outcome.ELIMINATES for s in steps)
    ok = mins == {4, 8} and dkm and rr8 and not report.surviving_j_invariants
    record(7, ok, f"min degrees {sorted(mins)}; degree 4 by DKM: {dkm}; degree 8 vs genus 5: {rr8}",
           time.perf_counter() - t, 60)


def test_ac8_theorem():
    t = time.perf_counter()
    reports = classify_range(primes_between(8, 37), 1, bundled_table())
    surv = {(s.ell, s.j): s.tag for r in reports for s in r.surviving_j_invariants}
    want = {(37, Fraction(7 * 11 ** 3)): "isolation known",
            (37, Fraction(-7 * 137 ** 3 * 2083 ** 3)): "open"}
    others_empty = all(not r.surviving_j_invariants for r in reports if r.ell != 37)
    cited = all(s.citations or s.witnesses for r in reports for s in r.trace)
    record(8, surv == want and others_empty and cited,
           f"survivors {sorted((e, str(j), tag) for (e, j), tag in surv.items())}",
           time.perf_counter() - t, 300)


def test_ac9_exceptional_13():
    t = time.perf_counter()
    table = bundled_table()
    recs = [r for r in table if r.ell == 13 and r.image_class is ImageClass.EXCEPTIONAL]
    degrees = sorted({d for r in recs for d in degree_profile(r.group()).degrees})
    report = classify(13, 1, table)
    elim = [s for s in report.trace if s.rule_id == "x1_13_exceptional_degree"]
    ok = (len({r.j for r in recs}) == 3 and min(degrees) > 3 and len(elim) == 3
          and all(s.outcome is Outcome.ELIMINATES and s.witnesses["genus"] == 2 for s in elim))
    record(9, ok, f"3 exceptional j-invariants, degrees {degrees} all > 3, genus 2",
           time.perf_counter() - t, 30)
