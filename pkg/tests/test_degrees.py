from fractions import Fraction

import numpy as np
import pytest

from isopoint.atlas import NamedSubgroupKind, build_named, enumerate_subgroups_cns_plus, named
from isopoint.degrees import degree_profile, exact_order_count, exact_order_mask, min_degree_scan, standard_filter
from isopoint.errors import IsopointError, NotClosedError, OutOfScopeError
from isopoint.gl2_core import Mat2, closure, full_preimage, orbit_labels, reduce_group, trivial_group
from isopoint.lattice import SubgroupLattice

from oracles import naive_point_degrees


def _expanded(prof):
    return sorted(e.degree for e in prof.entries for _ in range(e.count))


def test_gl2_f5():
    p = degree_profile(named("gl2@5"))
    assert [(e.degree, e.orbit_field_degree, e.cx, e.count) for e in p.entries] == [(12, 24, Fraction(1, 2), 1)]


def test_cns_plus_11():
    p = degree_profile(named("cns+@11"))
    assert p.min_degree == 60 and p.num_points() == 1


def test_borel_37():
    p = degree_profile(named("borel@37"))
    assert p.min_degree == 18
    e = p.entries[0]
    assert (e.orbit_field_degree, e.cx) == (36, Fraction(1, 2))


def test_trivial_group_degree_one():
    p = degree_profile(trivial_group(5))
    assert p.degrees == [1] and p.num_points() == 12


def test_errors():
    with pytest.raises(NotClosedError):
        degree_profile([Mat2.identity(5)])
    with pytest.raises(OutOfScopeError):
        degree_profile(trivial_group(8))
    with pytest.raises(OutOfScopeError):
        degree_profile(trivial_group(15))
    with pytest.raises(IsopointError):
        min_degree_scan([], 5)


@pytest.mark.parametrize("n", [5, 7, 9, 25])
def test_exact_order_count(n):
    assert int(exact_order_mask(n).sum()) == exact_order_count(n)


def test_all_subgroups_gl2_f5_against_oracle():
    lat = SubgroupLattice(named("gl2@5"))
    classes = lat.classes()
    assert len(classes) == 48
    for members, gens in classes:
        sub = lat.to_subgroup(members, gens)
        prof = degree_profile(sub)
        elems = [tuple(Mat2.from_code(c, 5).rows()) for c in sub.elements]
        assert _expanded(prof) == naive_point_degrees(elems, 5)
        assert prof.degree_sum() == 12


@pytest.mark.parametrize("group", ["borel@13", "cs+@11", "cns@7", "semicartan^3@13", "borel@5^2"])
def test_degrees_against_oracle(group):
    g = named(group)
    elems = [tuple(Mat2.from_code(c, g.n).rows()) for c in g.elements]
    assert _expanded(degree_profile(g)) == naive_point_degrees(elems, g.n)


def test_orbit_refinement():
    # every G-orbit is a disjoint union of H-orbits for H <= G
    big = named("borel@11")
    small = closure([Mat2(1, 1, 0, 1, 11), Mat2(4, 0, 0, 1, 11)], 11)
    assert small.is_subgroup_of(big)
    lb, ls = orbit_labels(big), orbit_labels(small)
    for lab in np.unique(ls):
        assert np.unique(lb[ls == lab]).size == 1


def test_tower_ratio_cns_11():
    g = named("cns+@11")
    big = full_preimage(g, 121)
    assert reduce_group(big, 11) == g
    hi, lo = degree_profile(big), degree_profile(g)
    assert all(d % 121 == 0 and d // 121 in lo.degrees for d in hi.degrees)


def test_scan_rows_and_filter():
    rows = min_degree_scan([named("cns+@11")], 11, standard_filter)
    assert rows[0].min_degree == 60 and not rows[0].excluded
    rows = min_degree_scan(enumerate_subgroups_cns_plus(11), 11, standard_filter)
    assert [r.group_label for r in rows] == sorted(r.group_label for r in rows)
    assert any(r.excluded for r in rows)
    assert min_degree_scan([trivial_group(5)], 5)[0].min_degree == 1


def test_csv_and_dict():
    p = degree_profile(named("gl2@5"))
    assert p.to_csv() == "degree,orbit_field_degree,cx,count\n12,24,1/2,1\n"
    assert p.to_dict()["min_degree"] == 12
