from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isopoint.curves import covering_degree, genus_bound, genus_bound_ok, invariants_x1
from isopoint.errors import OutOfScopeError
from isopoint.gl2_core import is_prime

from oracles import coset_genus_x1


@pytest.mark.parametrize("n,g", [(11, 1), (13, 2), (17, 5), (37, 40)])
def test_known_genera(n, g):
    assert invariants_x1(n).genus == g


@pytest.mark.parametrize("n", [5, 7, 9, 11, 13, 16, 17, 19, 25, 27, 37, 49])
def test_genus_matches_coset_oracle(n):
    g, mu, cusps = coset_genus_x1(n)
    inv = invariants_x1(n)
    assert (inv.genus, inv.index, inv.cusps) == (g, mu, cusps)


def test_small_level_rejected():
    with pytest.raises(OutOfScopeError):
        invariants_x1(4)


def test_integral_over_prime_powers():
    for p in [5, 7, 11, 13, 17, 19, 23, 29, 31, 37]:
        k = p
        while k <= 37 * 37:
            invariants_x1(k)
            k *= p


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_tower_monotone(ell):
    assert invariants_x1(ell * ell).genus > invariants_x1(ell).genus


@pytest.mark.parametrize("ell,bound,genus,margin", [(11, 5, 1, 4), (13, 7, 2, 5), (37, 57, 40, 17)])
def test_genus_bound_examples(ell, bound, genus, margin):
    r = genus_bound_ok(ell)
    assert r.ok and r.genus == genus and r.bound == bound and r.margin == margin


def test_genus_bound_all():
    for ell in range(5, 98):
        if is_prime(ell):
            assert genus_bound_ok(ell).ok
            assert invariants_x1(ell).genus < genus_bound(ell)


def test_covering_degree():
    assert covering_degree(5, 2, 1) == 25
    assert covering_degree(37, 3, 1) == 37 ** 4
    assert covering_degree(11, 2, 2) == 1
    with pytest.raises(ValueError):
        covering_degree(5, 1, 2)


@given(st.sampled_from([5, 7, 11, 37]), st.integers(1, 5), st.integers(1, 5), st.integers(1, 5))
def test_covering_multiplicative(ell, a, b, c):
    k, m, n = sorted((a, b, c))
    assert covering_degree(ell, n, m) * covering_degree(ell, m, k) == covering_degree(ell, n, k)


def test_to_dict():
    d = invariants_x1(37).to_dict()
    assert d == {"level": 37, "index": 684, "cusps": 36, "genus": 40, "bound": 57}
    assert genus_bound(13) == Fraction(7)
