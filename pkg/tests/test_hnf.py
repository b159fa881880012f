import math

import pytest
from hypothesis import given, settings, strategies as st

from fincomm.hnf import IntLattice, xgcd
from oracles import bounded_members, euclid_basis, euclid_member, in_rational_span

vec5 = st.lists(st.integers(-3, 3), min_size=5, max_size=5)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g == math.gcd(a, b) and s * a + t * b == g


def test_small_examples():
    lat = IntLattice.span(2, [(2, -2), (-4, 4)])
    assert lat.rank == 1 and lat.basis() == [(2, -2)]
    assert (-2, 2) in lat and (-1, 1) not in lat
    lat = IntLattice.span(2, [(4, 0), (6, 0), (0, 3)])
    assert lat.basis() == [(2, 0), (0, 3)]
    empty = IntLattice(3)
    assert (0, 0, 0) in empty and (1, 0, 0) not in empty
    with pytest.raises(ValueError):
        empty.add((1, 2))
    with pytest.raises(ValueError):
        empty.express((0, 0, 0))


@settings(max_examples=200)
@given(st.lists(vec5, max_size=5), st.lists(vec5, min_size=1, max_size=4))
def test_membership_matches_oracles(gens, targets):
    lat = IntLattice.span(5, gens)
    assert lat.is_hnf()
    basis = euclid_basis(gens, 5)
    assert lat.rank == len(basis)
    for t, oracle in zip(targets, bounded_members(gens, targets, bound=3)):
        got = t in lat
        assert got == euclid_member(basis, t)
        assert oracle in (got, None)
        if got:
            assert in_rational_span(gens, t)


@settings(max_examples=200)
@given(st.lists(vec5, min_size=1, max_size=5), st.data())
def test_express_reconstructs(gens, data):
    lat = IntLattice.span(5, gens, track=True)
    coeffs = data.draw(st.lists(st.integers(-4, 4), min_size=len(gens), max_size=len(gens)))
    target = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(5)]
    combo = lat.express(target)
    assert combo is not None
    assert [sum(c * gens[j][i] for j, c in combo.items()) for i in range(5)] == target
    # every basis row is the combination it records
    for row, rc in zip(lat.rows, lat.combos):
        assert [sum(c * gens[j][i] for j, c in rc.items()) for i in range(5)] == row


@given(st.lists(vec5, max_size=5))
def test_add_reports_growth(gens):
    lat = IntLattice(5)
    for g in gens:
        before = [tuple(b) for b in lat.basis()]
        member = tuple(g) in lat
        assert lat.add(g) == (not member)
        if member:
            assert lat.basis() == before


@given(st.lists(vec5, max_size=5))
def test_hnf_is_canonical(gens):
    a = IntLattice.span(5, gens)
    b = IntLattice.span(5, list(reversed(gens)) + [[x + y for x, y in zip(*gens[:2])]]
                        if len(gens) >= 2 else gens)
    assert a.basis() == b.basis()
