"""Group layer: algebra, encoding, causal structure."""

from __future__ import annotations

import numpy as np
import pytest

from cayleywalk import (CyclicGroup, EncodingError, HypercubeGroup, LatticeGroup,
                        LineGroup, SpecError, brute_force_causal, make_group)


def all_groups():
    return [LineGroup(), CyclicGroup(8), CyclicGroup(8, generators=(1,)),
            LatticeGroup(2), LatticeGroup(2, period=6), HypercubeGroup(3)]


@pytest.mark.parametrize("group", all_groups(), ids=lambda g: g.describe()["kind"])
def test_group_axioms_sampled(group, rng):
    xs = group.random_elements(rng, 12)
    e = group.identity
    for x in xs:
        assert group.mul(x, e) == x
        assert group.mul(e, x) == x
        assert group.mul(x, group.inv(x)) == e
    for x, y in zip(xs, reversed(xs)):
        z = group.mul(x, y)
        assert group.validate(z) == z


@pytest.mark.parametrize("group", all_groups(), ids=lambda g: g.describe()["kind"])
def test_encode_decode_roundtrip(group, rng):
    for x in group.random_elements(rng, 12):
        assert group.decode(group.encode(x)) == x


@pytest.mark.parametrize("group", all_groups(), ids=lambda g: g.describe()["kind"])
def test_shift_rows_matches_mul(group, rng):
    xs = group.random_elements(rng, 8)
    rows = group.rows(xs)
    for idx, s in enumerate(group.generators):
        shifted = group.shift_rows(rows, idx)
        for row, x in zip(shifted, xs):
            assert group.decode(row) == group.mul(x, s)
        back = group.shift_rows(shifted, idx, adjoint=True)
        assert np.array_equal(back, rows)


@pytest.mark.parametrize("group", all_groups(), ids=lambda g: g.describe()["kind"])
def test_decompose_roundtrip(group, rng):
    for x in group.random_elements(rng, 12):
        xt, k = group.decompose(x)
        assert group.coset_index(xt) == 0
        assert group.mul(xt, group.pow_c0(k)) == x


def test_cyclic_causal_structure():
    causal = brute_force_causal(CyclicGroup(8))
    assert causal.subgroup == {0, 2, 4, 6}
    assert causal.chi == 2
    assert causal.nonseparating


def test_cyclic_single_generator_causal():
    group = CyclicGroup(8, generators=(1,))
    causal = brute_force_causal(group)
    assert causal.chi == 8
    assert causal.subgroup == {0}
    assert group.chi == 8


def test_hypercube_causal():
    causal = brute_force_causal(HypercubeGroup(2))
    assert causal.subgroup == {(0, 0), (1, 1)}
    assert causal.chi == 2


def test_torus_causal_even_and_odd():
    even = brute_force_causal(LatticeGroup(2, period=6))
    assert even.chi == 2
    assert len(even.subgroup) == 18
    odd = brute_force_causal(LatticeGroup(2, period=5))
    assert odd.chi == 1
    assert len(odd.subgroup) == 25


def test_declared_matches_brute_force():
    for group in [CyclicGroup(8), CyclicGroup(12, generators=(1,)),
                  HypercubeGroup(3), LatticeGroup(2, period=4)]:
        causal = brute_force_causal(group)
        assert group.chi == causal.chi
        assert group.nonseparating == causal.nonseparating


def test_coset_index_is_homomorphism(rng):
    group = LatticeGroup(2, period=6)
    for x, y in zip(group.random_elements(rng, 10), group.random_elements(rng, 10)):
        lhs = group.coset_index(group.mul(x, y))
        assert lhs == (group.coset_index(x) + group.coset_index(y)) % group.chi


def test_halfline_has_no_finite_coset_count():
    group = make_group("line", generators=(1,))
    assert group.chi is None
    assert group.coin_dim == 1


def test_make_group_factory():
    assert make_group("cyclic", N=8).order == 8
    assert make_group("hypercube", d=4).coin_dim == 4
    assert make_group("lattice", d=2).is_finite is False
    with pytest.raises(SpecError):
        make_group("dihedral")


def test_validate_rejects_garbage():
    group = CyclicGroup(8)
    with pytest.raises(SpecError):
        group.validate((1, 2))
    with pytest.raises(EncodingError):
        HypercubeGroup(3).validate((0, 1, 2))


def test_lattice_period_bounds():
    with pytest.raises(SpecError):
        LatticeGroup(2, period=2)


def test_sort_and_format():
    group = LatticeGroup(2, period=4)
    elems = sorted(group.elements(), key=group.sort_key)
    assert elems[0] == (0, 0)
    assert group.format_element((1, 3)) == "(1,3)"
    assert LineGroup().format_element(-4) == "-4"


def test_generator_index():
    group = LineGroup()
    assert group.generators[group.generator_index(1)] == 1
    assert group.generators[group.generator_index(-1)] == -1
    with pytest.raises(SpecError):
        group.generator_index(2)
