"""Spec parsing, serialization, CSV output."""

from __future__ import annotations

import io
import json

import numpy as np
import pytest

from cayleywalk import (HypercubeGroup, LineGroup, SpecError, WalkState,
                        canonicalize_line_coin, check_symmetry_relation,
                        dump_json, dump_state, hadamard_coin, parse_coin_spec,
                        parse_group_spec, parse_state_spec, parse_symmetry_spec,
                        symmetry_to_spec, transform_coin, write_distribution_csv)
from cayleywalk.linalg import hadamard_matrix, rotation_matrix
from cayleywalk.specs import (dump_complex, dump_element, parse_automorphism_spec,
                              parse_complex, parse_element, parse_line_params,
                              parse_matrix)
from cayleywalk.walk import WalkInstance, evolve


def test_parse_complex_forms():
    assert parse_complex(2) == 2.0 + 0j
    assert parse_complex({"re": 1.0, "im": -2.0}) == 1.0 - 2.0j
    assert parse_complex([0.5, 0.25]) == 0.5 + 0.25j
    assert parse_complex("1+2i") == 1.0 + 2.0j
    assert parse_complex("-i") == -1j
    assert parse_complex(1.5 - 0.5j) == 1.5 - 0.5j
    with pytest.raises(SpecError):
        parse_complex("one")


def test_complex_roundtrip():
    z = 0.3 - 0.7j
    assert parse_complex(dump_complex(z)) == z


def test_parse_element_forms():
    line = LineGroup()
    assert parse_element(line, -3) == -3
    assert parse_element(line, "-3") == -3
    cube = HypercubeGroup(3)
    assert parse_element(cube, [1, 0, 1]) == (1, 0, 1)
    assert parse_element(cube, "(1,0,1)") == (1, 0, 1)
    assert dump_element((1, 0, 1)) == [1, 0, 1]
    assert dump_element(-3) == -3


def test_parse_matrix_checks_shape():
    with pytest.raises(SpecError):
        parse_matrix([[1, 0]], 2)
    mat = parse_matrix([[0, 1], [1, 0]], 2)
    assert mat.dtype == complex


def test_group_shorthands():
    assert parse_group_spec("line").kind == "line"
    assert parse_group_spec("halfline").chi is None
    assert parse_group_spec("cyclic:8").order == 8
    assert parse_group_spec("lattice:2:6").order == 36
    assert parse_group_spec("hypercube:4").coin_dim == 4
    group = parse_group_spec({"kind": "cyclic", "N": 8, "generators": [1]})
    assert group.chi == 8
    with pytest.raises(SpecError):
        parse_group_spec("moebius")


def test_coin_specs():
    group = LineGroup()
    named = parse_coin_spec(group, "hadamard")
    assert np.allclose(named.matrix_at(0), hadamard_matrix())
    rot = parse_coin_spec(group, "rotation:0.5")
    assert np.allclose(rot.matrix_at(0), rotation_matrix(0.5))
    mat = parse_coin_spec(group, {"kind": "uniform_matrix",
                                  "matrix": [[0, 1], [1, 0]]})
    assert mat.space_homogeneous
    table = parse_coin_spec(group, {
        "kind": "rule_table",
        "default": [[1, 0], [0, 1]],
        "entries": [{"n": 0, "matrix": [[0, 1], [1, 0]]}]})
    assert np.allclose(table.matrix_at(0), np.array([[0, 1], [1, 0]]))
    assert np.allclose(table.matrix_at(2), np.eye(2))


def test_coin_spec_rejects_unknown():
    with pytest.raises(SpecError):
        parse_coin_spec(LineGroup(), "biased")


def test_state_shorthand_and_records():
    group = LineGroup()
    state = parse_state_spec(group, "0:(1,0)")
    assert state.amplitude(0, 0) == pytest.approx(1.0)
    cube = HypercubeGroup(3)
    state = parse_state_spec(cube, "(0,1,0):(1,0,0)")
    assert state.support() == [(0, 1, 0)]
    records = parse_state_spec(group, [
        {"x": 0, "c": 0, "re": 1.0, "im": 0.0},
        {"x": 2, "c": 1, "re": 0.0, "im": 1.0}], normalize=True)
    assert records.norm() == pytest.approx(1.0)


def test_state_dump_roundtrip():
    group = LineGroup()
    state = parse_state_spec(group, "0:(0.6,0.8i)")
    again = parse_state_spec(group, dump_state(state), normalize=False)
    assert state.distance(again) < 1e-12


def test_symmetry_spec_families():
    group = LineGroup()
    coin = hadamard_coin(group)
    start = parse_state_spec(group, "0:(1,0)")
    specs = [
        {"family": "time_homog", "epsilon": [0, 1]},
        {"family": "space_homog", "character": {"kind": "exp_linear", "phi": 0.4}},
        {"family": "full_homog", "epsilon": -1,
         "character": {"kind": "sign", "mask": 1}},
        {"family": "general", "U0": [[0, 1], [1, 0]], "default": 1},
    ]
    for spec in specs:
        t, dressing = parse_symmetry_spec(group, spec)
        assert dressing is None
        report = check_symmetry_relation(coin, start, t, n_max=10)
        assert report.passed, (spec, report)


def test_symmetry_spec_generalized():
    group = LineGroup()
    t, _ = parse_symmetry_spec(group, {
        "family": "generalized",
        "perm": {"shift": 0, "perm": [1, 0]},
        "inner": {"family": "full_homog", "epsilon": 1, "Uprime": [1, -1]},
    })
    coin = hadamard_coin(group)
    start = parse_state_spec(group, "0:(1,0)")
    report = check_symmetry_relation(coin, start, t, n_max=10)
    assert report is not None


def test_corrupt_phase_produces_dressing():
    group = LineGroup()
    t, dressing = parse_symmetry_spec(group, {
        "family": "time_homog", "epsilon": [0, 1],
        "corrupt_phase": {"n": 2, "x": 0, "c": 0}})
    assert dressing is not None
    coin = hadamard_coin(group)
    start = parse_state_spec(group, "0:(1,0)")
    report = check_symmetry_relation(coin, start, t, n_max=8, dressing=dressing)
    assert not report.passed


def test_canonicalization_spec_roundtrip():
    group = LineGroup()
    psi, t = canonicalize_line_coin(hadamard_matrix(), group)
    spec = symmetry_to_spec(t)
    parsed, _ = parse_symmetry_spec(group, spec)
    coin = hadamard_coin(group)
    for t2 in (t, parsed):
        new_coin = transform_coin(t2, coin)
        assert np.abs(new_coin.matrix_at(1) - rotation_matrix(psi)).max() < 1e-12
    assert json.loads(dump_json(spec))["family"] == "full_homog"


def test_automorphism_spec():
    group = LineGroup()
    a = parse_automorphism_spec(group, {"shift": 2, "perm": [1, 0]})
    assert a.apply_element(3) == -1


def test_line_params_spec():
    p = parse_line_params({"named": "hadamard"})
    assert p.psi == pytest.approx(np.pi / 4)
    q = parse_line_params({"omega": [0, 1], "mu": 1, "nu": 1, "psi": 0.3})
    assert q.omega == 1j


def test_csv_output_is_deterministic():
    group = HypercubeGroup(2)
    coin = parse_coin_spec(group, "grover")
    start = parse_state_spec(group, "(0,0):(1,0)")
    history = evolve(WalkInstance(group, coin, start), 3)
    a, b = io.StringIO(), io.StringIO()
    write_distribution_csv(a, group, history)
    write_distribution_csv(b, group, history)
    assert a.getvalue() == b.getvalue()
    lines = a.getvalue().splitlines()
    assert lines[0] == "step,x,probability"
    assert lines[1].startswith('0,"(0,0)",')


def test_line_csv_labels_are_bare_integers():
    group = LineGroup()
    coin = hadamard_coin(group)
    start = parse_state_spec(group, "0:(1,0)")
    history = evolve(WalkInstance(group, coin, start), 1)
    buf = io.StringIO()
    write_distribution_csv(buf, group, history)
    assert buf.getvalue().splitlines()[1] == "0,0,1"


def test_dump_json_is_sorted():
    text = dump_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
