from __future__ import annotations

import itertools
import json
import random
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensor_ideals.errors import PreconditionError, SchemaError
from tensor_ideals.mf import (
    MatrixFactorization,
    absorption_check,
    find_iso_witnesses,
    mf_from_dict,
    mf_iso_check,
    mf_tensor_hat,
    mf_to_dict,
    mf_validate,
    trivial_pair,
)
from tensor_ideals.poly import Poly, PolyMatrix, parse_poly
from tensor_ideals.randomgen import random_mf

DATA = Path(__file__).parent / "data"
x, y = Poly.var("x"), Poly.var("y")


def load(name: str) -> MatrixFactorization:
    return mf_from_dict(json.loads((DATA / name).read_text()))


def M(rows) -> PolyMatrix:
    return PolyMatrix([[parse_poly(e) if isinstance(e, str) else e for e in r] for r in rows])


def test_validate_examples():
    assert mf_validate(load("mf_x.json")).ok
    f = parse_poly("x^3 + x*y")
    unit, other = trivial_pair(f)
    assert mf_validate(unit).ok and mf_validate(other).ok
    assert mf_validate(load("mf_jordan.json")).ok


def test_validate_reports_offending_entry():
    report = mf_validate(load("mf_bad.json"))
    assert not report.ok
    assert "phi_psi[0][1]" in report.failures["phi_psi"][0]


def test_dimension_mismatch_is_a_schema_error():
    with pytest.raises(SchemaError):
        MatrixFactorization(PolyMatrix.identity(2), PolyMatrix.identity(1), x)
    with pytest.raises(SchemaError):
        MatrixFactorization(M([["x", "1"]]), M([["x", "1"]]), x)
    with pytest.raises(SchemaError):
        mf_from_dict({"variables": ["x"], "potential": "y", "phi": [["1"]], "psi": [["y"]]})


def test_tensor_of_x_and_y_reproduces_blocks():
    t = mf_tensor_hat(load("mf_x.json"), load("mf_y.json"))
    assert t.phi == M([["x", "y"], ["-y", "x"]])
    assert t.psi == M([["x", "-y"], ["y", "x"]])
    assert t.potential == parse_poly("x^2 + y^2")
    assert mf_validate(t).ok


def test_tensor_with_trivial_factorization():
    unit_g, _ = trivial_pair(y**2)
    t = mf_tensor_hat(load("mf_x.json"), unit_g)
    assert t.size == 2 and mf_validate(t).ok
    assert t.phi == M([["x", "1"], ["-y^2", "x"]])


def test_overlapping_variables_are_rejected():
    with pytest.raises(PreconditionError):
        mf_tensor_hat(load("mf_x.json"), load("mf_jordan.json"))


def test_iso_check_examples():
    a = load("mf_x.json")
    I = PolyMatrix.identity(1)
    assert mf_iso_check(a, a, I, I)
    X = M([["x"]])
    assert not mf_iso_check(a, a, X, X)  # determinant x is not a unit
    with pytest.raises(PreconditionError):
        mf_iso_check(a, load("mf_y.json"), I, I)


def test_iso_check_non_unit_witness_that_intertwines():
    a = load("mf_jordan.json")
    # scalar multiplication by x commutes with everything but is not invertible
    X = PolyMatrix.identity(2).scale(x)
    assert a.phi @ X == X @ a.phi
    assert not mf_iso_check(a, a, X, X)


@pytest.mark.parametrize("fixture", json.loads((DATA / "absorption_fixtures.json").read_text()), ids=lambda f: f["factorization"])
def test_absorption_fixtures(fixture):
    a = load(fixture["factorization"])
    g = parse_poly(fixture["g"])
    report = absorption_check(a, g, degree=fixture["degree"])
    assert report.ok, str(report)
    left, right = report.data["tensor"], report.data["target"]
    assert report.data["alpha"] == M(fixture["alpha"])
    assert report.data["beta"] == M(fixture["beta"])
    assert mf_iso_check(left, right, M(fixture["alpha"]), M(fixture["beta"]))


def test_hand_derived_absorption_witness():
    unit_g, _ = trivial_pair(y**2)
    left = mf_tensor_hat(load("mf_x.json"), unit_g)
    h = parse_poly("x^2 + y^2")
    right = MatrixFactorization(PolyMatrix.diag([1, h]), PolyMatrix.diag([h, 1]), h)
    alpha = M([["x", "1"], ["1", "0"]])
    beta = M([["1", "0"], ["x", "-1"]])
    # both sides equal [[x, 1], [h, 0]]
    assert right.phi @ alpha == beta @ left.phi == M([["x", "1"], ["x^2 + y^2", "0"]])
    assert alpha.det() == -1 and beta.det() == -1
    assert mf_iso_check(left, right, alpha, beta)


def test_degree_zero_is_a_bounded_failure():
    report = absorption_check(load("mf_x.json"), y**2, degree=0)
    assert not report.ok
    assert "degree <= 0" in report.failures["isomorphism_found"][0]


def test_no_constant_witness_exists_by_exhaustion():
    """Over constants the intertwining equation alone forces alpha to be singular."""
    unit_g, _ = trivial_pair(y**2)
    left = mf_tensor_hat(load("mf_x.json"), unit_g)
    first, second = trivial_pair(left.potential, 1)
    right = MatrixFactorization(
        PolyMatrix.direct_sum(first.phi, second.phi), PolyMatrix.direct_sum(first.psi, second.psi), left.potential
    )
    values = range(-1, 2)
    for entries in itertools.product(values, repeat=8):
        alpha = PolyMatrix([entries[0:2], entries[2:4]])
        beta = PolyMatrix([entries[4:6], entries[6:8]])
        assert not mf_iso_check(left, right, alpha, beta)
    assert find_iso_witnesses(left, right, degree=0) is None


def test_round_trip_through_json():
    a = load("mf_jordan.json")
    assert mf_from_dict(mf_to_dict(a)) == a


@given(st.integers(0, 2**32 - 1))
def test_tensor_of_random_factorizations_validates(seed):
    rng = random.Random(seed)
    a = random_mf(rng, ["x", "y"])
    b = random_mf(rng, ["z"])
    assert mf_validate(a).ok and mf_validate(b).ok
    t = mf_tensor_hat(a, b)
    assert mf_validate(t).ok
    assert t.potential == a.potential + b.potential
    assert t.size == 2 * a.size * b.size
    assert mf_tensor_hat(b, a).potential == t.potential
