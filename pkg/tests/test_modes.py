import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cdr_engine.modes import (
    Grading,
    Mode,
    SpeciesError,
    StateParseError,
    StateVector,
    apply_mode,
    beta,
    bghost,
    cghost,
    dumps_state,
    fermion_count,
    format_state,
    gamma,
    grading_of,
    monomial_from_json,
    parse_state,
    state_from_json,
)
from cdr_engine.selftest import bracket_expected, random_mode, random_state

VAC = StateVector.vacuum()


def test_vacuum_annihilators():
    for n in range(0, 4):
        assert not apply_mode(beta(1, n), VAC)
        assert not apply_mode(bghost(1, n), VAC)
    for n in range(1, 4):
        assert not apply_mode(gamma(2, n), VAC)
        assert not apply_mode(cghost(2, n), VAC)
    assert apply_mode(gamma(1, 0), VAC) == StateVector.from_modes([gamma(1, 0)])


def test_basic_contractions():
    assert apply_mode(beta(1, 0), StateVector.from_modes([gamma(1, 0)])) == VAC
    assert apply_mode(gamma(1, 1), StateVector.from_modes([beta(1, -1)])) == -VAC
    assert apply_mode(bghost(1, 0), StateVector.from_modes([cghost(1, 0)])) == VAC
    v = StateVector.from_modes([gamma(1, -2), gamma(2, 0)])
    assert apply_mode(beta(1, 2), v) == StateVector.from_modes([gamma(2, 0)])


def test_fermions_square_to_zero():
    c = StateVector.from_modes([cghost(1, 0)])
    assert not apply_mode(cghost(1, 0), c)
    bc = StateVector.from_modes([bghost(1, -1), cghost(1, 0)])
    cb = StateVector.from_modes([cghost(1, 0), bghost(1, -1)])
    assert bc == -cb


@given(st.integers(0, 10 ** 6))
def test_relations_random(seed):
    rng = random.Random(seed)
    v = random_state(rng)
    for _ in range(20):
        x = random_mode(rng, span=5, creation=False)
        y = random_mode(rng, span=5, creation=False)
        if rng.random() < 0.5:
            y = Mode(x.partner().kind, x.species, -x.index)
        s = -1 if x.odd and y.odd else 1
        lhs = apply_mode(x, apply_mode(y, v)) - apply_mode(y, apply_mode(x, v)) * s
        assert lhs == v * bracket_expected(x, y)


def test_species_checked():
    with pytest.raises(SpeciesError):
        apply_mode(beta(3, -1), VAC, rank=2)


def test_grading():
    v = StateVector.from_modes([beta(1, -1), gamma(2, -2), cghost(1, 0)])
    assert grading_of(v) == Grading(3, 1, -2)
    assert grading_of(v + VAC) == "inhomogeneous"
    assert fermion_count(v) == v


def test_parse_examples():
    v = parse_state("2 b[1,-1] g[2,0]^3 |0> - 1/2 C[1,0]|0>")
    assert v == StateVector.from_modes([beta(1, -1)] + [gamma(2, 0)] * 3, 2) \
        - StateVector.from_modes([cghost(1, 0)], Fraction(1, 2))
    assert parse_state("|0>") == VAC
    assert parse_state("β[1,-1]|0>") == parse_state("b[1,-1]|0>")
    # reordering fermions picks up a sign
    assert parse_state("C[1,0] B[1,-1]|0>") == -parse_state("B[1,-1] C[1,0]|0>")


@pytest.mark.parametrize("bad, span", [("x[1,0]|0>", (0, 1)), ("b[1,-1]", (0, 7)),
                                       ("|0> b[1,-1]", (4, 11)), ("b[0,-1]|0>", (0, 7))])
def test_parse_errors_report_span(bad, span):
    with pytest.raises(StateParseError) as exc:
        parse_state(bad)
    assert exc.value.span == span


@given(st.integers(0, 10 ** 6))
def test_text_and_json_round_trip(seed):
    v = random_state(random.Random(seed))
    assert parse_state(format_state(v)) == v if v else True
    assert state_from_json(dumps_state(v)) == v


def test_json_rejects_non_canonical():
    with pytest.raises(ValueError):
        monomial_from_json([{"kind": "gamma", "species": 1, "index": 0, "power": 1},
                            {"kind": "beta", "species": 1, "index": -1, "power": 1}])
