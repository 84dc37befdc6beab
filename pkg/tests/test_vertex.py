import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from cdr_engine.modes import Kind, Mode, StateVector, bghost, cghost, gamma, parse_state
from cdr_engine.selftest import random_mode, random_state
from cdr_engine.vertex import (
    apply_bracket,
    chiral_differential_apply,
    commutator,
    distinguished_states,
    fermionic_charge_apply,
    gbinom,
    generator_state,
    lie_bracket,
    nth_product,
    ope_singular,
    translate,
    virasoro_mode,
)

VAC = StateVector.vacuum()


@pytest.mark.parametrize("a, b, pole", [
    (Kind.BETA, Kind.GAMMA, 1), (Kind.GAMMA, Kind.BETA, -1),
    (Kind.B, Kind.C, 1), (Kind.C, Kind.B, 1),
])
def test_generator_opes(a, b, pole):
    ope = ope_singular(generator_state(a, 1), generator_state(b, 1))
    assert ope.nonzero() == {0: VAC * pole}


def test_regular_pairs():
    for a, b in product(Kind, Kind):
        if {a, b} in ({Kind.BETA, Kind.GAMMA}, {Kind.B, Kind.C}):
            continue
        assert ope_singular(generator_state(a, 1), generator_state(b, 1)).is_zero()
    assert ope_singular(generator_state(Kind.BETA, 1), generator_state(Kind.GAMMA, 2)).is_zero()
    assert ope_singular(VAC, VAC).is_zero()


def test_gbinom_negative():
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 2) == 3
    assert gbinom(2, 3) == 0


def test_virasoro_data_rank2():
    D = distinguished_states(2)
    assert nth_product(D.L, 0, D.L) == translate(D.L)
    assert nth_product(D.L, 1, D.L) == D.L * 2
    assert not nth_product(D.L, 2, D.L)
    assert not nth_product(D.L, 3, D.L)
    assert D.d(D.G) == D.L


def _basis(max_weight, rank=2):
    modes = [Mode(k, i, n) for k in Kind for i in range(1, rank + 1)
             for n in range(-max_weight, 1) if Mode(k, i, n).weight >= (1 if k in (Kind.BETA, Kind.B) else 0)
             and not Mode(k, i, n).is_annihilator]
    out = {()}
    frontier = {()}
    for _ in range(3):
        nxt = set()
        for mono in frontier:
            for m in modes:
                cand = tuple(sorted(mono + (m,)))
                if sum(x.weight for x in cand) <= max_weight:
                    nxt.add(cand)
        out |= nxt
        frontier = nxt
    return out


def test_L0_grades_weight_four_basis():
    for mono in _basis(4):
        v = StateVector.from_modes(list(mono))
        if v:
            assert virasoro_mode(v, 0, 2) == v * sum(m.weight for m in mono)


def test_differential_and_charge():
    c0 = StateVector.from_modes([cghost(1, 0)])
    g0 = StateVector.from_modes([gamma(1, 0)])
    b1 = StateVector.from_modes([bghost(1, -1)])
    assert chiral_differential_apply(g0, 2) == c0
    assert fermionic_charge_apply(c0, 2) == c0
    assert fermionic_charge_apply(b1, 2) == -b1


@given(st.integers(0, 10 ** 6))
def test_differential_squares_to_zero(seed):
    v = random_state(random.Random(seed), max_modes=3)
    assert not chiral_differential_apply(chiral_differential_apply(v, 2), 2)


@given(st.integers(0, 10 ** 6))
def test_charge_matches_counting(seed):
    from cdr_engine.modes import fermion_count
    v = random_state(random.Random(seed), max_modes=3)
    assert fermionic_charge_apply(v, 2) == fermion_count(v)


def _homogeneous(rng):
    while True:
        v = StateVector.from_modes([random_mode(rng) for _ in range(rng.randint(1, 2))])
        if v and v.parity() is not None:
            return v


@given(st.integers(0, 10 ** 6))
def test_commutator_formula(seed):
    rng = random.Random(seed)
    A, B = _homogeneous(rng), _homogeneous(rng)
    v = random_state(rng, max_modes=2)
    m, k = rng.randint(-2, 2), rng.randint(-2, 2)
    assert commutator(A, m, B, k, v) == apply_bracket(lie_bracket(A, m, B, k), v)


@given(st.integers(0, 10 ** 6))
def test_translation_axiom(seed):
    rng = random.Random(seed)
    A = random_state(rng, terms=2, max_modes=2)
    B = random_state(rng, terms=2, max_modes=2)
    TA = translate(A)
    for n in range(-2, 3):
        assert nth_product(TA, n, B) == nth_product(A, n - 1, B) * (-n)
    assert nth_product(A, -1, VAC) == A


def test_ope_cli_example():
    ope = ope_singular(parse_state("b[1,-1]|0>"), parse_state("g[1,0]|0>"))
    assert ope.to_json() == [[1, [{"coef": "1/1", "modes": []}]]]
