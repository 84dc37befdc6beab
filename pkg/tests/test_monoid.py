import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cdr_engine.monoid import (
    FinGenMonoid,
    MonoidHom,
    NotPointed,
    an_chart,
    an_log_differentials,
    an_monoid,
    clifford_pairing,
    compare_claimed_basis,
    etale_check,
    groupify,
    is_saturated,
    log_differentials,
    membership,
    parse_monoid,
    smoothness_check,
    standard_monoid,
)
from cdr_engine.modes import StateVector
from cdr_engine.smith import det, invariant_factors, matmul, smith_normal_form

matrices = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4)


@given(matrices)
def test_smith_certificate(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), 3))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(3) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz) and all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


def test_smith_small():
    assert invariant_factors([[3, 0], [0, 3], [1, 1]]) == [1, 3]
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]


@pytest.mark.parametrize("N", range(2, 9))
def test_an_groupification(N):
    gp = groupify(an_monoid(N))
    assert gp.group.rank == 2 and gp.group.torsion == ()
    assert gp.cokernel.torsion == (N,)
    v = etale_check(an_chart(N))
    assert v.etale and v.kernel.rank == 0 and v.cokernel.torsion == (N,)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_an_chart_in_positive_characteristic(N):
    assert not etale_check(an_chart(N), char=N).etale
    assert etale_check(an_chart(N), char=7).etale


@pytest.mark.parametrize("N", [2, 3, 4])
def test_membership_closed_form(N):
    Q = an_monoid(N)
    for x in range(4 * N + 1):
        for y in range(4 * N + 1):
            ok, wit = membership(Q, (x, y))
            assert ok == ((x - y) % N == 0)
            if ok:
                assert tuple(sum(c * g[i] for c, g in zip(wit, Q.generators)) for i in range(2)) == (x, y)


def test_membership_non_orthant():
    Q = FinGenMonoid([(1, -1), (1, 1)])
    assert membership(Q, (3, 1))[0]
    assert not membership(Q, (0, 1))[0]
    with pytest.raises(NotPointed):
        membership(FinGenMonoid([(1, 0), (-1, 0)]), (1, 0))


def test_saturation():
    assert is_saturated(an_monoid(4)).saturated
    v = is_saturated(FinGenMonoid([(2,), (3,)]))
    assert not v.saturated and v.counterexample == (1,)
    assert is_saturated(FinGenMonoid([(2, 0), (1, 1), (0, 2)])).saturated
    v2 = is_saturated(FinGenMonoid([(2, 0), (3, 0), (0, 1)]))
    assert not v2.saturated and v2.multiple == 2


def test_smoothness():
    torsion2 = FinGenMonoid.presented(1, [((2,), (0,))])
    assert groupify(torsion2).group.torsion == (2,)
    assert not smoothness_check(torsion2, 2).smooth
    assert smoothness_check(torsion2, 3).smooth
    assert smoothness_check(torsion2, 0).smooth
    assert smoothness_check(an_monoid(3), 3).smooth
    with pytest.raises(ValueError):
        smoothness_check(torsion2, 4)


def test_hom_validation_and_composition():
    with pytest.raises(ValueError):
        MonoidHom(standard_monoid(1), an_monoid(2), [[1], [0]])
    inc = an_chart(3)
    ident = MonoidHom.identity(standard_monoid(2))
    assert etale_check(ident.compose(inc)).etale
    assert etale_check(MonoidHom.identity(an_monoid(3))).cokernel.finite
    proj = MonoidHom(standard_monoid(2), standard_monoid(1), [[1, 1]])
    bad = etale_check(proj)
    assert not bad.etale and bad.kernel.rank == 1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15)
def test_etale_composes(seed):
    rng = random.Random(seed)
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    P = standard_monoid(1)
    f = MonoidHom(P, P, [[a]])
    g = MonoidHom(P, P, [[b]])
    comp = etale_check(g.compose(f))
    assert comp.cokernel.torsion_order == a * b
    assert comp.etale


def test_log_differentials():
    pres = log_differentials(an_monoid(3))
    assert pres.format_pullback()["d(3, 0)"] == "3 dgamma1/gamma1"
    assert pres.format_pullback()["d(1, 1)"] == "dgamma1/gamma1 + dgamma2/gamma2"
    assert compare_claimed_basis(an_monoid(2), [(1, 1), (-1, 1)])["generates_group"]
    assert not compare_claimed_basis(an_monoid(3), [(1, 1), (-1, 1)])["generates_group"]
    assert an_log_differentials(3).notes and not an_log_differentials(2).notes


def test_clifford_pairing():
    vac = StateVector.vacuum()
    pairs = {k: v.nonzero() for k, v in clifford_pairing().items()}
    assert pairs == {("dp", "dp*"): {0: vac}, ("dp", "dq*"): {},
                     ("dq", "dp*"): {}, ("dq", "dq*"): {0: vac}}


def test_literals_and_json():
    assert parse_monoid("gens=(3,0);(0,3);(1,1)").generators == an_monoid(3).generators
    assert parse_monoid("N2").generators == ((1, 0), (0, 1))
    with pytest.raises(ValueError):
        parse_monoid("(1,0);(1)")
    data = json.loads(json.dumps(etale_check(an_chart(3)).to_json()))
    assert data["cokernel"]["text"] == "Z/3"
