"""Seeded invariant checks shared by ``cdr-engine selftest`` and the test suite.

Every check returns a :class:`CheckResult`; nothing here prints.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from .modes import Kind, Mode, StateVector, apply_mode
from .vertex import distinguished_states, nth_product, translate, virasoro_mode

DEFAULT_SEED = 20240601


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status} {self.name} ({self.cases} cases){extra}"


def random_mode(rng: random.Random, rank: int = 2, span: int = 3, creation: bool = True) -> Mode:
    kind = Kind(rng.randrange(4))
    species = rng.randint(1, rank)
    if creation:
        top = -1 if kind in (Kind.BETA, Kind.B) else 0
        return Mode(kind, species, rng.randint(top - span + 1, top))
    return Mode(kind, species, rng.randint(-span, span))


def random_state(rng: random.Random, rank: int = 2, terms: int = 3, max_modes: int = 3,
                 max_weight: Optional[int] = None) -> StateVector:
    """A random combination of normal-ordered monomials of bounded weight."""
    acc = StateVector()
    for _ in range(terms):
        modes = [random_mode(rng, rank) for _ in range(rng.randint(0, max_modes))]
        if max_weight is not None:
            while sum(m.weight for m in modes) > max_weight:
                modes.pop()
        coef = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        acc = acc + StateVector.from_modes(modes, coef)
    return acc


def bracket_expected(x: Mode, y: Mode, corrupt: bool = False) -> int:
    """Scalar value of ``[x, y]`` (graded) in the free beta-gamma-b-c algebra."""
    if x.species != y.species or x.index + y.index != 0:
        return 0
    table = {(Kind.BETA, Kind.GAMMA): 1, (Kind.GAMMA, Kind.BETA): -1,
             (Kind.B, Kind.C): 1, (Kind.C, Kind.B): 1}
    val = table.get((x.kind, y.kind), 0)
    return -val if corrupt else val


def check_relations(rng: random.Random, cases: int = 10000, span: int = 8, corrupt: bool = False) -> CheckResult:
    """``x_m y_n v -+ y_n x_m v = [x_m, y_n] v`` for random modes with ``|m|,|n| <= span``."""
    states = [random_state(rng, max_modes=3) for _ in range(40)]
    bad = 0
    first = ""
    for _ in range(cases):
        x = random_mode(rng, span=span, creation=False)
        y = random_mode(rng, span=span, creation=False)
        if rng.random() < 0.5:
            y = Mode(x.partner().kind, x.species, -x.index)
        v = rng.choice(states)
        sign = -1 if (x.odd and y.odd) else 1
        lhs = apply_mode(x, apply_mode(y, v)) - apply_mode(y, apply_mode(x, v)) * sign
        rhs = v * bracket_expected(x, y, corrupt)
        if lhs != rhs:
            bad += 1
            first = first or f"{x} {y} on {v}"
    return CheckResult("mode relations", bad == 0, cases, first)


def check_vacuum_translation(rng: random.Random, cases: int = 100) -> CheckResult:
    """Vacuum axioms, ``T|0> = 0`` and ``(TA)_(n) = -n A_(n-1)`` on random states."""
    vac = StateVector.vacuum()
    bad, first = 0, ""
    if translate(vac):
        bad, first = 1, "T|0> != 0"
    for _ in range(cases):
        A = random_state(rng, terms=2, max_modes=3, max_weight=5)
        B = random_state(rng, terms=2, max_modes=2, max_weight=3)
        ok = nth_product(A, -1, vac) == A
        ok &= all(not nth_product(A, n, vac) for n in range(0, 4))
        TA = translate(A)
        for n in range(-2, 4):
            ok &= nth_product(TA, n, B) == nth_product(A, n - 1, B) * (-n)
        if not ok:
            bad += 1
            first = first or f"A = {A}"
    return CheckResult("vacuum and translation", bad == 0, cases, first)


def check_virasoro(rng: random.Random, cases: int = 30) -> CheckResult:
    """``L_(1)`` grades, ``L_(1)L = 2L``, ``L_(2)L = L_(3)L = 0``, ``Q_(0)G = L`` in rank 2."""
    D = distinguished_states(2)
    ok = nth_product(D.L, 1, D.L) == D.L * 2
    ok &= not nth_product(D.L, 2, D.L) and not nth_product(D.L, 3, D.L)
    ok &= nth_product(D.L, 0, D.L) == translate(D.L)
    ok &= D.d(D.G) == D.L
    bad = 0 if ok else 1
    for _ in range(cases):
        modes = [random_mode(rng) for _ in range(rng.randint(0, 3))]
        while sum(m.weight for m in modes) > 4:
            modes.pop()
        v = StateVector.from_modes(modes)
        if not v:
            continue
        w = sum(m.weight for m in modes)
        if virasoro_mode(v, 0, 2) != v * w:
            bad += 1
    return CheckResult("virasoro data", bad == 0, cases + 4)


def check_series(rng: random.Random, cases: int = 50, order: int = 12) -> CheckResult:
    from .series import TruncatedSeries1, comp_invert1, compose1

    bad = 0
    for _ in range(cases):
        coeffs = [0, Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))]
        coeffs += [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(order - 1)]
        f = TruncatedSeries1.from_list(coeffs, order)
        g = comp_invert1(f)
        x = TruncatedSeries1.variable(order)
        if compose1(f, g) != x or compose1(g, f) != x:
            bad += 1
    return CheckResult("series inversion", bad == 0, cases)


def check_coordinates(rng: random.Random, cases: int = 10, order: int = 6) -> CheckResult:
    from .coordinates import compose2, identity2, invert2, random_transform2, unit_factor

    bad = 0
    for _ in range(cases):
        t1, t2, t3 = (random_transform2(order, rng) for _ in range(3))
        ok = compose2(t1, invert2(t1)) == identity2(order)
        ok &= compose2(compose2(t1, t2), t3) == compose2(t1, compose2(t2, t3))
        u12 = unit_factor(compose2(t1, t2), 1, 0)
        ok &= u12 == t2.apply(unit_factor(t1, 1, 0)) * unit_factor(t2, 1, 0)
        bad += not ok
    return CheckResult("bidisc automorphisms", bad == 0, cases)


def check_transforms(order: int = 6, cutoff: int = 6) -> CheckResult:
    """Identity and scaling, where the field change is linear."""
    from .coordinates import CoordTransform1, verify_tilde_ope, verify_virasoro_invariance

    bad = 0
    for t in (CoordTransform1.identity(order), CoordTransform1.from_coefficients([Fraction(3, 2)], order)):
        bad += not verify_tilde_ope(t, cutoff).passed
        bad += not verify_virasoro_invariance(t, cutoff).passed
    return CheckResult("linear coordinate changes", bad == 0, 4)


def check_monoids(N_max: int = 6) -> CheckResult:
    from .monoid import an_chart, an_monoid, etale_check, groupify, membership

    bad = 0
    for N in range(2, N_max + 1):
        Q = an_monoid(N)
        bad += groupify(Q).cokernel.torsion != (N,)
        bad += not etale_check(an_chart(N)).etale
        for x in range(2 * N + 1):
            for y in range(2 * N + 1):
                bad += membership(Q, (x, y))[0] != ((x - y) % N == 0)
    return CheckResult("A_N monoids", bad == 0, N_max - 1)


def check_clifford() -> CheckResult:
    from .monoid import clifford_pairing

    vac = StateVector.vacuum()
    bad = 0
    for (a, b), ope in clifford_pairing().items():
        want = {0: vac} if (a, b) in (("dp", "dp*"), ("dq", "dq*")) else {}
        bad += ope.nonzero() != want
    return CheckResult("clifford pairing", bad == 0, 4)


def check_character() -> CheckResult:
    from .character import formula_length, minimal_generators, partitions_at_most, predicted_generator_count

    ok = formula_length(2, 2) == 27 and formula_length(3, 2) == 27 and partitions_at_most(2, 3) == 2
    for N in (2, 3):
        for r in (1, 2):
            g = minimal_generators(N, r)
            ok &= g.stable and g.count == predicted_generator_count(N, r)
    return CheckResult("character oracle", bool(ok), 4)


def run_all(seed: int = DEFAULT_SEED, corrupt_relation: bool = False,
            progress: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    rng = random.Random(seed)
    checks = [
        lambda: check_relations(rng, cases=2000, corrupt=corrupt_relation),
        lambda: check_vacuum_translation(rng, cases=30),
        lambda: check_virasoro(rng),
        lambda: check_series(rng, cases=20),
        lambda: check_coordinates(rng, cases=5),
        lambda: check_transforms(),
        lambda: check_monoids(),
        check_clifford,
        check_character,
    ]
    out = []
    for c in checks:
        res = c()
        out.append(res)
        if progress:
            progress(res)
    return out
