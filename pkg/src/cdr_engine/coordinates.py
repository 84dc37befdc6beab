"""Coordinate transformations of the formal disc and bidisc, and field changes.

One variable: ``f(gamma) = a1 gamma + a2 gamma^2 + ...`` with ``a1 != 0``.
Two variables: pairs ``(rho_x, rho_y)`` with no constant terms, no pure-y
terms in ``rho_x``, no pure-x terms in ``rho_y`` and invertible linear part.

The transformed generating fields of the beta-gamma / b-c system are

    gamma~ = f(gamma)
    c~     = (gamma f'(gamma) / f(gamma)) c
    b~     = :(f(gamma)/gamma) g'(f(gamma)) b:
    beta~  = :g'(f(gamma)) beta: + ::g''(f(gamma)) f'(gamma) c: b:

with ``g`` the compositional inverse of ``f``.  Composite functions of
gamma are realised as polynomials in gamma_0 acting on the vacuum and all
products are the (-1)-products of the vertex algebra.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .modes import Kind, Mode, StateVector, gamma0_degree, state_to_json
from .series import (
    TruncatedSeries1,
    TruncatedSeries2,
    TruncationMismatch,
    comp_invert1,
    compose1,
    compose2 as _series_compose2,
    derive,
    unit_invert,
)
from .vertex import distinguished_states, generator_state, nth_product, ope_singular, translate


class ConstraintViolation(ValueError):
    """A coordinate transformation violates one of the defining constraints."""

    def __init__(self, constraint: str, detail: str = ""):
        super().__init__(f"{constraint}{': ' + detail if detail else ''}")
        self.constraint = constraint


# -- one variable ------------------------------------------------------------

class CoordTransform1:
    """A validated element of Aut^0 D: ``f(0) = 0``, ``f'(0) != 0``, with cached inverse."""

    __slots__ = ("f", "g")

    def __init__(self, f: TruncatedSeries1):
        if f.constant():
            raise ConstraintViolation("f(0) = 0", f"constant term {f.constant()}")
        if not f[1]:
            raise ConstraintViolation("f'(0) != 0", "linear coefficient is zero")
        self.f = f
        self.g = comp_invert1(f)

    @property
    def order(self) -> int:
        return self.f.order

    @classmethod
    def from_coefficients(cls, coeffs, order: Optional[int] = None) -> "CoordTransform1":
        """From ``[a1, a2, ...]`` (coefficients of gamma, gamma^2, ...)."""
        coeffs = [0] + list(coeffs)
        return cls(TruncatedSeries1.from_list(coeffs, order if order is not None else len(coeffs) - 1))

    @classmethod
    def identity(cls, order: int) -> "CoordTransform1":
        return cls(TruncatedSeries1.variable(order))

    def at_order(self, order: int) -> "CoordTransform1":
        """Same transform with ``f`` read as a polynomial and re-inverted at ``order``."""
        f = self.f.lift(order) if order >= self.order else self.f.truncate(order)
        return CoordTransform1(f)

    def compose(self, inner: "CoordTransform1") -> "CoordTransform1":
        """``self o inner``: first ``inner``, then ``self``."""
        return CoordTransform1(compose1(self.f, inner.f))

    def inverse(self) -> "CoordTransform1":
        return CoordTransform1(self.g)

    def __eq__(self, other):
        return isinstance(other, CoordTransform1) and self.f == other.f

    def __repr__(self):
        return f"CoordTransform1({self.f!r})"


def random_transform1(order: int, rng: random.Random, size: int = 3) -> CoordTransform1:
    a1 = 0
    while not a1:
        a1 = rng.randint(-size, size)
    coeffs = [Fraction(a1, rng.randint(1, size))]
    coeffs += [Fraction(rng.randint(-size, size), rng.randint(1, size)) for _ in range(order - 1)]
    return CoordTransform1.from_coefficients(coeffs, order)


# -- two variables -----------------------------------------------------------

class CoordTransform2:
    """A validated element of Aut^0 D^2 with its inverse ``(theta_x, theta_y)``."""

    __slots__ = ("rho_x", "rho_y", "theta_x", "theta_y")

    def __init__(self, rho_x, rho_y, theta_x, theta_y):
        self.rho_x, self.rho_y, self.theta_x, self.theta_y = rho_x, rho_y, theta_x, theta_y

    @property
    def order(self) -> int:
        return self.rho_x.order

    def __eq__(self, other):
        return isinstance(other, CoordTransform2) and (self.rho_x, self.rho_y) == (other.rho_x, other.rho_y)

    def __repr__(self):
        return f"CoordTransform2(rho_x={self.rho_x!r}, rho_y={self.rho_y!r})"

    def apply(self, f: TruncatedSeries2) -> TruncatedSeries2:
        """``rho(f) = f(rho_x, rho_y)``; a lower-order ``f`` uses ``rho`` truncated to match."""
        if f.order > self.order:
            raise ValueError("series order exceeds the transform order")
        return _series_compose2(f, self.rho_x.truncate(f.order), self.rho_y.truncate(f.order))


def check_constraints(rho_x: TruncatedSeries2, rho_y: TruncatedSeries2) -> None:
    if rho_x.order != rho_y.order:
        raise TruncationMismatch(f"orders differ: {rho_x.order} vs {rho_y.order}")
    if rho_x.constant():
        raise ConstraintViolation("a00 = 0", f"rho(x) has constant term {rho_x.constant()}")
    if rho_y.constant():
        raise ConstraintViolation("a'00 = 0", f"rho(y) has constant term {rho_y.constant()}")
    bad = [(i, j) for (i, j), v in rho_x.items() if i == 0]
    if bad:
        raise ConstraintViolation("a0i = 0", f"rho(x) has pure-y terms {bad}")
    bad = [(i, j) for (i, j), v in rho_y.items() if j == 0]
    if bad:
        raise ConstraintViolation("a'i0 = 0", f"rho(y) has pure-x terms {bad}")
    if not rho_x[1, 0]:
        raise ConstraintViolation("a10 != 0", "rho(x) has no linear x term")
    if not rho_y[0, 1]:
        raise ConstraintViolation("a'01 != 0", "rho(y) has no linear y term")


def _invert_stepwise(rho_x: TruncatedSeries2, rho_y: TruncatedSeries2):
    """Inverse pair solved degree by degree.

    With the linear part ``diag(a10, a'01)``, the degree-k part of
    ``rho(theta) = id`` reads ``a10 theta_x[k] + R_x[k] = 0`` where ``R_x``
    only involves lower-degree parts of theta; likewise for ``y``.
    """
    D = rho_x.order
    a10, b01 = rho_x[1, 0], rho_y[0, 1]
    hx = rho_x - TruncatedSeries2({(1, 0): a10}, D)
    hy = rho_y - TruncatedSeries2({(0, 1): b01}, D)
    tx = TruncatedSeries2({(1, 0): 1 / a10}, D)
    ty = TruncatedSeries2({(0, 1): 1 / b01}, D)
    for k in range(2, D + 1):
        rx = _series_compose2(hx, tx, ty)
        ry = _series_compose2(hy, tx, ty)
        tx = tx + TruncatedSeries2({key: -v / a10 for key, v in rx.items() if sum(key) == k}, D)
        ty = ty + TruncatedSeries2({key: -v / b01 for key, v in ry.items() if sum(key) == k}, D)
    return tx, ty


def validate2(rho_x: TruncatedSeries2, rho_y: TruncatedSeries2) -> CoordTransform2:
    """Check the five constraints and attach the stepwise inverse."""
    check_constraints(rho_x, rho_y)
    tx, ty = _invert_stepwise(rho_x, rho_y)
    return CoordTransform2(rho_x, rho_y, tx, ty)


def identity2(order: int) -> CoordTransform2:
    return validate2(TruncatedSeries2.x(order), TruncatedSeries2.y(order))


def compose2(t1: CoordTransform2, t2: CoordTransform2) -> CoordTransform2:
    """Map composition ``t1 o t2``: ``(x, y) -> rho1(rho2(x, y))``."""
    if t1.order != t2.order:
        raise TruncationMismatch(f"orders differ: {t1.order} vs {t2.order}")
    rx = _series_compose2(t1.rho_x, t2.rho_x, t2.rho_y)
    ry = _series_compose2(t1.rho_y, t2.rho_x, t2.rho_y)
    return validate2(rx, ry)


def invert2(t: CoordTransform2) -> CoordTransform2:
    return validate2(t.theta_x, t.theta_y)


def unit_factor(t: CoordTransform2, m: int, n: int) -> TruncatedSeries2:
    """The unit ``g_{m,n}`` with ``rho(x)^m rho(y)^n = x^m y^n g_{m,n}``.

    Dividing by ``x`` and ``y`` costs one degree, so the result has order
    ``t.order - 1``.  Negative exponents use the inverse unit.
    """
    ux = t.rho_x.divide_by(0)
    uy = t.rho_y.divide_by(1)
    px = ux ** m if m >= 0 else unit_invert(ux) ** (-m)
    py = uy ** n if n >= 0 else unit_invert(uy) ** (-n)
    return px * py


def log_ring_image(t: CoordTransform2, exponent: Tuple[int, int], f: TruncatedSeries2):
    """Image of ``((m, n), f)`` under the log-ring morphism: ``((m, n), g_{m,n} rho(f))``."""
    m, n = exponent
    g = unit_factor(t, m, n)
    return (m, n), g * t.apply(f).truncate(g.order)


def random_transform2(order: int, rng: random.Random, size: int = 3, density: float = 0.6) -> CoordTransform2:
    def coeff():
        return Fraction(rng.randint(-size, size), rng.randint(1, size))

    def nonzero():
        c = 0
        while not c:
            c = coeff()
        return c

    cx = {(1, 0): nonzero()}
    cy = {(0, 1): nonzero()}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if i + j < 2:
                continue
            if i >= 1 and rng.random() < density:
                cx[i, j] = coeff()
            if j >= 1 and rng.random() < density:
                cy[i, j] = coeff()
    return validate2(TruncatedSeries2(cx, order), TruncatedSeries2(cy, order))


# -- field changes -----------------------------------------------------------

def function_state(h: TruncatedSeries1, species: int = 1) -> StateVector:
    """``h(gamma_0)|0>`` for a series ``h`` (read through its truncation order)."""
    g0 = Mode(Kind.GAMMA, species, 0)
    terms = {}
    for k, v in h.coefficients().items():
        terms[((g0, k),) if k else ()] = v
    return StateVector(terms)


@dataclass
class TransformedFields:
    gamma_t: StateVector
    c_t: StateVector
    b_t: StateVector
    beta_t: StateVector
    working_order: int
    truncated: bool = False

    def as_dict(self) -> Dict[str, StateVector]:
        return {"gamma": self.gamma_t, "c": self.c_t, "b": self.b_t, "beta": self.beta_t}


def field_series(t: CoordTransform1, order: int) -> Dict[str, TruncatedSeries1]:
    """The composite series entering the field changes, exact through ``order``."""
    tt = t.at_order(order + 2)
    f, g = tt.f, tt.g
    df = derive(f)                       # order + 1
    f_over_g = f.shift_down()            # f/gamma, order + 1
    g1 = derive(g)                       # order + 1
    g2 = derive(g1)                      # order
    f_lo = f.truncate(order + 1)
    g1_f = compose1(g1, f_lo)
    g2_f = compose1(g2, f.truncate(order))
    u_c = (df * unit_invert(f_over_g)).truncate(order)     # gamma f'/f
    u_b = (f_over_g * g1_f).truncate(order)                 # (f/gamma) g'(f)
    return {
        "f": f.truncate(order),
        "u_c": u_c,
        "u_b": u_b,
        "g1_f": g1_f.truncate(order),
        "g2_f_df": (g2_f * df.truncate(order)),
    }


def transform_fields1(t: CoordTransform1, gamma0_cutoff: int, species: int = 1,
                      variant: str = "log") -> TransformedFields:
    """States of the transformed generators, with composites kept to gamma_0-degree ``gamma0_cutoff``.

    ``variant="log"`` uses the logarithmic fermion rules (``c ~ dgamma/gamma``);
    ``variant="plain"`` uses ``c~ = f' c`` and ``b~ = g'(f) b`` (``c ~ dgamma``)
    with the same ``beta~``, for comparison.
    """
    W = gamma0_cutoff
    s = field_series(t, W)
    gen = {k: generator_state(k, species) for k in Kind}
    if variant == "log":
        uc, ub = s["u_c"], s["u_b"]
    elif variant == "plain":
        uc, ub = derive(t.at_order(W + 1).f), s["g1_f"]
    else:
        raise ValueError(f"unknown variant {variant!r}")

    def times(h, state):
        return nth_product(function_state(h, species), -1, state, W)

    gamma_t = function_state(s["f"], species)
    c_t = times(uc, gen[Kind.C])
    b_t = times(ub, gen[Kind.B])
    hc = times(s["g2_f_df"], gen[Kind.C])
    beta_t = times(s["g1_f"], gen[Kind.BETA]) + nth_product(hc, -1, gen[Kind.B], W)
    fields = TransformedFields(gamma_t, c_t, b_t, beta_t, W)
    fields.truncated = any(v.truncated for v in fields.as_dict().values())
    return fields


def substitute(v: StateVector, images: Dict[Kind, StateVector], gamma0_cutoff: Optional[int] = None) -> StateVector:
    """Image of ``v`` under the map sending each generator to ``images[kind]``.

    Defined recursively by ``x_(m) A -> image(x)_(m) image(A)``, i.e. the
    vertex algebra morphism determined by the generator images.
    """
    from .vertex import uniform_index

    acc = StateVector()
    for mono, c in v.terms.items():
        cur = StateVector.vacuum()
        modes = [mode for mode, p in mono for _ in range(p)]
        for mode in reversed(modes):
            cur = nth_product(images[mode.kind], uniform_index(mode), cur, gamma0_cutoff)
        acc = acc + cur * c
    return acc


# -- verification ------------------------------------------------------------

def low_part(v: StateVector, through: int) -> StateVector:
    return StateVector({m: c for m, c in v.terms.items() if gamma0_degree(m) <= through})


_FIELD_NAMES = ("gamma", "c", "b", "beta")
# expected singular parts: {(A, B): {n: coefficient of |0>}}
EXPECTED_OPE = {("beta", "gamma"): {0: 1}, ("gamma", "beta"): {0: -1},
                ("c", "b"): {0: 1}, ("b", "c"): {0: 1}}


@dataclass
class OpeCheck:
    pair: Tuple[str, str]
    poles: Dict[int, StateVector]
    mismatches: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass
class TildeOpeReport:
    cutoff: int
    working_cutoff: int
    checks: List[OpeCheck]
    fields_truncated: bool

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[OpeCheck]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "check": "tilde_ope",
            "cutoff": self.cutoff,
            "working_cutoff": self.working_cutoff,
            "passed": self.passed,
            "truncation": {"fields_truncated": self.fields_truncated,
                           "compared_through_gamma0_degree": self.cutoff},
            "pairs": [{"pair": list(c.pair), "ok": c.ok,
                       "poles": [[n + 1, state_to_json(v)] for n, v in sorted(c.poles.items())],
                       "mismatches": [{"pole": n + 1, "detail": d} for n, d in c.mismatches]}
                      for c in self.checks],
        }


def verify_tilde_ope(t: CoordTransform1, gamma0_cutoff: int = 8, margin: int = 4,
                     variant: str = "log") -> TildeOpeReport:
    """OPE singular parts of all ordered pairs of transformed generators, compared to the free pattern.

    Composites are built to gamma_0-degree ``cutoff + margin`` and results are
    compared for gamma_0-degree ``<= cutoff``; the margin absorbs the degree
    lost to contractions with truncated composites.
    """
    W = gamma0_cutoff + margin
    fields = transform_fields1(t, W, variant=variant).as_dict()
    vac = StateVector.vacuum()
    checks = []
    for a in _FIELD_NAMES:
        for b in _FIELD_NAMES:
            ope = ope_singular(fields[a], fields[b], W)
            poles = {n: low_part(v, gamma0_cutoff) for n, v in ope.nonzero().items()}
            poles = {n: v for n, v in poles.items() if v}
            expected = EXPECTED_OPE.get((a, b), {})
            mism = []
            for n in sorted(set(poles) | set(expected)):
                want = vac * expected.get(n, 0)
                got = poles.get(n, StateVector())
                if got != want:
                    mism.append((n, f"got {got}, expected {want}"))
            checks.append(OpeCheck((a, b), poles, mism))
    return TildeOpeReport(gamma0_cutoff, W, checks, any(v.truncated for v in fields.values()))


@dataclass
class VirasoroReport:
    cutoff: int
    L: StateVector
    L_tilde: StateVector
    L_tilde_via_QG: StateVector

    @property
    def difference(self) -> StateVector:
        return self.L_tilde - self.L

    @property
    def passed(self) -> bool:
        return self.L_tilde == self.L

    @property
    def qg_passed(self) -> bool:
        return self.L_tilde_via_QG == self.L

    def to_json(self) -> dict:
        return {
            "check": "virasoro_invariance",
            "cutoff": self.cutoff,
            "passed": self.passed,
            "passed_via_QG": self.qg_passed,
            "difference": state_to_json(self.difference),
            "difference_via_QG": state_to_json(self.L_tilde_via_QG - self.L),
        }


def verify_virasoro_invariance(t: CoordTransform1, gamma0_cutoff: int = 8, margin: int = 4,
                               variant: str = "log") -> VirasoroReport:
    """Build ``L~ = :d(gamma~) beta~: + :d(c~) b~:`` and ``Q~_(0) G~`` and compare with ``L``."""
    W = gamma0_cutoff + margin
    fl = transform_fields1(t, W, variant=variant)
    L = distinguished_states(1).L
    Lt = nth_product(translate(fl.gamma_t), -1, fl.beta_t, W) + nth_product(translate(fl.c_t), -1, fl.b_t, W)
    Qt = nth_product(fl.beta_t, -1, fl.c_t, W)
    Gt = nth_product(fl.b_t, -1, translate(fl.gamma_t), W)
    LQG = nth_product(Qt, 0, Gt, W)
    return VirasoroReport(gamma0_cutoff, L, low_part(Lt, gamma0_cutoff), low_part(LQG, gamma0_cutoff))


def dumps_report(report) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2)
