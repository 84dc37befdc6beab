"""n-th products, OPEs, translation and the distinguished states of Omega_N.

Internally every field uses the uniform convention ``Y(A, z) = sum A_(n) z^(-n-1)``.
For the generators this gives the translation table

    beta_(n) = beta_n,   gamma_(n) = gamma_{n+1},   b_(n) = b_n,   c_(n) = c_{n+1},

with generator states beta_{-1}|0>, gamma_0|0>, b_{-1}|0>, c_0|0>.

``A_(n) C`` for a monomial ``A = x_(m) A'`` (``x`` the leftmost generator mode)
is expanded with the associativity identity

    (x_(m) A')_(n) = sum_{j>=0} (-1)^j binom(m, j)
                     [ x_(m-j) A'_(n+j) - (-1)^m e A'_(m+n-j) x_(j) ]

(``e`` the Koszul sign of moving ``x`` past ``A'``), which terminates because
both inner products vanish once their weight would become negative.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from .modes import (
    Kind,
    Mode,
    Monomial,
    StateVector,
    VACUUM,
    apply_mode,
    apply_to_monomial,
    bghost,
    beta,
    cghost,
    gamma,
    gamma0_degree,
    monomial_parity,
    monomial_weight,
    state_to_json,
)

# weight of the generator state for each kind, and the offset mapping the
# uniform index (n) to the weight-adapted label: label = n + offset
_GEN_WEIGHT = {Kind.BETA: 1, Kind.GAMMA: 0, Kind.B: 1, Kind.C: 0}
_LABEL_OFFSET = {Kind.BETA: 0, Kind.GAMMA: 1, Kind.B: 0, Kind.C: 1}


def generator_mode(kind: Kind, species: int, n: int) -> Mode:
    """The mode ``x_(n)`` of the generating field of the given kind."""
    return Mode(kind, species, n + _LABEL_OFFSET[kind])


def uniform_index(mode: Mode) -> int:
    return mode.index - _LABEL_OFFSET[mode.kind]


@lru_cache(maxsize=None)
def gbinom(m: int, j: int) -> int:
    """Binomial coefficient ``m choose j`` for any integer ``m`` and ``j >= 0``."""
    if m >= 0:
        return comb(m, j)
    num = 1
    for i in range(j):
        num *= m - i
    return num // factorial(j)


_Terms = Tuple[Tuple[Monomial, Fraction], ...]


@lru_cache(maxsize=None)
def _mono_nth(A: Monomial, n: int, C: Monomial, cutoff: Optional[int]) -> Tuple[_Terms, bool]:
    """``A_(n) C`` for monomials, as sorted items plus a truncation flag."""
    if not A:
        return (((C, Fraction(1)),), False) if n == -1 else ((), False)
    wA, wC = monomial_weight(A), monomial_weight(C)
    if wA + wC - n - 1 < 0:
        return (), False

    (x, p), rest = A[0], A[1:]
    A1 = (((x, p - 1),) if p > 1 else ()) + rest
    m = uniform_index(x)
    wA1, wX = monomial_weight(A1), _GEN_WEIGHT[x.kind]
    eps = -1 if (x.odd and monomial_parity(A1)) else 1
    sign_m = -1 if m & 1 else 1

    acc: Dict[Monomial, Fraction] = {}
    trunc = False

    def put(mono, c):
        nonlocal trunc
        if cutoff is not None and gamma0_degree(mono) > cutoff:
            trunc = True
            return
        acc[mono] = acc.get(mono, 0) + c

    # first sum: x_(m-j) (A1_(n+j) C)
    j = 0
    while n + j <= wA1 + wC - 1:
        coef = gbinom(m, j) * (-1) ** j
        if coef:
            inner, t = _mono_nth(A1, n + j, C, cutoff)
            trunc |= t
            xm = generator_mode(x.kind, x.species, m - j)
            for mono, c in inner:
                r = apply_to_monomial(xm, mono)
                if r is not None:
                    put(r[1], coef * r[0] * c)
        j += 1
    # second sum: A1_(m+n-j) (x_(j) C)
    for j in range(0, wX + wC):
        coef = gbinom(m, j) * (-1) ** j
        if not coef:
            continue
        r = apply_to_monomial(generator_mode(x.kind, x.species, j), C)
        if r is None:
            continue
        inner, t = _mono_nth(A1, m + n - j, r[1], cutoff)
        trunc |= t
        k = -sign_m * eps * coef * r[0]
        for mono, c in inner:
            put(mono, k * c)
    items = tuple(sorted((mk, v) for mk, v in acc.items() if v))
    return items, trunc


def nth_product(A: StateVector, n: int, B: StateVector, gamma0_cutoff: Optional[int] = None) -> StateVector:
    """The state ``A_(n) B``.

    With a cutoff, terms whose gamma_0-degree exceeds it are dropped at every
    intermediate step and the result is flagged ``truncated``.
    """
    acc: Dict[Monomial, Fraction] = {}
    trunc = A.truncated or B.truncated
    for ma, ca in A.terms.items():
        for mb, cb in B.terms.items():
            items, t = _mono_nth(ma, n, mb, gamma0_cutoff)
            trunc |= t
            k = ca * cb
            for mono, c in items:
                acc[mono] = acc.get(mono, 0) + k * c
    return StateVector(acc, trunc)


def clear_caches() -> None:
    _mono_nth.cache_clear()
    apply_to_monomial.cache_clear()


# -- OPE ---------------------------------------------------------------------

@dataclass
class OpeSingularPart:
    """``poles[n]`` is the state ``A_(n) B``, the coefficient of ``(z-w)^(-n-1)``."""

    poles: List[StateVector] = field(default_factory=list)

    def __getitem__(self, n: int) -> StateVector:
        return self.poles[n] if 0 <= n < len(self.poles) else StateVector()

    def is_zero(self) -> bool:
        return not any(self.poles)

    def nonzero(self) -> Dict[int, StateVector]:
        return {n: v for n, v in enumerate(self.poles) if v}

    def to_json(self) -> list:
        """Ordered list of ``[pole order, serialized state]`` pairs (pole order = n+1)."""
        return [[n + 1, state_to_json(v)] for n, v in enumerate(self.poles) if v]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def ope_singular(A: StateVector, B: StateVector, gamma0_cutoff: Optional[int] = None) -> OpeSingularPart:
    """All ``A_(n) B`` for ``n >= 0``; beyond ``wt A + wt B`` they vanish by grading."""
    top = A.weight_bound() + B.weight_bound()
    poles = [nth_product(A, n, B, gamma0_cutoff) for n in range(top + 1)]
    while poles and not poles[-1]:
        poles.pop()
    return OpeSingularPart(poles)


# -- translation -------------------------------------------------------------

def _translate_mode(mode: Mode) -> Tuple[int, Mode]:
    # [T, x_(n)] = -n x_(n-1) in the uniform convention
    n = uniform_index(mode)
    return -n, generator_mode(mode.kind, mode.species, n - 1)


def translate(A: StateVector) -> StateVector:
    """``T A``, computed as the derivation ``[T, x_(n)] = -n x_(n-1)`` with ``T|0> = 0``."""
    acc = StateVector(truncated=A.truncated)
    for mono, c in A.terms.items():
        modes = [mode for mode, p in mono for _ in range(p)]
        for i, mode in enumerate(modes):
            k, new = _translate_mode(mode)
            if k:
                acc = acc + StateVector.from_modes(modes[:i] + [new] + modes[i + 1:], c * k)
    return acc


# -- Lie bracket on U'(V) ----------------------------------------------------

def lie_bracket(A: StateVector, m: int, B: StateVector, k: int,
                gamma0_cutoff: Optional[int] = None) -> List[Tuple[int, StateVector, int]]:
    """``[A_[m], B_[k]] = sum_{n>=0} binom(m, n) (A_(n) B)_[m+k-n]`` as ``(coef, state, index)`` terms."""
    ope = ope_singular(A, B, gamma0_cutoff)
    out = []
    for n, C in ope.nonzero().items():
        c = gbinom(m, n)
        if c:
            out.append((c, C, m + k - n))
    return out


def apply_bracket(terms, v: StateVector, gamma0_cutoff: Optional[int] = None) -> StateVector:
    acc = StateVector()
    for c, C, idx in terms:
        acc = acc + nth_product(C, idx, v, gamma0_cutoff) * c
    return acc


def commutator(A: StateVector, m: int, B: StateVector, k: int, v: StateVector,
               gamma0_cutoff: Optional[int] = None) -> StateVector:
    """Direct super-commutator ``A_(m) B_(k) v -+ B_(k) A_(m) v`` for parity-homogeneous A, B."""
    pa, pb = A.parity(), B.parity()
    if pa is None or pb is None:
        raise ValueError("commutator needs parity-homogeneous states")
    s = -1 if pa and pb else 1
    ab = nth_product(A, m, nth_product(B, k, v, gamma0_cutoff), gamma0_cutoff)
    ba = nth_product(B, k, nth_product(A, m, v, gamma0_cutoff), gamma0_cutoff)
    return ab - ba * s


# -- distinguished states ----------------------------------------------------

def generator_state(kind: Kind, species: int) -> StateVector:
    label = -1 if kind in (Kind.BETA, Kind.B) else 0
    return StateVector.from_modes([Mode(kind, species, label)])


@dataclass(frozen=True)
class DistinguishedStates:
    L: StateVector
    F: StateVector
    Q: StateVector
    G: StateVector
    rank: int

    def d(self, v: StateVector, gamma0_cutoff: Optional[int] = None) -> StateVector:
        return nth_product(self.Q, 0, v, gamma0_cutoff)


@lru_cache(maxsize=None)
def distinguished_states(rank: int) -> DistinguishedStates:
    """Virasoro ``L``, fermion current, ``Q = sum beta_{-1} c_0`` and ``G = sum b_{-1} gamma_{-1}``."""
    L = F = Q = G = StateVector()
    for i in range(1, rank + 1):
        L = L + StateVector.from_modes([gamma(i, -1), beta(i, -1)]) \
              + StateVector.from_modes([cghost(i, -1), bghost(i, -1)])
        F = F + StateVector.from_modes([cghost(i, 0), bghost(i, -1)])
        Q = Q + StateVector.from_modes([beta(i, -1), cghost(i, 0)])
        G = G + StateVector.from_modes([bghost(i, -1), gamma(i, -1)])
    return DistinguishedStates(L, F, Q, G, rank)


def fermionic_charge_apply(v: StateVector, rank: Optional[int] = None) -> StateVector:
    """``F v`` with ``F = sum :c_n b_{-n}:``, the zero mode of the current ``:c b:``."""
    rank = rank or max(v.max_species(), 1)
    return nth_product(distinguished_states(rank).F, 0, v)


def chiral_differential_apply(v: StateVector, rank: Optional[int] = None,
                              gamma0_cutoff: Optional[int] = None) -> StateVector:
    """``d v`` with ``d = sum :beta_n c_{-n}: = Q_(0)``."""
    rank = rank or max(v.max_species(), 1)
    return distinguished_states(rank).d(v, gamma0_cutoff)


def virasoro_mode(v: StateVector, n: int, rank: Optional[int] = None) -> StateVector:
    """``L_n v`` for the Virasoro label (``L_n = L_(n+1)``)."""
    rank = rank or max(v.max_species(), 1)
    return nth_product(distinguished_states(rank).L, n + 1, v)


__all__ = [
    "DistinguishedStates", "OpeSingularPart", "apply_bracket", "chiral_differential_apply",
    "clear_caches", "commutator", "distinguished_states", "fermionic_charge_apply", "gbinom",
    "generator_mode", "generator_state", "lie_bracket", "nth_product", "ope_singular",
    "translate", "uniform_index", "virasoro_mode", "apply_mode", "VACUUM",
]
