"""State space of the rank-N beta-gamma / b-c system.

A state is a finite rational combination of normal-ordered monomials in
creation modes applied to the vacuum.  Mode labels follow the weight-adapted
expansions

    gamma(z) = sum gamma_n z^-n,   beta(z) = sum beta_n z^(-n-1),
    c(z)     = sum c_n z^-n,       b(z)    = sum b_n z^(-n-1),

with ``[beta_m, gamma_n] = delta_{m,-n}`` and ``[b_m, c_n]_+ = delta_{m,-n}``
imposed for all index pairs.  The vacuum is killed by beta_{n>=0},
gamma_{n>0}, b_{n>=0}, c_{n>0}.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from .series import format_rational, parse_rational


class Kind(IntEnum):
    # the numeric order is the canonical monomial order: beta < gamma < b < c
    BETA = 0
    GAMMA = 1
    B = 2
    C = 3

    @property
    def odd(self) -> bool:
        return self >= Kind.B


KIND_NAMES = {Kind.BETA: "beta", Kind.GAMMA: "gamma", Kind.B: "b", Kind.C: "c"}
KIND_FROM_NAME = {v: k for k, v in KIND_NAMES.items()}
# text tokens: bosons lower case, fermions upper case
KIND_TOKENS = {Kind.BETA: "b", Kind.GAMMA: "g", Kind.B: "B", Kind.C: "C"}
TOKEN_ALIASES = {"b": Kind.BETA, "g": Kind.GAMMA, "B": Kind.B, "C": Kind.C, "c": Kind.C,
                 "β": Kind.BETA, "γ": Kind.GAMMA}


class Mode(NamedTuple):
    kind: Kind
    species: int
    index: int

    @property
    def odd(self) -> bool:
        return self.kind >= Kind.B

    @property
    def is_annihilator(self) -> bool:
        if self.kind in (Kind.BETA, Kind.B):
            return self.index >= 0
        return self.index > 0

    @property
    def weight(self) -> int:
        """L_0-degree shift: ``-index`` for every kind."""
        return -self.index

    @property
    def fermion_charge(self) -> int:
        return {Kind.C: 1, Kind.B: -1}.get(self.kind, 0)

    @property
    def g_charge(self) -> int:
        """Cyclic-group weight: gamma^1, beta^2 -> +1; gamma^2, beta^1 -> -1."""
        if self.kind == Kind.GAMMA:
            return {1: 1, 2: -1}.get(self.species, 0)
        if self.kind == Kind.BETA:
            return {1: -1, 2: 1}.get(self.species, 0)
        return 0

    def partner(self) -> "Mode":
        """The creation mode this annihilator contracts with."""
        conj = {Kind.BETA: Kind.GAMMA, Kind.GAMMA: Kind.BETA, Kind.B: Kind.C, Kind.C: Kind.B}
        return Mode(conj[self.kind], self.species, -self.index)

    def __str__(self):
        return f"{KIND_TOKENS[self.kind]}[{self.species},{self.index}]"


def beta(i: int, n: int) -> Mode:
    return Mode(Kind.BETA, i, n)


def gamma(i: int, n: int) -> Mode:
    return Mode(Kind.GAMMA, i, n)


def bghost(i: int, n: int) -> Mode:
    return Mode(Kind.B, i, n)


def cghost(i: int, n: int) -> Mode:
    return Mode(Kind.C, i, n)


# A normal monomial: tuple of (Mode, power) sorted by Mode, creation modes only,
# odd modes with power 1.  The empty tuple is the vacuum.
Monomial = Tuple[Tuple[Mode, int], ...]
NormalMonomial = Monomial
VACUUM: Monomial = ()

# contraction values: [ann, partner]_(+-) for each annihilator kind
_CONTRACTION = {Kind.BETA: 1, Kind.GAMMA: -1, Kind.B: 1, Kind.C: 1}


class SpeciesError(ValueError):
    pass


def monomial_weight(m: Monomial) -> int:
    return sum(-mode.index * p for mode, p in m)


def monomial_parity(m: Monomial) -> int:
    return sum(p for mode, p in m if mode.odd) & 1


def gamma0_degree(m: Monomial) -> int:
    return sum(p for mode, p in m if mode.kind == Kind.GAMMA and mode.index == 0)


def monomial_grading(m: Monomial) -> Tuple[int, int, int]:
    w = f = g = 0
    for mode, p in m:
        w += mode.weight * p
        f += mode.fermion_charge * p
        g += mode.g_charge * p
    return w, f, g


@lru_cache(maxsize=None)
def apply_to_monomial(mode: Mode, m: Monomial) -> Optional[Tuple[int, Monomial]]:
    """``mode . m|0>`` as ``(coefficient, monomial)`` or ``None`` when zero.

    A creation mode is moved to its sorted slot; an annihilator contracts with
    its unique partner.  Odd modes pick up ``(-1)`` per odd mode passed.
    """
    odd_before = 0
    if not mode.is_annihilator:
        for pos, (mm, p) in enumerate(m):
            if mm == mode:
                if mode.odd:
                    return None
                return 1, m[:pos] + ((mm, p + 1),) + m[pos + 1:]
            if mm > mode:
                break
            if mm.odd:
                odd_before += 1
        else:
            pos = len(m)
        sign = -1 if (mode.odd and odd_before & 1) else 1
        return sign, m[:pos] + ((mode, 1),) + m[pos:]
    target = mode.partner()
    for pos, (mm, p) in enumerate(m):
        if mm == target:
            coef = _CONTRACTION[mode.kind] * p
            if mode.odd and odd_before & 1:
                coef = -coef
            rest = m[:pos] + (((mm, p - 1),) if p > 1 else ()) + m[pos + 1:]
            return coef, rest
        if mm > target:
            return None
        if mm.odd:
            odd_before += 1
    return None


@dataclass(frozen=True)
class Grading:
    weight: int
    fermion_charge: int
    g_charge: int

    def g_invariant(self, order: int) -> bool:
        return self.g_charge % order == 0


class StateVector:
    """Finite rational combination of normal monomials.

    ``truncated`` records that some term was dropped by a gamma_0 cutoff
    somewhere in the computation that produced this state.  It does not take
    part in equality.
    """

    __slots__ = ("terms", "truncated")

    def __init__(self, terms: Union[Dict[Monomial, Fraction], Iterable] = (), truncated: bool = False):
        acc: Dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for mono, c in items:
            c = Fraction(c)
            if c:
                acc[mono] = acc.get(mono, 0) + c
        self.terms = {k: v for k, v in acc.items() if v}
        self.truncated = truncated

    @classmethod
    def vacuum(cls) -> "StateVector":
        return cls({VACUUM: 1})

    @classmethod
    def from_modes(cls, modes: Iterable[Mode], coef=1) -> "StateVector":
        """``m_1 m_2 ... m_k |0>`` with modes applied right to left."""
        v = cls.vacuum() * coef
        for mode in reversed(list(modes)):
            v = apply_mode(mode, v)
        return v

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __add__(self, other: "StateVector") -> "StateVector":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return StateVector(acc, self.truncated or other.truncated)

    def __neg__(self):
        return StateVector({k: -v for k, v in self.terms.items()}, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> "StateVector":
        c = Fraction(c)
        return StateVector({k: v * c for k, v in self.terms.items()}, self.truncated)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def max_species(self) -> int:
        return max((mode.species for mono in self.terms for mode, _ in mono), default=0)

    def weight_bound(self) -> int:
        return max((monomial_weight(m) for m in self.terms), default=0)

    def cut(self, gamma0_cutoff: Optional[int]) -> "StateVector":
        """Drop terms of gamma_0-degree above the cutoff, flagging if any were dropped."""
        if gamma0_cutoff is None:
            return self
        kept = {m: c for m, c in self.terms.items() if gamma0_degree(m) <= gamma0_cutoff}
        return StateVector(kept, self.truncated or len(kept) < len(self.terms))

    def parity(self) -> Optional[int]:
        ps = {monomial_parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def __repr__(self):
        return f"StateVector({format_state(self)!r})"

    def __str__(self):
        return format_state(self)


def apply_mode(mode: Mode, v: StateVector, gamma0_cutoff: Optional[int] = None,
               rank: Optional[int] = None) -> StateVector:
    """Act with a single mode on a state, returning the normal-ordered result."""
    if rank is not None and not 1 <= mode.species <= rank:
        raise SpeciesError(f"species {mode.species} outside 1..{rank}")
    acc: Dict[Monomial, Fraction] = {}
    dropped = False
    for mono, c in v.terms.items():
        r = apply_to_monomial(mode, mono)
        if r is None:
            continue
        s, m2 = r
        if gamma0_cutoff is not None and gamma0_degree(m2) > gamma0_cutoff:
            dropped = True
            continue
        acc[m2] = acc.get(m2, 0) + s * c
    return StateVector(acc, v.truncated or dropped)


def grading_of(v: StateVector) -> Union[Grading, str]:
    """Common (weight, fermion charge, g-charge) of all terms, or ``"inhomogeneous"``."""
    grades = {monomial_grading(m) for m in v.terms}
    if not grades:
        return Grading(0, 0, 0)
    if len(grades) > 1:
        return "inhomogeneous"
    return Grading(*grades.pop())


def fermion_count(v: StateVector) -> StateVector:
    """Reference F action by counting c-modes minus b-modes (no mode algebra)."""
    return StateVector({m: c * monomial_grading(m)[1] for m, c in v.terms.items()})


# -- text and JSON forms -----------------------------------------------------

def format_monomial(m: Monomial) -> str:
    parts = [f"{mode}^{p}" if p > 1 else str(mode) for mode, p in m]
    return " ".join(parts + ["|0>"])


def format_state(v: StateVector) -> str:
    if not v.terms:
        return "0"
    out: List[str] = []
    for mono, c in v:
        body = format_monomial(mono)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        text = body if mag == 1 else f"{mag} {body}"
        out.append(f"{sign} {text}")
    s = " ".join(out)
    return s[2:] if s.startswith("+ ") else "-" + s[1:]


class StateParseError(ValueError):
    def __init__(self, message: str, text: str, span: Tuple[int, int]):
        a, b = span
        super().__init__(f"{message} at {a}:{b}: {text[a:b]!r}")
        self.span = span


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sign>[+-])
  | (?P<num>\d+(?:/\d+)?)
  | (?P<star>\*)
  | (?P<mode>(?P<tok>[bgBCcβγ])\[\s*(?P<sp>\d+)\s*,\s*(?P<idx>-?\d+)\s*\](?:\^(?P<pow>\d+))?)
  | (?P<vac>\|0>)
""", re.VERBOSE)


def parse_state(text: str, rank: Optional[int] = None) -> StateVector:
    """Parse the canonical text form, e.g. ``"2 b[1,-1] g[2,0]^3 |0> - 1/2 C[1,0]|0>"``.

    Modes within a term are applied right to left, so any order is accepted
    and normal ordering (with signs) is performed by the mode algebra.
    """
    pos = 0
    total = StateVector()
    sign, coef, modes, have_term = 1, None, [], False
    term_start = 0

    def flush(end):
        nonlocal total, sign, coef, modes, have_term
        if not have_term:
            raise StateParseError("incomplete term (missing |0>)", text, (term_start, end))
        c = Fraction(sign) * (coef if coef is not None else 1)
        total = total + StateVector.from_modes(modes, c)
        sign, coef, modes, have_term = 1, None, [], False

    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise StateParseError("unexpected character", text, (pos, pos + 1))
        span = mt.span()
        if mt.group("ws"):
            pass
        elif mt.group("sign") is not None:
            if have_term:
                flush(span[0])
                term_start = span[0]
            elif modes or coef is not None:
                raise StateParseError("misplaced sign", text, span)
            sign = -sign if mt.group("sign") == "-" else sign
        elif mt.group("num") is not None:
            if modes or coef is not None or have_term:
                raise StateParseError("misplaced coefficient", text, span)
            coef = parse_rational(mt.group("num")) if "/" in mt.group("num") else Fraction(int(mt.group("num")))
        elif mt.group("star") is not None:
            if coef is None:
                raise StateParseError("'*' without coefficient", text, span)
        elif mt.group("mode") is not None:
            if have_term:
                raise StateParseError("mode after |0>", text, span)
            kd = TOKEN_ALIASES[mt.group("tok")]
            sp, idx = int(mt.group("sp")), int(mt.group("idx"))
            if sp < 1 or (rank is not None and sp > rank):
                raise StateParseError(f"species out of range 1..{rank}", text, span)
            p = int(mt.group("pow") or 1)
            modes.extend([Mode(kd, sp, idx)] * p)
        elif mt.group("vac") is not None:
            if have_term:
                raise StateParseError("repeated |0>", text, span)
            have_term = True
        pos = span[1]
    if have_term or modes or coef is not None:
        flush(len(text))
    return total


def monomial_to_json(m: Monomial):
    return [{"kind": KIND_NAMES[mode.kind], "species": mode.species, "index": mode.index, "power": p}
            for mode, p in m]


def monomial_from_json(data) -> Monomial:
    mono = []
    for d in data:
        mode = Mode(KIND_FROM_NAME[d["kind"]], int(d["species"]), int(d["index"]))
        p = int(d.get("power", 1))
        if p < 1 or (mode.odd and p > 1) or mode.is_annihilator:
            raise ValueError(f"invalid monomial factor {d}")
        mono.append((mode, p))
    if mono != sorted(mono) or len({m for m, _ in mono}) != len(mono):
        raise ValueError("monomial factors not in canonical order")
    return tuple(mono)


def state_to_json(v: StateVector) -> list:
    return [{"coef": format_rational(c), "modes": monomial_to_json(m)} for m, c in v]


def state_from_json(data) -> StateVector:
    """Inverse of :func:`state_to_json`; also accepts the serialized string."""
    if isinstance(data, str):
        data = json.loads(data)
    return StateVector({monomial_from_json(t["modes"]): parse_rational(t["coef"]) for t in data})


def dumps_state(v: StateVector) -> str:
    return json.dumps(state_to_json(v), sort_keys=True)
