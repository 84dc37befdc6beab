"""Finitely generated commutative monoids, groupification and the log criteria.

Monoids are given by generators in ``Z^d`` (the toric case); a monoid can
also be given abstractly as a free commutative monoid modulo relations,
which is only used for groupification and the smoothness criterion.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

from .modes import StateVector, bghost, cghost
from .smith import matmul, smith_normal_form
from .vertex import OpeSingularPart, ope_singular

Vector = Tuple[int, ...]


class NotPointed(ValueError):
    """The monoid is not contained in an open half-space, so search is unbounded."""


@dataclass(frozen=True)
class AbelianGroupData:
    rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def finite(self) -> bool:
        return self.rank == 0

    def __str__(self):
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion), "text": str(self)}


def _unimodular_inverse(V: List[List[int]]) -> List[List[int]]:
    n = len(V)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    inv = [[x for x in row[n:]] for row in A]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


def _group_from_factors(factors: Sequence[int], ambient: int) -> AbelianGroupData:
    nz = [d for d in factors if d]
    return AbelianGroupData(ambient - len(nz), tuple(d for d in nz if d > 1))


class FinGenMonoid:
    """Submonoid of ``Z^d`` generated by integer vectors (duplicates and zero removed)."""

    def __init__(self, generators: Sequence[Sequence[int]], relations: Optional[Sequence] = None):
        gens: List[Vector] = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if g not in gens and any(g):
                gens.append(g)
        if not gens:
            raise ValueError("generator list is empty")
        dims = {len(g) for g in gens}
        if len(dims) != 1:
            raise ValueError("generators have different lengths")
        self.generators: Tuple[Vector, ...] = tuple(gens)
        self.rank_ambient = dims.pop()
        # relations (a, b) with a, b in N^k mean sum a_i e_i = sum b_i e_i (abstract monoids)
        self.relations = None if relations is None else [(tuple(a), tuple(b)) for a, b in relations]
        self._memo: Dict[Vector, Optional[Tuple[int, ...]]] = {}
        self._functional: Optional[Tuple[Fraction, ...]] = None

    @classmethod
    def presented(cls, k: int, relations) -> "FinGenMonoid":
        """Free commutative monoid on ``k`` generators modulo ``relations``."""
        gens = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        return cls(gens, relations)

    @property
    def embedded(self) -> bool:
        return self.relations is None

    def __repr__(self):
        gens = ";".join("(" + ",".join(map(str, g)) + ")" for g in self.generators)
        return f"FinGenMonoid({gens})" + ("" if self.embedded else f" / {self.relations}")

    def matrix(self) -> List[List[int]]:
        return [list(g) for g in self.generators]

    # -- membership ---------------------------------------------------------
    def functional(self) -> Tuple[Fraction, ...]:
        """A rational ``w`` with ``w . g >= 1`` for every generator."""
        if self._functional is None:
            self._functional = _positive_functional(self.generators)
        return self._functional

    def contains(self, v: Sequence[int]) -> bool:
        return membership(self, v)[0]


def _positive_functional(gens: Sequence[Vector]) -> Tuple[Fraction, ...]:
    d = len(gens[0])
    if all(min(g) >= 0 for g in gens):
        return (Fraction(1),) * d
    from scipy.optimize import linprog

    res = linprog(c=[0] * d, A_ub=[[-x for x in g] for g in gens], b_ub=[-1] * len(gens),
                  bounds=[(None, None)] * d, method="highs")
    if res.status != 0:
        raise NotPointed("no linear functional is positive on all generators")
    for limit in (10, 100, 10 ** 4, 10 ** 6):
        w = tuple(Fraction(x).limit_denominator(limit) for x in res.x)
        worst = min(sum(a * b for a, b in zip(w, g)) for g in gens)
        if worst > 0:
            return tuple(x / worst for x in w)
    raise NotPointed("could not certify a positive functional")


def membership(Q: FinGenMonoid, v: Sequence[int]) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Decide ``v in Q`` by exhaustive search; the witness gives a count per generator."""
    if not Q.embedded:
        raise ValueError("membership is only available for monoids given inside Z^d")
    v = tuple(int(x) for x in v)
    if len(v) != Q.rank_ambient:
        raise ValueError("vector has wrong length")
    w = Q.functional()
    gens = Q.generators
    memo = Q._memo

    def level(u):
        return sum(a * b for a, b in zip(w, u))

    def search(u: Vector):
        if u in memo:
            return memo[u]
        if not any(u):
            memo[u] = (0,) * len(gens)
            return memo[u]
        memo[u] = None
        if level(u) > 0:
            for i, g in enumerate(gens):
                r = tuple(a - b for a, b in zip(u, g))
                if level(r) < 0:
                    continue
                sub = search(r)
                if sub is not None:
                    memo[u] = sub[:i] + (sub[i] + 1,) + sub[i + 1:]
                    break
        return memo[u]

    wit = search(v)
    return wit is not None, wit


# -- groupification ------------------------------------------------------------

@dataclass
class Groupification:
    group: AbelianGroupData
    basis: List[Vector]
    cokernel: Optional[AbelianGroupData]
    certificate: Dict[str, list]

    def to_json(self):
        return {"group": self.group.to_json(), "basis": [list(b) for b in self.basis],
                "cokernel_in_ambient": self.cokernel.to_json() if self.cokernel else None,
                "certificate": self.certificate}


def groupify(Q: FinGenMonoid) -> Groupification:
    """``Q^gp`` via Smith normal form.

    For an embedded monoid ``Q^gp`` is the lattice spanned by the generators;
    its basis and the quotient ``Z^d / Q^gp`` are returned.  For a presented
    monoid ``Q^gp = Z^k / (relations)``.
    """
    if not Q.embedded:
        R = [[a - b for a, b in zip(x, y)] for x, y in Q.relations] or [[0] * Q.rank_ambient]
        U, D, V = smith_normal_form(R)
        factors = [D[i][i] for i in range(min(len(D), len(D[0])))]
        grp = _group_from_factors(factors, Q.rank_ambient)
        return Groupification(grp, [], None, {"U": U, "D": D, "V": V})
    U, D, V = smith_normal_form(Q.matrix())
    d = Q.rank_ambient
    factors = [D[i][i] for i in range(min(len(D), d))]
    r = sum(1 for x in factors if x)
    Vinv = _unimodular_inverse(V)
    basis = [tuple(factors[i] * x for x in Vinv[i]) for i in range(r)]
    coker = _group_from_factors(factors, d)
    return Groupification(AbelianGroupData(r), basis, coker, {"U": U, "D": D, "V": V})


def lattice_coordinates(Q: FinGenMonoid, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Coordinates of ``v`` in the SNF basis of ``Q^gp``, or ``None`` if ``v`` is not in it."""
    gp = groupify(Q)
    V = gp.certificate["V"]
    D = gp.certificate["D"]
    w = matmul([list(v)], V)[0]
    r = gp.group.rank
    coords = []
    for i, x in enumerate(w):
        di = D[i][i] if i < min(len(D), len(D[0])) else 0
        if i < r:
            if x % di:
                return None
            coords.append(x // di)
        elif x:
            return None
    return tuple(coords)


# -- saturation ------------------------------------------------------------------

@dataclass
class SaturationVerdict:
    saturated: bool
    counterexample: Optional[Vector] = None
    multiple: Optional[int] = None
    box: int = 0
    stable: bool = True

    def to_json(self):
        return {"saturated": self.saturated, "integral": True,
                "counterexample": list(self.counterexample) if self.counterexample else None,
                "multiple": self.multiple, "box": self.box, "stable": self.stable}


def _saturation_search(Q: FinGenMonoid, B: int):
    d = Q.rank_ambient
    lo = 0 if all(min(g) >= 0 for g in Q.generators) else -B
    for q in product(range(lo, B + 1), repeat=d):
        if not any(q) or lattice_coordinates(Q, q) is None or Q.contains(q):
            continue
        for m in range(2, B + 1):
            if Q.contains(tuple(m * x for x in q)):
                return q, m
    return None


def is_integral(Q: FinGenMonoid) -> bool:
    """Submonoids of a group are cancellative."""
    return Q.embedded


def is_saturated(Q: FinGenMonoid, box: Optional[int] = None) -> SaturationVerdict:
    """Search ``Q^gp`` in a box for ``q not in Q`` with ``m q in Q``; repeat in the doubled box."""
    if not Q.embedded:
        raise ValueError("saturation is only available for monoids given inside Z^d")
    B = box or len(Q.generators) * max(abs(x) for g in Q.generators for x in g)
    first = _saturation_search(Q, B)
    if first is not None:
        return SaturationVerdict(False, first[0], first[1], B, True)
    second = _saturation_search(Q, 2 * B)
    if second is not None:
        return SaturationVerdict(False, second[0], second[1], 2 * B, False)
    return SaturationVerdict(True, None, None, B, True)


# -- smoothness and etaleness ------------------------------------------------------

def _invertible(order: int, char: int) -> bool:
    if char < 0 or (char and any(char % p == 0 for p in range(2, int(char ** 0.5) + 1))):
        raise ValueError("characteristic must be 0 or a prime")
    return char == 0 or order % char != 0


@dataclass
class SmoothnessVerdict:
    smooth: bool
    torsion_order: int
    group: AbelianGroupData
    char: int
    certificate: Dict[str, list]

    def to_json(self):
        return {"smooth": self.smooth, "torsion_order": self.torsion_order, "char": self.char,
                "group": self.group.to_json(), "certificate": self.certificate}


def smoothness_check(Q: FinGenMonoid, char: int = 0) -> SmoothnessVerdict:
    """``A_Q`` is log smooth over ``R`` iff the torsion order of ``Q^gp`` is invertible in ``R``."""
    gp = groupify(Q)
    t = gp.group.torsion_order
    return SmoothnessVerdict(_invertible(t, char), t, gp.group, char, gp.certificate)


class MonoidHom:
    """Homomorphism ``source -> target`` given by an integer matrix on ambient lattices.

    ``matrix`` has shape ``(d_target, d_source)`` and acts on column vectors.
    """

    def __init__(self, source: FinGenMonoid, target: FinGenMonoid, matrix: Sequence[Sequence[int]]):
        self.source, self.target = source, target
        self.matrix = [list(map(int, r)) for r in matrix]
        if len(self.matrix) != target.rank_ambient or any(len(r) != source.rank_ambient for r in self.matrix):
            raise ValueError("matrix shape does not match ambient ranks")
        for g in source.generators:
            img = self(g)
            if not target.contains(img):
                raise ValueError(f"generator {g} maps to {img}, which is not in the target")

    def __call__(self, v: Sequence[int]) -> Vector:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def compose(self, inner: "MonoidHom") -> "MonoidHom":
        """``self o inner``."""
        return MonoidHom(inner.source, self.target, matmul(self.matrix, inner.matrix))

    @classmethod
    def identity(cls, Q: FinGenMonoid) -> "MonoidHom":
        d = Q.rank_ambient
        return cls(Q, Q, [[int(i == j) for j in range(d)] for i in range(d)])


@dataclass
class EtaleVerdict:
    etale: bool
    kernel: AbelianGroupData
    cokernel: AbelianGroupData
    char: int
    gp_matrix: List[List[int]]
    certificate: Dict[str, list]

    def to_json(self):
        return {"etale": self.etale, "char": self.char, "kernel": self.kernel.to_json(),
                "cokernel": self.cokernel.to_json(), "gp_matrix": self.gp_matrix,
                "certificate": self.certificate}


def gp_matrix(theta: MonoidHom) -> List[List[int]]:
    """Matrix of ``theta^gp`` in SNF bases: row ``i`` gives the image of the i-th source basis vector."""
    src = groupify(theta.source)
    rows = []
    for b in src.basis:
        coords = lattice_coordinates(theta.target, theta(b))
        if coords is None:
            raise ValueError("image of a source lattice vector is outside the target lattice")
        rows.append(list(coords))
    return rows


def etale_check(theta: MonoidHom, char: int = 0) -> EtaleVerdict:
    """Kernel and cokernel of ``theta^gp`` by Smith normal form; etale iff both finite of invertible order."""
    M = gp_matrix(theta)
    r_src = groupify(theta.source).group.rank
    r_tgt = groupify(theta.target).group.rank
    if r_src == 0:
        M = [[0] * r_tgt]
    U, D, V = smith_normal_form(M) if r_tgt else ([[1]], [[0]], [[1]])
    factors = [D[i][i] for i in range(min(len(D), len(D[0])))] if r_tgt else []
    rank = sum(1 for x in factors if x)
    kernel = AbelianGroupData(r_src - rank)
    coker = _group_from_factors(factors, r_tgt)
    ok = kernel.rank == 0 and coker.finite and _invertible(coker.torsion_order, char)
    return EtaleVerdict(ok, kernel, coker, char, M, {"U": U, "D": D, "V": V})


# -- the A_N chart and log differentials ------------------------------------------

def an_monoid(N: int) -> FinGenMonoid:
    """``Q = <(N,0), (0,N), (1,1)>``, the chart monoid of the A_N singularity."""
    return FinGenMonoid([(N, 0), (0, N), (1, 1)])


def standard_monoid(d: int) -> FinGenMonoid:
    return FinGenMonoid([tuple(int(i == j) for j in range(d)) for i in range(d)])


def an_chart(N: int) -> MonoidHom:
    """The inclusion ``Q(N) -> N^2`` underlying the origin coordinate."""
    return MonoidHom(an_monoid(N), standard_monoid(2), [[1, 0], [0, 1]])


@dataclass
class LogDiffPresentation:
    basis: List[Vector]
    labels: List[str]
    differentials: Dict[Vector, Tuple[int, ...]]
    pullback: Dict[Vector, Tuple[int, ...]]
    notes: List[str] = field(default_factory=list)

    def format_pullback(self) -> Dict[str, str]:
        out = {}
        for q, coords in self.pullback.items():
            terms = [f"{c} dgamma{i + 1}/gamma{i + 1}" if c != 1 else f"dgamma{i + 1}/gamma{i + 1}"
                     for i, c in enumerate(coords) if c]
            out[f"d{q}"] = " + ".join(terms) or "0"
        return out

    def to_json(self):
        return {"basis": {l: list(b) for l, b in zip(self.labels, self.basis)},
                "differentials": {str(list(q)): list(c) for q, c in self.differentials.items()},
                "pullback": self.format_pullback(), "notes": self.notes}


def log_differentials(Q: FinGenMonoid) -> LogDiffPresentation:
    """Differentials ``dq`` in the SNF basis of ``Q^gp``, and their pullback along ``Q -> Z^d``.

    The pullback of ``dq`` to the coordinate disc is ``sum q_i dgamma^i/gamma^i``.
    """
    gp = groupify(Q)
    labels = [f"e{i + 1}" for i in range(len(gp.basis))]
    diffs = {g: lattice_coordinates(Q, g) for g in Q.generators}
    pull = {g: tuple(g) for g in Q.generators}
    return LogDiffPresentation(list(gp.basis), labels, diffs, pull)


def compare_claimed_basis(Q: FinGenMonoid, claimed: Sequence[Sequence[int]]) -> Dict[str, object]:
    """Whether ``claimed`` vectors lie in and generate ``Q^gp``; reports both indices in ``Z^d``."""
    from .smith import invariant_factors

    inside = [lattice_coordinates(Q, c) is not None for c in claimed]
    idx_claimed = prod(invariant_factors([list(c) for c in claimed]))
    idx_group = groupify(Q).cokernel.torsion_order
    same = all(inside) and groupify(Q).group.rank == len(invariant_factors([list(c) for c in claimed])) \
        and idx_claimed == idx_group
    return {"claimed": [list(c) for c in claimed], "inside_group": inside,
            "index_of_claimed_span": idx_claimed, "index_of_group": idx_group, "generates_group": same}


def an_log_differentials(N: int) -> LogDiffPresentation:
    """Log differentials of ``Q(N)``, flagging whether ``p=(1,1), q=(-1,1)`` generate ``Q^gp``."""
    pres = log_differentials(an_monoid(N))
    cmp = compare_claimed_basis(an_monoid(N), [(1, 1), (-1, 1)])
    if not cmp["generates_group"]:
        pres.notes.append(
            f"(1,1),(-1,1) span an index-{cmp['index_of_claimed_span']} lattice; "
            f"Q^gp has index {cmp['index_of_group']} in Z^2; SNF basis used")
    return pres


# -- Clifford generators -------------------------------------------------------------

def clifford_generators(N: int = 2) -> Dict[str, StateVector]:
    """``dp = c1+c2``, ``dq = c2-c1``, ``dp* = (b1+b2)/2``, ``dq* = (b2-b1)/2`` on the vacuum.

    The states do not depend on ``N``; it is accepted so callers can pass the chart order.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    c1, c2 = StateVector.from_modes([cghost(1, 0)]), StateVector.from_modes([cghost(2, 0)])
    b1, b2 = StateVector.from_modes([bghost(1, -1)]), StateVector.from_modes([bghost(2, -1)])
    half = Fraction(1, 2)
    return {"dp": c1 + c2, "dq": c2 - c1, "dp*": (b1 + b2) * half, "dq*": (b2 - b1) * half}


def clifford_pairing(N: int = 2) -> Dict[Tuple[str, str], OpeSingularPart]:
    gens = clifford_generators(N)
    return {(a, b): ope_singular(gens[a], gens[b]) for a in ("dp", "dq") for b in ("dp*", "dq*")}


# -- literals ------------------------------------------------------------------------

_VEC = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)")


def parse_monoid(text: str) -> FinGenMonoid:
    """Parse ``"gens=(3,0);(0,3);(1,1)"``, ``"(3,0);(0,3);(1,1)"``, ``"N2"`` or ``"A3"``."""
    s = text.strip()
    if re.fullmatch(r"N\d+", s):
        return standard_monoid(int(s[1:]))
    if re.fullmatch(r"A\d+", s):
        return an_monoid(int(s[1:]))
    if s.startswith("gens="):
        s = s[5:]
    parts = [p.strip() for p in s.split(";") if p.strip()]
    vecs = []
    for p in parts:
        m = _VEC.fullmatch(p)
        if not m:
            raise ValueError(f"bad generator literal {p!r}")
        vecs.append(tuple(int(x) for x in m.group(1).split(",")))
    return FinGenMonoid(vecs)


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True, indent=2)
