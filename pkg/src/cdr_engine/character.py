"""The cyclic-group invariants ``V_Q`` of the beta-gamma system of rank 2.

The generator of ``Z/N`` acts on modes by ``gamma^1 -> e gamma^1``,
``gamma^2 -> e^-1 gamma^2`` and contragrediently on ``beta``, so a
monomial is invariant iff its total charge (``mode.g_charge``) vanishes mod N.

``V_Q`` is treated in the polynomial model: states are commuting monomials
in the creation modes and the product is concatenation.  The minimal number
of generators of ``V_Q^r`` over ``V_Q^0`` is computed by graded Nakayama,
``dim V_Q^r / m V_Q^r`` with ``m = ((gamma_0^1)^N, (gamma_0^2)^N, gamma_0^1 gamma_0^2)``,
one gamma_0-degree at a time.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Dict, List, Optional, Tuple

from .modes import Kind, Mode, Monomial, beta, format_monomial, gamma, monomial_to_json
from .monoid import FinGenMonoid

CSV_COLUMNS = ["N", "r", "formula", "formula_multichoose_variant", "oracle", "stable", "witness_count"]
CSV_VERSION = "1"


@dataclass(frozen=True)
class GAction:
    """``Z/N`` acting on beta-gamma modes with weights +1 on gamma^1, -1 on gamma^2."""

    N: int

    def weight(self, mode: Mode) -> int:
        return mode.g_charge % self.N

    def charge(self, mono: Monomial) -> int:
        return sum(mode.g_charge * p for mode, p in mono)

    def invariant(self, mono: Monomial) -> bool:
        return self.charge(mono) % self.N == 0


# -- partitions and the recursive formula --------------------------------------------

@lru_cache(maxsize=None)
def _parts_bounded(m: int, n: int, largest: int) -> int:
    # partitions of m into at most n parts, each at most `largest`
    if m == 0:
        return 1
    if n == 0 or largest == 0:
        return 0
    return sum(_parts_bounded(m - k, n - 1, k) for k in range(1, min(m, largest) + 1))


def partitions_at_most(n: int, m: int) -> int:
    """``p_n(m)``, partitions of ``m`` into at most ``n`` parts; zero for ``m <= 0``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if m <= 0:
        return 0
    return _parts_bounded(m, n, m)


def _multiplicity_vectors(r: int, largest: int):
    """Tuples ``(n_1, ..., n_largest)`` with ``sum k n_k = r``."""
    def rec(rem, k):
        if k == 0:
            if rem == 0:
                yield ()
            return
        for nk in range(rem // k + 1):
            for rest in rec(rem - k * nk, k - 1):
                yield rest + (nk,)
    yield from rec(r, largest)


@lru_cache(maxsize=None)
def _formula(N: int, r: int, multichoose: bool) -> int:
    if r == 1:
        return 6
    total = 4 * r + 2 * partitions_at_most(N, r) + 2 * partitions_at_most(N, r - N)
    lengths = [_formula(N, k, multichoose) for k in range(1, r)]
    for ns in _multiplicity_vectors(r, r - 1):
        if multichoose:
            total += prod(comb(lengths[k] + n - 1, n) for k, n in enumerate(ns))
        else:
            total += prod(comb(lengths[k], n) for k, n in enumerate(ns))
    return total


def formula_length(N: int, r: int) -> int:
    """The recursive length formula with binomial coefficients, starting from 6 at ``r = 1``."""
    if N < 2 or r < 1:
        raise ValueError("need N >= 2 and r >= 1")
    return _formula(N, r, False)


def formula_length_multichoose(N: int, r: int) -> int:
    """Same recursion with multiset coefficients ``binom(d + n - 1, n)``."""
    if N < 2 or r < 1:
        raise ValueError("need N >= 2 and r >= 1")
    return _formula(N, r, True)


# -- enumeration -------------------------------------------------------------------------

def _merge(a: Monomial, b: Monomial) -> Monomial:
    acc: Dict[Mode, int] = {}
    for mode, p in a + b:
        acc[mode] = acc.get(mode, 0) + p
    return tuple(sorted(acc.items()))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    """Product in the polynomial model (commuting bosonic creation modes)."""
    return _merge(a, b)


@lru_cache(maxsize=None)
def _nonzero_parts(r: int) -> Tuple[Monomial, ...]:
    """All monomials in the modes ``beta_{-k}, gamma_{-k}`` (k >= 1) of weight exactly r."""
    atoms = [mk(i, -k) for k in range(1, r + 1) for mk in (beta, gamma) for i in (1, 2)]
    atoms.sort()
    out = []

    def rec(start, rem, acc):
        if rem == 0:
            out.append(tuple(sorted(acc.items())))
            return
        for j in range(start, len(atoms)):
            w = atoms[j].weight
            if w <= rem:
                acc[atoms[j]] = acc.get(atoms[j], 0) + 1
                rec(j, rem - w, acc)
                acc[atoms[j]] -= 1
                if not acc[atoms[j]]:
                    del acc[atoms[j]]

    rec(0, r, {})
    return tuple(sorted(out))


def gamma0_power(a: int, b: int) -> Monomial:
    mono = []
    if a:
        mono.append((gamma(1, 0), a))
    if b:
        mono.append((gamma(2, 0), b))
    return tuple(mono)


def _block_monoid(N: int) -> FinGenMonoid:
    # species counts (beta1, beta2, gamma1, gamma2) of the listed generating blocks
    return FinGenMonoid([(N, 0, 0, 0), (0, N, 0, 0), (1, 1, 0, 0), (0, 0, N, 0), (0, 0, 0, N),
                         (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1)])


def species_counts(mono: Monomial) -> Tuple[int, int, int, int]:
    c = [0, 0, 0, 0]
    for mode, p in mono:
        c[(0 if mode.kind == Kind.BETA else 2) + mode.species - 1] += p
    return tuple(c)


@dataclass
class GradedSlice:
    """Invariant monomials of weight ``r`` keyed by gamma_0-degree."""

    N: int
    r: int
    cutoff: int
    strata: Dict[int, List[Monomial]]
    not_block_products: List[Monomial] = field(default_factory=list)

    def monomials(self) -> List[Monomial]:
        return [m for d in sorted(self.strata) for m in self.strata[d]]

    def __len__(self):
        return sum(len(v) for v in self.strata.values())

    def __contains__(self, mono):
        return any(mono in v for v in self.strata.values())


def enumerate_invariant_slice(N: int, r: int, gamma0_cutoff: int) -> GradedSlice:
    """All invariant beta-gamma monomials of weight ``r`` and gamma_0-degree at most the cutoff.

    Each monomial is also tested for being a product of the blocks
    ``(beta^i)^N, beta^1 beta^2, (gamma^i)^N, gamma^1 gamma^2, beta^i gamma^i``
    (any modes); those that are not are listed in ``not_block_products``.
    """
    if r < 0:
        raise ValueError("weight must be non-negative")
    act = GAction(N)
    blocks = _block_monoid(N)
    strata: Dict[int, List[Monomial]] = {d: [] for d in range(gamma0_cutoff + 1)}
    odd = []
    for M in _nonzero_parts(r) if r else ((),):
        for d in range(gamma0_cutoff + 1):
            for a in range(d + 1):
                mono = _merge(M, gamma0_power(a, d - a))
                if act.invariant(mono):
                    strata[d].append(mono)
                    counts = species_counts(mono)
                    if any(counts) and not blocks.contains(counts):
                        odd.append(mono)
    for d in strata:
        strata[d].sort()
    return GradedSlice(N, r, gamma0_cutoff, strata, odd)


# -- graded Nakayama ------------------------------------------------------------------

def _rank_and_pivots(rows: List[Dict[Monomial, Fraction]], extra: List[Monomial]):
    """Row-reduce ``rows``, then greedily add unit vectors from ``extra`` that raise the rank."""
    basis: Dict[Monomial, Dict[Monomial, Fraction]] = {}  # pivot -> reduced row

    def reduce(v):
        v = dict(v)
        # rows are kept fully reduced, so only pivots already present in v matter
        for piv in [k for k in v if k in basis]:
            row = basis[piv]
            c = v.get(piv)
            if c:
                for k, x in row.items():
                    v[k] = v.get(k, 0) - c * x
                    if not v[k]:
                        del v[k]
        return v

    def insert(v):
        v = reduce(v)
        if not v:
            return False
        piv = min(v)
        c = v[piv]
        v = {k: x / c for k, x in v.items()}
        for p, row in basis.items():
            k = row.get(piv)
            if k:
                for key, x in v.items():
                    row[key] = row.get(key, 0) - k * x
                    if not row[key]:
                        del row[key]
        basis[piv] = v
        return True

    for v in rows:
        insert(v)
    rank = len(basis)
    witnesses = [m for m in extra if insert({m: Fraction(1)})]
    return rank, witnesses


def ideal_generators(N: int) -> List[Monomial]:
    return [gamma0_power(N, 0), gamma0_power(0, N), gamma0_power(1, 1)]


@dataclass
class GeneratorCount:
    N: int
    r: int
    cutoff: int
    count: int
    witnesses: List[Monomial]
    per_degree: Dict[int, int]
    counts_at: Dict[int, int]
    stable: bool

    def suggestion(self) -> Optional[int]:
        return None if self.stable else self.cutoff + 2 * self.N


def _count_at(N: int, r: int, cutoff: int):
    sl = enumerate_invariant_slice(N, r, cutoff)
    gens = ideal_generators(N)
    per_degree, witnesses = {}, []
    for d in range(cutoff + 1):
        rows = []
        for g in gens:
            dg = sum(p for _, p in g)
            if dg <= d:
                rows += [{_merge(g, y): Fraction(1)} for y in sl.strata[d - dg]]
        rank, wit = _rank_and_pivots(rows, sl.strata[d])
        per_degree[d] = len(sl.strata[d]) - rank
        assert per_degree[d] == len(wit)
        witnesses += wit
    return sum(per_degree.values()), witnesses, per_degree


def minimal_generators(N: int, r: int, gamma0_cutoff: Optional[int] = None) -> GeneratorCount:
    """Minimal number of homogeneous generators of ``V_Q^r`` over ``V_Q^0``.

    The count is repeated at ``cutoff + N`` and ``cutoff + 2N``; ``stable`` says
    whether all three agree.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    cutoff = N + 2 if gamma0_cutoff is None else gamma0_cutoff
    runs = {c: _count_at(N, r, c) for c in (cutoff, cutoff + N, cutoff + 2 * N)}
    count, wit, per = runs[cutoff]
    counts_at = {c: v[0] for c, v in runs.items()}
    stable = len(set(counts_at.values())) == 1
    return GeneratorCount(N, r, cutoff, count, wit, per, counts_at, stable)


def predicted_generator_count(N: int, r: int) -> int:
    """Closed count for the polynomial model: each nonzero-mode part contributes 1 or 2.

    A part of charge 0 mod N needs only itself; otherwise it needs one pure
    power of ``gamma_0^1`` and one of ``gamma_0^2``.
    """
    act = GAction(N)
    return sum(1 if act.invariant(M) else 2 for M in _nonzero_parts(r))


# -- the comparison report ---------------------------------------------------------

@dataclass
class CharacterRow:
    N: int
    r: int
    formula: int
    formula_multichoose_variant: int
    oracle: int
    stable: bool
    cutoff: int
    witnesses: List[Monomial]

    @property
    def agrees(self) -> bool:
        return self.formula == self.oracle

    def csv_row(self):
        return [self.N, self.r, self.formula, self.formula_multichoose_variant, self.oracle,
                "stable" if self.stable else "unstable", len(self.witnesses)]

    def to_json(self):
        return {"N": self.N, "r": self.r, "formula": self.formula,
                "formula_multichoose_variant": self.formula_multichoose_variant,
                "oracle": self.oracle, "stable": self.stable, "cutoff": self.cutoff,
                "agrees": self.agrees,
                "witnesses": [format_monomial(m) for m in self.witnesses],
                "witnesses_json": [monomial_to_json(m) for m in self.witnesses]}


@dataclass
class CharacterReport:
    N: int
    rows: List[CharacterRow]

    @property
    def stable(self) -> bool:
        return all(r.stable for r in self.rows)

    def mismatches(self) -> List[int]:
        return [r.r for r in self.rows if not r.agrees]

    def to_json(self):
        return {"N": self.N, "csv_version": CSV_VERSION, "stable": self.stable,
                "mismatches": self.mismatches(), "rows": [r.to_json() for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_row())
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"N={self.N}  " + " ".join(f"{c:>10}" for c in CSV_COLUMNS[1:])]
        for r in self.rows:
            cells = r.csv_row()[1:]
            flag = "" if r.agrees else "  <- formula != oracle"
            lines.append(f"N={self.N}  " + " ".join(f"{str(c):>10}" for c in cells) + flag)
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CDR_ENGINE_THREADS", "1")))
    except ValueError:
        return 1


def compare(N: int, r_max: int, gamma0_cutoff: Optional[int] = None, max_cutoff: Optional[int] = None) -> CharacterReport:
    """Formula versus oracle for ``r = 1..r_max``.

    If the oracle is not stable at the starting cutoff, the cutoff is raised by
    ``N`` until it is or ``max_cutoff`` (default ``3N + 6``) is reached.
    """
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    start = N + 2 if gamma0_cutoff is None else gamma0_cutoff
    limit = 3 * N + 6 if max_cutoff is None else max_cutoff

    def row(r):
        c = start
        g = minimal_generators(N, r, c)
        while not g.stable and c + N <= limit:
            c += N
            g = minimal_generators(N, r, c)
        return CharacterRow(N, r, formula_length(N, r), formula_length_multichoose(N, r),
                            g.count, g.stable, c, g.witnesses)

    rs = range(1, r_max + 1)
    n = _threads()
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(row, rs))
    else:
        rows = [row(r) for r in rs]
    return CharacterReport(N, rows)


def standard_weight_one_generators(N: int) -> List[Monomial]:
    """The six weight-one generators ``(gamma_0^i)^(N-1) gamma^i_{-1}``, ``gamma_0^1 gamma^2_{-1}``,
    ``gamma^1_{-1} gamma_0^2``, ``beta^i_{-1} gamma_0^i``."""
    out = [
        _merge(gamma0_power(N - 1, 0), ((gamma(1, -1), 1),)),
        _merge(gamma0_power(0, N - 1), ((gamma(2, -1), 1),)),
        _merge(gamma0_power(1, 0), ((gamma(2, -1), 1),)),
        _merge(gamma0_power(0, 1), ((gamma(1, -1), 1),)),
        _merge(gamma0_power(1, 0), ((beta(1, -1), 1),)),
        _merge(gamma0_power(0, 1), ((beta(2, -1), 1),)),
    ]
    return sorted(out)
