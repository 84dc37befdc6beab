"""Truncated formal power series in one and two variables over the rationals.

Every series carries its truncation order ``order``: coefficients are known
exactly for total degree ``<= order`` and nothing beyond is stored.  Binary
operations refuse operands of different order instead of re-truncating.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class TruncationMismatch(ValueError):
    """Raised when two series of different truncation order are combined."""


def parse_rational(text: str) -> Fraction:
    """Parse a canonical ``"num/den"`` (or ``"num"``) string, requiring lowest terms."""
    num, _, den = str(text).partition("/")
    n, d = int(num), int(den) if den else 1
    if d <= 0:
        raise ValueError(f"denominator must be positive: {text!r}")
    q = Fraction(n, d)
    if (q.numerator, q.denominator) != (n, d):
        raise ValueError(f"rational not in lowest terms: {text!r}")
    return q


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class _Series:
    nvars = 0
    __slots__ = ("_c", "order")

    def __init__(self, coeffs: Mapping = (), order: int = 0):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        c: Dict[Tuple[int, ...], Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for key, val in items:
            key = self._key(key)
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent {key}")
            if sum(key) > order:
                continue
            val = Fraction(val)
            if val:
                c[key] = c.get(key, 0) + val
        self._c = {k: v for k, v in c.items() if v}
        self.order = order

    @classmethod
    def _key(cls, key) -> Tuple[int, ...]:
        key = (key,) if isinstance(key, int) else tuple(int(k) for k in key)
        if len(key) != cls.nvars:
            raise ValueError(f"expected {cls.nvars} exponents, got {key}")
        return key

    @classmethod
    def _raw(cls, c, order):
        s = cls.__new__(cls)
        s._c = {k: v for k, v in c.items() if v and sum(k) <= order}
        s.order = order
        return s

    # -- access -------------------------------------------------------------
    def __getitem__(self, key) -> Fraction:
        return self._c.get(self._key(key), Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def constant(self) -> Fraction:
        return self._c.get((0,) * self.nvars, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def truncate(self, order: int):
        return self._raw(self._c, min(order, self.order))

    def lift(self, order: int):
        """Same coefficients at a larger order, i.e. read as a polynomial."""
        if order < self.order:
            raise ValueError("lift cannot lower the order; use truncate")
        return self._raw(self._c, order)

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.order != self.order:
            raise TruncationMismatch(f"orders differ: {self.order} vs {other.order}")

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.scalar(other)
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return self._raw(c, self.order)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -v for k, v in self._c.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return self._raw({k: v * other for k, v in self._c.items()}, self.order)
        self._check(other)
        D = self.order
        c: Dict[Tuple[int, ...], Fraction] = {}
        for k1, v1 in self._c.items():
            d1 = sum(k1)
            for k2, v2 in other._c.items():
                if d1 + sum(k2) > D:
                    continue
                k = tuple(a + b for a, b in zip(k1, k2))
                c[k] = c.get(k, 0) + v1 * v2
        return self._raw(c, D)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return unit_invert(self) ** (-n)
        result = self.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * unit_invert(other)

    def __eq__(self, other):
        if not isinstance(other, _Series):
            return NotImplemented
        return type(self) is type(other) and self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((type(self).__name__, self.order, frozenset(self._c.items())))

    def agrees_with(self, other, through: int) -> bool:
        """Coefficient-wise equality for total degree ``<= through``."""
        keys = set(self._c) | set(other._c)
        return all(self._c.get(k, 0) == other._c.get(k, 0) for k in keys if sum(k) <= through)

    def scalar(self, value: Scalar):
        return self._raw({(0,) * self.nvars: Fraction(value)}, self.order)

    def one(self):
        return self.scalar(1)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> str:
        terms = [[list(k) if self.nvars > 1 else k[0], format_rational(v)] for k, v in self.items()]
        return json.dumps({"nvars": self.nvars, "order": self.order, "terms": terms})

    @classmethod
    def from_json(cls, text: str):
        data = json.loads(text)
        if data.get("nvars") != cls.nvars:
            raise ValueError(f"expected nvars={cls.nvars}")
        order = int(data["order"])
        coeffs = {}
        for key, val in data["terms"]:
            key = cls._key(key)
            if key in coeffs:
                raise ValueError(f"duplicate exponent {key}")
            coeffs[key] = parse_rational(val)
        return cls(coeffs, order)


class TruncatedSeries1(_Series):
    """Series in one variable; coefficients indexed by an int exponent."""

    nvars = 1
    __slots__ = ()

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries1":
        return cls({1: 1}, order)

    @classmethod
    def from_list(cls, coeffs: Iterable[Scalar], order: int | None = None) -> "TruncatedSeries1":
        coeffs = list(coeffs)
        return cls(dict(enumerate(coeffs)), len(coeffs) - 1 if order is None else order)

    def coefficients(self) -> Dict[int, Fraction]:
        return {k[0]: v for k, v in self.items()}

    def to_list(self):
        return [self[k] for k in range(self.order + 1)]

    def shift_down(self) -> "TruncatedSeries1":
        """``a / gamma`` for a series with zero constant term; the order drops by one."""
        if self.constant():
            raise ValueError("series has a nonzero constant term")
        return self._raw({(k[0] - 1,): v for k, v in self._c.items()}, self.order - 1)

    def shift_up(self) -> "TruncatedSeries1":
        """``gamma * a``; the order grows by one."""
        return self._raw({(k[0] + 1,): v for k, v in self._c.items()}, self.order + 1)

    def __repr__(self):
        terms = " + ".join(f"({v})*g^{k[0]}" for k, v in self.items()) or "0"
        return f"TruncatedSeries1({terms}, order={self.order})"


class TruncatedSeries2(_Series):
    """Series in ``x, y`` truncated at total degree ``order``."""

    nvars = 2
    __slots__ = ()

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries2":
        return cls({(1, 0): 1}, order)

    @classmethod
    def y(cls, order: int) -> "TruncatedSeries2":
        return cls({(0, 1): 1}, order)

    def divide_by(self, var: int) -> "TruncatedSeries2":
        """Exact division by ``x`` (var=0) or ``y`` (var=1); order drops by one."""
        out = {}
        for k, v in self._c.items():
            if k[var] == 0:
                raise ValueError(f"series not divisible by {'xy'[var]}")
            k2 = list(k)
            k2[var] -= 1
            out[tuple(k2)] = v
        return self._raw(out, self.order - 1)

    def __repr__(self):
        terms = " + ".join(f"({v})*x^{i}*y^{j}" for (i, j), v in self.items()) or "0"
        return f"TruncatedSeries2({terms}, order={self.order})"


TruncatedSeries = Union[TruncatedSeries1, TruncatedSeries2]


def unit_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    a0 = a.constant()
    if not a0:
        raise ZeroDivisionError("series has zero constant term; not a unit")
    D = a.order
    if isinstance(a, TruncatedSeries1):
        # triangular solve: sum_{i<=k} a_i b_{k-i} = [k == 0]
        ac = a.coefficients()
        b = [Fraction(0)] * (D + 1)
        b[0] = 1 / a0
        for k in range(1, D + 1):
            s = sum((ac.get(i, 0) * b[k - i] for i in range(1, k + 1)), Fraction(0))
            b[k] = -s / a0
        return TruncatedSeries1.from_list(b, D)
    # 1/a = (1/a0) * sum_k (-r)^k with r = a/a0 - 1 of positive valuation
    r = a * (1 / a0) - 1
    term, total = a.one(), a.one()
    for _ in range(D):
        term = term * (-r)
        total = total + term
    return total * (1 / a0)


def compose1(f: TruncatedSeries1, h: TruncatedSeries1) -> TruncatedSeries1:
    """``f(h(gamma))``; ``h`` must have zero constant term."""
    f._check(h)
    if h.constant():
        raise ValueError("inner series must have zero constant term")
    result = f.scalar(0)
    for k in range(f.order, -1, -1):
        result = result * h + f[k]
    return result


def compose2(f: TruncatedSeries2, hx: TruncatedSeries2, hy: TruncatedSeries2) -> TruncatedSeries2:
    """``f(hx(x, y), hy(x, y))``; both inner series must vanish at the origin."""
    f._check(hx)
    f._check(hy)
    if hx.constant() or hy.constant():
        raise ValueError("inner series must have zero constant term")
    D = f.order
    px, py = [f.one()], [f.one()]
    for _ in range(D):
        px.append(px[-1] * hx)
        py.append(py[-1] * hy)
    result = f.scalar(0)
    for (i, j), v in f.items():
        result = result + px[i] * py[j] * v
    return result


def comp_invert1(f: TruncatedSeries1) -> TruncatedSeries1:
    """Compositional inverse ``g`` with ``f(g(t)) = t`` through the order of ``f``.

    Solved coefficient by coefficient: the degree-k coefficient of ``f(g)`` is
    ``a1*g_k`` plus terms involving only ``g_1..g_{k-1}``.
    """
    if f.constant():
        raise ValueError("series must vanish at 0")
    a1 = f[1]
    if not a1:
        raise ZeroDivisionError("linear coefficient is zero; not invertible")
    D = f.order
    g = TruncatedSeries1({1: 1 / a1}, D)
    higher = f - TruncatedSeries1({1: a1}, D)
    for k in range(2, D + 1):
        gk = -compose1(higher, g)[k] / a1
        g = g + TruncatedSeries1({k: gk}, D)
    return g


def derive(a: TruncatedSeries, variable: int = 0) -> TruncatedSeries:
    """Formal partial derivative; the truncation order drops by one."""
    if a.order == 0:
        raise ValueError("cannot differentiate an order-0 series")
    out = {}
    for k, v in a._c.items():
        if k[variable]:
            k2 = list(k)
            k2[variable] -= 1
            out[tuple(k2)] = v * k[variable]
    return type(a)._raw(out, a.order - 1)


def monomials2(order: int):
    """All exponent pairs ``(i, j)`` with ``i + j <= order``."""
    return [(i, j) for i, j in product(range(order + 1), repeat=2) if i + j <= order]
