"""The Weyl algebra over Q in normal order, its Fourier transform, and jets.

An operator is a finite sum of terms ``c * x^alpha * d^beta`` with every
``x`` to the left of every ``d``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Mapping, Sequence

import gmpy2

from .linalg import DimensionMismatch, to_rational

Exp = tuple[int, ...]


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _commute_1var(b: int, g: int) -> list[tuple[int, int, int]]:
    """d^b x^g = sum_k C(b,k) g!/(g-k)! x^(g-k) d^(b-k); returns (coeff, xexp, dexp)."""
    return [(comb(b, k) * _falling(g, k), g - k, b - k) for k in range(min(b, g) + 1)]


class WeylOperator:
    """Element of the Weyl algebra in ``num_vars`` variables, normally ordered."""

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[tuple[Exp, Exp], object] | None = None):
        self.num_vars = num_vars
        clean: dict[tuple[Exp, Exp], Fraction] = {}
        for (a, b), c in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != num_vars or len(b) != num_vars:
                raise DimensionMismatch(f"exponent vectors must have length {num_vars}")
            c = to_rational(c)
            if c:
                clean[(a, b)] = clean.get((a, b), 0) + c
                if not clean[(a, b)]:
                    del clean[(a, b)]
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def constant(cls, num_vars: int, c) -> "WeylOperator":
        z = (0,) * num_vars
        return cls(num_vars, {(z, z): c})

    @classmethod
    def x(cls, num_vars: int, i: int) -> "WeylOperator":
        z = (0,) * num_vars
        e = tuple(int(k == i) for k in range(num_vars))
        return cls(num_vars, {(e, z): 1})

    @classmethod
    def d(cls, num_vars: int, i: int) -> "WeylOperator":
        z = (0,) * num_vars
        e = tuple(int(k == i) for k in range(num_vars))
        return cls(num_vars, {(z, e): 1})

    @classmethod
    def monomial(cls, xexp: Sequence[int], dexp: Sequence[int], c=1) -> "WeylOperator":
        return cls(len(xexp), {(tuple(xexp), tuple(dexp)): c})

    @property
    def terms(self) -> dict[tuple[Exp, Exp], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> int:
        """Differential order: max |beta| over the terms (0 for the zero operator)."""
        return max((sum(b) for (_, b) in self._terms), default=0)

    def x_degree(self) -> int:
        return max((sum(a) for (a, _) in self._terms), default=0)

    def _check(self, other: "WeylOperator"):
        if self.num_vars != other.num_vars:
            raise DimensionMismatch(f"{self.num_vars} vs {other.num_vars} variables")

    def __add__(self, other):
        if not isinstance(other, WeylOperator):
            other = WeylOperator.constant(self.num_vars, other)
        self._check(other)
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, 0) + c
        return WeylOperator(self.num_vars, t)

    __radd__ = __add__

    def __neg__(self):
        return WeylOperator(self.num_vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylOperator):
            other = WeylOperator.constant(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, WeylOperator):
            return weyl_mul(self, other)
        c = to_rational(other)
        return WeylOperator(self.num_vars, {k: c * v for k, v in self._terms.items()})

    def __rmul__(self, other):
        c = to_rational(other)
        return WeylOperator(self.num_vars, {k: c * v for k, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, WeylOperator):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == WeylOperator.constant(self.num_vars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"WeylOperator({self.num_vars}, {format_operator(self)!r})"

    def __str__(self):
        return format_operator(self)


def weyl_mul(A: WeylOperator, B: WeylOperator) -> WeylOperator:
    """Normally ordered product, expanding each d^beta x^gamma by Leibniz."""
    A._check(B)
    n = A.num_vars
    out: dict[tuple[Exp, Exp], Fraction] = {}
    for (a, b), c1 in A._terms.items():
        for (g, dl), c2 in B._terms.items():
            per_var = [_commute_1var(b[i], g[i]) for i in range(n)]
            for choice in product(*per_var):
                coeff = c1 * c2 * prod(t[0] for t in choice)
                xe = tuple(a[i] + choice[i][1] for i in range(n))
                de = tuple(choice[i][2] + dl[i] for i in range(n))
                key = (xe, de)
                out[key] = out.get(key, 0) + coeff
    return WeylOperator(n, out)


def commutator(A: WeylOperator, B: WeylOperator) -> WeylOperator:
    return weyl_mul(A, B) - weyl_mul(B, A)


def fourier(A: WeylOperator) -> WeylOperator:
    """Ring homomorphism x_i -> -d_i, d_i -> x_i, renormalized."""
    n = A.num_vars
    out: dict[tuple[Exp, Exp], Fraction] = {}
    for (a, b), c in A._terms.items():
        # image of x^a d^b is (-1)^|a| d^a x^b
        sign = -1 if sum(a) % 2 else 1
        per_var = [_commute_1var(a[i], b[i]) for i in range(n)]
        for choice in product(*per_var):
            coeff = sign * c * prod(t[0] for t in choice)
            key = (tuple(t[1] for t in choice), tuple(t[2] for t in choice))
            out[key] = out.get(key, 0) + coeff
    return WeylOperator(n, out)


# --- text serialization ---

def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_key(item):
    (a, b), _ = item
    return (sum(b), b, sum(a), a)


def format_operator(A: WeylOperator) -> str:
    if A.is_zero():
        return "0"
    parts = []
    for (a, b), c in sorted(A._terms.items(), key=_term_key):
        xs = ",".join(map(str, a))
        ds = ",".join(map(str, b))
        parts.append(f"{_fmt_rational(c)} * x^[{xs}] * d^[{ds}]")
    return " + ".join(parts)


_TERM_RE = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*\*\s*x\^\[([\d,\s]*)\]\s*\*\s*d\^\[([\d,\s]*)\]\s*$")


def parse_operator(text: str, num_vars: int | None = None) -> WeylOperator:
    text = text.strip()
    if text == "0":
        if num_vars is None:
            raise ValueError("num_vars is required to parse the zero operator")
        return WeylOperator(num_vars)
    terms: dict[tuple[Exp, Exp], Fraction] = {}
    n = num_vars
    for chunk in text.split(" + "):
        m = _TERM_RE.match(chunk)
        if not m:
            raise ValueError(f"cannot parse operator term {chunk!r}")
        c = Fraction(m.group(1))
        a = tuple(int(t) for t in m.group(2).split(",") if t.strip())
        b = tuple(int(t) for t in m.group(3).split(",") if t.strip())
        if n is None:
            n = len(a)
        if len(a) != n or len(b) != n:
            raise DimensionMismatch("inconsistent exponent vector lengths")
        terms[(a, b)] = terms.get((a, b), 0) + c
    return WeylOperator(n, terms)


# --- jets ---

def monomials_upto(n: int, degree: int) -> list[Exp]:
    """All exponent vectors of n variables with total degree <= degree, graded."""
    out: list[Exp] = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(n, d))
    return out


def monomials_of_degree(n: int, d: int) -> list[Exp]:
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


class Jet:
    """Truncated Taylor expansion sum c_g y^g, y = x - base_point, |g| <= order."""

    __slots__ = ("num_vars", "order", "coeffs", "base_point")

    def __init__(self, num_vars: int, order: int, coeffs: Mapping[Exp, object], base_point: Sequence):
        if len(base_point) != num_vars:
            raise DimensionMismatch("base point length differs from num_vars")
        self.num_vars = num_vars
        self.order = order
        self.base_point = tuple(to_rational(v) for v in base_point)
        clean = {}
        for g, c in coeffs.items():
            g = tuple(g)
            if len(g) != num_vars:
                raise DimensionMismatch("exponent vector length differs from num_vars")
            c = to_rational(c)
            if c and sum(g) <= order:
                clean[g] = c
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, order: int) -> "Jet":
        return Jet(self.num_vars, min(order, self.order), self.coeffs, self.base_point)

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.num_vars == other.num_vars and self.order == other.order
                and self.base_point == other.base_point and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"Jet(order={self.order}, base={self.base_point}, {len(self.coeffs)} terms)"

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        c = dict(self.coeffs)
        for g, v in other.coeffs.items():
            c[g] = c.get(g, 0) + v
        return Jet(self.num_vars, min(self.order, other.order), c, self.base_point)

    def scale(self, s) -> "Jet":
        s = to_rational(s)
        return Jet(self.num_vars, self.order, {g: s * v for g, v in self.coeffs.items()}, self.base_point)

    def __mul__(self, other: "Jet") -> "Jet":
        self._check(other)
        order = min(self.order, other.order)
        out: dict[Exp, Fraction] = {}
        for g1, c1 in self.coeffs.items():
            d1 = sum(g1)
            for g2, c2 in other.coeffs.items():
                if d1 + sum(g2) > order:
                    continue
                g = tuple(x + y for x, y in zip(g1, g2))
                out[g] = out.get(g, 0) + c1 * c2
        return Jet(self.num_vars, order, out, self.base_point)

    def _check(self, other: "Jet"):
        if self.num_vars != other.num_vars or self.base_point != other.base_point:
            raise DimensionMismatch("jets live at different points or dimensions")

    @classmethod
    def from_polynomial(cls, poly: Mapping[Exp, object], base_point: Sequence, order: int) -> "Jet":
        """Re-expand a polynomial given in global coordinates around ``base_point``."""
        n = len(base_point)
        a = tuple(to_rational(v) for v in base_point)
        out: dict[Exp, Fraction] = {}
        for e, c in poly.items():
            for g, v in _shift_monomial(tuple(e), a).items():
                if sum(g) <= order:
                    out[g] = out.get(g, 0) + to_rational(c) * v
        return cls(n, order, out, a)

    @classmethod
    def power_of_polynomial(cls, poly: Mapping[Exp, object], exponent, base_point: Sequence,
                            order: int) -> "Jet":
        """Jet of poly**exponent at a point where poly is nonzero and poly(a)**exponent is rational."""
        s = to_rational(exponent)
        base = cls.from_polynomial(poly, base_point, order)
        zero = (0,) * base.num_vars
        c0 = base.coeffs.get(zero, Fraction(0))
        if not c0:
            raise ValueError("polynomial vanishes at the base point")
        lead = _rational_power(c0, s)
        q = Jet(base.num_vars, order, {g: v / c0 for g, v in base.coeffs.items() if g != zero}, base.base_point)
        # (1 + q)^s = sum_k binom(s, k) q^k; q has no constant term so k <= order suffices
        total = Jet(base.num_vars, order, {zero: 1}, base.base_point)
        qk = total
        binom = Fraction(1)
        for k in range(1, order + 1):
            qk = qk * q
            binom = binom * (s - k + 1) / k
            total = total + qk.scale(binom)
        return total.scale(lead)


def _rational_power(c: Fraction, s: Fraction) -> Fraction:
    num, den = s.numerator, s.denominator
    if c < 0 and den % 2 == 0:
        raise ValueError(f"{c}^{s} is not real")
    sign = -1 if c < 0 else 1
    root = []
    for part in (abs(c.numerator), c.denominator):
        r, exact = gmpy2.iroot(part, den)
        if not exact:
            raise ValueError(f"{c}^{s} is not rational")
        root.append(int(r))
    base = Fraction(sign * root[0], root[1])
    return base ** num


def _shift_monomial(alpha: Exp, a: Sequence[Fraction]) -> dict[Exp, Fraction]:
    """x^alpha with x = y + a, expanded in y."""
    per_var = [[(comb(al, k) * a[i] ** (al - k), k) for k in range(al + 1)] for i, al in enumerate(alpha)]
    out: dict[Exp, Fraction] = {}
    for choice in product(*per_var):
        c = prod((t[0] for t in choice), start=Fraction(1))
        if c:
            g = tuple(t[1] for t in choice)
            out[g] = out.get(g, 0) + c
    return out


def term_action(xexp: Exp, dexp: Exp, gamma: Exp, base_point: Sequence[Fraction],
                _cache: dict | None = None) -> dict[Exp, Fraction]:
    """Action of x^xexp d^dexp on the monomial y^gamma (y = x - a), as a dict in y."""
    if any(g < b for g, b in zip(gamma, dexp)):
        return {}
    c = prod(_falling(g, b) for g, b in zip(gamma, dexp))
    lowered = tuple(g - b for g, b in zip(gamma, dexp))
    key = (xexp, tuple(base_point))
    shift = None if _cache is None else _cache.get(key)
    if shift is None:
        shift = _shift_monomial(xexp, base_point)
        if _cache is not None:
            _cache[key] = shift
    return {tuple(l + s for l, s in zip(lowered, g)): c * v for g, v in shift.items()}


def apply_to_jet(A: WeylOperator, j: Jet) -> Jet:
    """Apply A to the germ represented by j.

    The result is exact up to order ``j.order - A.order()``: x-multiplication
    never loses precision, each d lowers it by one.
    """
    if A.num_vars != j.num_vars:
        raise DimensionMismatch(f"{A.num_vars} vs {j.num_vars} variables")
    out_order = j.order - A.order()
    out: dict[Exp, Fraction] = {}
    cache: dict = {}
    for (a, b), c in A.items():
        for g, v in j.coeffs.items():
            for h, w in term_action(a, b, g, j.base_point, cache).items():
                if sum(h) <= out_order:
                    out[h] = out.get(h, 0) + c * v * w
    return Jet(j.num_vars, out_order, out, j.base_point)
