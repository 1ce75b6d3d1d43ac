"""Partial flag varieties F(d_1, ..., d_r, n) through their Stiefel bundles.

A point of the Stiefel bundle is a tuple (m_r, ..., m_1) with m_i of size
d_{i+1} x d_i (d_{r+1} = n); the flag is E_i = column span of m_r ... m_i and
the Pluecker coordinate x_J at step i is det((m_r ... m_i)_J). Index sets
are 1-based, as in the usual notation x_{12}, x_{345}.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .linalg import SparseMatrix, to_rational


class ShapeMismatch(ValueError):
    pass


class SingularBlock(ArithmeticError):
    """A designated J-block of the Stiefel point is singular."""


@dataclass(frozen=True)
class FlagShape:
    dims: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        prev = 0
        for d in self.dims:
            if not prev < d < self.n:
                raise ValueError(f"dims must satisfy 0 < d_1 < ... < d_r < n, got {self.dims}, n={self.n}")
            prev = d
        if not self.dims:
            raise ValueError("a flag shape needs at least one step")

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> "FlagShape":
        """'1,2,3,5' or [1, 2, 3, 5]: the last entry is n."""
        vals = [int(t) for t in text.split(",")] if isinstance(text, str) else [int(t) for t in text]
        return cls(tuple(vals[:-1]), vals[-1])

    @property
    def r(self) -> int:
        return len(self.dims)

    def d(self, i: int) -> int:
        """d_i with the conventions d_0 = 0, d_{r+1} = n (1-based)."""
        if i <= 0:
            return 0
        if i > self.r:
            return self.n
        return self.dims[i - 1]

    @property
    def dimension(self) -> int:
        return sum(self.d(i) * (self.d(i + 1) - self.d(i)) for i in range(1, self.r + 1))

    def dual(self) -> "FlagShape":
        return FlagShape(tuple(self.n - d for d in reversed(self.dims)), self.n)

    def as_list(self) -> list[int]:
        return [*self.dims, self.n]

    def __str__(self):
        return f"F({','.join(map(str, self.as_list()))})"


@dataclass(frozen=True, order=True)
class PluckerIndex:
    step: int
    entries: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        if list(e) != sorted(set(e)):
            raise ValueError(f"entries must be strictly increasing, got {e}; use PluckerIndex.signed")
        object.__setattr__(self, "entries", e)

    @classmethod
    def signed(cls, step: int, entries: Iterable[int]) -> tuple[int, "PluckerIndex | None"]:
        """Sort arbitrary entries: x_{sigma(J)} = sgn(sigma) x_J. Repeats give (0, None)."""
        e = list(entries)
        if len(set(e)) != len(e):
            return 0, None
        sign = 1
        for i in range(len(e)):
            for j in range(i + 1, len(e)):
                if e[i] > e[j]:
                    sign = -sign
        return sign, cls(step, tuple(sorted(e)))

    def __str__(self):
        body = ",".join(map(str, self.entries)) if max(self.entries) > 9 else "".join(map(str, self.entries))
        return f"x{self.step}_{{{body}}}"


Monomial = tuple[tuple[PluckerIndex, int], ...]


def _mono(factors: Mapping[PluckerIndex, int]) -> Monomial:
    return tuple(sorted((j, e) for j, e in factors.items() if e))


class PluckerPolynomial:
    """Polynomial in Pluecker symbols, homogeneous of a fixed multidegree."""

    __slots__ = ("shape", "_terms")

    def __init__(self, shape: FlagShape, terms: Mapping[Monomial, object] | None = None):
        self.shape = shape
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = to_rational(c)
            if not c:
                continue
            mono = _mono(dict(mono))
            for j, _ in mono:
                if not 1 <= j.step <= shape.r or len(j.entries) != shape.d(j.step):
                    raise ShapeMismatch(f"{j} does not fit {shape}")
                if j.entries[0] < 1 or j.entries[-1] > shape.n:
                    raise ShapeMismatch(f"{j} has entries outside 1..{shape.n}")
            clean[mono] = clean.get(mono, 0) + c
            if not clean[mono]:
                del clean[mono]
        self._terms = clean
        degs = {self._multidegree_of(m) for m in clean}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial: multidegrees {sorted(degs)}")

    @classmethod
    def one(cls, shape: FlagShape) -> "PluckerPolynomial":
        return cls(shape, {(): 1})

    @classmethod
    def monomial(cls, shape: FlagShape, factors: Iterable[tuple[int, Sequence[int], int]] | Mapping,
                 coeff=1) -> "PluckerPolynomial":
        """factors: iterable of (step, J, exponent); unsorted J picks up its sign."""
        sign = 1
        fac: dict[PluckerIndex, int] = {}
        items = factors.items() if isinstance(factors, Mapping) else factors
        for item in items:
            if isinstance(factors, Mapping):
                j, e = item
                step, entries = j.step, j.entries
            else:
                step, entries, e = item
            s, j = PluckerIndex.signed(step, entries)
            if s == 0:
                return cls(shape)
            if e % 2 and s < 0:
                sign = -sign
            fac[j] = fac.get(j, 0) + e
        return cls(shape, {_mono(fac): sign * to_rational(coeff)})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def _multidegree_of(self, mono: Monomial) -> tuple[int, ...]:
        k = [0] * self.shape.r
        for j, e in mono:
            k[j.step - 1] += e
        return tuple(k)

    @property
    def multidegree(self) -> tuple[int, ...]:
        if not self._terms:
            return (0,) * self.shape.r
        return self._multidegree_of(next(iter(self._terms)))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def exponent(self, j: PluckerIndex) -> int:
        """Minimal exponent of x_j over all terms."""
        if not self._terms:
            return 0
        return min(dict(m).get(j, 0) for m in self._terms)

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "PluckerPolynomial") -> "PluckerPolynomial":
        self._check(other)
        t = dict(self._terms)
        for m, c in other._terms.items():
            t[m] = t.get(m, 0) + c
        return PluckerPolynomial(self.shape, t)

    def __neg__(self):
        return PluckerPolynomial(self.shape, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PluckerPolynomial):
            c = to_rational(other)
            return PluckerPolynomial(self.shape, {m: c * v for m, v in self._terms.items()})
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                fac = dict(m1)
                for j, e in m2:
                    fac[j] = fac.get(j, 0) + e
                key = _mono(fac)
                out[key] = out.get(key, 0) + c1 * c2
        return PluckerPolynomial(self.shape, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PluckerPolynomial.one(self.shape)
        for _ in range(k):
            out = out * self
        return out

    def divide_monomial(self, factors: Mapping[PluckerIndex, int]) -> "PluckerPolynomial":
        """Formal division by a monomial; raises if the divisor is not literally present."""
        out = {}
        for m, c in self._terms.items():
            fac = dict(m)
            for j, e in factors.items():
                if fac.get(j, 0) < e:
                    raise ValueError(f"{j}^{e} does not divide the term {format_monomial(m)}")
                fac[j] -= e
            out[_mono(fac)] = c
        return PluckerPolynomial(self.shape, out)

    def normalized(self) -> tuple[Fraction, "PluckerPolynomial"]:
        """(c, g) with self = c * g and the leading coefficient of g equal to 1."""
        if not self._terms:
            return Fraction(1), self
        lead = self._terms[min(self._terms)]
        return lead, self * (1 / lead)

    def __eq__(self, other):
        return isinstance(other, PluckerPolynomial) and self.shape == other.shape and self._terms == other._terms

    def __hash__(self):
        return hash((self.shape, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items()):
            body = format_monomial(m)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"PluckerPolynomial({self.shape}, {self})"

    # JSON
    def to_json(self) -> dict:
        terms = []
        for m, c in sorted(self._terms.items()):
            mono = []
            for j, e in m:
                mono.extend([[j.step, list(j.entries)]] * e)
            terms.append({"coeff": _fmt(c), "monomial": mono})
        return {"shape": self.shape.as_list(), "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "PluckerPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        shape = FlagShape.parse(data["shape"])
        out = cls(shape)
        for t in data["terms"]:
            fac = [(step, tuple(J), 1) for step, J in t["monomial"]]
            out = out + cls.monomial(shape, fac, Fraction(t["coeff"]))
        return out


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    out = []
    for j, e in m:
        body = "".join(map(str, j.entries)) if max(j.entries) <= 9 else ",".join(map(str, j.entries))
        out.append(f"x{body}" + (f"^{e}" if e > 1 else ""))
    return "*".join(out)


# --- Stiefel points ---

@dataclass(frozen=True)
class StiefelPoint:
    """(m_r, ..., m_1) stored by step: ``mats[i - 1]`` is m_i, of size d_{i+1} x d_i."""

    shape: FlagShape
    mats: tuple

    def __post_init__(self):
        mats = tuple(tuple(tuple(to_rational(x) for x in row) for row in m) for m in self.mats)
        object.__setattr__(self, "mats", mats)
        if len(mats) != self.shape.r:
            raise ShapeMismatch(f"expected {self.shape.r} matrices, got {len(mats)}")
        for i, m in enumerate(mats, start=1):
            want = (self.shape.d(i + 1), self.shape.d(i))
            if la.shape(m) != want:
                raise ShapeMismatch(f"m_{i} must be {want[0]}x{want[1]}, got {la.shape(m)}")

    @classmethod
    def from_top_down(cls, shape: FlagShape, mats_r_to_1: Sequence) -> "StiefelPoint":
        return cls(shape, tuple(reversed(list(mats_r_to_1))))

    def m(self, i: int):
        return [list(row) for row in self.mats[i - 1]]

    def partial_product(self, i: int):
        """m_r ... m_i, an n x d_i matrix spanning E_i."""
        out = self.m(self.shape.r)
        for k in range(self.shape.r - 1, i - 1, -1):
            out = la.matmul(out, self.m(k))
        return out

    def partial_products(self) -> list:
        out = [None] * self.shape.r
        acc = self.m(self.shape.r)
        out[-1] = acc
        for k in range(self.shape.r - 1, 0, -1):
            acc = la.matmul(acc, self.m(k))
            out[k - 1] = acc
        return out

    def is_valid(self) -> bool:
        return all(la.dense_rank(p) == self.shape.d(i) for i, p in enumerate(self.partial_products(), start=1))

    def act_inverse(self, h: Sequence) -> "StiefelPoint":
        """m . h^{-1} = (m_r h_r^{-1}, h_r m_{r-1} h_{r-1}^{-1}, ..., h_2 m_1 h_1^{-1}); h[i-1] = h_i."""
        r = self.shape.r
        hinv = [la.inverse(h[i]) for i in range(r)]
        mats = []
        for i in range(1, r + 1):
            mi = la.matmul(self.m(i), hinv[i - 1])
            if i < r:
                mi = la.matmul(h[i], mi)
            mats.append(mi)
        return StiefelPoint(self.shape, tuple(mats))

    def act(self, h: Sequence) -> "StiefelPoint":
        """m . h (right action): same as act_inverse with h replaced by h^{-1}."""
        return self.act_inverse([la.inverse(x) for x in h])


def _rows(J: Sequence[int]) -> list[int]:
    return [j - 1 for j in J]


def plucker_eval(m: StiefelPoint, J: PluckerIndex, _products: list | None = None) -> Fraction:
    if not 1 <= J.step <= m.shape.r or len(J.entries) != m.shape.d(J.step):
        raise ShapeMismatch(f"{J} does not fit {m.shape}")
    if J.entries[-1] > m.shape.n:
        raise ShapeMismatch(f"{J} has entries outside 1..{m.shape.n}")
    p = _products[J.step - 1] if _products is not None else m.partial_product(J.step)
    return la.det(la.submatrix_rows(p, _rows(J.entries)))


def section_eval(f: PluckerPolynomial, m: StiefelPoint) -> Fraction:
    if f.shape != m.shape:
        raise ShapeMismatch(f"{f.shape} vs {m.shape}")
    products = m.partial_products()
    cache: dict[PluckerIndex, Fraction] = {}
    total = Fraction(0)
    for mono, c in f.items():
        v = c
        for j, e in mono:
            if j not in cache:
                cache[j] = plucker_eval(m, j, products)
            v *= cache[j] ** e
            if not v:
                break
        total += v
    return total


def random_matrix(rows: int, cols: int, rng: random.Random, max_num: int = 20, max_den: int = 5):
    return [[Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den)) for _ in range(cols)]
            for _ in range(rows)]


def random_invertible(k: int, rng: random.Random, **kw):
    while True:
        h = random_matrix(k, k, rng, **kw)
        if la.det(h):
            return h


def random_stiefel_point(shape: FlagShape, rng: random.Random, **kw) -> StiefelPoint:
    while True:
        mats = tuple(random_matrix(shape.d(i + 1), shape.d(i), rng, **kw) for i in range(1, shape.r + 1))
        m = StiefelPoint(shape, mats)
        if m.is_valid():
            return m


def random_group_element(shape: FlagShape, rng: random.Random, **kw) -> list:
    return [random_invertible(shape.d(i), rng, **kw) for i in range(1, shape.r + 1)]


# --- ideals ---

def grassmannian_plucker_relations(d: int, n: int) -> list[PluckerPolynomial]:
    """Quadratic generators of the Pluecker ideal of G(d, n).

    d = 2 gives the three-term relations, one per 4-subset; otherwise the
    general exchange relations are enumerated and thinned to a linearly
    independent family.
    """
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    shape = FlagShape((d,), n)
    if d == 1 or d == n - 1:
        return []
    if d == 2:
        out = []
        for i, j, k, l in combinations(range(1, n + 1), 4):
            out.append(PluckerPolynomial.monomial(shape, [(1, (i, j), 1), (1, (k, l), 1)])
                       - PluckerPolynomial.monomial(shape, [(1, (i, k), 1), (1, (j, l), 1)])
                       + PluckerPolynomial.monomial(shape, [(1, (i, l), 1), (1, (j, k), 1)]))
        return out
    candidates = []
    for I in combinations(range(1, n + 1), d - 1):
        for K in combinations(range(1, n + 1), d + 1):
            rel = PluckerPolynomial(shape)
            for t, k in enumerate(K):
                rest = K[:t] + K[t + 1:]
                term = PluckerPolynomial.monomial(shape, [(1, I + (k,), 1), (1, rest, 1)], (-1) ** t)
                rel = rel + term
            if not rel.is_zero():
                candidates.append(rel)
    return _independent(candidates)


def _independent(polys: list[PluckerPolynomial]) -> list[PluckerPolynomial]:
    index: dict = {}
    kept, rows = [], []
    current = 0
    for f in polys:
        row = {index.setdefault(m, len(index)): c for m, c in f.items()}
        trial = rows + [row]
        rk = la.rank(SparseMatrix.from_rows(trial, max(len(index), 1)))
        if rk > current:
            kept.append(f)
            rows = trial
            current = rk
    return kept


Binomial = tuple[tuple[tuple[int, ...], tuple[int, ...]], tuple[tuple[int, ...], tuple[int, ...]]]


def veronese_monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-k monomials in n+1 variables, descending lex."""
    from .weyl import monomials_of_degree
    return monomials_of_degree(n + 1, k)


def veronese_toric_ideal(n: int, k: int) -> list[Binomial]:
    """Binomials z_u z_v - z_w z_t (u + v = w + t) spanning the quadrics of the Veronese ideal.

    For each sum u + v the pairs are listed in a fixed order and the first pair
    is paired with each of the others, giving a basis of the degree-2 part of
    the ideal (which generates it). Each binomial is ((u, v), (w, t)) with
    u <= v and w <= t.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1, k >= 1")
    monos = sorted(veronese_monomials(n, k))
    by_sum: dict[tuple[int, ...], list] = {}
    for a in range(len(monos)):
        for b in range(a, len(monos)):
            u, v = monos[a], monos[b]
            s = tuple(x + y for x, y in zip(u, v))
            by_sum.setdefault(s, []).append((u, v))
    out = []
    for s in sorted(by_sum):
        pairs = by_sum[s]
        for j in range(1, len(pairs)):
            out.append((pairs[0], pairs[j]))
    return out


def veronese_point(s: Sequence, k: int) -> dict[tuple[int, ...], Fraction]:
    """Coordinates z_u = s^u of the image of s under the degree-k Veronese map."""
    s = [to_rational(x) for x in s]
    out = {}
    for u in veronese_monomials(len(s) - 1, k):
        v = Fraction(1)
        for x, e in zip(s, u):
            v *= x ** e
        out[u] = v
    return out


def binomial_eval(b: Binomial, z: Mapping[tuple[int, ...], Fraction]) -> Fraction:
    (u, v), (w, t) = b
    return z[u] * z[v] - z[w] * z[t]


# --- hyperplane property and special sections ---

def _coerce_index(j, position: int) -> PluckerIndex:
    """Accept a PluckerIndex, a (step, J) pair, or a bare J taken to be at step ``position``."""
    if isinstance(j, PluckerIndex):
        return j
    if len(j) == 2 and isinstance(j[0], int) and isinstance(j[1], (tuple, list)):
        return PluckerIndex(j[0], tuple(j[1]))
    return PluckerIndex(position, tuple(j))


def hyperplane_property_check(f: PluckerPolynomial, J_list: Sequence) -> bool:
    """True iff x_{J_1} ... x_{J_r} divides f in the free polynomial ring on Pluecker symbols."""
    if f.is_zero():
        return False
    idx = [_coerce_index(j, i) for i, j in enumerate(J_list, start=1)]
    need: dict[PluckerIndex, int] = {}
    for j in idx:
        need[j] = need.get(j, 0) + 1
    return all(f.exponent(j) >= e for j, e in need.items())


def special_section(m: StiefelPoint, J_list: Sequence) -> StiefelPoint:
    """Unique representative of m.H with (m_r ... m_i)_{J_i} = I for every step i."""
    shape = m.shape
    idx = [_coerce_index(j, i) for i, j in enumerate(J_list, start=1)]
    if len(idx) != shape.r:
        raise ShapeMismatch(f"need one index set per step ({shape.r}), got {len(idx)}")
    products = m.partial_products()
    h = []
    for i, J in enumerate(idx, start=1):
        if J.step != i or len(J.entries) != shape.d(i):
            raise ShapeMismatch(f"{J} is not a step-{i} index of {shape}")
        block = la.submatrix_rows(products[i - 1], _rows(J.entries))
        if not la.det(block):
            raise SingularBlock(f"the {J.entries}-block at step {i} is singular")
        h.append(block)
    return m.act_inverse(h)


def block_conditions_hold(m: StiefelPoint, J_list: Sequence) -> bool:
    products = m.partial_products()
    for i, j in enumerate(J_list, start=1):
        J = _coerce_index(j, i)
        if la.submatrix_rows(products[i - 1], _rows(J.entries)) != la.identity(m.shape.d(i)):
            return False
    return True


def anticanonical_multidegree(shape: FlagShape) -> tuple[int, ...]:
    """Coefficients of -K_X on lambda_{d_1}, ..., lambda_{d_r}: d_{i+1} - d_{i-1}."""
    return tuple(shape.d(i + 1) - shape.d(i - 1) for i in range(1, shape.r + 1))


# --- relabelling and duality of sections ---

def permute_polynomial(f: PluckerPolynomial, sigma: Mapping[int, int]) -> PluckerPolynomial:
    """Image under the coordinate permutation e_j -> e_{sigma(j)}: x_J -> sgn * x_{sort sigma(J)}.

    With P the permutation matrix, the result g satisfies g(P m) = f(m).
    """
    out = PluckerPolynomial(f.shape)
    for mono, c in f.items():
        fac = [(j.step, tuple(sigma[x] for x in j.entries), e) for j, e in mono]
        out = out + PluckerPolynomial.monomial(f.shape, fac, c)
    return out


def permute_point(m: StiefelPoint, sigma: Mapping[int, int]) -> StiefelPoint:
    """Left multiplication of m_r by the permutation matrix of sigma."""
    top = m.m(m.shape.r)
    new = [None] * m.shape.n
    for j in range(1, m.shape.n + 1):
        new[sigma[j] - 1] = top[j - 1]
    mats = list(m.mats)
    mats[-1] = new
    return StiefelPoint(m.shape, tuple(mats))


def complement_sign(J: Sequence[int], n: int) -> int:
    """Sign of the permutation (J, J^c) of 1..n."""
    comp = [x for x in range(1, n + 1) if x not in J]
    s, _ = PluckerIndex.signed(1, list(J) + comp)
    return s


def dual_index(j: PluckerIndex, shape: FlagShape) -> PluckerIndex:
    comp = tuple(x for x in range(1, shape.n + 1) if x not in j.entries)
    return PluckerIndex(shape.r + 1 - j.step, comp)


def dual_polynomial(f: PluckerPolynomial) -> PluckerPolynomial:
    """Transport along F(d, n) ~ F(n - d, n), E -> E^perp: x_J -> sgn(J, J^c) x_{J^c}."""
    dshape = f.shape.dual()
    out = PluckerPolynomial(dshape)
    for mono, c in f.items():
        sign = 1
        fac = {}
        for j, e in mono:
            if e % 2 and complement_sign(j.entries, f.shape.n) < 0:
                sign = -sign
            fac[dual_index(j, f.shape)] = e
        out = out + PluckerPolynomial(dshape, {_mono(fac): sign * c})
    return out


def _left_null(p):
    """Basis (as columns of an n x (n - rank) matrix) of {v : v^T p = 0}."""
    n = len(p)
    t = [[p[i][j] for i in range(n)] for j in range(len(p[0]))]
    red, rk, piv = la.rref(SparseMatrix.from_dense(t))
    dense = red.to_dense()
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, pc in zip(dense, piv):
            v[pc] = -row[fc]
        basis.append(v)
    return [[basis[k][i] for k in range(len(basis))] for i in range(n)]


def stiefel_from_subspaces(shape: FlagShape, bases: Sequence) -> StiefelPoint:
    """Stiefel tuple whose partial products are the given nested bases (bases[i-1] spans E_i)."""
    r = shape.r
    mats = [None] * r
    mats[r - 1] = bases[r - 1]
    acc = bases[r - 1]
    for i in range(r - 1, 0, -1):
        mats[i - 1] = la.solve_left_factor(acc, bases[i - 1])
        acc = la.matmul(acc, mats[i - 1])
    return StiefelPoint(shape, tuple(mats))


def dual_point(m: StiefelPoint) -> StiefelPoint:
    """A Stiefel representative of the perpendicular flag E_r^perp < ... < E_1^perp."""
    products = m.partial_products()
    dshape = m.shape.dual()
    bases = [_left_null(products[m.shape.r - j]) for j in range(1, dshape.r + 1)]
    return stiefel_from_subspaces(dshape, bases)


def all_shapes(max_n: int, max_r: int) -> list[FlagShape]:
    out = []
    for n in range(2, max_n + 1):
        for r in range(1, max_r + 1):
            for dims in combinations(range(1, n), r):
                out.append(FlagShape(dims, n))
    return out
