"""Exact linear algebra over Q and F_p.

Sparse row reduction is the workhorse of the jet-space rank oracle; the small
dense helpers at the bottom are used for Stiefel-matrix manipulations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

Rational = Fraction


class BadPrime(ValueError):
    """Raised when a prime divides a denominator of a rational entry."""


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if type(x).__name__ == "mpq":
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def rational_mod_p(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise BadPrime(f"denominator {x.denominator} is divisible by {p}")
    return x.numerator % p * pow(x.denominator, -1, p) % p


def random_prime(bits: int = 62, rng: random.Random | None = None) -> int:
    rng = rng or random.Random()
    start = rng.getrandbits(bits) | (1 << (bits - 1))
    p = int(gmpy2.next_prime(start))
    return p if p.bit_length() == bits else int(gmpy2.prev_prime(1 << bits))


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix; ``p is None`` means entries are rationals."""

    nrows: int
    ncols: int
    entries: tuple[tuple[int, int, object], ...]
    p: int | None = None

    def __post_init__(self):
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise IndexError(f"entry ({r}, {c}) outside {self.nrows}x{self.ncols}")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            if v == 0:
                raise ValueError("stored zero entry")
            seen.add((r, c))

    @classmethod
    def from_rows(cls, rows: Sequence[dict], ncols: int, p: int | None = None) -> "SparseMatrix":
        entries = []
        for i, row in enumerate(rows):
            for j in sorted(row):
                v = row[j] % p if p is not None else to_rational(row[j])
                if v:
                    entries.append((i, j, v))
        return cls(len(rows), ncols, tuple(entries), p)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], p: int | None = None) -> "SparseMatrix":
        ncols = len(rows[0]) if rows else 0
        return cls.from_rows([dict(enumerate(r)) for r in rows], ncols, p)

    @classmethod
    def identity(cls, n: int, p: int | None = None) -> "SparseMatrix":
        one = 1 if p is not None else Fraction(1)
        return cls(n, n, tuple((i, i, one) for i in range(n)), p)

    def row_dicts(self) -> list[dict]:
        rows: list[dict] = [{} for _ in range(self.nrows)]
        for r, c, v in self.entries:
            rows[r][c] = v
        return rows

    def to_dense(self) -> list[list]:
        zero = 0 if self.p is not None else Fraction(0)
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    @property
    def nnz(self) -> int:
        return len(self.entries)


def reduce_mod_p(m: SparseMatrix, p: int) -> SparseMatrix:
    if m.p is not None:
        raise ValueError("matrix is already over a prime field")
    entries = []
    for r, c, v in m.entries:
        w = rational_mod_p(v, p)
        if w:
            entries.append((r, c, w))
    return SparseMatrix(m.nrows, m.ncols, tuple(entries), p)


def _eliminate(rows: list[dict], ncols: int, p: int | None,
               col_order: Iterable[int] | None = None, back: bool = False):
    """Gauss-Jordan on a list of sparse rows (mutated in place).

    Columns are visited in ``col_order``; among the rows that can pivot on the
    current column the shortest one is taken, which keeps fill-in down on the
    banded jet matrices. Returns the list of (column, row id) pivots.
    """
    if p is None:
        rows = [{c: gmpy2.mpq(v.numerator, v.denominator) if isinstance(v, Fraction) else gmpy2.mpq(v)
                 for c, v in row.items()} for row in rows]
    colrows: dict[int, set] = {}
    for i, row in enumerate(rows):
        for c in row:
            colrows.setdefault(c, set()).add(i)

    pivots = []
    order = range(ncols) if col_order is None else col_order
    for c in order:
        cands = colrows.get(c)
        if not cands:
            continue
        piv = min(cands, key=lambda i: (len(rows[i]), i))
        prow = rows[piv]
        for cc in prow:
            colrows[cc].discard(piv)
        lead = prow[c]
        if p is None:
            if lead != 1:
                inv = 1 / lead
                for cc in prow:
                    prow[cc] *= inv
        else:
            if lead != 1:
                inv = pow(lead, -1, p)
                for cc in prow:
                    prow[cc] = prow[cc] * inv % p
        for i in list(cands):
            row = rows[i]
            f = row[c]
            for cc, v in prow.items():
                if p is None:
                    w = row.get(cc, 0) - f * v
                else:
                    w = (row.get(cc, 0) - f * v) % p
                if w:
                    if cc not in row:
                        colrows.setdefault(cc, set()).add(i)
                    row[cc] = w
                elif cc in row:
                    del row[cc]
                    colrows[cc].discard(i)
        pivots.append((c, piv))

    if back:
        # clear entries above each pivot, last pivot first
        for k in range(len(pivots) - 1, -1, -1):
            c, pr = pivots[k]
            prow = rows[pr]
            for _, other in pivots[:k]:
                row = rows[other]
                f = row.get(c)
                if not f:
                    continue
                for cc, v in prow.items():
                    w = row.get(cc, 0) - f * v
                    if p is not None:
                        w %= p
                    if w:
                        row[cc] = w
                    else:
                        row.pop(cc, None)
    return pivots, rows


def rref(m: SparseMatrix) -> tuple[SparseMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    pivots, rows = _eliminate(m.row_dicts(), m.ncols, m.p, back=True)
    out_rows = []
    for _, r in sorted(pivots):
        row = rows[r]
        if m.p is None:
            row = {c: to_rational(v) for c, v in row.items()}
        out_rows.append(row)
    out_rows += [{} for _ in range(m.nrows - len(out_rows))]
    return SparseMatrix.from_rows(out_rows, m.ncols, m.p), len(pivots), sorted(c for c, _ in pivots)


def rank(m: SparseMatrix) -> int:
    pivots, _ = _eliminate(m.row_dicts(), m.ncols, m.p)
    return len(pivots)


def nullspace_dim(m: SparseMatrix) -> int:
    return m.ncols - rank(m)


def echelon_pivots(m: SparseMatrix, col_order: Sequence[int]) -> list[int]:
    """Pivot columns of forward elimination visiting columns in ``col_order``.

    For any prefix of ``col_order`` the number of pivots inside it equals the
    rank of the corresponding column submatrix.
    """
    pivots, _ = _eliminate(m.row_dicts(), m.ncols, m.p, col_order=col_order)
    return [c for c, _ in pivots]


# --- small dense matrices over Q (lists of lists of Fraction) ---

def mat(rows) -> list[list[Fraction]]:
    return [[to_rational(x) for x in row] for row in rows]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * c for _ in range(r)]


def shape(a) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def matmul(a, b):
    if a and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = list(zip(*b)) if b else []
    ncols = len(b[0]) if b else 0
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt]
            if bt else [Fraction(0)] * ncols for row in a]


def matmul_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = matmul(out, m)
    return out


def submatrix_rows(a, rows: Sequence[int]):
    """Rows selected by 0-based indices, in the given order."""
    return [list(a[i]) for i in rows]


def det(a) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    m = [list(r) for r in a]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        lead = m[c][c]
        out *= lead
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                f /= lead
                mr, mc = m[r], m[c]
                for k in range(c, n):
                    if mc[k]:
                        mr[k] -= f * mc[k]
    return sign * out


def inverse(a):
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise SingularMatrix("matrix is not invertible")
        m[c], m[piv] = m[piv], m[c]
        lead = m[c][c]
        m[c] = [x / lead for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def dense_rank(a) -> int:
    if not a or not a[0]:
        return 0
    return rank(SparseMatrix.from_dense(a))


def solve_left_factor(p, q):
    """Return x with p @ x == q, given that the columns of q lie in span(p) and p has full column rank."""
    nr, nc = shape(p)
    aug = [list(p[i]) + list(q[i]) for i in range(nr)]
    m = SparseMatrix.from_dense(aug)
    red, rk, piv = rref(m)
    if rk != nc or piv[:nc] != list(range(nc)) or any(c >= nc for c in piv):
        raise SingularMatrix("right-hand side is not in the column span")
    dense = red.to_dense()
    return [row[nc:] for row in dense[:nc]]
