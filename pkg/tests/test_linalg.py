import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tautrank import linalg as la
from tautrank.linalg import SparseMatrix

small = st.fractions(min_value=-9, max_value=9, max_denominator=4)


def dense(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(dense(r, c))
    # sprinkle zeros so the sparse path and rank deficiency both show up
    mask = draw(st.lists(st.booleans(), min_size=r * c, max_size=r * c))
    return [[x if mask[i * c + j] else Fraction(0) for j, x in enumerate(row)] for i, row in enumerate(rows)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(a):
    assert la.rank(SparseMatrix.from_dense(a)) == sympy.Matrix(a).rank()


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rref_is_reduced_and_equivalent(a):
    red, rk, piv = la.rref(SparseMatrix.from_dense(a))
    d = red.to_dense()
    expect = sympy.Matrix(a).rref()
    assert piv == list(expect[1])
    assert sympy.Matrix(d) == expect[0]
    assert rk == len(piv)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(0, 10 ** 6))
def test_mod_p_rank_never_exceeds_rational_rank(a, seed):
    p = la.random_prime(62, random.Random(seed))
    m = SparseMatrix.from_dense(a)
    assert la.rank(la.reduce_mod_p(m, p)) <= la.rank(m)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_echelon_prefix_ranks(a, r):
    m = SparseMatrix.from_dense(a)
    order = list(range(m.ncols))
    r.shuffle(order)
    piv = set(la.echelon_pivots(m, order))
    for k in range(m.ncols + 1):
        sub = [[row[c] for c in order[:k]] for row in a]
        expect = sympy.Matrix(sub).rank() if k else 0
        assert sum(1 for c in order[:k] if c in piv) == expect


def test_det_inverse_and_solve(rng):
    for _ in range(10):
        a = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)] for _ in range(4)]
        if not la.det(a):
            continue
        assert la.det(a) == sympy.Matrix(a).det()
        assert la.matmul(a, la.inverse(a)) == la.identity(4)
        q = la.matmul(a, [[Fraction(1)], [Fraction(2)], [Fraction(-1)], [Fraction(0)]])
        assert la.solve_left_factor(a, q) == [[1], [2], [-1], [0]]


def test_singular_inverse_raises():
    with pytest.raises(la.SingularMatrix):
        la.inverse(la.mat([[1, 2], [2, 4]]))


def test_bad_prime():
    with pytest.raises(la.BadPrime):
        la.rational_mod_p(Fraction(1, 7), 7)


def test_random_prime_has_62_bits():
    p = la.random_prime(62, random.Random(1))
    assert p.bit_length() == 62 and sympy.isprime(p)


def test_dimension_mismatch():
    with pytest.raises(la.DimensionMismatch):
        la.matmul(la.identity(2), la.identity(3))
