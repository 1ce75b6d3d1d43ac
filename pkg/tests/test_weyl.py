from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tautrank.linalg import DimensionMismatch
from tautrank.weyl import (
    Jet,
    WeylOperator,
    apply_to_jet,
    commutator,
    format_operator,
    fourier,
    monomials_of_degree,
    monomials_upto,
    parse_operator,
    weyl_mul,
)

N = 2
exps = st.tuples(st.integers(0, 2), st.integers(0, 2))
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=3)
ops = st.dictionaries(st.tuples(exps, exps), coeff, max_size=3).map(lambda t: WeylOperator(N, t))

X = sympy.symbols("x0:2")


def act(A: WeylOperator, f):
    """Apply A to a sympy expression: x^a d^b means differentiate first."""
    out = 0
    for (a, b), c in A.items():
        g = f
        for i, k in enumerate(b):
            if k:
                g = sympy.diff(g, X[i], k)
        out += sympy.Rational(c.numerator, c.denominator) * sympy.prod([X[i] ** k for i, k in enumerate(a)]) * g
    return sympy.expand(out)


def test_commutation_relation():
    x, d = WeylOperator.x(1, 0), WeylOperator.d(1, 0)
    assert commutator(d, x) == WeylOperator.constant(1, 1)
    assert weyl_mul(d, x) == weyl_mul(x, d) + WeylOperator.constant(1, 1)


def test_product_matches_composition_on_test_function():
    f = sympy.exp(2 * X[0]) * (X[1] ** 3 + X[0] * X[1]) + X[0] ** 4
    A = WeylOperator(N, {((1, 0), (0, 2)): 3, ((0, 1), (1, 0)): -1})
    B = WeylOperator(N, {((2, 0), (1, 1)): Fraction(1, 2), ((0, 0), (0, 1)): 1})
    assert sympy.simplify(act(weyl_mul(A, B), f) - act(A, act(B, f))) == 0


@settings(max_examples=20, deadline=None)
@given(ops, ops, ops)
def test_associativity(a, b, c):
    assert weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c))


@settings(max_examples=20, deadline=None)
@given(ops, ops)
def test_fourier_is_ring_homomorphism(a, b):
    assert fourier(weyl_mul(a, b)) == weyl_mul(fourier(a), fourier(b))
    assert fourier(a + b) == fourier(a) + fourier(b)


@settings(max_examples=20, deadline=None)
@given(ops)
def test_fourier_has_order_four(a):
    assert fourier(fourier(fourier(fourier(a)))) == a


def test_fourier_on_generators():
    assert fourier(WeylOperator.x(2, 1)) == -WeylOperator.d(2, 1)
    assert fourier(WeylOperator.d(2, 0)) == WeylOperator.x(2, 0)


@settings(max_examples=30, deadline=None)
@given(ops)
def test_text_round_trip(a):
    assert parse_operator(format_operator(a), N) == a


def test_format_example():
    assert format_operator(WeylOperator.monomial((1, 0), (0, 2), 3)) == "3 * x^[1,0] * d^[0,2]"


def test_mismatched_variables():
    with pytest.raises(DimensionMismatch):
        weyl_mul(WeylOperator.x(2, 0), WeylOperator.x(3, 0))


def test_monomial_enumeration():
    assert monomials_of_degree(3, 2)[0] == (2, 0, 0)
    assert len(monomials_of_degree(3, 3)) == 10
    assert len(monomials_upto(3, 4)) == 35


def test_power_jet_matches_sympy_series():
    """Jet of (a1^2 - 4 a0 a2)^(-1/2) at (1, 0, -1) against a sympy Taylor expansion."""
    a = sympy.symbols("a0:3")
    y = sympy.symbols("y0:3")
    t = sympy.Symbol("t")
    base = (1, 0, -1)
    disc = {(0, 2, 0): 1, (1, 0, 1): -4}
    order = 4
    jet = Jet.power_of_polynomial(disc, Fraction(-1, 2), base, order)
    expr = (a[1] ** 2 - 4 * a[0] * a[2]) ** sympy.Rational(-1, 2)
    shifted = expr.subs({a[i]: base[i] + t * y[i] for i in range(3)}, simultaneous=True)
    series = sympy.expand(sympy.series(shifted, t, 0, order + 1).removeO().subs(t, 1))
    poly = sympy.Poly(series, *y)
    expect = {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    assert {g: v for g, v in jet.coeffs.items() if v} == expect


def test_apply_to_jet_order_drops_by_differential_order():
    j = Jet.from_polynomial({(3,): 1}, (2,), 5)
    out = apply_to_jet(WeylOperator.monomial((2,), (1,)), j)
    assert out.order == 4
    # x^2 d (x^3) = 3 x^4 around x = 2, truncated to order 4 in y = x - 2
    assert out == Jet.from_polynomial({(4,): 3}, (2,), 4)
