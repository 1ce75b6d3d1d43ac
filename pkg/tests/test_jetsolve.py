import random
from fractions import Fraction

import pytest

from tautrank import linalg as la
from tautrank.jetsolve import (
    jet_solution_dim,
    mod_p_agreement,
    rank_estimate,
    truncation_image_dims,
)
from tautrank.tautsys import build_projective_system
from tautrank.weyl import WeylOperator

D1 = WeylOperator.d(1, 0)
XD_MINUS_2 = WeylOperator.monomial((1,), (1,)) - WeylOperator.constant(1, 2)


@pytest.fixture(scope="module")
def p1():
    return build_projective_system(1, 2)


def test_constant_solutions():
    assert jet_solution_dim([D1], (0,), 5) == 1
    assert rank_estimate([D1], (Fraction(3),), 0, 6).rank_estimate == 1


def test_second_order_ode_has_rank_two():
    assert rank_estimate([WeylOperator.monomial((0,), (2,))], (1,), 0, 6).rank_estimate == 2


def test_euler_type_operator():
    # x u' = 2u: only x^2 survives, at the singular point and away from it
    rep = rank_estimate([XD_MINUS_2], (0,), 0, 6)
    assert rep.rank_estimate == 1
    assert rep.image_dims[:3] == [0, 0, 1]
    assert rep.caveats
    assert rank_estimate([XD_MINUS_2], (1,), 0, 6).rank_estimate == 1


def test_unstable_window_is_reported():
    rep = rank_estimate([XD_MINUS_2], (0,), 0, 3, window=3)
    assert rep.rank_estimate == "unstable" and not rep.stabilized


def test_truncation_images_are_monotone_nonincreasing_in_codim(p1):
    nullity, dims = truncation_image_dims(p1, (1, 0, -1), 8)
    assert dims[-1] == nullity
    assert all(a <= b for a, b in zip(dims, dims[1:]))


def test_p1_smooth_and_double_root(p1):
    assert rank_estimate(p1, (1, 0, -1), 0, 10).rank_estimate == 1
    assert rank_estimate(p1, (1, 0, 0), 0, 10).rank_estimate == 0


def test_p1_random_points_off_the_discriminant(p1):
    rng = random.Random(5)
    seen = 0
    while seen < 3:
        a = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3)]
        if a[1] ** 2 - 4 * a[0] * a[2] == 0:
            continue
        seen += 1
        assert rank_estimate(p1, a, 0, 10).rank_estimate == 1


@pytest.mark.parametrize("a", [(1, 0, -1), (1, 0, 0), (2, 3, -5)])
def test_p1_mod_p_agrees_with_exact(p1, a):
    rng = random.Random(11)
    exact = truncation_image_dims(p1, a, 8)
    for _ in range(3):
        p = la.random_prime(62, rng)
        assert truncation_image_dims(p1, a, 8, p) == exact
    assert mod_p_agreement(p1, a, 6, primes=3, seed=2)["mismatches"] == 0


def test_p2_points_mod_p():
    sys_ = build_projective_system(2, 3)
    xyz = [Fraction(int(u == (1, 1, 1))) for u in sys_.variables]
    p = la.random_prime(62, random.Random(3))
    assert rank_estimate(sys_, xyz, 0, 4, p=p).rank_estimate == 1
    fermat = [Fraction(int(max(u) == 3)) for u in sys_.variables]
    assert rank_estimate(sys_, fermat, 0, 4, p=p).rank_estimate == 2


def test_input_validation(p1):
    with pytest.raises(ValueError):
        rank_estimate(p1, (1, 0, -1), 0, 3, window=4)
    with pytest.raises(la.DimensionMismatch):
        jet_solution_dim(p1, (1, 0), 3)
    with pytest.raises(ValueError):
        jet_solution_dim(p1, (1, 0, 1), -1)


@pytest.mark.parametrize("seed", [1, 2])
def test_p2_random_smooth_cubic_mod_p(seed):
    from tautrank.cli import resolve_point

    sys_ = build_projective_system(2, 3)
    a, _ = resolve_point(sys_, "generic-sample", seed)
    p = la.random_prime(62, random.Random(seed))
    assert rank_estimate(sys_, a, 0, 4, p=p).rank_estimate == 2
