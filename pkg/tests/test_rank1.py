import copy

import pytest

from tautrank.flagvar import (
    FlagShape,
    PluckerIndex,
    PluckerPolynomial,
    all_shapes,
    anticanonical_multidegree,
    dual_polynomial,
    hyperplane_property_check,
)
from tautrank.rank1 import (
    BadPartition,
    case56_indices,
    classify,
    coefficient_point,
    grassmannian_cyclic_rank1,
    onestep_rank1,
    partition_rank1,
    rstep_rank1,
    verify_decomposition,
)
from tautrank.tautsys import build_projective_system


def mono(shape, *factors):
    """mono('1,2,3,5', (1, '1', 1), ...): factors are (step, digits, exponent)."""
    shape = FlagShape.parse(shape)
    return PluckerPolynomial.monomial(shape, [(s, tuple(int(c) for c in J), e) for s, J, e in factors])


def test_flag_1235_section():
    cert = rstep_rank1("1,2,3,5")
    assert cert.section == mono("1,2,3,5", (1, "1", 1), (1, "2", 1), (2, "12", 2), (3, "345", 3))
    assert cert.construction_trace[0]["case"] == "case3"


def test_complete_flag_12345_section():
    cert = rstep_rank1("1,2,3,4,5")
    expect = mono("1,2,3,4,5", (1, "1", 1), (1, "2", 1), (4, "2345", 1), (4, "1345", 1),
                  (3, "345", 2), (2, "12", 2))
    assert cert.section == expect
    assert cert.construction_trace[0]["case"] == "case7"


@pytest.mark.parametrize("d,n,expect", [
    (1, 2, [(1, "1", 1), (1, "2", 1)]),
    (1, 3, [(1, "1", 1), (1, "2", 1), (1, "3", 1)]),
    (2, 4, [(1, "12", 2), (1, "34", 2)]),
    (2, 5, [(1, "12", 1), (1, "13", 1), (1, "23", 1), (1, "45", 2)]),
    (3, 5, [(1, "123", 2), (1, "345", 1), (1, "245", 1), (1, "145", 1)]),
])
def test_onestep_sections(d, n, expect):
    cert = onestep_rank1(d, n)
    got = cert.section
    want = mono(f"{d},{n}", *expect)
    assert got == want or got == -want


@pytest.mark.parametrize("d,n", [(1, 4), (2, 5), (2, 6), (3, 7), (2, 7)])
def test_onestep_divisibility(d, n):
    cert = onestep_rank1(d, n)
    (j,) = cert.hyperplane_indices
    assert cert.section.exponent(j) >= min(d, n - d)
    assert cert.section.exponent(PluckerIndex(1, tuple(range(1, d + 1)))) >= 1


@pytest.mark.parametrize("d,n", [(1, 3), (2, 4), (2, 5), (3, 7), (1, 6)])
def test_onestep_complement_symmetry(d, n):
    a = dual_polynomial(onestep_rank1(d, n).section)
    b = onestep_rank1(n - d, n).section
    assert a == b or a == -b


def test_cyclic_sections():
    cert = grassmannian_cyclic_rank1(2, 4)
    assert cert.section == -mono("2,4", (1, "12", 1), (1, "23", 1), (1, "34", 1), (1, "14", 1))
    assert cert.check_invariants()
    line = grassmannian_cyclic_rank1(1, 4)
    assert line.section == mono("1,4", (1, "1", 1), (1, "2", 1), (1, "3", 1), (1, "4", 1))


def test_partition_sections():
    cert = partition_rank1(2, [2, 3, 2])
    assert cert.section == mono("2,7", (1, "12", 2), (1, "34", 1), (1, "35", 1), (1, "45", 1), (1, "67", 2))
    assert partition_rank1(1, [1, 1, 1]).section == onestep_rank1(1, 3).section
    assert verify_decomposition(cert, samples=3).ok
    with pytest.raises(BadPartition):
        partition_rank1(2, [2, 1, 3])


def test_case_routing_covers_every_case():
    seen = {classify(s)[0] for s in all_shapes(7, 5)}
    assert seen == {"1step", "case1", "case2", "case3", "case4", "case5", "case6", "case7", "dual"}
    assert classify(FlagShape.parse("1,3,4,6")) == ("case6", 2)
    assert classify(FlagShape.parse("1,2,6,7")) == ("case5", 2)
    assert classify(FlagShape.parse("1,2,4,7")) == ("case1", None)


def test_case56_index_bookkeeping():
    info = case56_indices(FlagShape.parse("1,2,6,7"), 2)
    assert info["X1"] == FlagShape((1, 2), 5)
    assert info["X2"] == FlagShape((4,), 5)
    assert info["J"] == (6, 7)
    assert info["top_target"] == (4, 5)
    assert info["bottom_target"] == (2, 3, 4, 5)
    six = case56_indices(FlagShape.parse("1,3,4,6"), 2)
    assert six["X1"] == FlagShape((1,), 3) and six["top_target"] == (3,)


@pytest.mark.parametrize("shape", all_shapes(7, 5), ids=str)
def test_invariants_for_all_small_shapes(shape):
    cert = rstep_rank1(shape)
    assert cert.section.is_monomial()
    assert cert.section.multidegree == anticanonical_multidegree(shape)
    assert hyperplane_property_check(cert.section, cert.hyperplane_indices)


@pytest.mark.parametrize("text", ["1,2,3,5", "1,2,3,4,5", "1,3,4,6", "1,2,6,7", "2,3,5", "1,3,5", "2,5", "1,4,5,6"])
def test_decomposition_verifies(text):
    rep = verify_decomposition(rstep_rank1(text), samples=5, seed=7)
    assert rep.ok, rep.to_json()


@pytest.mark.parametrize("text", ["1,2,3,5", "1,2,3,4,5", "1,3,4,6", "2,5", "1,3,5"])
def test_corrupted_certificate_is_rejected(text):
    cert = rstep_rank1(text)
    bad = copy.copy(cert)
    ((j, _), *_), _ = next(iter(cert.section.items()))
    # trade one factor for another coordinate of the same step: same multidegree, wrong section
    other = next(PluckerIndex(j.step, J) for J in [tuple(range(1, len(j.entries) + 1)),
                                                   tuple(range(cert.shape.n - len(j.entries) + 1, cert.shape.n + 1))]
                 if J != j.entries)
    bad.section = (cert.section * PluckerPolynomial.monomial(cert.shape, {other: 1})).divide_monomial({j: 1})
    rep = verify_decomposition(bad, samples=3)
    assert not rep.ok
    assert rep.failures > 0


def test_certificate_json():
    cert = rstep_rank1("1,2,3,5")
    data = cert.to_json()
    assert PluckerPolynomial.from_json(data["section"]) == cert.section
    assert data["multidegree"] == [2, 2, 3]
    assert [t["case"] for t in data["construction_trace"]][:2] == ["case3", "1step"]


def test_coefficient_point_is_xyz():
    sys_ = build_projective_system(2, 3)
    a = coefficient_point(onestep_rank1(1, 3), sys_.variables)
    assert [u for u, x in zip(sys_.variables, a) if x] == [(1, 1, 1)]
    with pytest.raises(ValueError):
        coefficient_point(onestep_rank1(2, 4), sys_.variables)


def test_deterministic_verification():
    a = verify_decomposition(rstep_rank1("1,3,4,6"), samples=2, seed=3).to_json()
    b = verify_decomposition(rstep_rank1("1,3,4,6"), samples=2, seed=3).to_json()
    assert a == b
