"""Rank-1 sections of anticanonical bundles on Grassmannians and partial flag varieties.

Every constructor returns a Rank1Certificate: a monomial section f in
Pluecker coordinates, one hyperplane index set per step with x_J | f, and the
recursion step that produced it. Sections are stored with leading
coefficient 1; the sign removed while assembling a step is kept in
``Step.sign`` so the numerical checks can undo it.

The r-step recursion dispatches on the shape (d_1, ..., d_r, n):

    case1   d_{r-1} + d_r < n
    case2   r = 2, d_1 + d_2 = n
    case3   r >= 3, d_{r-1} + d_r = n
    case4   d_1 + d_2 = n (dual of case3)
    case5   d_a + d_{a+1} > n > 2 d_a and n > d_{a-1} + d_a
    case6   n = 2 d_a
    case7   n = d_{a-1} + d_a with a >= 3
    dual    everything else, which lands in case1 or case5 after F(d, n) ~ F(n - d, n)

with a the unique index 1 < a < r satisfying d_a + d_{a+1} > n >= d_{a-1} + d_a.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .flagvar import (
    FlagShape,
    PluckerIndex,
    PluckerPolynomial,
    SingularBlock,
    StiefelPoint,
    anticanonical_multidegree,
    block_conditions_hold,
    complement_sign,
    dual_index,
    dual_point,
    dual_polynomial,
    hyperplane_property_check,
    permute_point,
    permute_polynomial,
    plucker_eval,
    random_invertible,
    random_matrix,
    random_stiefel_point,
    section_eval,
    special_section,
)


class NoCaseMatches(RuntimeError):
    pass


class BadPartition(ValueError):
    pass


class SampleDegenerate(RuntimeError):
    pass


@dataclass(frozen=True)
class PointFactor:
    """F(d, d), a point; its Stiefel bundle is GL_d and its section is (x_{1..d})^d = det^d."""

    d: int


@dataclass
class Step:
    case: str
    parts: tuple  # child certificates or PointFactor
    params: dict = field(default_factory=dict)
    sign: Fraction = Fraction(1)


@dataclass
class Rank1Certificate:
    section: PluckerPolynomial
    shape: FlagShape
    hyperplane_indices: tuple[PluckerIndex, ...]
    step: Step

    @property
    def construction_trace(self) -> list[dict]:
        out = [{"case": self.step.case, "shape": self.shape.as_list(),
                "hyperplane_indices": [list(j.entries) for j in self.hyperplane_indices],
                "params": _jsonable(self.step.params), "sign": str(self.step.sign)}]
        for part in self.step.parts:
            if isinstance(part, Rank1Certificate):
                out.extend(part.construction_trace)
            else:
                out.append({"case": "point", "shape": [part.d, part.d]})
        return out

    def check_invariants(self) -> bool:
        return (self.section.multidegree == anticanonical_multidegree(self.shape)
                and hyperplane_property_check(self.section, self.hyperplane_indices))

    def to_json(self) -> dict:
        return {
            "shape": self.shape.as_list(),
            "section": self.section.to_json(),
            "section_text": str(self.section),
            "hyperplane_indices": [[j.step, list(j.entries)] for j in self.hyperplane_indices],
            "multidegree": list(self.section.multidegree),
            "construction_trace": self.construction_trace,
        }


def _jsonable(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, PluckerIndex):
            out[k] = [v.step, list(v.entries)]
        elif isinstance(v, dict):
            out[k] = {str(a): b for a, b in v.items()}
        elif isinstance(v, (tuple, list)):
            out[k] = [list(x.entries) if isinstance(x, PluckerIndex) else x for x in v]
        else:
            out[k] = v
    return out


# --- assembly helpers ---

def _mono(shape: FlagShape, factors) -> PluckerPolynomial:
    return PluckerPolynomial.monomial(shape, [(s, tuple(J), e) for s, J, e in factors if e])


def _embed(f: PluckerPolynomial, target: FlagShape, step_map: Sequence[int], offset: int = 0,
           extra: tuple[int, ...] = ()) -> PluckerPolynomial:
    """Transport f to ``target``: step s -> step_map[s-1], x_{J'} -> x_{(J' + offset) u extra}.

    ``extra`` must lie above every shifted entry so no resorting is needed.
    """
    terms = {}
    for mono, c in f.items():
        fac = {}
        for j, e in mono:
            entries = tuple(x + offset for x in j.entries) + tuple(extra)
            fac[PluckerIndex(step_map[j.step - 1], entries)] = e
        terms[tuple(sorted(fac.items()))] = c
    return PluckerPolynomial(target, terms)


def _cancel(f: PluckerPolynomial, step: int, J: Sequence[int], e: int) -> PluckerPolynomial:
    """Formal f / x_J^e; the divisor must be literally present."""
    if e == 0:
        return f
    return f.divide_monomial({PluckerIndex(step, tuple(J)): e})


def _finish(shape: FlagShape, raw: PluckerPolynomial, indices: Sequence[PluckerIndex], case: str,
            parts: tuple, params: dict | None = None) -> Rank1Certificate:
    if not raw.is_monomial():
        raise NoCaseMatches(f"{case} produced a non-monomial section on {shape}")
    sign, section = raw.normalized()
    cert = Rank1Certificate(section, shape, tuple(indices), Step(case, parts, dict(params or {}), sign))
    if section.multidegree != anticanonical_multidegree(shape):
        raise NoCaseMatches(f"{case} on {shape}: multidegree {section.multidegree}, "
                            f"expected {anticanonical_multidegree(shape)}")
    if not hyperplane_property_check(section, cert.hyperplane_indices):
        raise NoCaseMatches(f"{case} on {shape}: hyperplane property fails for {indices}")
    return cert


def _rng(x: int, y: int) -> tuple[int, ...]:
    """The index range x..y inclusive, 1-based."""
    return tuple(range(x, y + 1))


def relabel(cert: Rank1Certificate, step: int, target: Sequence[int]) -> Rank1Certificate:
    """Move the hyperplane index of ``step`` onto ``target`` by a coordinate permutation.

    The permutation sends the old index set onto target and its complement
    onto the complement of target, both in increasing order.
    """
    target = tuple(sorted(target))
    old = cert.hyperplane_indices[step - 1].entries
    if old == target:
        return cert
    n = cert.shape.n
    rest_old = [x for x in range(1, n + 1) if x not in old]
    rest_new = [x for x in range(1, n + 1) if x not in target]
    sigma = dict(zip(old, target)) | dict(zip(rest_old, rest_new))
    raw = permute_polynomial(cert.section, sigma)
    indices = [PluckerIndex(j.step, tuple(sorted(sigma[x] for x in j.entries))) for j in cert.hyperplane_indices]
    return _finish(cert.shape, raw, indices, "relabel", (cert,), {"sigma": sigma})


def dualize(cert: Rank1Certificate, case: str = "dual") -> Rank1Certificate:
    """Transport a certificate on F(n - d_r, ..., n - d_1, n) to F(d_1, ..., d_r, n)."""
    raw = dual_polynomial(cert.section)
    indices = sorted((dual_index(j, cert.shape) for j in cert.hyperplane_indices), key=lambda j: j.step)
    return _finish(cert.shape.dual(), raw, indices, case, (cert,))


# --- Grassmannians ---

def grassmannian_cyclic_rank1(d: int, n: int) -> Rank1Certificate:
    """x_{1..d} x_{2..d+1} ... x_{n,1..d-1}: n cyclically shifted windows, signs kept."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    shape = FlagShape((d,), n)
    raw = PluckerPolynomial.one(shape)
    for s in range(n):
        window = tuple((s + t) % n + 1 for t in range(d))
        raw = raw * PluckerPolynomial.monomial(shape, [(1, window, 1)])
    # the cyclic section keeps the sign produced by resorting the wrapped windows
    return Rank1Certificate(raw, shape, (PluckerIndex(1, _rng(1, d)),), Step("cyclic", ()))


def _paragraph_a(d: int, n: int, l: int, top, bottom, J_local: tuple[int, ...],
                 index: PluckerIndex, case: str) -> Rank1Certificate:
    """f = f_1 f_2 with f_1 on F(d, n - l) (first rows) and f_2 on F(d, l) (last rows).

    ``J_local`` is the index set inside the bottom block whose minor is D.
    """
    shape = FlagShape((d,), n)
    if isinstance(top, PointFactor):
        f1 = _mono(shape, [(1, _rng(1, d), d)])
    else:
        if top.section.exponent(PluckerIndex(1, _rng(1, d))) < 1:
            raise NoCaseMatches("the top factor is not divisible by x_{1..d}")
        f1 = _embed(top.section, shape, [1])
    if isinstance(bottom, PointFactor):
        f2 = _mono(shape, [(1, _rng(n - d + 1, n), d)])
    else:
        if bottom.section.exponent(PluckerIndex(1, J_local)) < 1:
            raise NoCaseMatches("the bottom factor is not divisible by its D-block coordinate")
        f2 = _embed(bottom.section, shape, [1], offset=n - l)
    return _finish(shape, f1 * f2, [index], case, (top, bottom), {"l": l, "J": J_local})


def onestep_rank1(d: int, n: int) -> Rank1Certificate:
    """Rank-1 point of F(d, n) divisible by (x_J)^min(d, n - d) for the recorded J."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    if n < 2 * d:
        return dualize(onestep_rank1(n - d, n))
    last = PluckerIndex(1, _rng(n - d + 1, n))
    if n == 2 * d:
        return _paragraph_a(d, n, d, PointFactor(d), PointFactor(d), _rng(1, d), last, "1step")
    return _paragraph_a(d, n, d, onestep_rank1(d, n - d), PointFactor(d), _rng(1, d), last, "1step")


def partition_rank1(d: int, parts: Sequence[int]) -> Rank1Certificate:
    """Product of block-wise rank-1 points of F(d, l_p), each divisible by its first d coordinates."""
    parts = [int(l) for l in parts]
    if not parts or any(l < d for l in parts) or d < 1:
        raise BadPartition(f"every block must have size >= d = {d}, got {parts}")
    n = sum(parts)
    if n <= d:
        raise BadPartition("the blocks must add up to more than d")
    if len(parts) == 1:
        return onestep_rank1(d, n)
    l1 = parts[0]
    top = PointFactor(d) if l1 == d else onestep_rank1(d, l1)
    rest = parts[1:]
    l = n - l1
    if len(rest) == 1 and rest[0] == d:
        bottom = PointFactor(d)
    else:
        bottom = partition_rank1(d, rest)
    return _paragraph_a(d, n, l, top, bottom, _rng(1, d), PluckerIndex(1, _rng(1, d)), "partition")


# --- r-step flags ---

def find_a(shape: FlagShape) -> int | None:
    """The unique 1 < a < r with d_a + d_{a+1} > n >= d_{a-1} + d_a, if any."""
    d, n, r = shape.d, shape.n, shape.r
    for a in range(2, r):
        if d(a) + d(a + 1) > n >= d(a - 1) + d(a):
            return a
    return None


def classify(shape: FlagShape) -> tuple[str, int | None]:
    d, n, r = shape.d, shape.n, shape.r
    if r == 1:
        return "1step", None
    if d(r - 1) + d(r) < n:
        return "case1", None
    if d(r - 1) + d(r) == n:
        return ("case2", None) if r == 2 else ("case3", None)
    if d(1) + d(2) == n:
        return "case4", None
    a = find_a(shape)
    if a is None:
        return "dual", None
    if n == d(a - 1) + d(a):
        return ("case4", a) if a == 2 else ("case7", a)
    if n == 2 * d(a):
        return "case6", a
    if n > 2 * d(a):
        return "case5", a
    return "dual", a


def case56_indices(shape: FlagShape, a: int) -> dict:
    """Index bookkeeping shared by cases 5 and 6.

    Returns the sub-shapes, the block J = (n - d_a + 1..n), the position the
    top factor's step-a (case 5) or step-(a-1) (case 6) index must occupy,
    and the position of the bottom factor's top-step index.
    """
    d, n, r = shape.d, shape.n, shape.r
    da = d(a)
    J = _rng(n - da + 1, n)
    X2 = FlagShape(tuple(d(i) - da for i in range(a + 1, r + 1)), n - da)
    if n > 2 * da:
        X1 = FlagShape(tuple(d(i) for i in range(1, a + 1)), n - da)
        top_step, top_target = a, _rng(n - 2 * da + 1, n - da)
    elif n == 2 * da:
        X1 = FlagShape(tuple(d(i) for i in range(1, a)), da)
        top_step, top_target = a - 1, _rng(da - d(a - 1) + 1, da)
    else:
        raise NoCaseMatches(f"cases 5/6 need n >= 2 d_a, got {shape} with a={a}")
    return {"X1": X1, "X2": X2, "J": J, "top_step": top_step, "top_target": top_target,
            "bottom_step": X2.r, "bottom_target": _rng(n - d(r) + 1, n - da)}


def rstep_rank1(shape: FlagShape | Sequence[int]) -> Rank1Certificate:
    if not isinstance(shape, FlagShape):
        shape = FlagShape.parse(shape)
    case, a = classify(shape)
    d, n, r = shape.d, shape.n, shape.r
    if case == "1step":
        return onestep_rank1(d(1), n)
    if case == "dual":
        return dualize(rstep_rank1(shape.dual()))
    if case == "case4":
        return dualize(rstep_rank1(shape.dual()), "case4")

    if case == "case1":
        X1 = FlagShape(tuple(d(i) for i in range(1, r)), d(r))
        c1 = rstep_rank1(X1)
        c2 = relabel(onestep_rank1(d(r), n), 1, _rng(n - d(r) + 1, n))
        Jr = _rng(n - d(r) + 1, n)
        f = _embed(c1.section, shape, list(range(1, r)), offset=n - d(r)) * _embed(c2.section, shape, [r])
        f = _cancel(f, r, Jr, d(r - 1))
        idx = [PluckerIndex(j.step, tuple(x + n - d(r) for x in j.entries)) for j in c1.hyperplane_indices]
        idx.append(PluckerIndex(r, Jr))
        return _finish(shape, f, idx, "case1", (c1, c2), {"J": Jr})

    if case == "case2":
        f = _mono(shape, [(1, _rng(1, d(1)), d(2)), (2, _rng(d(1) + 1, n), d(2))])
        return _finish(shape, f, [PluckerIndex(1, _rng(1, d(1))), PluckerIndex(2, _rng(d(1) + 1, n))], "case2", ())

    if case in ("case3", "case7"):
        t = r - 1 if case == "case3" else a - 1  # X1 = F(d_1..d_{t-1}, d_t), X2 = F(d_t..d_r, n)
        X1 = FlagShape(tuple(d(i) for i in range(1, t)), d(t))
        X2 = FlagShape(tuple(d(i) for i in range(t, r + 1)), n)
        c1 = rstep_rank1(X1)
        c2 = rstep_rank1(X2)
        Jt = _rng(1, d(t))
        if c2.section.exponent(PluckerIndex(1, Jt)) <= d(t - 1) or c2.hyperplane_indices[0].entries != Jt:
            raise NoCaseMatches(f"{case}: the factor on {X2} lacks a high enough power of x_{Jt}")
        f = _embed(c1.section, shape, list(range(1, t))) * _embed(c2.section, shape, list(range(t, r + 1)))
        f = _cancel(f, t, Jt, d(t - 1))
        idx = list(c1.hyperplane_indices) + [PluckerIndex(j.step + t - 1, j.entries) for j in c2.hyperplane_indices]
        params = {"J": Jt} if a is None else {"a": a, "J": Jt}
        return _finish(shape, f, idx, case, (c1, c2), params)

    if case in ("case5", "case6"):
        info = case56_indices(shape, a)
        c1 = relabel(rstep_rank1(info["X1"]), info["top_step"], info["top_target"])
        c2 = relabel(rstep_rank1(info["X2"]), info["bottom_step"], info["bottom_target"])
        J = info["J"]
        f1 = _embed(c1.section, shape, list(range(1, info["X1"].r + 1)))
        f2 = _embed(c2.section, shape, list(range(a + 1, r + 1)), extra=J)
        if case == "case5":
            adj = _mono(shape, [(a, J, d(a + 1) + d(a) - n)])
            idx = list(c1.hyperplane_indices[:a - 1])
        else:
            adj = _mono(shape, [(a, J, d(a + 1) - d(a - 1) - 1), (a, _rng(1, d(a)), 1)])
            idx = list(c1.hyperplane_indices)
        idx.append(PluckerIndex(a, J))
        idx += [PluckerIndex(j.step + a, j.entries + J) for j in c2.hyperplane_indices]
        return _finish(shape, f1 * f2 * adj, idx, case, (c1, c2), {"a": a, "J": J})

    raise NoCaseMatches(f"no construction applies to {shape}")


def rank1_certificate(shape: FlagShape | Sequence[int]) -> Rank1Certificate:
    """Entry point used by the CLI: one-step shapes use the one-step recursion."""
    if not isinstance(shape, FlagShape):
        shape = FlagShape.parse(shape)
    return rstep_rank1(shape)


# --- numerical verification ---

@dataclass
class StepReport:
    path: str
    case: str
    shape: list[int]
    samples: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"path": self.path, "case": self.case, "shape": self.shape, "samples": self.samples,
                "passed": self.passed, "failures": self.failures[:5]}


@dataclass
class VerificationReport:
    invariants_ok: bool
    steps: list[StepReport]

    @property
    def ok(self) -> bool:
        return self.invariants_ok and all(s.passed == s.samples for s in self.steps)

    @property
    def failures(self) -> int:
        return sum(s.samples - s.passed for s in self.steps) + (0 if self.invariants_ok else 1)

    def to_json(self) -> dict:
        return {"ok": self.ok, "invariants_ok": self.invariants_ok, "failures": self.failures,
                "steps": [s.to_json() for s in self.steps]}


def _value(part, m) -> Fraction:
    if isinstance(part, PointFactor):
        return la.det(m) ** part.d
    return section_eval(part.section, m)


def _sample(part, rng: random.Random, special: bool = False):
    """A random point of the factor's Stiefel bundle off its section's zero set."""
    for _ in range(50):
        if isinstance(part, PointFactor):
            m = random_invertible(part.d, rng)
            return la.identity(part.d) if special else m
        m = random_stiefel_point(part.shape, rng)
        if not section_eval(part.section, m):
            continue
        if special:
            try:
                m = special_section(m, part.hyperplane_indices)
            except SingularBlock:
                continue
        return m
    raise SampleDegenerate(f"could not sample a point off the divisor of {part}")


def _mats(m: StiefelPoint) -> list:
    return [m.m(i) for i in range(1, m.shape.r + 1)]


def _point(shape: FlagShape, mats: Sequence) -> StiefelPoint:
    return StiefelPoint(shape, tuple(mats))


def _rows(a, idx: Sequence[int]):
    return la.submatrix_rows(a, [i - 1 for i in idx])


def _blocks(top, bottom):
    return [list(r) for r in top] + [list(r) for r in bottom]


def _block_matrix(tl, tr, bl, br):
    return [list(a) + list(b) for a, b in zip(tl, tr)] + [list(a) + list(b) for a, b in zip(bl, br)]


class _Check:
    def __init__(self, report: StepReport):
        self.report = report
        self.ok = True

    def expect(self, cond: bool, what: str):
        if not cond and self.ok:
            self.ok = False
            self.report.failures.append(what)


def _verify_paragraph_a(cert: Rank1Certificate, rng, chk: _Check):
    top, bottom = cert.step.parts
    n = cert.shape.n
    l, J = cert.step.params["l"], cert.step.params["J"]
    sign = cert.step.sign
    for special in (False, True):
        m1, m2 = _sample(top, rng, special), _sample(bottom, rng, special)
        a1 = m1 if isinstance(top, PointFactor) else m1.m(1)
        a2 = m2 if isinstance(bottom, PointFactor) else m2.m(1)
        D = _rows(a2, J)
        if not la.det(D):
            raise SampleDegenerate("singular D block")
        m = _point(cert.shape, [_blocks(la.matmul(a1, D), a2)])
        lhs = section_eval(cert.section, m) * sign
        rhs = la.det(D) ** (n - l) * _value(top, m1) * _value(bottom, m2)
        chk.expect(lhs == rhs, "value identity f(m) = det(D)^(n-l) f1 f2")
        big = m.m(1)
        back1 = la.matmul(big[:n - l], la.inverse(_rows(big[n - l:], J)))
        chk.expect(back1 == [list(r) for r in a1] and big[n - l:] == [list(r) for r in a2], "inverse round trip")
        if special:
            chk.expect(block_conditions_hold(m, cert.hyperplane_indices), "special-section block conditions")


def _verify_dual(cert: Rank1Certificate, rng, chk: _Check):
    (child,) = cert.step.parts
    m = _sample(cert, rng)
    mstar = dual_point(m)
    ratios = {}
    products = m.partial_products()
    star_products = mstar.partial_products()
    consistent = True
    for i in range(1, cert.shape.r + 1):
        for Jt in combinations(range(1, cert.shape.n + 1), cert.shape.d(i)):
            j = PluckerIndex(i, Jt)
            v = plucker_eval(m, j, products)
            w = plucker_eval(mstar, dual_index(j, cert.shape), star_products)
            if v:
                rho = w / (complement_sign(dual_index(j, cert.shape).entries, cert.shape.n) * v)
                consistent &= ratios.setdefault(i, rho) == rho
            else:
                consistent &= w == 0
    chk.expect(consistent, "perpendicular-flag coordinates are proportional to signed complements")
    factor = Fraction(1)
    for i, k in enumerate(cert.section.multidegree, start=1):
        factor *= ratios[i] ** k
    chk.expect(section_eval(child.section, mstar) == cert.step.sign * section_eval(cert.section, m) * factor,
               "value identity under the perpendicular-flag isomorphism")


def _verify_relabel(cert: Rank1Certificate, rng, chk: _Check):
    (child,) = cert.step.parts
    m = _sample(child, rng)
    pm = permute_point(m, cert.step.params["sigma"])
    chk.expect(section_eval(cert.section, pm) * cert.step.sign == section_eval(child.section, m),
               "value identity under the coordinate permutation")


def _verify_case2(cert: Rank1Certificate, rng, chk: _Check):
    d1, d2 = cert.shape.dims
    m = _sample(cert, rng, special=True)
    m2, m1 = m.m(2), m.m(1)
    A2 = m2[:d1]
    chk.expect(m2[d1:] == la.identity(d2), "special section has m_2 = [A_2; I]")
    chk.expect(la.matmul(A2, m1) == la.identity(d1), "A_2 m_1 = I")
    # every Stiefel point m_1 of F(d_1, d_2) lifts: A_2 = (K m_1)^{-1} K
    m1 = random_stiefel_point(FlagShape((d1,), d2), rng).m(1)
    K = random_matrix(d1, d2, rng)
    if not la.det(la.matmul(K, m1)):
        raise SampleDegenerate("singular K m_1")
    A2 = la.matmul(la.inverse(la.matmul(K, m1)), K)
    lift = _point(cert.shape, [m1, _blocks(A2, la.identity(d2))])
    chk.expect(block_conditions_hold(lift, cert.hyperplane_indices), "lift lies in the special section")
    chk.expect(section_eval(cert.section, lift) * cert.step.sign == 1, "f = 1 on the special section")


def _verify_case137(cert: Rank1Certificate, rng, chk: _Check):
    c1, c2 = cert.step.parts
    shape = cert.shape
    J = cert.step.params["J"]
    s1 = c1.shape.r  # factor-1 steps 1..s1 sit at the bottom of the tuple
    for special in (False, True):
        p1, p2 = _sample(c1, rng, special), _sample(c2, rng, special)
        mats2, mats1 = _mats(p2), _mats(p1)
        P2 = p2.partial_product(1)  # n x d_{s1+1}
        D = _rows(P2, J)
        if not la.det(D):
            raise SampleDegenerate("singular D block")
        mats = list(mats1)
        mats[-1] = la.matmul(la.inverse(D), mats1[-1])
        m = _point(shape, mats + mats2)
        e = shape.d(s1)
        lhs = section_eval(cert.section, m) * cert.step.sign
        rhs = section_eval(c1.section, p1) * section_eval(c2.section, p2) * la.det(D) ** (-e)
        chk.expect(lhs == rhs, f"value identity f(m) = f1 f2 det(D)^(-{e})")
        # inverse: ((m_r..m_{s1+1})_J m_{s1}, m_{s1-1}, ..), (m_r, .., m_{s1+1})
        back = _mats(m)
        Pm = m.partial_product(s1 + 1)
        back1 = back[:s1]
        back1[-1] = la.matmul(_rows(Pm, J), back1[-1])
        chk.expect(back1 == mats1 and back[s1:] == mats2, "inverse round trip")
        if special:
            chk.expect(block_conditions_hold(m, cert.hyperplane_indices), "special-section block conditions")


def _case56_forward(shape: FlagShape, a: int, da: int, top, mats2: list, J2: list):
    """Solve the block relations for m_a..m_r given the top block of m_r..m_a.

    mats2[j] is m'_{a+1+j}; J2[j] is the bottom factor's index set at that step.
    """
    n = shape.n
    k = len(mats2)
    # P'[j] = m'_r ... m'_{a+1+j}
    Pp = [None] * (k + 1)
    Pp[k] = la.identity(n - da)
    for j in range(k - 1, -1, -1):
        Pp[j] = la.matmul(Pp[j + 1], mats2[j])
    A = [None] * (k + 1)  # A[0] = A_a, A[j] = A_{a+j}
    A[0] = _rows(top, J2[0])
    B = la.matmul(Pp[0], A[0])
    B = [[x - y for x, y in zip(rt, rb)] for rt, rb in zip(top, B)]
    for j in range(1, k):
        A[j] = _rows(B, J2[j])
        C = la.matmul(Pp[j], A[j])
        B = [[x - y for x, y in zip(rb, rc)] for rb, rc in zip(B, C)]
    A[k] = B
    mats = [_blocks(A[0], la.identity(da))]
    for j in range(k):
        rows_, cols_ = la.shape(mats2[j])
        mats.append(_block_matrix(mats2[j], A[j + 1], la.zeros(da, cols_), la.identity(da)))
    return mats


def _verify_case56(cert: Rank1Certificate, rng, chk: _Check):
    c1, c2 = cert.step.parts
    shape, a = cert.shape, cert.step.params["a"]
    n, da = shape.n, shape.d(a)
    case5 = cert.step.case == "case5"
    J2 = [j.entries for j in c2.hyperplane_indices]
    info = case56_indices(shape, a)
    for _ in range(2):
        p1, p2 = _sample(c1, rng, True), _sample(c2, rng, True)
        D = random_invertible(da, rng)
        mats1, mats2 = _mats(p1), _mats(p2)
        if case5:
            top = la.matmul(mats1[-1], D)
            low = mats1[:-1]
        else:
            top = D
            low = list(mats1)
        low = [list(x) for x in low]
        low[-1] = la.matmul(la.inverse(D), low[-1])
        m = _point(shape, low + _case56_forward(shape, a, da, top, mats2, J2))
        Pa = m.partial_product(a)
        chk.expect(Pa == _blocks(top, la.identity(da)), "m_r..m_a = [top; I]")
        e = n - da - shape.d(a - 1) if case5 else 1
        lhs = section_eval(cert.section, m) * cert.step.sign
        rhs = section_eval(c1.section, p1) * section_eval(c2.section, p2) * la.det(D) ** e
        chk.expect(lhs == rhs, f"value identity f(m) = f1 f2 det(D)^{e}")
        chk.expect(block_conditions_hold(m, cert.hyperplane_indices), "special-section block conditions")
        back1, back2, backD = _case56_inverse(m, a, da, case5, info)
        chk.expect(back1 == mats1 and back2 == mats2 and backD == D, "inverse round trip")
    # the other direction: a random point of X(f), normalized, is rebuilt from its factors
    m = _sample(cert, rng, special=True)
    b1, b2, bD = _case56_inverse(m, a, da, case5, info)
    top = la.matmul(b1[-1], bD) if case5 else bD
    low = [list(x) for x in (b1[:-1] if case5 else b1)]
    low[-1] = la.matmul(la.inverse(bD), low[-1])
    rebuilt = _point(shape, low + _case56_forward(shape, a, da, top, b2, J2))
    chk.expect(rebuilt == m, "forward map inverts the decomposition of a special section")
    chk.expect(block_conditions_hold(_point(c1.shape, b1), c1.hyperplane_indices)
               and block_conditions_hold(_point(c2.shape, b2), c2.hyperplane_indices),
               "factors of a special section are special")


def _case56_inverse(m: StiefelPoint, a: int, da: int, case5: bool, info: dict):
    shape = m.shape
    n = shape.n
    mats = _mats(m)
    Pa = m.partial_product(a)
    top = Pa[:n - da]
    mats2 = []
    for i in range(a + 1, shape.r + 1):
        rows_, cols_ = shape.d(i + 1) - da, shape.d(i) - da
        mats2.append([row[:cols_] for row in mats[i - 1][:rows_]])
    if case5:
        D = _rows(top, info["top_target"])
        first = la.matmul(top, la.inverse(D))
        low = [list(x) for x in mats[:a - 1]]
        low[-1] = la.matmul(D, low[-1])
        mats1 = low + [first]
    else:
        D = [list(r) for r in top]
        mats1 = [list(x) for x in mats[:a - 1]]
        mats1[-1] = la.matmul(D, mats1[-1])
    return mats1, mats2, D


_VERIFIERS = {
    "1step": _verify_paragraph_a,
    "partition": _verify_paragraph_a,
    "dual": _verify_dual,
    "case4": _verify_dual,
    "relabel": _verify_relabel,
    "case2": _verify_case2,
    "case1": _verify_case137,
    "case3": _verify_case137,
    "case7": _verify_case137,
    "case5": _verify_case56,
    "case6": _verify_case56,
}


def verify_decomposition(cert: Rank1Certificate, samples: int = 10, seed: int = 0,
                         max_retries: int = 20) -> VerificationReport:
    """Check every recursion step numerically on ``samples`` random rational points."""
    reports: list[StepReport] = []

    def walk(c: Rank1Certificate, path: str):
        rep = StepReport(path, c.step.case, c.shape.as_list())
        verifier = _VERIFIERS.get(c.step.case)
        if verifier is not None:
            for s in range(samples):
                for attempt in range(max_retries):
                    rng = random.Random(f"{seed}:{path}:{s}:{attempt}")
                    chk = _Check(rep)
                    try:
                        verifier(c, rng, chk)
                    except (SampleDegenerate, SingularBlock, la.SingularMatrix):
                        continue
                    rep.samples += 1
                    rep.passed += chk.ok
                    break
                else:
                    raise SampleDegenerate(f"{path}: no usable sample after {max_retries} attempts")
        reports.append(rep)
        for k, part in enumerate(c.step.parts):
            if isinstance(part, Rank1Certificate):
                walk(part, f"{path}.{k}")

    walk(cert, "0")
    return VerificationReport(cert.check_invariants(), reports)


def coefficient_point(cert: Rank1Certificate, variables: Sequence) -> list[Fraction]:
    """Coefficient vector of a one-step section in a monomial (projective space) basis.

    For F(1, n) the Pluecker coordinates are the homogeneous coordinates, so
    the section is a monomial of degree n in n variables; ``variables`` is the
    list of exponent tuples used by the tautological system.
    """
    if cert.shape.r != 1 or cert.shape.dims[0] != 1:
        raise ValueError("coefficient points are only defined for projective spaces F(1, n)")
    out = [Fraction(0)] * len(variables)
    pos = {tuple(u): i for i, u in enumerate(variables)}
    for mono, c in cert.section.items():
        e = [0] * cert.shape.n
        for j, k in mono:
            e[j.entries[0] - 1] += k
        out[pos[tuple(e)]] += c
    return out
