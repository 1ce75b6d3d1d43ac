"""Generators of tautological systems for projective spaces and Grassmannians.

Variables a_mu are coordinates on the dual of the space of sections V, one
per section basis element s_mu (degree-k monomials for P^n, Pluecker
coordinates for G(d, n)). A Lie algebra element xi acts on sections as a
derivation with matrix M (xi.s_mu = sum_nu M[nu][mu] s_nu), and

    Z(xi) = - sum_{nu, mu} M[nu][mu] a_mu d_{a_nu}.

The sign makes xi -> Z(xi) a Lie algebra homomorphism; the resulting
operators kill the period integrals of Sum a_mu s_mu, which is what the
tests use to pin the convention down.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .flagvar import PluckerIndex, grassmannian_plucker_relations, veronese_toric_ideal
from .linalg import to_rational
from .weyl import WeylOperator, format_operator, fourier, monomials_of_degree


class UnsupportedLieAlgebra(ValueError):
    pass


class UnsupportedSpec(ValueError):
    pass


@dataclass(frozen=True)
class VarietyTag:
    kind: str  # "pn" or "grassmannian-plucker"
    params: tuple[int, int]

    def __str__(self):
        return f"{self.kind}({self.params[0]},{self.params[1]})"


@dataclass
class TautSystem:
    num_vars: int
    variables: list  # section basis labels: exponent tuples or Pluecker entry tuples
    ideal_generators: list[WeylOperator]
    lie_generators: dict[str, WeylOperator]
    euler: WeylOperator
    beta_e: Fraction
    beta_g: dict[str, Fraction]
    variety_tag: VarietyTag
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        for A in self.generators:
            if A.num_vars != self.num_vars:
                raise ValueError("generator has the wrong number of variables")
        for A in self.ideal_generators:
            if A.x_degree() != 0:
                raise ValueError("ideal generators must be pure derivative operators")

    @property
    def generators(self) -> list[WeylOperator]:
        return [*self.ideal_generators, *self.lie_generators.values(), self.euler]

    def counts(self) -> dict[str, int]:
        return {"ideal": len(self.ideal_generators), "lie": len(self.lie_generators), "euler": 1,
                "total": len(self.generators)}

    def variable_labels(self) -> list[str]:
        if self.variety_tag.kind == "pn":
            return ["z" + "".join(map(str, u)) if max(u) <= 9 else "z" + ",".join(map(str, u))
                    for u in self.variables]
        return ["p" + "".join(map(str, J)) if max(J) <= 9 else "p" + ",".join(map(str, J))
                for J in self.variables]

    def to_json(self) -> dict:
        gens = [{"kind": "ideal", "label": f"q{i + 1}", "operator": format_operator(A)}
                for i, A in enumerate(self.ideal_generators)]
        gens += [{"kind": "lie", "label": k, "operator": format_operator(A)} for k, A in self.lie_generators.items()]
        gens.append({"kind": "euler", "label": "e", "operator": format_operator(self.euler)})
        return {
            "variety": str(self.variety_tag),
            "num_vars": self.num_vars,
            "variables": [{"index": i, "label": lab, "basis": list(v)}
                          for i, (lab, v) in enumerate(zip(self.variable_labels(), self.variables))],
            "beta_e": str(self.beta_e),
            "beta_g": {k: str(v) for k, v in self.beta_g.items()},
            "counts": self.counts(),
            "generators": gens,
            "notes": list(self.notes),
        }


# --- Lie algebra bases ---

def sl_basis(m: int) -> list[str]:
    """Labels of the basis of sl_m: E{i},{j} for i != j and H{i} = E_ii - E_{i+1,i+1} (1-based)."""
    labels = [f"E{i},{j}" for i in range(1, m + 1) for j in range(1, m + 1) if i != j]
    labels += [f"H{i}" for i in range(1, m)]
    return labels


def gl_basis(m: int) -> list[str]:
    return [f"E{i},{j}" for i in range(1, m + 1) for j in range(1, m + 1)]


_LABEL = re.compile(r"^(?:E(\d+),(\d+)|H(\d+))$")


def lie_matrix(label: str, m: int) -> dict[tuple[int, int], int]:
    """The m x m matrix of a basis label, as a sparse dict with 1-based keys."""
    hit = _LABEL.match(label)
    if not hit:
        raise UnsupportedLieAlgebra(f"unknown basis label {label!r}")
    if hit.group(3):
        i = int(hit.group(3))
        if not 1 <= i < m:
            raise UnsupportedLieAlgebra(f"{label} is outside sl_{m}")
        return {(i, i): 1, (i + 1, i + 1): -1}
    i, j = int(hit.group(1)), int(hit.group(2))
    if not (1 <= i <= m and 1 <= j <= m):
        raise UnsupportedLieAlgebra(f"{label} is outside gl_{m}")
    return {(i, j): 1}


def bracket_matrices(a: Mapping, b: Mapping) -> dict[tuple[int, int], Fraction]:
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if j == k:
                out[(i, l)] = out.get((i, l), 0) + x * y
            if l == i:
                out[(k, j)] = out.get((k, j), 0) - x * y
    return {k: v for k, v in out.items() if v}


# --- derivation matrices on section bases ---

def _monomial_action(xi: Mapping, basis: Sequence[tuple[int, ...]]) -> dict[tuple[int, int], Fraction]:
    """M[nu][mu] for x_i d_{x_j} (entries of xi) acting on monomials x^u; variables 1-based."""
    pos = {u: k for k, u in enumerate(basis)}
    out: dict[tuple[int, int], Fraction] = {}
    for mu, u in enumerate(basis):
        for (i, j), c in xi.items():
            if u[j - 1] == 0:
                continue
            v = list(u)
            coeff = c * v[j - 1]
            v[j - 1] -= 1
            v[i - 1] += 1
            nu = pos[tuple(v)]
            out[(nu, mu)] = out.get((nu, mu), 0) + coeff
    return {k: to_rational(v) for k, v in out.items() if v}


def _plucker_action(xi: Mapping, basis: Sequence[tuple[int, ...]]) -> dict[tuple[int, int], Fraction]:
    """M[nu][mu] for the derivation sum_k m_ik d/dm_jk on minors x_J of an n x d matrix."""
    pos = {J: k for k, J in enumerate(basis)}
    out: dict[tuple[int, int], Fraction] = {}
    for mu, J in enumerate(basis):
        for (i, j), c in xi.items():
            if j not in J:
                continue
            sign, idx = PluckerIndex.signed(1, [i if x == j else x for x in J])
            if sign == 0:
                continue
            nu = pos[idx.entries]
            out[(nu, mu)] = out.get((nu, mu), 0) + sign * c
    return {k: to_rational(v) for k, v in out.items() if v}


def lie_operator(xi: Mapping | str, basis: Sequence[tuple[int, ...]], kind: str = "monomial",
                 beta: object = 0, m: int | None = None) -> WeylOperator:
    """Z(xi) + beta on the coefficient space of the given section basis.

    ``xi`` is a basis label (needs ``m``) or a sparse matrix {(i, j): c}.
    ``kind`` is "monomial" (basis of exponent tuples) or "plucker" (sorted index tuples).
    """
    if isinstance(xi, str):
        if m is None:
            raise UnsupportedLieAlgebra("a matrix size is needed to interpret a basis label")
        xi = lie_matrix(xi, m)
    if kind == "monomial":
        M = _monomial_action(xi, basis)
    elif kind == "plucker":
        M = _plucker_action(xi, basis)
    else:
        raise UnsupportedLieAlgebra(f"unknown section basis kind {kind!r}")
    r = len(basis)
    terms = {}
    for (nu, mu), c in M.items():
        xe = [0] * r
        de = [0] * r
        xe[mu] += 1
        de[nu] += 1
        key = (tuple(xe), tuple(de))
        terms[key] = terms.get(key, 0) - c
    beta = to_rational(beta)
    if beta:
        zero = (0,) * r
        terms[(zero, zero)] = terms.get((zero, zero), 0) + beta
    return WeylOperator(r, terms)


def euler_operator(r: int, beta_e) -> WeylOperator:
    out = WeylOperator.constant(r, beta_e)
    for i in range(r):
        out = out + WeylOperator.x(r, i) * WeylOperator.d(r, i)
    return out


def _ideal_operator(r: int, pairs, index: Mapping) -> WeylOperator:
    """Fourier image of a binomial/quadric given as {(u, v): coeff} in section coordinates."""
    poly = WeylOperator(r)
    for (u, v), c in pairs:
        poly = poly + WeylOperator.x(r, index[u]) * WeylOperator.x(r, index[v]) * c
    return fourier(poly)


def _betas(labels: Sequence[str], beta_g: Mapping | None, default) -> dict[str, Fraction]:
    beta_g = dict(beta_g or {})
    unknown = set(beta_g) - set(labels)
    if unknown:
        raise UnsupportedLieAlgebra(f"beta given for unknown basis elements {sorted(unknown)}")
    return {lab: to_rational(beta_g.get(lab, default(lab))) for lab in labels}


def build_projective_system(n: int, k: int, beta_e=1, beta_g: Mapping | None = None) -> TautSystem:
    """tau(SL_{n+1}, P^n, O(k), beta); variables are the degree-k monomials in x_1..x_{n+1}."""
    if n < 1 or k < 1:
        raise UnsupportedSpec(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    basis = monomials_of_degree(n + 1, k)
    index = {u: i for i, u in enumerate(basis)}
    r = len(basis)
    ideal = [_ideal_operator(r, [((u, v), 1), ((w, t), -1)], index) for (u, v), (w, t) in veronese_toric_ideal(n, k)]
    labels = sl_basis(n + 1)
    betas = _betas(labels, beta_g, lambda lab: 0)
    lie = {lab: lie_operator(lab, basis, "monomial", betas[lab], m=n + 1) for lab in labels}
    beta_e = to_rational(beta_e)
    return TautSystem(r, list(basis), ideal, lie, euler_operator(r, beta_e), beta_e, betas, VarietyTag("pn", (n, k)))


def build_grassmannian_plucker_system(d: int, n: int, beta_e=1, beta_g: Mapping | None = None) -> TautSystem:
    """tau(GL_n, G(d, n), O(1), beta) in Pluecker coordinates.

    The identity of gl_n acts on Pluecker coordinates by d, so Z(I) = -d(sum a d_a);
    for the system to be consistent beta(I) must equal -d beta(e), and the
    default spreads this evenly: beta(E_ii) = -d beta(e) / n, beta(E_ij) = 0.
    """
    if not 1 <= d < n:
        raise UnsupportedSpec(f"need 1 <= d < n, got d={d}, n={n}")
    from itertools import combinations

    basis = list(combinations(range(1, n + 1), d))
    index = {J: i for i, J in enumerate(basis)}
    r = len(basis)
    ideal = []
    for rel in grassmannian_plucker_relations(d, n):
        pairs = []
        for mono, c in rel.items():
            factors = [j.entries for j, e in mono for _ in range(e)]
            pairs.append(((factors[0], factors[1]), c))
        ideal.append(_ideal_operator(r, pairs, index))
    beta_e = to_rational(beta_e)
    labels = gl_basis(n)
    diag = -d * beta_e / n

    def default(lab):
        i, j = lab[1:].split(",")
        return diag if i == j else 0

    betas = _betas(labels, beta_g, default)
    lie = {lab: lie_operator(lab, basis, "plucker", betas[lab], m=n) for lab in labels}
    notes = []
    trace = sum(betas[f"E{i},{i}"] for i in range(1, n + 1))
    if trace != -d * beta_e:
        notes.append("beta on the identity differs from -d*beta(e); the system has no nonzero solutions")
    return TautSystem(r, basis, ideal, lie, euler_operator(r, beta_e), beta_e, betas,
                      VarietyTag("grassmannian-plucker", (d, n)), notes)


_SPEC = re.compile(r"^\s*(pn|grassmannian-plucker)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def parse_variety_spec(text: str) -> VarietyTag:
    hit = _SPEC.match(text)
    if not hit:
        raise UnsupportedSpec(f"cannot parse variety spec {text!r}; expected pn(n,k) or grassmannian-plucker(d,n)")
    return VarietyTag(hit.group(1), (int(hit.group(2)), int(hit.group(3))))


def build_system(spec: str | VarietyTag, beta_e=1, beta_g: Mapping | None = None) -> TautSystem:
    tag = parse_variety_spec(spec) if isinstance(spec, str) else spec
    if tag.kind == "pn":
        return build_projective_system(*tag.params, beta_e=beta_e, beta_g=beta_g)
    if tag.kind == "grassmannian-plucker":
        return build_grassmannian_plucker_system(*tag.params, beta_e=beta_e, beta_g=beta_g)
    raise UnsupportedSpec(str(tag))
