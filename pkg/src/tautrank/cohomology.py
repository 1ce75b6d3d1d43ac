"""Cohomology of Grassmannians and of their hypersurface sections.

Schubert classes sigma_lambda live in H^*(G(d, n)) with lambda in the
d x (n - d) box. Chern classes are computed with Chern roots x_1..x_d of
S^dual (S the tautological subbundle): in those variables sigma_lambda is the
Schur polynomial s_lambda(x), and s_lambda vanishes once lambda_1 > n - d.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Mapping, Sequence


class ParameterMismatch(ValueError):
    pass


class UnsupportedCase(ValueError):
    pass


Partition = tuple[int, ...]


def _norm(lam: Sequence[int]) -> Partition:
    lam = tuple(int(x) for x in lam)
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)) or (lam and lam[-1] < 0):
        raise ValueError(f"{lam} is not a partition")
    return tuple(x for x in lam if x)


def in_box(lam: Partition, d: int, n: int) -> bool:
    return len(lam) <= d and (not lam or lam[0] <= n - d)


def box_partitions(d: int, n: int, size: int | None = None) -> list[Partition]:
    """Partitions in the d x (n - d) box, optionally of a fixed size, ordered by size."""
    out: list[Partition] = []

    def rec(prefix: list[int], maxpart: int):
        out.append(tuple(prefix))
        if len(prefix) == d:
            return
        for part in range(1, maxpart + 1):
            rec(prefix + [part], part)

    rec([], n - d)
    if size is not None:
        out = [p for p in out if sum(p) == size]
    return sorted(out, key=lambda p: (sum(p), [-x for x in p]))


@dataclass(frozen=True)
class PoincarePoly:
    """Even Betti numbers b_0, b_2, ..., b_{2 dim}."""

    coefficients: tuple[int, ...]

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def betti(self, i: int) -> int:
        """b_i for any i (odd Betti numbers vanish)."""
        if i < 0 or i % 2 or i // 2 >= len(self.coefficients):
            return 0
        return self.coefficients[i // 2]

    @property
    def dimension(self) -> int:
        return len(self.coefficients) - 1

    def to_json(self) -> dict:
        return {"betti_even": list(self.coefficients)}


def poincare_grassmannian(d: int, n: int) -> PoincarePoly:
    """Coefficients of the Gaussian binomial [n choose d]_q."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    counts = [0] * (d * (n - d) + 1)
    for lam in box_partitions(d, n):
        counts[sum(lam)] += 1
    return PoincarePoly(tuple(counts))


# --- Schubert classes ---

class SchubertClass:
    __slots__ = ("d", "n", "_terms")

    def __init__(self, d: int, n: int, terms: Mapping[Sequence[int], int] | None = None):
        self.d, self.n = d, n
        clean: dict[Partition, int] = {}
        for lam, c in (terms or {}).items():
            lam = _norm(lam)
            if not in_box(lam, d, n):
                raise ValueError(f"{lam} does not fit the {d}x{n - d} box")
            if c:
                clean[lam] = clean.get(lam, 0) + int(c)
                if not clean[lam]:
                    del clean[lam]
        self._terms = clean

    @classmethod
    def sigma(cls, d: int, n: int, lam: Sequence[int] = ()) -> "SchubertClass":
        return cls(d, n, {tuple(lam): 1})

    @property
    def terms(self) -> dict[Partition, int]:
        return dict(self._terms)

    def coefficient(self, lam: Sequence[int]) -> int:
        return self._terms.get(_norm(lam), 0)

    def integral(self) -> int:
        """Coefficient of the point class sigma_{(n-d)^d}."""
        return self._terms.get((self.n - self.d,) * self.d, 0)

    def degree_part(self, k: int) -> "SchubertClass":
        return SchubertClass(self.d, self.n, {l: c for l, c in self._terms.items() if sum(l) == k})

    def _check(self, other):
        if (self.d, self.n) != (other.d, other.n):
            raise ParameterMismatch(f"G({self.d},{self.n}) vs G({other.d},{other.n})")

    def __add__(self, other):
        self._check(other)
        t = dict(self._terms)
        for l, c in other._terms.items():
            t[l] = t.get(l, 0) + c
        return SchubertClass(self.d, self.n, t)

    def __neg__(self):
        return SchubertClass(self.d, self.n, {l: -c for l, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SchubertClass):
            return schubert_mul(self, other)
        return SchubertClass(self.d, self.n, {l: c * other for l, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SchubertClass) and (self.d, self.n) == (other.d, other.n) \
            and self._terms == other._terms

    def __hash__(self):
        return hash((self.d, self.n, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*s{list(l)}" for l, c in sorted(self._terms.items()))

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "terms": [{"partition": list(l), "coeff": c}
                                                   for l, c in sorted(self._terms.items())]}


def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Number of Littlewood-Richardson tableaux of shape nu/lam and content mu."""
    lam, mu, nu = _norm(lam), _norm(mu), _norm(nu)
    if sum(lam) + sum(mu) != sum(nu):
        return 0
    if len(lam) > len(nu) or any(l > m for l, m in zip(lam, nu)):
        return 0
    lamp = list(lam) + [0] * (len(nu) - len(lam))
    # reading order: rows top to bottom, each row right to left
    cells = [(i, j) for i in range(len(nu)) for j in range(nu[i] - 1, lamp[i] - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)

    def rec(k):
        if k == len(cells):
            return 1
        i, j = cells[k]
        hi = len(mu)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        lo = 1
        above = filling.get((i - 1, j))
        if above is not None:
            lo = above + 1
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(i, j)] = v
            total += rec(k + 1)
            del filling[(i, j)]
            counts[v] -= 1
        return total

    return rec(0)


def schubert_mul(a: SchubertClass, b: SchubertClass) -> SchubertClass:
    """Cup product by the Littlewood-Richardson rule, truncated to the box."""
    a._check(b)
    out: dict[Partition, int] = {}
    for lam, c1 in a.terms.items():
        for mu, c2 in b.terms.items():
            for nu in box_partitions(a.d, a.n, sum(lam) + sum(mu)):
                c = lr_coefficient(lam, mu, nu)
                if c:
                    out[nu] = out.get(nu, 0) + c * c1 * c2
    return SchubertClass(a.d, a.n, out)


def pieri(a: SchubertClass, k: int) -> SchubertClass:
    """a * sigma_k: add horizontal strips of size k inside the box."""
    if k == 0:
        return a
    if k < 0 or k > a.n - a.d:
        return SchubertClass(a.d, a.n)
    out: dict[Partition, int] = {}
    for lam, c in a.terms.items():
        lamp = list(lam) + [0] * (a.d - len(lam))
        for nu in box_partitions(a.d, a.n, sum(lam) + k):
            nup = list(nu) + [0] * (a.d - len(nu))
            # horizontal strip: lam_i <= nu_i <= lam_{i-1}
            if all(lamp[i] <= nup[i] and (i == 0 or nup[i] <= lamp[i - 1]) for i in range(a.d)):
                out[nu] = out.get(nu, 0) + c
    return SchubertClass(a.d, a.n, out)


def schubert_mul_pieri(a: SchubertClass, b: SchubertClass) -> SchubertClass:
    """Cup product via Jacobi-Trudi (sigma_mu = det(sigma_{mu_i - i + j})) and iterated Pieri."""
    a._check(b)
    total = SchubertClass(a.d, a.n)
    for mu, c in b.terms.items():
        l = len(mu)
        for perm in permutations(range(l)):
            sign = _perm_sign(perm)
            ks = [mu[i] - i + perm[i] for i in range(l)]
            if any(k < 0 for k in ks):
                continue
            term = a
            for k in ks:
                term = pieri(term, k)
            total = total + term * (sign * c)
    return total


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# --- Chern-root polynomial arithmetic (integer coefficients, truncated by degree) ---

Poly = dict  # exponent tuple -> int


def _pmul(p: Poly, q: Poly, top: int) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        s1 = sum(e1)
        for e2, c2 in q.items():
            if s1 + sum(e2) > top:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _ppow(p: Poly, k: int, top: int, nvars: int) -> Poly:
    out = {(0,) * nvars: 1}
    for _ in range(k):
        out = _pmul(out, p, top)
    return out


def _linear(coeffs: Sequence[int]) -> Poly:
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * len(coeffs)
            e[i] = 1
            out[tuple(e)] = c
    return out


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _series_inverse_one_minus(u: Poly, top: int, nvars: int) -> Poly:
    """1 / (1 - u) for u without constant term, truncated at degree top."""
    out = {(0,) * nvars: 1}
    power = dict(out)
    for _ in range(top):
        power = _pmul(power, u, top)
        if not power:
            break
        out = _padd(out, power)
    return out


def symmetric_to_schubert(p: Poly, d: int, n: int) -> SchubertClass:
    """Expand a symmetric polynomial in the Chern roots in Schur functions and drop those outside the box."""
    if d == 1:
        return SchubertClass(d, n, {((e[0],) if e[0] else ()): c for e, c in p.items() if e[0] <= n - d})
    vandermonde: Poly = {(0,) * d: 1}
    for i, j in combinations(range(d), 2):
        lin = [0] * d
        lin[i], lin[j] = 1, -1
        vandermonde = _pmul(vandermonde, _linear(lin), 10 ** 9)
    prod_ = _pmul(p, vandermonde, 10 ** 9)
    out = {}
    for e, c in prod_.items():
        if all(e[i] > e[i + 1] for i in range(d - 1)):
            lam = tuple(e[i] - (d - 1 - i) for i in range(d))
            if lam[0] <= n - d:
                out[lam] = out.get(lam, 0) + c
    return SchubertClass(d, n, out)


def _total_chern_tangent_roots(d: int, n: int) -> Poly:
    """c(T) = prod (1 + x_i)^n / prod_{i<j} (1 - (x_i - x_j)^2), truncated at the dimension."""
    top = d * (n - d)
    num: Poly = {(0,) * d: 1}
    for i in range(d):
        lin = [0] * d
        lin[i] = 1
        one_plus = _padd({(0,) * d: 1}, _linear(lin))
        num = _pmul(num, _ppow(one_plus, n, top, d), top)
    for i, j in combinations(range(d), 2):
        lin = [0] * d
        lin[i], lin[j] = 1, -1
        diff = _linear(lin)
        num = _pmul(num, _series_inverse_one_minus(_pmul(diff, diff, top), top, d), top)
    return num


def _degree_part(p: Poly, k: int) -> Poly:
    return {e: c for e, c in p.items() if sum(e) == k}


def chern_tangent_grassmannian(d: int, n: int) -> list[SchubertClass]:
    """[c_1(T), ..., c_dim(T)] of G(d, n) in the Schubert basis."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    total = _total_chern_tangent_roots(d, n)
    return [symmetric_to_schubert(_degree_part(total, k), d, n) for k in range(1, d * (n - d) + 1)]


def euler_characteristic_grassmannian(d: int, n: int) -> int:
    """Integral of the top Chern class (equals C(n, d))."""
    return chern_tangent_grassmannian(d, n)[-1].integral()


def euler_char_hypersurface(d: int, n: int, k: int) -> int:
    """chi(Y) for a smooth Y in |O(k)| on G(d, n): integral of c(T_X) / (1 + k sigma_1) * k sigma_1."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}, n={n}")
    if k < 1:
        raise ValueError("the hypersurface degree must be positive")
    top = d * (n - d)
    h = _linear([k] * d)  # k sigma_1 = k e_1(x)
    minus_h = {e: -c for e, c in h.items()}
    integrand = _pmul(_pmul(_total_chern_tangent_roots(d, n), _series_inverse_one_minus(minus_h, top, d), top),
                      h, top)
    return symmetric_to_schubert(_degree_part(integrand, top), d, n).integral()


def hypersurface_betti(d: int, n: int, k: int) -> list[int]:
    """All Betti numbers b_0..b_{2m} of a smooth degree-k hypersurface section Y (complex dimension m)."""
    X = poincare_grassmannian(d, n)
    m = X.dimension - 1
    b = [0] * (2 * m + 1)
    for i in range(m):
        b[i] = X.betti(i)
        b[2 * m - i] = b[i]
    chi = euler_char_hypersurface(d, n, k)
    rest = sum((-1) ** i * b[i] for i in range(2 * m + 1) if i != m)
    b[m] = (-1) ** m * (chi - rest)
    return b


def generic_rank(d: int, n: int) -> int:
    """dim H^N(X)_prim + dim H^{N-1}(Y) - dim H^{N+1}(X), N = dim X, Y a smooth anticanonical section."""
    X = poincare_grassmannian(d, n)
    N = X.dimension
    prim = X.betti(N) - X.betti(N - 2)
    bY = hypersurface_betti(d, n, n)
    return prim + bY[N - 1] - X.betti(N + 1)


def complement_rank_special(case: str, **params) -> int:
    """dim H_N(X - Y_a) in the configurations with a known answer.

    case "p1": Y_a in P^1 given by ``multiplicities`` of its roots or by the
    binary-quadric ``coefficients`` (a0, a1, a2) of a0 x^2 + a1 xy + a2 y^2;
    case "pn_toric": Y_a the union of the n + 1 coordinate hyperplanes of P^n;
    case "smooth": Y_a smooth anticanonical in G(d, n) (projective space is d = 1).
    """
    if case == "p1":
        if "multiplicities" in params:
            mult = [m for m in params["multiplicities"] if m > 0]
            if not mult:
                raise UnsupportedCase("Y_a must be a nonempty divisor")
            return len(mult) - 1
        if "coefficients" in params:
            from fractions import Fraction
            a0, a1, a2 = (Fraction(x) for x in params["coefficients"])
            if a0 == a1 == a2 == 0:
                raise UnsupportedCase("the zero section does not define a divisor")
            return 1 if a1 * a1 - 4 * a0 * a2 else 0
        raise UnsupportedCase("p1 needs multiplicities or coefficients")
    if case == "pn_toric":
        if params.get("n", 1) < 1:
            raise UnsupportedCase("n must be positive")
        return 1
    if case == "smooth":
        return generic_rank(params["d"], params["n"])
    raise UnsupportedCase(f"no formula for configuration {case!r}")
