"""Jet-space rank oracle for systems of linear PDEs with polynomial coefficients.

A jet of order N at a is u = sum_{|g| <= N} u_g y^g with y = x - a. A
generator A of differential order o maps it to a jet that is exact up to
order N - o, and u is a jet solution when all of those coefficients vanish.
The unknowns are the u_g, so every (generator, output monomial) pair is one
linear equation.
"""

from __future__ import annotations

import random
import time
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .linalg import SparseMatrix, to_rational
from .tautsys import TautSystem
from .weyl import Jet, WeylOperator, apply_to_jet, monomials_upto, term_action


@dataclass
class JetReport:
    base_point: tuple
    orders: list[int]
    raw_dims: list[int]
    image_dims: list[int]
    window: int
    stabilized: bool
    rank_estimate: int | str
    prime: int | None = None
    seconds: float = 0.0
    caveats: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "base_point": [str(x) for x in self.base_point],
            "orders": self.orders,
            "raw_dims": self.raw_dims,
            "image_dims": self.image_dims,
            "window": self.window,
            "stabilized": self.stabilized,
            "rank_estimate": self.rank_estimate,
            "field": "Q" if self.prime is None else f"F_{self.prime}",
            "seconds": round(self.seconds, 3),
            "caveats": self.caveats,
        }


def _generators(sys_or_ops) -> list[WeylOperator]:
    if isinstance(sys_or_ops, TautSystem):
        return sys_or_ops.generators
    return list(sys_or_ops)


def constraint_matrix(sys: TautSystem | Sequence[WeylOperator], a: Sequence, N: int,
                      p: int | None = None, high_first: bool = False):
    """Sparse constraint matrix of order-N jet solutions at a.

    Returns (matrix, columns) where columns[c] is the exponent g of the
    unknown u_g. With ``high_first`` the columns are sorted by descending
    degree, which is what the truncation-image computation wants.
    """
    gens = _generators(sys)
    if not gens:
        raise ValueError("system has no generators")
    r = gens[0].num_vars
    a = tuple(to_rational(x) for x in a)
    if len(a) != r:
        raise la.DimensionMismatch(f"base point has {len(a)} coordinates, system has {r} variables")
    columns = monomials_upto(r, N)
    if high_first:
        columns = sorted(columns, key=lambda g: -sum(g))
    col_of = {g: i for i, g in enumerate(columns)}
    rows: list[dict] = []
    cache: dict = {}
    for A in gens:
        out_order = N - A.order()
        if out_order < 0:
            continue
        row_of: dict[tuple, int] = {}
        local: list[dict] = []
        for (xe, de), c in A.items():
            for g in columns:
                for h, v in term_action(xe, de, g, a, cache).items():
                    if sum(h) > out_order:
                        continue
                    k = row_of.get(h)
                    if k is None:
                        k = row_of[h] = len(local)
                        local.append({})
                    row = local[k]
                    col = col_of[g]
                    row[col] = row.get(col, 0) + c * v
        for row in local:
            row = {k: v for k, v in row.items() if v}
            if row:
                if p is not None:
                    row = {k: la.rational_mod_p(v, p) for k, v in row.items()}
                    row = {k: v for k, v in row.items() if v}
                    if not row:
                        continue
                rows.append(row)
    return SparseMatrix.from_rows(rows, len(columns), p), columns


def jet_solution_dim(sys: TautSystem | Sequence[WeylOperator], a: Sequence, N: int, p: int | None = None) -> int:
    if N < 0:
        raise ValueError("order must be non-negative")
    m, _ = constraint_matrix(sys, a, N, p)
    return la.nullspace_dim(m)


def truncation_image_dims(sys: TautSystem | Sequence[WeylOperator], a: Sequence, N_max: int,
                          p: int | None = None) -> tuple[int, list[int]]:
    """(dim of order-N_max jet solutions, [dim of their truncation to order N for N = 0..N_max]).

    The truncation kernel consists of the solutions whose coefficients of
    degree <= N vanish, i.e. the kernel of the columns of degree > N, whose
    rank is read off from one elimination visiting high-degree columns first.
    """
    m, columns = constraint_matrix(sys, a, N_max, p, high_first=True)
    pivots = set(la.echelon_pivots(m, range(m.ncols)))
    nullity = m.ncols - len(pivots)
    dims = []
    for N in range(N_max + 1):
        high = [i for i, g in enumerate(columns) if sum(g) > N]
        rank_high = sum(1 for i in high if i in pivots)
        dims.append(nullity - (len(high) - rank_high))
    return nullity, dims


def default_max_order(num_vars: int) -> int:
    if num_vars <= 3:
        return 10
    if num_vars <= 6:
        return 6
    return 4


def rank_estimate(sys: TautSystem | Sequence[WeylOperator], a: Sequence, N_min: int, N_max: int,
                  window: int = 3, p: int | None = None) -> JetReport:
    """Estimate the solution rank at a from truncation images of order-N_max jet solutions.

    Raw dims are reported for every order in [N_min, N_max]. The estimate is
    the common value of the images of the order-N_max solutions in the
    order-N jets over the last ``window`` orders below N_max; the order
    N_max itself is excluded because its top-degree coefficients are barely
    constrained. A disagreement yields "unstable".
    """
    if N_min < 0 or N_min + window > N_max:
        raise ValueError(f"need 0 <= N_min and N_min + window <= N_max (got {N_min}, {window}, {N_max})")
    t0 = time.perf_counter()
    a = tuple(to_rational(x) for x in a)
    orders = list(range(N_min, N_max + 1))
    raw = [jet_solution_dim(sys, a, N, p) for N in orders[:-1]]
    top, images = truncation_image_dims(sys, a, N_max, p)
    raw.append(top)
    image_dims = [images[N] for N in orders]
    tail = images[N_max - window:N_max]
    stabilized = len(set(tail)) == 1
    caveats = []
    if all(x == 0 for x in a):
        caveats.append("base point is the origin: the value is a jet count, not a solution rank claim")
    return JetReport(a, orders, raw, image_dims, window, stabilized, tail[-1] if stabilized else "unstable",
                     p, time.perf_counter() - t0, caveats)


def verify_annihilation(sys: TautSystem | Sequence[WeylOperator], j: Jet) -> bool:
    """True iff every generator kills the jet up to its guaranteed order."""
    for A in _generators(sys):
        if A.num_vars != j.num_vars:
            raise la.DimensionMismatch(f"{A.num_vars} vs {j.num_vars} variables")
        if not apply_to_jet(A, j).is_zero():
            return False
    return True


def mod_p_agreement(sys: TautSystem | Sequence[WeylOperator], a: Sequence, N: int, primes: int = 3,
                    seed: int | None = None) -> dict:
    """Compare the exact jet dimension with dimensions over random 62-bit primes.

    Ranks can only drop modulo p, so the F_p dimension is never below the
    exact one; a mismatch on more than one prime raises a warning.
    """
    rng = random.Random(seed)
    exact = jet_solution_dim(sys, a, N)
    runs = []
    for _ in range(primes):
        p = la.random_prime(62, rng)
        try:
            runs.append((p, jet_solution_dim(sys, a, N, p)))
        except la.BadPrime:
            continue
    bad = [p for p, d in runs if d != exact]
    if len(bad) > 1:
        warnings.warn(f"jet dimension differs from the exact value {exact} modulo {len(bad)} primes")
    return {"exact": exact, "mod_p": runs, "mismatches": len(bad)}
