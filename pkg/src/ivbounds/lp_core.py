"""Constraint matrix, exact linear algebra and vertex/ray certification.

Every row of ``M`` corresponds to a full-data cell ``(i, j, d)`` and has
exactly one unit entry per instrument arm: column ``(i, 0, z)`` when
``d_z = 0`` and column ``(j, 1, z)`` when ``d_z = 1``.  Rows are stored
sparsely as those ``ell`` column indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionTooLarge, Infeasible, ShapeMismatch, ZeroVector
from .model import OutcomeSupport, col_index, d_patterns

DEFAULT_ROW_CAP = 2**24
DENSE_CELL_CAP = 2**24


@dataclass(frozen=True)
class ConstraintMatrix:
    n: int
    ell: int
    rows: tuple  # rows[r] = column indices of the unit entries

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), 2 * self.n * self.ell

    def row_key(self, r: int) -> tuple[int, int, tuple]:
        n = self.n
        code, rest = divmod(r, n * n)
        i, j = divmod(rest, n)
        d = tuple((code >> (self.ell - 1 - z)) & 1 for z in range(self.ell))
        return i, j, d

    def entry(self, r: int, k: int) -> int:
        return int(k in self.rows[r])

    def dense(self) -> list[list[int]]:
        nrows, ncols = self.shape
        if nrows * ncols > DENSE_CELL_CAP:
            raise DimensionTooLarge(nrows * ncols, DENSE_CELL_CAP)
        out = []
        for cols in self.rows:
            row = [0] * ncols
            for k in cols:
                row[k] = 1
            out.append(row)
        return out

    def apply(self, v: Sequence) -> list:
        """``M v``."""
        return [sum(v[k] for k in cols) for cols in self.rows]

    def transpose_apply(self, q: Sequence) -> list:
        """``M^T q``."""
        out = [0] * self.shape[1]
        for cols, w in zip(self.rows, q):
            if w:
                for k in cols:
                    out[k] += w
        return out


@dataclass(frozen=True)
class CostVector:
    values: tuple  # c_{ij,d} = gamma_j - gamma_i, row order


@dataclass(frozen=True)
class DualVector:
    """A point of the dual space, flat in arm-major ``(y, d, z)`` order.

    ``family`` tags where the vector came from (``vertex-S1``, ``ray-IV``,
    ``multival-vertex``, ``kernel``, ...) and ``params`` carries the family
    parameters; neither takes part in equality.
    """

    n: int
    ell: int
    values: tuple
    family: str = field(default="", compare=False)
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            y, d, z = key
            return self.values[col_index(y, d, z, self.n)]
        return self.values[key]

    def __len__(self):
        return len(self.values)

    def dot(self, probs: Sequence):
        return sum(a * b for a, b in zip(self.values, probs) if a and b)


@lru_cache(maxsize=64)
def build_constraint_matrix(n: int, ell: int, cap: int = DEFAULT_ROW_CAP) -> ConstraintMatrix:
    if n < 2 or ell < 2:
        raise ShapeMismatch(f"need n >= 2 and ell >= 2, got n={n}, ell={ell}")
    nrows = 2**ell * n * n
    if nrows > cap:
        raise DimensionTooLarge(nrows, cap)
    rows = []
    for d in d_patterns(ell):
        for i in range(n):
            for j in range(n):
                rows.append(tuple(
                    col_index(j if dz else i, dz, z, n) for z, dz in enumerate(d)
                ))
    return ConstraintMatrix(n, ell, tuple(rows))


def build_cost_vector(support: OutcomeSupport, ell: int) -> CostVector:
    g = support.gammas
    n = support.n
    vals = [g[j] - g[i] for _ in range(2**ell) for i in range(n) for j in range(n)]
    return CostVector(tuple(vals))


# -- exact linear algebra --------------------------------------------------

def _integer_row(row: Iterable) -> list[int]:
    row = [Fraction(x) for x in row]
    den = 1
    for x in row:
        den = lcm(den, x.denominator)
    return [int(x * den) for x in row]


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    return [x // g for x in row] if g > 1 else row


def rank(matrix: Iterable[Iterable]) -> int:
    """Exact rank over the rationals (fraction-free integer elimination)."""
    seen = set()
    rows = []
    for r in matrix:
        ir = tuple(_primitive(_integer_row(r)))
        if any(ir) and ir not in seen:
            seen.add(ir)
            rows.append(list(ir))
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        best = None
        for k in range(r, len(rows)):
            a = rows[k][col]
            if a and (best is None or abs(a) < abs(rows[best][col])):
                best = k
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        p = prow[col]
        for k in range(r + 1, len(rows)):
            a = rows[k][col]
            if a:
                g = gcd(p, a)
                fp, fa = p // g, a // g
                rows[k] = _primitive([fp * x - fa * y for x, y in zip(rows[k], prow)])
        r += 1
        if r == len(rows):
            break
    return r


def _sparse_rank(sparse_rows: Iterable[tuple], ncols: int) -> int:
    return rank(
        [1 if k in cols else 0 for k in range(ncols)] for cols in set(sparse_rows)
    )


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [[Fraction(x) for x in r] for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pr = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Integer-primitive basis of ``{x : A x = 0}``, first nonzero entry positive."""
    reduced, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            x[pc] = -row[f]
        ix = _primitive(_integer_row(x))
        lead = next(v for v in ix if v)
        if lead < 0:
            ix = [-v for v in ix]
        basis.append([Fraction(v) for v in ix])
    return basis


def kernel_basis(matrix: ConstraintMatrix) -> list[DualVector]:
    uniq = sorted(set(matrix.rows))
    ncols = matrix.shape[1]
    dense = [[1 if k in cols else 0 for k in range(ncols)] for cols in uniq]
    return [
        DualVector(matrix.n, matrix.ell, tuple(b), family="kernel")
        for b in nullspace(dense, ncols)
    ]


@lru_cache(maxsize=64)
def matrix_rank(n: int, ell: int) -> int:
    m = build_constraint_matrix(n, ell)
    return _sparse_rank(m.rows, m.shape[1])


def in_kernel(matrix: ConstraintMatrix, x: Sequence) -> bool:
    return all(v == 0 for v in matrix.apply(x))


# -- active sets and certification ----------------------------------------

def _values(v) -> Sequence:
    return v.values if isinstance(v, DualVector) else v


def active_set(v, matrix: ConstraintMatrix, cost: CostVector | None = None) -> tuple[int, ...]:
    """Rows where ``M v = c``; raises :class:`Infeasible` if some row has ``M v > c``.

    With ``cost=None`` the right-hand side is zero (the cone).
    """
    vals = _values(v)
    if len(vals) != matrix.shape[1]:
        raise ShapeMismatch(f"vector length {len(vals)} != {matrix.shape[1]}")
    out = []
    for r, cols in enumerate(matrix.rows):
        lhs = sum(vals[k] for k in cols)
        rhs = cost.values[r] if cost is not None else 0
        if lhs > rhs:
            raise Infeasible(r, lhs, rhs)
        if lhs == rhs:
            out.append(r)
    return tuple(out)


def active_rank(v, matrix: ConstraintMatrix, cost: CostVector | None = None) -> int:
    rows = active_set(v, matrix, cost)
    return _sparse_rank((matrix.rows[r] for r in rows), matrix.shape[1])


def certify_vertex(v, matrix: ConstraintMatrix, cost: CostVector) -> bool:
    """True iff the active rows at ``v`` have the full rank of ``M``."""
    return active_rank(v, matrix, cost) == matrix_rank(matrix.n, matrix.ell)


def certify_extreme_ray(r, matrix: ConstraintMatrix) -> bool:
    """True iff the rows tight at ``r`` have rank at least ``rank(M) - 1``."""
    if not any(_values(r)):
        raise ZeroVector("the zero vector is not a ray")
    return active_rank(r, matrix, None) >= matrix_rank(matrix.n, matrix.ell) - 1


def signature_of(v, matrix: ConstraintMatrix, cost: CostVector) -> tuple[int, ...]:
    """Column-wise OR of the active rows with mixed treatment pattern (ell = 2).

    For a binary instrument these are the rows with ``d = (0,1)`` or ``(1,0)``;
    the result is flat in the same arm-major order as the dual vectors.
    """
    if matrix.ell != 2:
        raise ShapeMismatch("signatures are defined for ell = 2 only")
    bits = [0] * matrix.shape[1]
    for r in active_set(v, matrix, cost):
        _, _, d = matrix.row_key(r)
        if d[0] != d[1]:
            for k in matrix.rows[r]:
                bits[k] = 1
    return tuple(bits)
