"""Exact two-phase simplex (dense tableau, Bland's rule) and the primal LPs.

This is the independent check on the combinatorial routes: it only knows the
constraint matrix and the cost vector, never the vertex or ray formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, DimensionTooLarge, InfeasibleLaw
from .lp_core import DualVector, build_constraint_matrix, build_cost_vector
from .model import ObservedLaw, OutcomeSupport, as_rational, observed_from_flat

MAX_VARIABLES = 4096

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LpInstance:
    """``objective . x`` subject to ``eq_matrix x = eq_rhs``, ``x >= 0``."""

    objective: tuple
    eq_matrix: tuple
    eq_rhs: tuple

    def __post_init__(self):
        nvars = len(self.objective)
        if len(self.eq_matrix) != len(self.eq_rhs):
            raise DimensionMismatch(
                f"{len(self.eq_matrix)} constraint rows but {len(self.eq_rhs)} right-hand sides"
            )
        for r, row in enumerate(self.eq_matrix):
            if len(row) != nvars:
                raise DimensionMismatch(f"row {r} has {len(row)} entries, expected {nvars}")

    @classmethod
    def build(cls, objective, eq_matrix, eq_rhs) -> "LpInstance":
        return cls(
            tuple(Fraction(as_rational(x)) for x in objective),
            tuple(tuple(Fraction(as_rational(x)) for x in row) for row in eq_matrix),
            tuple(Fraction(as_rational(x)) for x in eq_rhs),
        )

    @property
    def num_variables(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None = None
    solution: tuple | None = None


class _Tableau:
    """Rows ``[a_1 .. a_N | b]`` with a basis; reduced costs kept separately."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        p = prow[col]
        if p != 1:
            prow = [x / p for x in prow]
            self.rows[r] = prow
        nz = [k for k, x in enumerate(prow) if x]
        for k, row in enumerate(self.rows):
            if k != r:
                f = row[col]
                if f:
                    for c in nz:
                        row[c] -= f * prow[c]
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        width = len(self.rows[0]) if self.rows else len(cost) + 1
        red = list(cost) + [Fraction(0)] * (width - len(cost))
        for row, b in zip(self.rows, self.basis):
            cb = cost[b] if b < len(cost) else 0
            if cb:
                for c, x in enumerate(row):
                    if x:
                        red[c] -= cb * x
        return red

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> bool:
        """Minimize over columns ``< allowed``; False if unbounded."""
        red = self.reduced_costs(cost)
        while True:
            col = next((c for c in range(allowed) if red[c] < 0), None)
            if col is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            r = best[1]
            self.pivot(r, col)
            prow = self.rows[r]
            f = red[col]
            red = [x - f * y for x, y in zip(red, prow)]


def solve_lp(instance: LpInstance, sense: str = "min") -> LpResult:
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    nvars = instance.num_variables
    if nvars > MAX_VARIABLES:
        raise DimensionTooLarge(nvars, MAX_VARIABLES)
    m = len(instance.eq_rhs)
    rows = []
    for row, b in zip(instance.eq_matrix, instance.eq_rhs):
        sign = -1 if b < 0 else 1
        art = [Fraction(0)] * m
        art[len(rows)] = Fraction(1)
        rows.append([sign * x for x in row] + art + [sign * b])
    tab = _Tableau(rows, [nvars + r for r in range(m)])

    # phase 1: minimize the sum of artificials
    phase1 = [Fraction(0)] * nvars + [Fraction(1)] * m
    tab.optimize(phase1, nvars + m)
    if any(row[-1] for row, b in zip(tab.rows, tab.basis) if b >= nvars):
        return LpResult(INFEASIBLE)

    # drive zero-level artificials out; drop rows that are redundant
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= nvars:
            col = next((c for c in range(nvars) if tab.rows[r][c]), None)
            if col is None:
                del tab.rows[r]
                del tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    for row in tab.rows:
        del row[nvars:nvars + m]

    cost = list(instance.objective)
    if sense == "max":
        cost = [-x for x in cost]
    if not tab.optimize(cost, nvars):
        return LpResult(UNBOUNDED)
    x = [Fraction(0)] * nvars
    for row, b in zip(tab.rows, tab.basis):
        x[b] = row[-1]
    value = sum((c * v for c, v in zip(instance.objective, x) if c and v), Fraction(0))
    return LpResult(OPTIMAL, value, tuple(x))


# -- the primal programs ---------------------------------------------------

def _primal_instance(support: OutcomeSupport, ell: int, probs, objective=True) -> LpInstance:
    n = support.n
    nvars = 2**ell * n * n
    if nvars > MAX_VARIABLES:
        raise DimensionTooLarge(nvars, MAX_VARIABLES)
    matrix = build_constraint_matrix(n, ell)
    ncols = matrix.shape[1]
    if len(probs) != ncols:
        raise DimensionMismatch(f"expected {ncols} probabilities, got {len(probs)}")
    eq = [[Fraction(0)] * nvars for _ in range(ncols)]
    for r, cols in enumerate(matrix.rows):
        for k in cols:
            eq[k][r] = Fraction(1)
    if objective:
        obj = build_cost_vector(support, ell).values
    else:
        obj = (0,) * nvars
    return LpInstance.build(obj, eq, probs)


def oracle_ate_bounds(law: ObservedLaw) -> tuple[Fraction, Fraction]:
    """``(min, max)`` of the ATE over full-data laws matching ``law``."""
    inst = _primal_instance(law.support, law.ell, law.probs)
    lo = solve_lp(inst, "min")
    if lo.status == INFEASIBLE:
        raise InfeasibleLaw("no full-data law reproduces the observed law")
    hi = solve_lp(inst, "max")
    return lo.value, hi.value


def oracle_feasible(probs, n: int, ell: int, support: OutcomeSupport | None = None) -> bool:
    """True iff some ``q >= 0`` has ``M^T q = p``."""
    support = support or OutcomeSupport.range(n)
    inst = _primal_instance(support, ell, list(probs), objective=False)
    return solve_lp(inst, "min").status == OPTIMAL


def separating_distribution(
    target_ray: DualVector,
    others: Sequence[DualVector],
    n: int,
    support: OutcomeSupport | None = None,
) -> ObservedLaw | None:
    """Law with ``p.r_target > 0`` and ``p.r <= 0`` for every other ray.

    Variables are ``p`` (arm-normalized, nonnegative) and one slack per other
    ray; the objective maximizes ``p.r_target``.  ``None`` when no such law exists.
    """
    ell = target_ray.ell
    dim = 2 * n * ell
    if len(target_ray.values) != dim:
        raise DimensionMismatch(f"ray has {len(target_ray.values)} entries, expected {dim}")
    k = len(others)
    nvars = dim + k
    eq = []
    rhs = []
    for j, r in enumerate(others):
        row = [Fraction(x) for x in r.values] + [Fraction(0)] * k
        row[dim + j] = Fraction(1)
        eq.append(row)
        rhs.append(0)
    for z in range(ell):
        row = [Fraction(0)] * nvars
        for c in range(z * 2 * n, (z + 1) * 2 * n):
            row[c] = Fraction(1)
        eq.append(row)
        rhs.append(1)
    obj = [Fraction(x) for x in target_ray.values] + [Fraction(0)] * k
    res = solve_lp(LpInstance.build(obj, eq, rhs), "max")
    if res.status != OPTIMAL or res.value <= 0:
        return None
    support = support or OutcomeSupport.range(n)
    return observed_from_flat(support, ell, res.solution[:dim])
