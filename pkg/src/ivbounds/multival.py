"""Valid bound terms and necessary IV inequalities for instruments with ``ell > 2`` levels."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterator

from .lp_core import DualVector
from .model import ObservedLaw, OutcomeSupport, col_index, conjugate
from .rays import AxiomFailure, FalsificationReport, IvInequality, falsification_test, report_from
from .expr import LinearExpr

MULTIVAL_FAMILY = "multival"


def count_multival_vertices(n: int, ell: int) -> int:
    return ell * ((ell - 1) ** (n - 1) - (ell - 1))


def count_multival_inequalities(n: int, ell: int) -> int:
    return (n - 1) * ell * ((ell - 1) ** n - (ell - 1))


def _non_constant(length: int, symbols: list[int]) -> Iterator[tuple[int, ...]]:
    for seq in product(symbols, repeat=length):
        if len(set(seq)) > 1:
            yield seq


def multival_vertex(support: OutcomeSupport, ell: int, a: int, s) -> DualVector:
    """``w(a, s)``; only ``s_0 .. s_{n-2}`` matter since ``w_{(n-1)0, s_{n-1}} = 0``."""
    g = support.gammas
    n = support.n
    top = g[-1]
    vals = [0] * (2 * n * ell)
    for y in range(n):
        vals[col_index(y, 1, a, n)] = g[y] - top
        if y < len(s):
            vals[col_index(y, 0, s[y], n)] = top - g[y]
        vals[col_index(y, 0, a, n)] = g[0] - top
    return DualVector(n, ell, tuple(vals), family="multival-vertex", params={"a": a, "s": tuple(s)})


def enumerate_multival_vertices(support: OutcomeSupport, ell: int) -> Iterator[DualVector]:
    """One ``w(a, s)`` per instrument level ``a`` and non-constant prefix ``s``."""
    n = support.n
    for a in range(ell):
        others = [j for j in range(ell) if j != a]
        for prefix in _non_constant(n - 1, others):
            yield multival_vertex(support, ell, a, prefix)


def multival_lower_bound(law: ObservedLaw):
    """``max_w w.p`` over the family; ``-math.inf`` when the family is empty."""
    best = -math.inf
    for w in enumerate_multival_vertices(law.support, law.ell):
        val = Fraction(w.dot(law.probs))
        if val > best:
            best = val
    return best


def multival_upper_bound(law: ObservedLaw):
    """Valid upper bound via the conjugate law; ``math.inf`` when the family is empty."""
    return -multival_lower_bound(conjugate(law))


def multival_ray(n: int, ell: int, y_prime: int, j_prime: int, j_seq) -> DualVector:
    vals = [0] * (2 * n * ell)
    vals[col_index(y_prime, 1, j_prime, n)] = 1
    for y, j in enumerate(j_seq):
        vals[col_index(y, 0, j, n)] = -1
    for j in set(j_seq):
        vals[col_index(y_prime, 1, j, n)] = -1
    return DualVector(
        n, ell, tuple(vals), family="multival-ray",
        params={"y_prime": y_prime, "j_prime": j_prime, "j_seq": tuple(j_seq)},
    )


def enumerate_multival_rays(n: int, ell: int) -> Iterator[DualVector]:
    for y_prime in range(n - 1):
        for j_prime in range(ell):
            others = [j for j in range(ell) if j != j_prime]
            for seq in _non_constant(n, others):
                yield multival_ray(n, ell, y_prime, j_prime, seq)


def enumerate_multival_inequalities(n: int, ell: int) -> Iterator[IvInequality]:
    """``p_{y'1,j'} <= sum_{j in set(j_seq)} p_{y'1,j} + sum_y p_{y0,j_y}`` as ``expr <= 0``."""
    for ray in enumerate_multival_rays(n, ell):
        T = tuple(sorted(set(ray.params["j_seq"])))
        yield IvInequality(LinearExpr.from_vector(n, ell, ray.values), MULTIVAL_FAMILY, T, ray)


def _basic_axioms(law: ObservedLaw) -> list[AxiomFailure]:
    n, ell = law.n, law.ell
    out = []
    masses = [sum(law.arm(z)) for z in range(ell)]
    for z in range(1, ell):
        if masses[z] != masses[0]:
            out.append(AxiomFailure("I", f"arm masses differ: z=0 has {masses[0]}, z={z} has {masses[z]}",
                                    abs(masses[z] - masses[0])))
    for k, x in enumerate(law.probs):
        if x < 0:
            z, rest = divmod(k, 2 * n)
            d, y = divmod(rest, n)
            out.append(AxiomFailure("II", f"p_{{{y}{d},{z}}} < 0", -x))
    return out


def multival_test(law: ObservedLaw) -> FalsificationReport:
    """Necessary-only test for ``ell > 2``; binary instruments get the complete test."""
    if law.ell == 2:
        return falsification_test(law)
    violations = []
    for ineq in enumerate_multival_inequalities(law.n, law.ell):
        slack = ineq.slack(law)
        if slack > 0:
            violations.append((ineq, slack))
    return report_from(violations, _basic_axioms(law), complete=False)
