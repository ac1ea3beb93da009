"""Dual vertices ``u(B)`` for a binary instrument and the sharp ATE bounds.

Every signature is the concatenation of a treatment-0 column pair and a
treatment-1 column pair, and the vertex entries of each column depend only on
its own bits and the family's ``alpha``.  Bound evaluation exploits this: per
sub-stream the contribution of every column option to ``v^T p`` is computed
once, so each vertex costs one addition.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator

from .errors import NotAVertex, UnsupportedInstrumentArity
from .expr import LinearExpr
from .lp_core import (
    DualVector,
    active_set,
    build_constraint_matrix,
    build_cost_vector,
    certify_vertex,
)
from .model import FullDataLaw, ObservedLaw, OutcomeSupport, conjugate, marginalize
from .signatures import (
    S1,
    S2,
    S3,
    Signature,
    _mixed_columns,
    assemble,
    chunk_columns,
    classify,
    enumerate_signatures,
    signature_chunks,
)


@dataclass(frozen=True)
class BoundResult:
    lower: Fraction
    upper: Fraction
    lower_witnesses: frozenset = field(default_factory=frozenset)
    upper_witnesses: frozenset = field(default_factory=frozenset)

    def as_tuple(self) -> tuple:
        return self.lower, self.upper


def alpha_for(family: str, t: int | None, support: OutcomeSupport):
    g = support.gammas
    if family == S1:
        return -g[0] - g[t]
    if family == S2:
        return -g[0] - g[-1]
    if family == S3:
        return -g[t] - g[-1]
    raise ValueError(f"unknown family {family!r}")


def _column_values(support: OutcomeSupport, alpha):
    """Entry of ``u`` for each of the four columns, indexed ``[col][i][bit]``.

    Columns are in flat order: ``(d=0,z=0)``, ``(d=1,z=0)``, ``(d=0,z=1)``, ``(d=1,z=1)``.
    """
    g = support.gammas
    lo, hi = g[0], g[-1]
    return (
        [(lo, -gi - alpha) for gi in g],
        [(-hi - alpha, gi) for gi in g],
        [(lo + alpha, -gi) for gi in g],
        [(-hi, gi + alpha) for gi in g],
    )


def _canonical_shift(arm0, support: OutcomeSupport):
    """Kernel shift making the smallest arm-0 entry equal ``gamma_0 - gamma_{n-1}``."""
    g = support.gammas
    return g[0] - g[-1] - min(arm0)


def vertex_from_signature(sig, support: OutcomeSupport, raw: bool = False) -> DualVector:
    """The dual vertex indexed by an admissible signature.

    ``raw=True`` returns the defining formula verbatim; by default the vertex is
    moved within its kernel class (arm 0 up by ``s``, arm 1 down by ``s``) so
    that its smallest arm-0 entry is ``gamma_0 - gamma_{n-1}``.  Both
    representatives give the same ``v^T p`` on every arm-normalized law.
    """
    n = support.n
    if not isinstance(sig, Signature) or sig.n != n:
        sig = classify(sig.bits if isinstance(sig, Signature) else sig, n)
    alpha = alpha_for(sig.family, sig.t, support)
    cols = _column_values(support, alpha)
    b = sig.bits
    vals = [cols[c][i][b[c * n + i]] for c in range(4) for i in range(n)]
    if not raw:
        s = _canonical_shift(vals[:2 * n], support)
        if s:
            vals = [x + s for x in vals[:2 * n]] + [x - s for x in vals[2 * n:]]
    return DualVector(
        n, 2, tuple(vals),
        family=f"vertex-{sig.family}",
        params={"signature": sig.bits, "t": sig.t},
    )


def _pair_values(pairs, cols, first: int, second: int):
    ca, cb = cols[first], cols[second]
    return [
        (tuple(ca[i][x] for i, x in enumerate(a)), tuple(cb[i][x] for i, x in enumerate(b)))
        for a, b in pairs
    ]


def _shifted(pair, s):
    if not s:
        return pair
    a, b = pair
    return tuple(x + s for x in a), tuple(x - s for x in b)


def enumerate_vertices(support: OutcomeSupport, raw: bool = False) -> Iterator[DualVector]:
    """``u(B)`` for every admissible signature, in signature order."""
    n = support.n
    mixed = _mixed_columns(n)
    target = support.gammas[0] - support.gammas[-1]
    for family, t in signature_chunks(n):
        d0, d1, d0_outer = chunk_columns(n, family, t, mixed)
        cols = _column_values(support, alpha_for(family, t, support))
        v0 = _pair_values(d0, cols, 0, 2)
        v1 = _pair_values(d1, cols, 1, 3)
        m0 = [min(a) for a, _ in v0]
        m1 = [min(a) for a, _ in v1]
        order = (
            ((a, b) for a in range(len(d0)) for b in range(len(d1))) if d0_outer
            else ((a, b) for b in range(len(d1)) for a in range(len(d0)))
        )
        tag = f"vertex-{family}"
        cache0: dict = {}
        cache1: dict = {}
        for a, b in order:
            p0, p1 = d0[a], d1[b]
            s = 0 if raw else target - min(m0[a], m1[b])
            # shifted column parts are reused across many vertices
            if (a, s) not in cache0:
                cache0[a, s] = _shifted(v0[a], s)
            if (b, s) not in cache1:
                cache1[b, s] = _shifted(v1[b], s)
            x00, x01 = cache0[a, s]
            x10, x11 = cache1[b, s]
            arm0 = x00 + x10
            arm1 = x01 + x11
            yield DualVector(
                n, 2, arm0 + arm1, tag,
                {"signature": p0[0] + p1[0] + p0[1] + p1[1], "t": t},
            )


# -- streaming bound evaluation -------------------------------------------

def _scale(support: OutcomeSupport, probs) -> int:
    den = 1
    for x in support.gammas:
        den = lcm(den, Fraction(x).denominator)
    for x in probs:
        den = lcm(den, Fraction(x).denominator)
    return den * den


def _int_table(support: OutcomeSupport, alpha, probs, scale: int):
    """``[col][i][bit] -> scale * u * p`` as ints."""
    n = support.n
    table = []
    for c, col in enumerate(_column_values(support, alpha)):
        rows = []
        for i, (v0, v1) in enumerate(col):
            p = probs[c * n + i]
            rows.append((int(v0 * p * scale), int(v1 * p * scale)))
        table.append(rows)
    return table


def _pair_scores(pairs, table, first: int, second: int) -> list[int]:
    """Score of each column pair; ``first``/``second`` are the column slots."""
    ta, tb = table[first], table[second]
    out = []
    for a, b in pairs:
        s = 0
        for i, bit in enumerate(a):
            s += ta[i][bit]
        for i, bit in enumerate(b):
            s += tb[i][bit]
        out.append(s)
    return out


def _chunk_max(args):
    """Max of ``v^T p`` over one sub-stream: ``(best, [(p0, p1), ...])``."""
    support, probs, scale, family, t, mixed = args
    n = support.n
    d0, d1, _ = chunk_columns(n, family, t, mixed)
    table = _int_table(support, alpha_for(family, t, support), probs, scale)
    # flat column slots: 0 -> (d=0,z=0), 1 -> (d=1,z=0), 2 -> (d=0,z=1), 3 -> (d=1,z=1)
    s0 = _pair_scores(d0, table, 0, 2)
    s1 = _pair_scores(d1, table, 1, 3)
    best0, best1 = max(s0), max(s1)
    arg0 = [k for k, s in enumerate(s0) if s == best0]
    arg1 = [k for k, s in enumerate(s1) if s == best1]
    return best0 + best1, [(d0[a], d1[b]) for a in arg0 for b in arg1]


def lower_bound(law: ObservedLaw, workers: int = 1) -> tuple[Fraction, frozenset]:
    """Sharp lower ATE bound and every signature attaining it."""
    if law.ell != 2:
        raise UnsupportedInstrumentArity(law.ell)
    support = law.support
    n = support.n
    scale = _scale(support, law.probs)
    mixed = _mixed_columns(n)
    jobs = [
        (support, law.probs, scale, family, t, mixed)
        for family, t in signature_chunks(n)
    ]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_max, jobs))
    else:
        results = [_chunk_max(job) for job in jobs]
    best = max(r[0] for r in results)
    witnesses = frozenset(
        assemble(p0, p1, family, t, n)
        for (score, pairs), (family, t) in zip(results, signature_chunks(n))
        if score == best
        for p0, p1 in pairs
    )
    return Fraction(best, scale), witnesses


def lower_bound_naive(law: ObservedLaw) -> tuple[Fraction, frozenset]:
    """Same as :func:`lower_bound` by evaluating every vertex in full."""
    if law.ell != 2:
        raise UnsupportedInstrumentArity(law.ell)
    best, wit = None, set()
    for sig in enumerate_signatures(law.n):
        val = vertex_from_signature(sig, law.support).dot(law.probs)
        if best is None or val > best:
            best, wit = val, {sig}
        elif val == best:
            wit.add(sig)
    return Fraction(best), frozenset(wit)


def ate_bounds(law: ObservedLaw, workers: int = 1) -> BoundResult:
    lo, lo_w = lower_bound(law, workers)
    neg_hi, hi_w = lower_bound(conjugate(law), workers)
    return BoundResult(lo, -neg_hi, lo_w, hi_w)


def witness_distribution(v: DualVector, support: OutcomeSupport) -> tuple[FullDataLaw, ObservedLaw]:
    """Full-data law uniform over the rows tight at ``v``, and its marginal."""
    matrix = build_constraint_matrix(support.n, v.ell)
    cost = build_cost_vector(support, v.ell)
    try:
        ok = certify_vertex(v, matrix, cost)
    except Exception as exc:  # infeasible points are not vertices either
        raise NotAVertex(str(exc)) from exc
    if not ok:
        raise NotAVertex("active rows do not have full rank")
    rows = active_set(v, matrix, cost)
    w = Fraction(1, len(rows))
    q = [Fraction(0)] * matrix.shape[0]
    for r in rows:
        q[r] = w
    full = FullDataLaw(support, v.ell, tuple(q))
    return full, marginalize(full)


def upper_coefficients(v: DualVector) -> list:
    """Coefficients of ``-v^T pbar`` written over ``p``: ``-v`` with ``d`` swapped."""
    n = v.n
    out = [0] * len(v.values)
    for z in range(v.ell):
        base = z * 2 * n
        for y in range(n):
            out[base + y] = -v.values[base + n + y]
            out[base + n + y] = -v.values[base + y]
    return out


def emit_bound_expressions(support: OutcomeSupport, side: str = "lower") -> Iterator[LinearExpr]:
    """One expression per vertex; the bound is their max (lower) or min (upper)."""
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    n = support.n
    for v in enumerate_vertices(support):
        coeffs = v.values if side == "lower" else upper_coefficients(v)
        yield LinearExpr.from_vector(n, 2, coeffs)
