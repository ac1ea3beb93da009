from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import WORKED_SIGNATURES, WORKED_VERTICES
from ivbounds.errors import NotAdmissible, NotAVertex, UnsupportedInstrumentArity
from ivbounds.lp_core import (
    DualVector,
    build_constraint_matrix,
    build_cost_vector,
    certify_vertex,
    in_kernel,
)
from ivbounds.model import OutcomeSupport, ate_of, marginalize, random_full_data_law
from ivbounds.oracle import oracle_ate_bounds
from ivbounds.signatures import classify, enumerate_signatures
from ivbounds.vertices import (
    alpha_for,
    ate_bounds,
    emit_bound_expressions,
    enumerate_vertices,
    lower_bound,
    lower_bound_naive,
    vertex_from_signature,
    witness_distribution,
)


def test_vertex_examples(binary):
    assert vertex_from_signature(classify((1, 1, 0, 1, 1, 1, 1, 0)), binary).values == (0, -1, -1, 1, 0, -1, 0, -1)
    assert vertex_from_signature(classify((0, 1, 1, 0, 1, 1, 1, 1)), binary).values == (-1, -1, -1, -1, 1, 0, 0, 1)


def test_n2_vertices_in_order(binary):
    assert [v.values for v in enumerate_vertices(binary)] == WORKED_VERTICES


def test_raw_and_canonical_are_kernel_shifts(binary):
    m = build_constraint_matrix(2, 2)
    for bits in WORKED_SIGNATURES:
        raw = vertex_from_signature(bits, binary, raw=True).values
        canon = vertex_from_signature(bits, binary).values
        assert in_kernel(m, [a - b for a, b in zip(raw, canon)])


def test_not_admissible_propagates(binary):
    with pytest.raises(NotAdmissible):
        vertex_from_signature((1,) * 8, binary)


def test_s3_alpha_uses_largest_all_ones_row():
    support = OutcomeSupport((0, 1, 3))
    sig = next(s for s in enumerate_signatures(3) if s.family == "S3" and s.t == 2)
    assert alpha_for(sig.family, sig.t, support) == -3 - 3


@pytest.mark.parametrize("gammas", [(0, 1, 2), ("-1", "1/3", "5/2"), (0, 2, 3, 7)])
def test_every_vertex_certifies(gammas):
    support = OutcomeSupport(gammas)
    n = support.n
    m = build_constraint_matrix(n, 2)
    c = build_cost_vector(support, 2)
    for raw in (False, True):
        assert all(certify_vertex(v, m, c) for v in enumerate_vertices(support, raw=raw))


def test_fast_stream_matches_formula():
    support = OutcomeSupport((0, "1/3", 2, 5))
    fast = [v.values for v in enumerate_vertices(support)]
    slow = [vertex_from_signature(s, support).values for s in enumerate_signatures(4)]
    assert fast == slow


@pytest.mark.parametrize("n", [3, 4])
def test_vertices_pairwise_m_distinct(n):
    m = build_constraint_matrix(n, 2)
    vs = [v.values for v in enumerate_vertices(OutcomeSupport.range(n))]
    # two points are M-equivalent iff M v1 = M v2
    images = {tuple(m.apply(v)) for v in vs}
    assert len(images) == len(vs)


def test_hand_bounds(degenerate_law, uniform_law):
    assert ate_bounds(degenerate_law).as_tuple() == (0, 1)
    assert ate_bounds(uniform_law).as_tuple() == (Fraction(-1, 2), Fraction(1, 2))
    assert oracle_ate_bounds(degenerate_law) == (0, 1)
    assert oracle_ate_bounds(uniform_law) == (Fraction(-1, 2), Fraction(1, 2))


def test_lower_bound_reports_all_ties(degenerate_law):
    value, wit = lower_bound(degenerate_law)
    assert value == 0
    # every worked-example vertex evaluates to 0 at this law
    assert {s.bits for s in wit} == set(WORKED_SIGNATURES)


def test_arity_error():
    law = marginalize(random_full_data_law(2, 3, 0))
    with pytest.raises(UnsupportedInstrumentArity):
        lower_bound(law)
    with pytest.raises(UnsupportedInstrumentArity):
        ate_bounds(law)


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_bounds_contain_true_ate(n, seed):
    q = random_full_data_law(n, 2, seed)
    res = ate_bounds(marginalize(q))
    assert res.lower <= ate_of(q) <= res.upper
    g = q.support.gammas
    assert g[0] - g[-1] <= res.lower and res.upper <= g[-1] - g[0]


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_streaming_matches_full_evaluation(n, seed):
    law = marginalize(random_full_data_law(n, 2, seed))
    assert lower_bound(law) == lower_bound_naive(law)


@given(st.integers(0, 10**6), st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20),
       st.fractions(min_value=-5, max_value=5, max_denominator=20))
def test_affine_support_scales_bounds(seed, a, b):
    base = OutcomeSupport((0, 1, 3))
    q = random_full_data_law(3, 2, seed, support=base)
    q2 = random_full_data_law(3, 2, seed, support=base.affine(a, b))
    r1, r2 = ate_bounds(marginalize(q)), ate_bounds(marginalize(q2))
    assert (r2.lower, r2.upper) == (a * r1.lower, a * r1.upper)


def test_parallel_matches_serial():
    law = marginalize(random_full_data_law(4, 2, 11))
    assert ate_bounds(law, workers=2) == ate_bounds(law)


@pytest.mark.parametrize("n", [2, 3])
def test_witnesses_unique(n):
    support = OutcomeSupport.range(n)
    for v in enumerate_vertices(support):
        q, law = witness_distribution(v, support)
        assert sum(q.q) == 1 and all(x >= 0 for x in q.q)
        _, wit = lower_bound(law)
        assert {s.bits for s in wit} == {v.params["signature"]}


def test_witness_rejects_non_vertex(binary):
    with pytest.raises(NotAVertex):
        witness_distribution(DualVector(2, 2, (-1, -1, -1, -1, 0, 0, 0, 0)), binary)
    with pytest.raises(NotAVertex):
        witness_distribution(DualVector(2, 2, (5,) * 8), binary)


def test_emitted_expressions(binary):
    lower = [e.text() for e in emit_bound_expressions(binary, "lower")]
    upper = list(emit_bound_expressions(binary, "upper"))
    assert len(lower) == len(upper) == 8
    assert "-p_{10,0} - p_{01,0} + p_{11,0} - p_{10,1} - p_{11,1}" in lower
    target = {(1, 1, 0): 1, (0, 0, 0): 1, (1, 0, 0): -1, (1, 1, 1): 1, (1, 0, 1): 1}
    assert any(e.coeffs == target for e in upper)


@given(st.integers(2, 3), st.integers(0, 10**6))
def test_emitted_expressions_reproduce_bounds(n, seed):
    support = OutcomeSupport.range(n)
    law = marginalize(random_full_data_law(n, 2, seed))
    lo = max(e.evaluate(law) for e in emit_bound_expressions(support, "lower"))
    hi = min(e.evaluate(law) for e in emit_bound_expressions(support, "upper"))
    assert (lo, hi) == ate_bounds(law).as_tuple()
