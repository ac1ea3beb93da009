"""Acceptance criteria; the terminal summary prints one PASS/FAIL line per criterion."""

import time
from fractions import Fraction

import pytest

from conftest import WORKED_VERTICES, PEARL_INEQUALITIES
from ivbounds.bench import per_term_ratio, run_bench
from ivbounds.lp_core import (
    build_constraint_matrix,
    build_cost_vector,
    certify_extreme_ray,
    certify_vertex,
    matrix_rank,
)
from ivbounds.model import OutcomeSupport, corrupt, marginalize, random_full_data_law
from ivbounds.multival import (
    count_multival_inequalities,
    count_multival_vertices,
    enumerate_multival_inequalities,
    enumerate_multival_rays,
    enumerate_multival_vertices,
    multival_lower_bound,
)
from ivbounds.oracle import oracle_ate_bounds, oracle_feasible, separating_distribution
from ivbounds.rays import enumerate_rays, falsification_test, sharp_inequalities
from ivbounds.signatures import count_signatures
from ivbounds.vertices import (
    ate_bounds,
    emit_bound_expressions,
    enumerate_vertices,
    lower_bound,
    witness_distribution,
)

VERTEX_COUNTS = [8, 52, 260, 1156, 4868, 19972, 80900, 325636]
INEQUALITY_COUNTS = [4, 12, 28, 60, 124, 252, 508, 1020]


@pytest.mark.acceptance(1, "vertex and inequality counts for n = 2..9 (exact, < 10 s)")
def test_counting_identities():
    t0 = time.perf_counter()
    vertices, inequalities = [], []
    for n in range(2, 10):
        vertices.append(sum(1 for _ in enumerate_vertices(OutcomeSupport.range(n))))
        inequalities.append(sum(1 for _ in sharp_inequalities(n)))
    elapsed = time.perf_counter() - t0
    assert vertices == VERTEX_COUNTS
    assert vertices == [count_signatures(n) for n in range(2, 10)]
    assert vertices == [5 * 4 ** (n - 1) - 2 ** (n + 2) + 4 for n in range(2, 10)]
    assert inequalities == INEQUALITY_COUNTS == [2 ** (n + 1) - 4 for n in range(2, 10)]
    assert elapsed < 10, f"enumeration took {elapsed:.2f} s"


@pytest.mark.acceptance(2, "golden fixtures for n = 2, gamma = (0, 1)")
def test_golden_fixtures():
    support = OutcomeSupport.range(2)
    assert {v.values for v in enumerate_vertices(support)} == set(WORKED_VERTICES)
    assert {i.text(reduced=True) for i in sharp_inequalities(2)} == PEARL_INEQUALITIES
    lower = {e.text() for e in emit_bound_expressions(support, "lower")}
    assert "-p_{10,0} - p_{01,0} + p_{11,0} - p_{10,1} - p_{11,1}" in lower


@pytest.mark.acceptance(3, "ate_bounds equals the LP oracle on 100 laws per n in {2,3,4}")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_oracle_bound_equivalence(n):
    for seed in range(100):
        law = marginalize(random_full_data_law(n, 2, 1000 * n + seed))
        assert ate_bounds(law).as_tuple() == oracle_ate_bounds(law), (n, seed)


@pytest.mark.acceptance(4, "falsification verdict equals oracle feasibility on 200 vectors per n in {2,3}")
@pytest.mark.parametrize("n", [2, 3])
def test_oracle_falsification_equivalence(n):
    magnitudes = [Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)]
    falsified = 0
    for seed in range(200):
        law = marginalize(random_full_data_law(n, 2, 5000 * n + seed))
        if seed % 2:
            law = corrupt(law, magnitudes[(seed // 2) % 3], seed)
        verdict = falsification_test(law).verdict == "compatible"
        assert verdict == oracle_feasible(law.probs, n, 2), (n, seed)
        falsified += not verdict
    # the corrupted half must exercise both branches
    assert 0 < falsified < 100


@pytest.mark.acceptance(5, "certification of vertices (n <= 5), rays (n <= 4), rank(M) (n <= 8)")
def test_certification_suite():
    for n in range(2, 6):
        support = OutcomeSupport.range(n)
        m = build_constraint_matrix(n, 2)
        c = build_cost_vector(support, 2)
        assert all(certify_vertex(v, m, c) for v in enumerate_vertices(support)), n
    for n in range(2, 5):
        m = build_constraint_matrix(n, 2)
        assert all(certify_extreme_ray(r, m) for r in enumerate_rays(n)), n
    assert [matrix_rank(n, 2) for n in range(2, 9)] == [4 * n - 1 for n in range(2, 9)]


@pytest.mark.acceptance(6, "sharpness witnesses (n = 2, 3) and necessity separators (n = 2, 3)")
@pytest.mark.parametrize("n", [2, 3])
def test_sharpness_and_necessity(n):
    support = OutcomeSupport.range(n)
    for v in enumerate_vertices(support):
        _, law = witness_distribution(v, support)
        _, wit = lower_bound(law)
        assert {s.bits for s in wit} == {v.params["signature"]}
    ineqs = list(sharp_inequalities(n))
    for target in ineqs:
        law = separating_distribution(target.ray, [i.ray for i in ineqs if i is not target], n)
        assert law is not None, target
        assert [x[0] for x in falsification_test(law).violations] == [target]


@pytest.mark.acceptance(7, "multi-valued families: counts, certification, validity against the oracle")
def test_multivalued_families():
    for n in (2, 3, 4):
        for ell in (2, 3, 4):
            support = OutcomeSupport.range(n)
            assert sum(1 for _ in enumerate_multival_vertices(support, ell)) == \
                ell * ((ell - 1) ** (n - 1) - (ell - 1)) == count_multival_vertices(n, ell)
            assert sum(1 for _ in enumerate_multival_inequalities(n, ell)) == \
                (n - 1) * ell * ((ell - 1) ** n - (ell - 1)) == count_multival_inequalities(n, ell)
    for n, ell in [(3, 3), (2, 3), (3, 4)]:
        support = OutcomeSupport.range(n)
        m = build_constraint_matrix(n, ell)
        c = build_cost_vector(support, ell)
        assert all(certify_vertex(w, m, c) for w in enumerate_multival_vertices(support, ell))
        assert all(certify_extreme_ray(r, m) for r in enumerate_multival_rays(n, ell))
    for seed in range(50):
        law = marginalize(random_full_data_law(3, 3, 9000 + seed))
        lo, _ = oracle_ate_bounds(law)
        assert multival_lower_bound(law) <= lo


@pytest.mark.acceptance(8, "bench n = 2..9 under 10 s with time per term within 8x for n = 4..9")
def test_output_sensitivity():
    t0 = time.perf_counter()
    records = run_bench(2, 9, repetitions=1)
    elapsed = time.perf_counter() - t0
    terms = {(r.n, r.mode): r.terms for r in records}
    assert [terms[n, "vertices"] for n in range(2, 10)] == VERTEX_COUNTS
    assert [terms[n, "inequalities"] for n in range(2, 10)] == INEQUALITY_COUNTS
    assert elapsed < 10, f"bench took {elapsed:.2f} s"
    for mode in ("vertices", "inequalities"):
        assert per_term_ratio(records, mode, 4, 9) <= 8, mode


@pytest.mark.acceptance(9, "hand-derived bounds: degenerate [0, 1], uniform [-1/2, 1/2]")
def test_hand_derived(degenerate_law, uniform_law):
    assert ate_bounds(degenerate_law).as_tuple() == (0, 1)
    assert ate_bounds(uniform_law).as_tuple() == (Fraction(-1, 2), Fraction(1, 2))
