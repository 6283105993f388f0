"""Acceptance gate: nine criteria, one test and one PASS/FAIL line each.

Run `pytest tests/test_acceptance.py -v -s` to see the lines. Criteria 1-3
solve concrete instance families (uniform, golden ratio, random versus the
grid oracle); 4-6 probe the sphere map and the bisection residual; 7-9
cover order dependence, fairness reporting, and sweep scale. Tolerances
and runtime budgets are asserted, not just printed.
"""

import math
import random
import time
from contextlib import contextmanager

import pytest

from equicut.analysis import fairness_report, valuation_matrix
from equicut.measure import PIECEWISE_CONSTANT, piecewise_constant, piecewise_linear, uniform
from equicut.oracle import grid_search_equitable
from equicut.solver import (
    Instance,
    SolveStatus,
    chain_cuts,
    solve_equitable,
    sweep_permutations,
)
from equicut.topology import cuts_to_sphere, inf_norm, residual_map
from helpers import random_instance, random_sphere_point

GOLDEN_CUT = (math.sqrt(5.0) - 1.0) / 2.0


@contextmanager
def criterion(number, summary):
    try:
        yield
    except BaseException:
        print(f"\nFAIL criterion {number}: {summary}")
        raise
    print(f"\nPASS criterion {number}: {summary}")


@pytest.fixture(scope="module")
def bank():
    """Solutions shared by criteria 1-3, 5, and 8, with timings."""
    timings = {}

    u = uniform()
    rng = random.Random(20260816)
    uniform_runs = []
    start = time.perf_counter()
    for n in range(1, 9):
        for _ in range(5):
            inst = Instance((u,) * n, tuple(rng.sample(range(n), n)))
            uniform_runs.append((n, inst, solve_equitable(inst, tol=1e-13)))
    timings["uniform"] = time.perf_counter() - start

    golden_inst = Instance((piecewise_linear((0.0, 1.0), (0.0, 2.0)), u))
    start = time.perf_counter()
    golden_sol = solve_equitable(golden_inst)
    timings["golden"] = time.perf_counter() - start

    random_runs = []
    start = time.perf_counter()
    for i in range(100):
        rng = random.Random(7000 + i)
        inst = random_instance(rng, n=rng.randint(2, 3), kind=PIECEWISE_CONSTANT)
        sol = solve_equitable(inst)
        _, oracle_gap = grid_search_equitable(inst, 1e-3)
        random_runs.append((inst, sol, oracle_gap))
    timings["random"] = time.perf_counter() - start

    entries = [(inst, 1e-13, sol) for _, inst, sol in uniform_runs]
    entries.append((golden_inst, 1e-9, golden_sol))
    entries.extend((inst, 1e-9, sol) for inst, sol, _ in random_runs)
    return {
        "uniform": uniform_runs,
        "golden": (golden_inst, golden_sol),
        "random": random_runs,
        "entries": entries,
        "timings": timings,
    }


def test_criterion_1_uniform_symmetry(bank):
    with criterion(1, "uniform players cut at i/n for n up to 8, any order"):
        for n, _, sol in bank["uniform"]:
            for k, cut in enumerate(sol.cuts):
                assert abs(cut - (k + 1) / n) <= 1e-12
            assert abs(sol.value - 1.0 / n) <= 1e-12
        assert bank["timings"]["uniform"] < 1.0


def test_criterion_2_golden_ratio(bank):
    with criterion(2, "ramp vs uniform splits at the golden ratio"):
        _, sol = bank["golden"]
        assert abs(sol.cuts[0] - GOLDEN_CUT) <= 1e-9
        assert abs(sol.value - (1.0 - GOLDEN_CUT)) <= 1e-9
        assert bank["timings"]["golden"] < 0.01


def test_criterion_3_oracle_equivalence(bank):
    with criterion(3, "solver matches the grid oracle on 100 random instances"):
        converged = 0
        for inst, sol, oracle_gap in bank["random"]:
            max_height = max(d.max_height for d in inst.densities)
            assert sol.gap <= oracle_gap + 2e-3 * max_height
            if sol.status in (SolveStatus.CONVERGED, SolveStatus.REFINED_CONVERGED):
                converged += 1
        assert converged >= 95
        assert bank["timings"]["random"] < 60.0


def test_criterion_4_antipodality():
    with criterion(4, "residual map is exactly odd on 1000 random pairs"):
        start = time.perf_counter()
        for i in range(1000):
            rng = random.Random(i)
            inst = random_instance(rng, n=rng.randint(2, 5), shuffle_sigma=True)
            e = random_sphere_point(rng, inst.n)
            plus = residual_map(inst, e)
            minus = residual_map(inst, tuple(-x for x in e))
            assert all(abs(a + b) <= 1e-12 for a, b in zip(plus, minus))
        assert time.perf_counter() - start < 5.0


def test_criterion_5_zero_certificate(bank):
    with criterion(5, "residual norm at every solution is within 2*gap + 1e-12"):
        for inst, _, sol in bank["entries"]:
            norm = inf_norm(residual_map(inst, cuts_to_sphere(sol.cuts)))
            assert norm <= 2.0 * sol.gap + 1e-12


def test_criterion_6_chain_monotonicity():
    with criterion(6, "chain residual is nonincreasing with a sign change"):
        for i in range(50):
            rng = random.Random(4000 + i)
            inst = random_instance(rng, shuffle_sigma=True)
            previous = math.inf
            for k in range(1000):
                _, r = chain_cuts(inst, k / 999.0)
                assert r <= previous + 1e-12
                if k == 0:
                    assert r >= 0.0
                previous = r
            assert previous <= 0.0


def test_criterion_7_order_dependence():
    with criterion(7, "disjoint supports give v=1 or v=0 depending on order"):
        left = piecewise_constant((0.0, 0.5, 1.0), (2.0, 0.0))
        right = piecewise_constant((0.0, 0.5, 1.0), (0.0, 2.0))
        rows = dict(
            (sigma, sol) for sigma, sol in sweep_permutations((left, right), 1e-13)
        )
        assert abs(rows[(0, 1)].value - 1.0) <= 1e-12
        assert abs(rows[(1, 0)].value - 0.0) <= 1e-12


def test_criterion_8_fairness_consistency(bank):
    with criterion(8, "converged solutions report equitable gaps within tol"):
        checked = 0
        for inst, tol, sol in bank["entries"]:
            if sol.status is SolveStatus.BEST_EFFORT:
                continue
            matrix = valuation_matrix(inst.densities, sol.cuts, inst.sigma)
            report = fairness_report(matrix, inst.sigma, tol)
            assert report.equitable_gap <= tol
            assert all(abs(row.sum() - 1.0) <= 1e-10 for row in matrix)
            checked += 1
        assert checked >= 95


def test_criterion_9_sweep_scale():
    with criterion(9, "n=5 sweep returns 120 distinct well-formed rows in time"):
        rng = random.Random(555)
        inst = random_instance(rng, n=5)
        start = time.perf_counter()
        rows = sweep_permutations(inst.densities, 1e-9)
        elapsed = time.perf_counter() - start
        assert len(rows) == 120
        assert len({sigma for sigma, _ in rows}) == 120
        for sigma, sol in rows:
            assert sorted(sigma) == list(range(5))
            assert len(sol.cuts) == 4
            assert all(0.0 <= c <= 1.0 for c in sol.cuts)
            assert all(a <= b for a, b in zip(sol.cuts, sol.cuts[1:]))
            assert 0.0 <= sol.value <= 1.0
            assert sol.gap >= 0.0
            assert sol.status in tuple(SolveStatus)
            assert sol.residual_norm >= 0.0
            assert sol.iterations >= 0
        assert elapsed < 1.0
