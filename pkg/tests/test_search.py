from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import joints
from processors.dist_core import make_joint, mutual_information, p_max
from processors.encoders import induced_joint_xs
from processors import search
from processors.errors import BudgetExceeded, VerificationViolation
from processors.instance_io import gen_random
from processors.search import (
    assert_case_ordering,
    best_mi_partition,
    case3_value,
    exact_case1,
    exact_case2,
    exhaustive_raw_case2,
    local_search_case2,
    ordering_check,
    partition_count,
    partitions_up_to_k,
    random_partition,
    restricted_growth_strings,
    stirling2,
)


class TestPartitions:
    @pytest.mark.parametrize("n,k,expected", [
        (0, 0, 1), (3, 0, 0), (4, 1, 1), (4, 2, 7), (4, 3, 6), (5, 2, 15), (5, 5, 1),
    ])
    def test_stirling2(self, n, k, expected):
        assert stirling2(n, k) == expected

    def test_partition_count_sums_stirling(self):
        assert partition_count(4, 3) == 14
        assert partition_count(4, 4) == 15  # Bell number B4

    def test_rgs_lexicographic(self):
        assert list(restricted_growth_strings(3, 2)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]

    def test_one_representative_per_partition(self):
        encoders = list(partitions_up_to_k(4, 3))
        assert len(encoders) == 14
        assert len({phi.map for phi in encoders}) == 14
        assert all(phi.canonical().map == phi.map for phi in encoders)


class TestExactSearch:
    def test_worked_case2(self, worked):
        result = exact_case2(worked, 2)
        assert result.best_value == pytest.approx(0.8)
        assert result.method == 'exact'
        assert result.best_phi_x is None
        assert result.candidates_evaluated == 2

    def test_single_block_is_blind(self, worked):
        assert exact_case2(worked, 1).best_value == pytest.approx(0.5)

    def test_worked_case1(self, worked):
        result = exact_case1(worked, 2, 2)
        assert result.best_value == pytest.approx(1.0)
        assert result.best_phi_x.map == (0, 1)

    def test_worked_ordering(self, worked):
        optima = ordering_check(worked, 2, 2)
        assert tuple(optima) == pytest.approx((1.0, 0.8, 0.5))

    def test_budget_exceeded(self, worked):
        with pytest.raises(BudgetExceeded) as excinfo:
            exact_case2(worked, 2, budget=1)
        assert excinfo.value.candidates == 2

    def test_ordering_violation_raises(self, worked):
        with pytest.raises(VerificationViolation):
            assert_case_ordering(worked, 0.7, 0.8)

    def test_case3(self, worked):
        assert case3_value(worked) == pytest.approx(p_max(worked))

    def test_parallel_matches_serial(self):
        j = make_joint([
            [0.05, 0.10, 0.02, 0.08],
            [0.15, 0.01, 0.09, 0.05],
            [0.04, 0.12, 0.20, 0.09],
        ])
        serial = exact_case2(j, 3, workers=1)
        parallel = exact_case2(j, 3, workers=2)
        assert parallel.best_value == serial.best_value
        assert parallel.best_phi_y == serial.best_phi_y
        assert parallel.candidates_evaluated == serial.candidates_evaluated

    def test_case1_parallel_uses_one_pool(self, monkeypatch):
        opened = []
        real_pool = search.Pool

        def counting_pool(*args, **kwargs):
            opened.append(kwargs.get('processes'))
            return real_pool(*args, **kwargs)

        monkeypatch.setattr(search, 'Pool', counting_pool)
        j = gen_random(4, 6, 1.0, seed=3).joint()
        parallel = exact_case1(j, 2, 3, workers=2)
        serial = exact_case1(j, 2, 3, workers=1)
        assert opened == [2]
        assert parallel.best_value == serial.best_value
        assert parallel.best_phi_x == serial.best_phi_x
        assert parallel.best_phi_y == serial.best_phi_y
        assert parallel.candidates_evaluated == serial.candidates_evaluated == 8 * 122

    def test_best_mi_partition(self, worked):
        phi, bits = best_mi_partition(worked, 2)
        assert phi.map == (0, 1)
        assert bits == pytest.approx(mutual_information(worked).bits)


class TestLocalSearch:
    def test_deterministic_given_seed(self):
        j = make_joint([[0.1, 0.2, 0.05, 0.15], [0.2, 0.05, 0.15, 0.1]])
        a = local_search_case2(j, 2, restarts=5, seed=11)
        b = local_search_case2(j, 2, restarts=5, seed=11)
        assert a == b
        assert a.method == 'local-search'
        assert a.restarts == 5

    def test_zero_restarts_is_single_start(self, worked):
        assert local_search_case2(worked, 2, restarts=0).restarts == 1

    def test_reaches_exact_on_small_instance(self, worked):
        assert local_search_case2(worked, 2, restarts=5).best_value == pytest.approx(0.8)

    def test_matches_exact_on_seeded_family(self):
        matches = 0
        for seed in range(100):
            j = gen_random(4, 6, 1.0, seed).joint()
            exact = exact_case2(j, 3).best_value
            heuristic = local_search_case2(j, 3, restarts=20, seed=seed).best_value
            assert heuristic <= exact + 1e-12
            matches += abs(heuristic - exact) <= 1e-12
        assert matches >= 90


class TestRandomPartition:
    def test_valid_restricted_growth_strings(self):
        rng = np.random.default_rng(0)
        valid = set(restricted_growth_strings(5, 3))
        assert all(random_partition(rng, 5, 3) in valid for _ in range(200))

    def test_single_item(self):
        assert random_partition(np.random.default_rng(1), 1, 4) == (0,)

    def test_uniform_over_partitions(self):
        rng = np.random.default_rng(7)
        draws = 14_000
        counts = Counter(random_partition(rng, 4, 3) for _ in range(draws))
        assert set(counts) == set(restricted_growth_strings(4, 3))
        expected = draws / partition_count(4, 3)
        assert all(abs(c - expected) < 0.2 * expected for c in counts.values())


@settings(max_examples=40, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_partition_search_equals_raw_function_search(j):
    for l_size in (1, 2, 3):
        assert exact_case2(j, l_size).best_value == pytest.approx(exhaustive_raw_case2(j, l_size), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_case_ordering_holds(j):
    p1, p2, p3 = ordering_check(j, 2, min(3, j.y_size))
    assert p1 >= p2 - 1e-12
    assert p2 >= p3 - 1e-12
    assert abs(p3 - p_max(j)) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(joints(x_max=3, y_max=4))
def test_local_search_never_beats_exact(j):
    exact = exact_case2(j, 2).best_value
    heuristic = local_search_case2(j, 2, restarts=3, seed=0)
    assert heuristic.best_value <= exact + 1e-12
    xs = induced_joint_xs(j, heuristic.best_phi_y)
    assert xs.p.max(axis=0).sum() == pytest.approx(heuristic.best_value, abs=1e-12)
