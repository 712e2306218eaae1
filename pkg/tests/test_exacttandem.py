import random
from itertools import combinations

import pytest

from repairopt.exacttandem import (
    ExactRepairError,
    default_split,
    exact_repair,
    init_vandermonde,
)
from repairopt.gfalg import mat_rank


class TestInit:
    def test_default_points(self):
        code = init_vandermonde(4, 2, 5, seed=0)
        assert code.points == (1, 2, 3, 4)
        assert len(code.message) == 2

    def test_stored_symbol_is_polynomial_evaluation(self):
        code = init_vandermonde(4, 2, 5, message=(3, 2))
        assert [code.stored_symbol(t) for t in (1, 2, 3, 4)] == \
            [(3 + 2 * t) % 5 for t in (1, 2, 3, 4)]

    def test_generator_is_mds(self):
        code = init_vandermonde(6, 3, 7, seed=1)
        g = code.generator_matrix()
        for cols in combinations(range(6), 3):
            block = [[g[r][c] for c in cols] for r in range(3)]
            assert mat_rank(block, 7) == 3

    def test_rejects_bad_field(self):
        with pytest.raises(ExactRepairError):
            init_vandermonde(4, 2, 6)      # composite
        with pytest.raises(ExactRepairError):
            init_vandermonde(7, 2, 7)      # q must exceed n
        with pytest.raises(ExactRepairError):
            init_vandermonde(4, 5, 11)     # k > n

    def test_rejects_bad_points_and_message(self):
        with pytest.raises(ExactRepairError):
            init_vandermonde(4, 2, 5, points=(1, 1, 2, 3))
        with pytest.raises(ExactRepairError):
            init_vandermonde(4, 2, 5, points=(0, 1, 2, 3))
        with pytest.raises(ExactRepairError):
            init_vandermonde(4, 2, 5, message=(1,))


class TestRepair:
    def test_hand_checked_case(self):
        # nodes store m1 + m2 t over GF(5); rebuilding node 2 from nodes
        # 1 and 3 multiplies both by 3 and sums
        code = init_vandermonde(4, 2, 5, message=(1, 1))
        transcript = exact_repair(code, 2, 1, 1)
        assert transcript.coefficients == (3, 3)
        assert transcript.exact
        assert transcript.restored == code.stored_symbol(2)

    def test_hops_walk_both_chains(self):
        code = init_vandermonde(6, 3, 7, seed=3)
        transcript = exact_repair(code, 3, 2, 1)
        assert transcript.hop_count == 3
        assert [(a, b) for a, b, _ in transcript.hops] == \
            [(1, 2), (2, 3), (4, 3)]

    def test_one_sided_repairs(self):
        code = init_vandermonde(6, 3, 7, seed=4)
        assert exact_repair(code, 1, 0, 3).exact
        assert exact_repair(code, 6, 3, 0).exact

    def test_split_validation(self):
        code = init_vandermonde(6, 3, 7, seed=5)
        with pytest.raises(ExactRepairError):
            exact_repair(code, 2, 2, 1)    # only one backward helper exists
        with pytest.raises(ExactRepairError):
            exact_repair(code, 5, 0, 3)    # forward side too short
        with pytest.raises(ExactRepairError):
            exact_repair(code, 3, 1, 1)    # k1 + k2 != k
        with pytest.raises(ExactRepairError):
            exact_repair(code, 0, 1, 2)

    def test_random_trials(self):
        rng = random.Random(123)
        for n, k, q in ((4, 2, 5), (6, 3, 7), (8, 4, 11)):
            for _ in range(100):
                message = tuple(rng.randrange(q) for _ in range(k))
                code = init_vandermonde(n, k, q, message=message)
                t = rng.randrange(1, n + 1)
                k1 = rng.randint(max(0, k - (n - t)), min(k, t - 1))
                transcript = exact_repair(code, t, k1, k - k1)
                assert transcript.exact
                assert transcript.hop_count == k


class TestDefaultSplit:
    def test_balanced_interior(self):
        assert default_split(4, 8, 4) == (2, 2)

    def test_clipped_at_ends(self):
        assert default_split(1, 6, 3) == (0, 3)
        assert default_split(6, 6, 3) == (3, 0)

    def test_too_short(self):
        with pytest.raises(ExactRepairError):
            default_split(2, 3, 3)
