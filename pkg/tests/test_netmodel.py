import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from repairopt.netmodel import (
    CostMatrix,
    NetworkSpec,
    TopologyError,
    baseline_cost,
    build_topology,
    format_rational,
    parse_rational,
    respec_failure,
    shortest_path_cost,
    spec_from_json,
    spec_to_json,
)
from oracles import all_paths_min_cost


class TestRationals:
    def test_parse_basic(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational(5) == Fraction(5)
        assert parse_rational("inf") is None
        assert parse_rational(None) is None

    def test_parse_rejects_garbage(self):
        with pytest.raises(TopologyError):
            parse_rational("three")
        with pytest.raises(TopologyError):
            parse_rational("1/0")

    @given(st.fractions())
    def test_roundtrip(self, x):
        assert parse_rational(format_rational(x)) == x

    def test_format_inf(self):
        assert format_rational(None) == "inf"


class TestCostMatrix:
    def test_rejects_cycle(self):
        with pytest.raises(TopologyError):
            CostMatrix(3, {(1, 2): Fraction(1), (2, 3): Fraction(1),
                           (3, 1): Fraction(1)})

    def test_rejects_negative(self):
        with pytest.raises(TopologyError):
            CostMatrix(2, {(1, 2): Fraction(-1)})

    def test_rejects_out_of_range(self):
        with pytest.raises(TopologyError):
            CostMatrix(2, {(1, 3): Fraction(1)})

    def test_diagonal_is_zero(self):
        cm = CostMatrix(3, {(1, 2): Fraction(2)})
        assert cm.cost(2, 2) == 0
        assert cm.cost(2, 1) is None
        assert cm.cost(1, 2) == 2

    def test_neighbour_queries(self):
        cm = CostMatrix(4, {(1, 2): Fraction(1), (3, 2): Fraction(1),
                            (2, 4): Fraction(1)})
        assert cm.successors(2) == [4]
        assert sorted(cm.predecessors(2)) == [1, 3]

    def test_to_rows_uses_inf(self):
        cm = CostMatrix(2, {(1, 2): Fraction(1, 2)})
        assert cm.to_rows() == [["0", "1/2"], ["inf", "0"]]


class TestTopologies:
    def test_tandem_orientation(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4)
        assert spec.cost.edges() == [(1, 2), (2, 3), (3, 4)]

    def test_tandem_interior_failure_orients_both_ways(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=2, failed=2)
        assert spec.cost.edges() == [(1, 2), (3, 2), (4, 3)]

    def test_star_excludes_outward_center_links(self):
        spec = build_topology("star", 6, k=3, M=6, alpha=2, center=2, failed=1)
        assert spec.cost.edges() == [(2, 1), (3, 2), (4, 2), (5, 2), (6, 2)]

    def test_grid_edges(self):
        spec = build_topology("grid", 6, k=4, M=8, alpha=2, rows=2, cols=3,
                              failed=6)
        assert spec.cost.edges() == [(1, 2), (1, 4), (2, 3), (2, 5), (3, 6),
                                     (4, 5), (5, 6)]

    def test_complete_edge_count(self):
        spec = build_topology("complete", 5, k=3, M=6, alpha=2, failed=5)
        assert len(spec.cost.edges()) == 10
        # every edge oriented toward the failure or by id among survivors
        for (i, j) in spec.cost.edges():
            assert j == 5 or i < j

    def test_overrides_apply_either_endpoint_order(self):
        spec = build_topology("complete", 5, k=3, M=6, alpha=2, failed=5,
                              overrides={(5, 1): Fraction(3)})
        assert spec.cost.cost(1, 5) == 3

    def test_grid_needs_dimensions(self):
        with pytest.raises(TopologyError):
            build_topology("grid", 6, k=4, M=8, rows=2, cols=2, failed=6)

    def test_unknown_kind(self):
        with pytest.raises(TopologyError):
            build_topology("ring", 5, k=3, M=6)

    def test_alpha_defaults_to_msr(self):
        spec = build_topology("tandem", 4, k=2, M=4, failed=4)
        assert spec.alpha == 2
        assert spec.is_msr()


class TestSpecValidation:
    def test_helper_count_must_match_d(self):
        with pytest.raises(TopologyError):
            build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4,
                           helpers=(1, 2), d=3)

    def test_failed_cannot_help(self):
        with pytest.raises(TopologyError):
            build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4,
                           helpers=(2, 3, 4))

    def test_k_bounds(self):
        with pytest.raises(TopologyError):
            build_topology("tandem", 4, k=5, M=4, alpha=2, failed=4)

    def test_unreachable_helper_rejected(self):
        cm = CostMatrix(3, {(1, 3): Fraction(1)})
        with pytest.raises(TopologyError):
            NetworkSpec(n=3, k=2, d=2, alpha=Fraction(1), M=Fraction(2),
                        failed=3, helpers=(1, 2), cost=cm)


class TestShortestPath:
    def test_matches_path_enumeration(self):
        for builder_kwargs in (
            dict(kind="grid", n=6, k=4, M=8, alpha=2, rows=2, cols=3, failed=6),
            dict(kind="complete", n=5, k=3, M=6, alpha=2, failed=5),
            dict(kind="star", n=6, k=3, M=6, alpha=2, center=2, failed=1),
        ):
            kind = builder_kwargs.pop("kind")
            n = builder_kwargs.pop("n")
            spec = build_topology(kind, n, **builder_kwargs)
            for h in spec.helpers:
                assert shortest_path_cost(spec, h, spec.failed) == \
                    all_paths_min_cost(spec.cost, h, spec.failed)

    def test_unreachable_is_none(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4)
        assert shortest_path_cost(spec, 4, 1) is None


class TestBaseline:
    def test_tandem_baseline(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4)
        assert baseline_cost(spec) == 6

    def test_grid_baseline(self):
        spec = build_topology("grid", 6, k=4, M=8, alpha=2, rows=2, cols=3,
                              failed=6)
        assert baseline_cost(spec) == 9

    def test_complete_cost3_baseline(self):
        spec = build_topology("complete", 5, k=3, M=6, alpha=2, failed=5,
                              overrides={(i, 5): Fraction(3) for i in range(1, 5)})
        assert baseline_cost(spec) == 12

    def test_needs_msr(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=3, failed=4)
        with pytest.raises(TopologyError):
            baseline_cost(spec)


class TestRespecAndJson:
    def test_respec_moves_failure(self):
        spec = build_topology("tandem", 4, k=2, M=4, alpha=2, failed=4)
        moved = respec_failure(spec, 2)
        assert moved.failed == 2
        assert moved.cost.edges() == [(1, 2), (3, 2), (4, 3)]

    def test_respec_preserves_overridden_costs(self):
        spec = build_topology("complete", 5, k=3, M=6, alpha=2, failed=5,
                              overrides={(i, 5): Fraction(3) for i in range(1, 5)})
        moved = respec_failure(spec, 2)
        assert moved.cost.cost(5, 2) == 3
        assert moved.cost.cost(1, 2) == 1

    def test_respec_custom_only_in_place(self):
        cm = CostMatrix(3, {(1, 3): Fraction(1), (2, 3): Fraction(1)})
        spec = NetworkSpec(n=3, k=2, d=2, alpha=Fraction(1), M=Fraction(2),
                           failed=3, helpers=(1, 2), cost=cm)
        assert respec_failure(spec, 3) is spec
        with pytest.raises(TopologyError):
            respec_failure(spec, 1)

    def test_json_roundtrip(self):
        spec = build_topology("grid", 6, k=4, M=8, alpha=2, rows=2, cols=3,
                              failed=6)
        doc = json.loads(json.dumps(spec_to_json(spec)))
        back = spec_from_json(doc)
        assert back.n == spec.n and back.k == spec.k and back.d == spec.d
        assert back.alpha == spec.alpha and back.M == spec.M
        assert back.failed == spec.failed and back.helpers == spec.helpers
        assert back.cost == spec.cost

    def test_json_missing_field(self):
        with pytest.raises(TopologyError):
            spec_from_json({"n": 3})
