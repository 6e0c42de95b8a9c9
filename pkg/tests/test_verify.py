"""Independent verifier: positive cases, seeded corruption, stress harness."""

import pytest

from antimagic import (Graph, StressFailure, check_construction, label_graph,
                       parse_edge_list, stress, verify_antimagic)
from antimagic.verify import recompute_vertex_sums
from corpus import circulant, complete_graph, cycle_graph


class TestVerifyAntimagic:
    def test_accepts_valid_hand_labeling(self):
        g = cycle_graph(3)
        report = verify_antimagic(g, [1, 3, 2])
        assert report.passed
        assert report.bijection_ok and report.distinct_sums_ok
        assert report.layer_monotone_ok is None
        assert sorted(report.vertex_sums) == [3, 4, 5]

    def test_rejects_non_bijection(self):
        report = verify_antimagic(cycle_graph(3), [1, 1, 2])
        assert not report.bijection_ok
        assert not report.passed
        assert "bijection" in report.first_failure

    def test_rejects_colliding_sums(self):
        # edge order (0,1) (0,3) (1,2) (2,3): vertices 0 and 2 both sum to 5
        report = verify_antimagic(cycle_graph(4), [1, 4, 2, 3])
        assert report.bijection_ok
        assert not report.distinct_sums_ok
        assert "share vertex sum" in report.first_failure

    def test_single_edge_always_fails(self):
        # both endpoints of the lone edge receive the same sum
        report = verify_antimagic(Graph(2, [(0, 1)]), [1])
        assert report.bijection_ok
        assert not report.distinct_sums_ok
        assert not report.passed

    def test_label_dict_accepted(self):
        g = cycle_graph(3)
        report = verify_antimagic(g, {0: 1, 1: 3, 2: 2})
        assert report.passed

    def test_wrong_label_count_rejected(self):
        with pytest.raises(ValueError):
            verify_antimagic(cycle_graph(3), [1, 2])

    def test_layer_monotonicity_checked(self):
        res = label_graph(circulant(9, [1, 2]))
        report = verify_antimagic(res.graph, res.labeling.labels, res.layering)
        assert report.layer_monotone_ok

    def test_full_result_checks(self):
        res = label_graph(complete_graph(5))
        report = verify_antimagic(res.graph, res.labeling.labels, res.layering, res)
        assert report.inequality_ok and report.pair_sum_ok


class TestRecomputeSums:
    def test_matches_incidence(self):
        g = parse_edge_list("0 1\n1 2\n0 2\n")
        assert recompute_vertex_sums(g, [5, 7, 11]) == [16, 12, 18]


class TestCheckConstruction:
    def test_clean_on_valid_result(self):
        issues, stats = check_construction(label_graph(circulant(10, [1, 2])))
        assert issues == []
        assert stats["min_upper_slack"] is not None and stats["min_upper_slack"] >= 0
        assert stats["min_lower_slack"] is not None and stats["min_lower_slack"] >= 0

    def test_detects_swapped_labels(self):
        res = label_graph(circulant(10, [1, 2]))
        labels = list(res.labeling.labels)
        labels[0], labels[-1] = labels[-1], labels[0]
        broken = res.labeling.__class__(tuple(labels), res.labeling.partial_sums,
                                        res.labeling.vertex_sums)
        broken_result = res.__class__(res.graph, res.root, res.k, res.layering,
                                      res.plans, res.layers, broken)
        issues, _ = check_construction(broken_result)
        assert issues, "tampered labels must be reported"

    def test_detects_tampered_sums(self):
        res = label_graph(complete_graph(5))
        sums = list(res.labeling.vertex_sums)
        sums[1] += 1
        broken = res.labeling.__class__(res.labeling.labels, res.labeling.partial_sums,
                                        tuple(sums))
        broken_result = res.__class__(res.graph, res.root, res.k, res.layering,
                                      res.plans, res.layers, broken)
        issues, _ = check_construction(broken_result)
        assert any("disagree" in issue for issue in issues)


class TestStress:
    def test_small_batch_passes(self):
        summary = stress(count=12, n_min=8, n_max=24, degrees=[4, 6], seed=5)
        assert summary.passed == summary.count == 12
        assert "12/12" in summary.describe()

    def test_deterministic(self):
        a = stress(count=6, n_min=8, n_max=20, degrees=[4], seed=9)
        b = stress(count=6, n_min=8, n_max=20, degrees=[4], seed=9)
        assert (a.passed, a.min_upper_slack, a.min_lower_slack,
                a.bad_component_instances, a.instances_with_links) == \
            (b.passed, b.min_upper_slack, b.min_lower_slack,
             b.bad_component_instances, b.instances_with_links)

    def test_rejects_out_of_scope_degree(self):
        with pytest.raises(ValueError):
            stress(count=1, n_min=8, n_max=20, degrees=[3], seed=0)

    def test_zero_count_gives_empty_summary(self):
        summary = stress(count=0, n_min=8, n_max=20, degrees=[4], seed=0)
        assert summary.count == summary.passed == 0
        assert summary.min_upper_slack is None and summary.min_lower_slack is None
        assert summary.describe().startswith("stress: 0/0 passed")

    def test_failure_carries_instance(self):
        # force a failure by monkeypatching nothing: instead check the exception
        # type is importable and structured as documented
        exc = StressFailure("boom", "# n=5 degree=4 seed=1\n0 1\n")
        assert exc.instance.startswith("# n=5")
