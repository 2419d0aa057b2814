import math

import numpy as np
import pytest

from elastic_clust.errors import DegenerateClusteringError, ParameterError, ShapeMismatchError
from elastic_clust.metrics import (
    adjusted_mi,
    adjusted_rand_index,
    clustering_accuracy,
    contingency_table,
    davies_bouldin,
    evaluate_labels,
    mutual_information,
    normalized_mi,
    rand_index,
    single_cluster_accuracy,
)


class TestContingencyTable:
    def test_counts(self):
        table = contingency_table(["a", "a", "b", "b"], [1, 0, 0, 0])
        assert table.classes == ("a", "b")
        assert table.clusters == (0, 1)
        np.testing.assert_array_equal(table.counts, [[1, 2], [1, 0]])
        assert table.n == 4
        assert not table.is_one_to_one()

    def test_relabelled_partition_is_one_to_one(self):
        assert contingency_table([0, 0, 1], [5, 5, 2]).is_one_to_one()

    def test_length_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            contingency_table([0, 1], [0])

    def test_empty(self):
        with pytest.raises(ParameterError):
            contingency_table([], [])


class TestClusteringAccuracy:
    def test_relabelling_is_free(self):
        assert clustering_accuracy([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_partial_match(self):
        assert clustering_accuracy([0, 0, 1, 1], [0, 0, 0, 1]) == 0.75

    def test_extra_clusters_count_as_errors(self):
        assert clustering_accuracy([0, 0, 0, 0], [0, 1, 2, 3]) == 0.25

    def test_string_labels(self):
        assert clustering_accuracy(["x", "y", "y"], [3, 7, 7]) == 1.0

    def test_single_cluster_baseline(self):
        assert single_cluster_accuracy(["a", "b", "b", "b"]) == 0.75
        assert clustering_accuracy(["a", "b", "b", "b"], [0, 0, 0, 0]) == 0.75


class TestPairCounting:
    def test_rand_index(self):
        assert rand_index([0, 0, 1, 1], [0, 0, 0, 1]) == pytest.approx(0.5)
        assert rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_adjusted_rand_index(self):
        assert adjusted_rand_index([0, 0, 1, 1], [0, 0, 0, 1]) == pytest.approx(0.0)
        assert adjusted_rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)
        assert adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_trivial_partitions(self):
        assert adjusted_rand_index([0, 0, 0], [1, 1, 1]) == 0.0

    def test_needs_two_cases(self):
        with pytest.raises(ParameterError):
            rand_index([0], [0])


class TestInformationTheoretic:
    def test_mutual_information_in_nats(self):
        assert mutual_information([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(math.log(2))
        assert mutual_information([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)

    def test_identical_partitions_score_exactly_one(self, rng):
        for _ in range(20):
            y = rng.integers(0, 5, 60)
            relabelled = (y + 3) % 5
            assert normalized_mi(y, relabelled) == 1.0
            assert adjusted_mi(y, relabelled) == 1.0

    def test_independent_partitions(self):
        assert normalized_mi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)

    def test_both_single_clusters(self):
        assert normalized_mi([0, 0, 0], [1, 1, 1]) == 0.0
        assert adjusted_mi([0, 0, 0], [1, 1, 1]) == 1.0

    def test_chance_adjusted_scores_centre_on_zero(self, rng):
        y_true = np.repeat(np.arange(4), 50)
        ari, ami = [], []
        for _ in range(1000):
            y_pred = rng.permutation(y_true)
            ari.append(adjusted_rand_index(y_true, y_pred))
            ami.append(adjusted_mi(y_true, y_pred))
        assert abs(np.mean(ari)) < 0.05
        assert abs(np.mean(ami)) < 0.05

    def test_nmi_bounded(self, rng):
        for _ in range(50):
            value = normalized_mi(rng.integers(0, 3, 30), rng.integers(0, 4, 30))
            assert 0.0 <= value <= 1.0


class TestEvaluateLabels:
    def test_all_metrics_present(self):
        scores = evaluate_labels([0, 0, 1, 1], [1, 1, 0, 0])
        assert list(scores) == ["clacc", "ri", "ari", "mi", "nmi", "ami"]
        for name in ("clacc", "ri", "ari", "nmi", "ami"):
            assert scores[name] == 1.0

    def test_single_case(self):
        scores = evaluate_labels(["a"], [0])
        assert scores["clacc"] == 1.0
        assert math.isnan(scores["ri"])
        assert math.isnan(scores["ari"])


class TestDaviesBouldin:
    def test_known_value(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        assert davies_bouldin(X, [0, 0, 1, 1]) == pytest.approx(0.1)

    def test_supplied_exemplars(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        # scatter 0.5 around each medoid, medoids 10 apart
        assert davies_bouldin(X, [0, 0, 1, 1], exemplars=X[[0, 2]]) == pytest.approx(0.1)

    def test_tighter_clusters_score_lower(self, rng):
        centres = np.repeat([[0.0] * 5, [6.0] * 5], 20, axis=0)
        labels = np.repeat([0, 1], 20)
        loose = davies_bouldin(centres + rng.normal(0, 1.0, centres.shape), labels)
        tight = davies_bouldin(centres + rng.normal(0, 0.1, centres.shape), labels)
        assert tight < loose

    def test_single_cluster_undefined(self):
        with pytest.raises(DegenerateClusteringError):
            davies_bouldin(np.zeros((3, 2)), [0, 0, 0])

    def test_coincident_centroids_undefined(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(DegenerateClusteringError):
            davies_bouldin(X, [0, 0, 1, 1])

    def test_assignment_count_checked(self):
        with pytest.raises(ShapeMismatchError):
            davies_bouldin(np.zeros((3, 2)), [0, 1])
