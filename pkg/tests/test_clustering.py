import numpy as np
import pytest

from elastic_clust.averaging import BarycentreConfig
from elastic_clust.clustering import (
    ClusteringConfig,
    fit_clusterer,
    kmeans_fit,
    kmedoids_fit,
    predict,
)
from elastic_clust.clustering._base import (
    assign,
    random_partition,
    repair_empty_clusters,
    restart_generators,
)
from elastic_clust.clustering.kmedoids import check_medoid_update, medoid_indices
from elastic_clust.distances import DistanceSpec, pairwise_distance
from elastic_clust.errors import ClusteringConfigError, ElasticClustError, ShapeMismatchError
from elastic_clust.metrics import clustering_accuracy
from tests.conftest import make_sine_dataset


def kmedoids_config(k, distance, **params):
    return ClusteringConfig(k=k, clusterer="kmedoids", distance=distance, **params)


@pytest.fixture
def blobs(rng):
    """Two well separated Gaussian clouds of short series."""
    low = rng.normal(0.0, 0.3, (15, 6))
    high = rng.normal(4.0, 0.3, (15, 6))
    return np.vstack([low, high]), np.repeat([0, 1], 15)


class TestClusteringConfig:
    def test_distance_name_is_expanded(self):
        config = ClusteringConfig(k=2, distance="msm")
        assert config.distance == DistanceSpec("msm")

    @pytest.mark.parametrize(
        "params",
        [
            {"clusterer": "dbscan"},
            {"averaging": "median"},
            {"init": "kmeans++"},
            {"k": 0},
            {"restarts": 0},
            {"max_iters": 0},
            {"threads": 0},
        ],
    )
    def test_invalid(self, params):
        with pytest.raises(ClusteringConfigError):
            ClusteringConfig(**{"k": 2, **params})

    def test_algorithm_names(self):
        assert ClusteringConfig(k=2, distance="dtw").algorithm_name == "kmeans-dtw"
        assert ClusteringConfig(k=2, averaging="dba").algorithm_name == "kmeans-dba-dtw"
        assert kmedoids_config(2, "msm").algorithm_name == "kmedoids-msm"

    def test_barycentre_follows_distance_window(self):
        config = ClusteringConfig(k=2, distance=DistanceSpec("dtw", window=0.4))
        assert config.barycentre_config.window == 0.4
        custom = BarycentreConfig(max_refinements=3)
        assert config.replace(barycentre=custom).barycentre_config is custom

    def test_param_string(self):
        text = ClusteringConfig(k=3, clusterer="kmedoids", distance="msm").to_param_string()
        assert text.startswith("metric=msm;")
        assert "clusterer=kmedoids" in text
        assert "k=3" in text
        assert "dba_" not in text


class TestBaseMachinery:
    def test_ties_go_to_lowest_cluster(self):
        dists = np.array([[1.0, 1.0, 2.0], [3.0, 0.5, 0.5]])
        np.testing.assert_array_equal(assign(dists), [0, 1])

    def test_repair_fills_empty_clusters(self):
        labels = np.array([0, 0, 0, 1])
        dists = np.array([[0.1, 5.0, 9.0], [0.9, 5.0, 9.0], [0.5, 5.0, 9.0], [5.0, 0.2, 9.0]])
        repaired = repair_empty_clusters(labels, dists, 3)
        # case 1 is farthest from its exemplar among cases in non-singleton clusters
        np.testing.assert_array_equal(repaired, [0, 2, 0, 1])

    def test_repair_never_empties_a_singleton(self):
        labels = np.array([0, 0, 1])
        # case 2 is farthest but alone in its cluster; of the tied cases 0 and 1 the first moves
        dists = np.array([[0.5, 1.0, 1.0], [0.5, 1.0, 1.0], [1.0, 7.0, 1.0]])
        np.testing.assert_array_equal(repair_empty_clusters(labels, dists, 3), [2, 0, 1])

    def test_random_partition_is_balanced(self, rng):
        labels = random_partition(10, 3, rng)
        assert sorted(np.bincount(labels)) == [3, 3, 4]

    def test_restart_streams_are_reproducible(self):
        first = [g.integers(1_000_000) for g in restart_generators(5, 4)]
        second = [g.integers(1_000_000) for g in restart_generators(5, 4)]
        assert first == second
        assert len(set(first)) == 4

    def test_medoid_is_member_with_least_total_distance(self):
        P = np.array(
            [
                [0.0, 1.0, 2.0, 9.0],
                [1.0, 0.0, 1.0, 9.0],
                [2.0, 1.0, 0.0, 9.0],
                [9.0, 9.0, 9.0, 0.0],
            ]
        )
        np.testing.assert_array_equal(medoid_indices(P, np.array([0, 0, 0, 1]), 2), [1, 3])
        # moving from medoid 0 to medoid 1 lowers the cluster total from 3 to 2
        previous = np.array([0, 3])
        updated = medoid_indices(P, np.array([0, 0, 0, 1]), 2, previous)
        np.testing.assert_array_equal(updated, [1, 3])

    def test_increasing_medoid_update_raises(self, caplog):
        check_medoid_update(0, 3.0, 3.0)
        with caplog.at_level("WARNING"), pytest.raises(ElasticClustError) as excinfo:
            check_medoid_update(1, 2.0, 2.5)
        assert excinfo.value.details == {"cluster": 1, "before": 2.0, "after": 2.5}
        assert "Medoid update for cluster 1 increased" in caplog.text


class TestKMeans:
    def test_separates_blobs(self, blobs):
        X, y = blobs
        model = kmeans_fit(X, ClusteringConfig(k=2, distance="ed", restarts=5, seed=1))
        assert clustering_accuracy(y, model.assignments) == 1.0
        assert model.exemplars.shape == (2, 6)
        assert model.medoid_indices is None

    def test_euclidean_sse_never_increases(self, rng):
        # with two centroids a cluster can never empty, so no repair disturbs the descent
        X = rng.standard_normal((40, 6))
        model = kmeans_fit(X, ClusteringConfig(k=2, distance="ed", restarts=3, seed=4))
        history = model.sse_history
        assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))

    def test_best_restart_has_least_inertia(self, blobs):
        X, _ = blobs
        model = kmeans_fit(X, ClusteringConfig(k=3, distance="ed", restarts=6, seed=2))
        assert len(model.restart_inertias) == 6
        assert model.inertia == min(model.restart_inertias)
        assert model.best_restart == model.restart_inertias.index(model.inertia)

    def test_seed_determines_result(self, blobs):
        X, _ = blobs
        config = ClusteringConfig(k=3, distance="dtw", restarts=3, seed=9)
        first, second = kmeans_fit(X, config), kmeans_fit(X, config)
        np.testing.assert_array_equal(first.assignments, second.assignments)
        assert first.inertia == second.inertia

    def test_threads_do_not_change_result(self, blobs):
        X, _ = blobs
        config = ClusteringConfig(k=3, distance="msm", restarts=4, seed=3)
        single = kmeans_fit(X, config)
        threaded = kmeans_fit(X, config.replace(threads=3))
        np.testing.assert_array_equal(single.assignments, threaded.assignments)
        assert single.inertia == threaded.inertia
        assert single.best_restart == threaded.best_restart

    def test_predict_on_training_data_reproduces_assignments(self, blobs):
        X, _ = blobs
        model = kmeans_fit(X, ClusteringConfig(k=2, distance="ed", restarts=3))
        np.testing.assert_array_equal(model.predict(X), model.assignments)

    def test_dba_averaging(self):
        D = make_sine_dataset(n_per_class=6, length=30, seed=5).z_normalized()
        config = ClusteringConfig(
            k=2,
            averaging="dba",
            distance="dtw",
            restarts=2,
            seed=1,
            barycentre=BarycentreConfig(max_refinements=3),
        )
        model = fit_clusterer(D.without_labels(), config)
        assert model.averaging == "dba"
        assert model.exemplars.shape == (2, 30)
        assert clustering_accuracy(D.labels, model.assignments) == 1.0

    def test_random_partition_init(self, blobs):
        X, y = blobs
        config = ClusteringConfig(k=2, distance="ed", init="random_partition", restarts=10)
        model = kmeans_fit(X, config)
        assert clustering_accuracy(y, model.assignments) == 1.0

    def test_max_iters_cap(self, blobs):
        X, _ = blobs
        model = kmeans_fit(X, ClusteringConfig(k=4, distance="ed", restarts=1, max_iters=1))
        assert model.iterations_run == 1
        assert not model.converged
        assert len(model.inertia_history) == 1

    def test_k_equal_to_n(self, rng):
        X = rng.standard_normal((4, 5))
        model = kmeans_fit(X, ClusteringConfig(k=4, distance="ed", restarts=2))
        assert sorted(model.assignments.tolist()) == [0, 1, 2, 3]
        assert model.inertia == pytest.approx(0.0)

    def test_k_larger_than_n(self, rng):
        with pytest.raises(ClusteringConfigError):
            kmeans_fit(rng.standard_normal((3, 5)), ClusteringConfig(k=4))

    def test_single_cluster(self, blobs):
        X, _ = blobs
        model = kmeans_fit(X, ClusteringConfig(k=1, distance="ed", restarts=1))
        assert set(model.assignments.tolist()) == {0}
        np.testing.assert_allclose(model.exemplars[0], X.mean(axis=0))


class TestKMedoids:
    def test_recovers_sine_classes_across_seeds(self, sine_dataset):
        D = sine_dataset.z_normalized()
        P = pairwise_distance(D, spec="msm")
        perfect = 0
        for seed in range(10):
            config = kmedoids_config(2, "msm", restarts=10, seed=seed)
            model = kmedoids_fit(D.without_labels(), config, distances=P)
            if clustering_accuracy(D.labels, model.assignments) >= 0.95:
                perfect += 1
        assert perfect >= 8

    def test_inertia_never_increases(self, sine_dataset):
        D = sine_dataset.z_normalized()
        model = kmedoids_fit(D, kmedoids_config(3, "erp", restarts=3))
        history = model.inertia_history
        assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))

    def test_medoids_are_training_series(self, sine_dataset):
        D = sine_dataset.z_normalized()
        model = kmedoids_fit(D, kmedoids_config(2, "msm", restarts=2))
        assert model.medoid_indices.shape == (2,)
        np.testing.assert_array_equal(model.exemplars, D.X[model.medoid_indices])
        # each medoid sits in its own cluster
        np.testing.assert_array_equal(model.assignments[model.medoid_indices], [0, 1])

    def test_precomputed_matrix_gives_same_fit(self, sine_dataset):
        D = sine_dataset.z_normalized()
        config = kmedoids_config(2, "twe", restarts=3, seed=2)
        direct = kmedoids_fit(D, config)
        shared = kmedoids_fit(D, config, distances=pairwise_distance(D, spec="twe"))
        np.testing.assert_array_equal(direct.assignments, shared.assignments)
        np.testing.assert_array_equal(direct.medoid_indices, shared.medoid_indices)

    def test_threads_do_not_change_result(self, sine_dataset):
        D = sine_dataset.z_normalized()
        config = kmedoids_config(2, "msm", restarts=4, seed=6)
        single = kmedoids_fit(D, config)
        threaded = kmedoids_fit(D, config.replace(threads=4))
        np.testing.assert_array_equal(single.assignments, threaded.assignments)
        assert single.inertia == threaded.inertia

    def test_predict_held_out(self, sine_dataset):
        D = sine_dataset.z_normalized()
        model = fit_clusterer(D, kmedoids_config(2, "msm", restarts=5))
        held_out = make_sine_dataset(n_per_class=5, seed=99).z_normalized()
        assert clustering_accuracy(held_out.labels, predict(model, held_out)) == 1.0

    def test_predict_length_mismatch(self, sine_dataset):
        model = fit_clusterer(sine_dataset, kmedoids_config(2, "ed", restarts=1))
        with pytest.raises(ShapeMismatchError):
            model.predict(np.zeros((2, 7)))

    def test_predict_empty(self, sine_dataset):
        model = fit_clusterer(sine_dataset, kmedoids_config(2, "ed", restarts=1))
        assert predict(model, np.zeros((0, sine_dataset.series_length))).shape == (0,)
