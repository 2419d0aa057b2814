import numpy as np
import pytest

from elastic_clust.averaging import (
    BarycentreConfig,
    dba,
    dba_buckets,
    dba_step,
    dba_trace,
    mean_average,
)
from elastic_clust.distances import dtw
from elastic_clust.errors import EmptyClusterError, ParameterError, ShapeMismatchError


@pytest.fixture
def shifted_bumps(rng):
    """Gaussian bumps at slightly different positions, plus noise."""
    t = np.arange(40.0)
    return np.vstack(
        [
            np.exp(-0.5 * ((t - centre) / 3.0) ** 2) + 0.05 * rng.standard_normal(40)
            for centre in (15, 18, 20, 22, 25)
        ]
    )


class TestMeanAverage:
    def test_elementwise_mean(self):
        np.testing.assert_allclose(mean_average([[0.0, 2.0], [2.0, 4.0]]), [1.0, 3.0])

    def test_single_member(self):
        np.testing.assert_array_equal(mean_average([[1.0, 2.0, 3.0]]), [1.0, 2.0, 3.0])

    def test_empty_cluster(self):
        with pytest.raises(EmptyClusterError):
            mean_average([])
        with pytest.raises(EmptyClusterError):
            mean_average(np.zeros((0, 4)))

    def test_unequal_members(self):
        with pytest.raises(ShapeMismatchError):
            mean_average([[1.0, 2.0], [1.0, 2.0, 3.0]])


class TestDba:
    def test_identical_members_are_a_fixed_point(self, rng):
        x = rng.standard_normal(20)
        centre = dba(np.vstack([x, x, x]), rng_seed=0)
        np.testing.assert_allclose(centre, x)

    def test_buckets_cover_every_index(self, shifted_bumps):
        centre = shifted_bumps[2]
        buckets = dba_buckets(centre, shifted_bumps, window=0.2)
        assert len(buckets) == 40
        assert all(len(bucket) >= 1 for bucket in buckets)
        # each member contributes at least one value per centre index
        assert sum(len(bucket) for bucket in buckets) >= 5 * 40

    def test_step_is_mean_of_buckets(self, shifted_bumps):
        centre = shifted_bumps[0]
        buckets = dba_buckets(centre, shifted_bumps, window=0.3)
        expected = [np.mean(bucket) for bucket in buckets]
        np.testing.assert_allclose(dba_step(centre, shifted_bumps, window=0.3), expected)

    def test_costs_never_increase(self, shifted_bumps):
        config = BarycentreConfig(max_refinements=10, window=0.3)
        trace = dba_trace(shifted_bumps, config, rng_seed=3)
        assert len(trace.costs) == trace.steps + 1
        for earlier, later in zip(trace.costs, trace.costs[1:]):
            assert later <= earlier + 1e-9

    def test_final_cost_matches_returned_centre(self, shifted_bumps):
        config = BarycentreConfig(max_refinements=4, window=0.3)
        trace = dba_trace(shifted_bumps, config, rng_seed=3)
        expected = sum(dtw(trace.centre, member, window=0.3) for member in shifted_bumps)
        assert trace.costs[-1] == pytest.approx(expected)

    def test_refinement_cap(self, shifted_bumps):
        config = BarycentreConfig(max_refinements=2, convergence_tol=0.0)
        trace = dba_trace(shifted_bumps, config, rng_seed=1)
        assert trace.steps == 2
        assert not trace.converged

    def test_converges_on_identical_members(self, rng):
        x = rng.standard_normal(10)
        trace = dba_trace(np.vstack([x, x]), rng_seed=0)
        assert trace.converged
        assert trace.steps == 1

    def test_seeded_initial_choice_is_reproducible(self, shifted_bumps):
        first = dba(shifted_bumps, rng_seed=11)
        np.testing.assert_array_equal(dba(shifted_bumps, rng_seed=11), first)

    def test_explicit_initial_centre(self, shifted_bumps):
        mean = shifted_bumps.mean(axis=0)
        trace = dba_trace(shifted_bumps, BarycentreConfig(max_refinements=1), initial=mean)
        np.testing.assert_allclose(trace.centre, dba_step(mean, shifted_bumps, window=0.2))

    def test_initial_length_checked(self, shifted_bumps):
        with pytest.raises(ParameterError):
            dba(shifted_bumps, initial=np.zeros(5))

    def test_empty_cluster(self):
        with pytest.raises(EmptyClusterError):
            dba([])

    def test_centre_beats_the_arithmetic_mean_under_dtw(self, shifted_bumps):
        mean = shifted_bumps.mean(axis=0)
        centre = dba(shifted_bumps, BarycentreConfig(max_refinements=10, window=0.3), initial=mean)
        cost = sum(dtw(centre, member, window=0.3) for member in shifted_bumps)
        mean_cost = sum(dtw(mean, member, window=0.3) for member in shifted_bumps)
        assert cost <= mean_cost + 1e-9


class TestBarycentreConfig:
    @pytest.mark.parametrize(
        "params", [{"max_refinements": 0}, {"convergence_tol": -1.0}, {"window": 1.2}]
    )
    def test_invalid(self, params):
        with pytest.raises(ParameterError):
            BarycentreConfig(**params)

    def test_distance_uses_window(self):
        assert BarycentreConfig(window=0.4).distance.window == 0.4
