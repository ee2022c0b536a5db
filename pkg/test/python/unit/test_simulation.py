"""
Unit tests for the simulation harness
"""

import pytest

from bnstructure import simulation
from bnstructure.config_manager import SimulationConfig
from bnstructure.io import RESULT_COLUMNS, read_results
from bnstructure.simulation import (
    ReplicateTask,
    load_reference,
    parse_strategies,
    run_replicate,
    run_simulation,
    summarize_results,
    training_size,
)


def small_config(**overrides) -> SimulationConfig:
    values = dict(
        reference="synthetic:5:4:1",
        ratios=[1.0, 2.0],
        replicates=2,
        strategies=["bdeu:1+u", "bds:1+mu:0.5"],
        test_set_size=200,
        seed=3,
        record_timing=False,
    )
    values.update(overrides)
    return SimulationConfig(**values)


class TestTrainingSize:
    """Test cases for training_size"""

    @pytest.mark.parametrize("ratio,p,expected", [(0.1, 26, 3), (0.2, 26, 6), (0.5, 26, 13), (1.0, 26, 26), (0.01, 5, 1)])
    def test_ceiling(self, ratio, p, expected):
        """Test n is the ceiling of ratio times p"""
        assert training_size(ratio, p) == expected


class TestRunSimulation:
    """Test cases for run_simulation"""

    def test_grid_and_order(self, registry):
        """Test one row per (ratio, replicate, strategy) in that order"""
        table = run_simulation(small_config(), registry)
        frame = table.to_frame()
        assert len(frame) == 8
        assert list(frame.columns) == RESULT_COLUMNS
        assert frame["n_over_p"].tolist() == [1.0] * 4 + [2.0] * 4
        assert frame["replicate"].tolist() == [1, 1, 2, 2] * 2
        assert frame["score"].tolist() == ["bdeu", "bds"] * 4
        assert frame["prior"].tolist() == ["u", "mu"] * 4
        assert all(error == "" for error in frame["error"])
        assert (frame["shd"] >= 0).all()

    def test_reruns_are_identical(self, registry):
        """Test the same seed gives byte-identical results"""
        first = run_simulation(small_config(), registry).to_csv()
        second = run_simulation(small_config(), registry).to_csv()
        assert first == second

    def test_seed_changes_results(self, registry):
        """Test a different master seed draws different samples"""
        first = run_simulation(small_config(), registry).to_csv()
        second = run_simulation(small_config(seed=4), registry).to_csv()
        assert first != second

    def test_parallel_matches_serial(self, registry):
        """Test worker processes do not change the results"""
        serial = run_simulation(small_config(), registry).to_csv()
        parallel = run_simulation(small_config(threads=2), registry).to_csv()
        assert serial == parallel

    def test_failures_are_recorded(self, registry):
        """Test a strategy that cannot run fills the error column"""
        config = small_config(strategies=["bdeu:1+u", "bdeu:1+mu-sparse:10"], replicates=1, ratios=[1.0])
        frame = run_simulation(config, registry).to_frame()
        assert frame.loc[0, "error"] == ""
        assert "outside" in frame.loc[1, "error"]
        assert frame.loc[1, "shd"] == ""

    def test_loglik_is_per_row(self, registry):
        """Test loglik is the mean negative log-likelihood"""
        frame = run_simulation(small_config(replicates=1, ratios=[2.0]), registry).to_frame()
        assert all(0 < value < 10 for value in frame["loglik"])

    def test_summary(self, registry, temp_dir):
        """Test means per (ratio, strategy)"""
        path = temp_dir / "results.csv"
        run_simulation(small_config(), registry).to_csv(path)
        summary = summarize_results(read_results(path))
        assert len(summary) == 4
        assert summary["runs"].tolist() == [2, 2, 2, 2]
        assert summary["failed"].tolist() == [0, 0, 0, 0]


class TestReplicate:
    """Test cases for a single replicate"""

    def test_shared_sample(self, registry):
        """Test strategies see the same data: identical strategies give identical rows"""
        config = small_config(strategies=["bdeu:1+u", "bdeu:1+u"])
        network, reference = load_reference(config)
        strategies = parse_strategies(config.strategies, registry)
        rows = run_replicate(ReplicateTask(0, 1.0, 1, 12), network, reference, strategies, config)
        assert rows[0] == rows[1]
        assert rows[0]["network"] == "synthetic5x4s1"

    def test_unexpected_error_is_recorded(self, registry, monkeypatch):
        """Test an arbitrary exception in one strategy fills its row and the others still run"""
        config = small_config(strategies=["bdeu:1+u", "bds:1+u"])
        network, reference = load_reference(config)
        strategies = parse_strategies(config.strategies, registry)
        real_hill_climb = simulation.hill_climb

        def failing_hill_climb(data, score, prior, learn_config):
            if score.name == "bds":
                raise ZeroDivisionError("division by zero")
            return real_hill_climb(data, score, prior, learn_config)

        monkeypatch.setattr(simulation, "hill_climb", failing_hill_climb)
        rows = run_replicate(ReplicateTask(0, 1.0, 1, 12), network, reference, strategies, config)
        assert rows[0]["error"] == ""
        assert rows[0]["shd"] != ""
        assert rows[1]["error"] == "ZeroDivisionError: division by zero"
        assert rows[1]["shd"] == ""
        assert rows[1]["loglik"] == ""

    def test_reference_file(self, sparse10_path):
        """Test a BIF reference is named after its file"""
        network, reference = load_reference(small_config(reference=str(sparse10_path)))
        assert network == "sparse10"
        assert reference.node_count == 10


@pytest.mark.slow
class TestDeskScaleTrends:
    """Directional comparison of strategies on the shipped 10-node network"""

    def test_sparse_prior_and_score_trends(self, registry, sparse10_path):
        """Test MU+BDs is at least as close as U+BDeu and BDeu alpha=10 adds more arcs"""
        config = SimulationConfig(
            reference=str(sparse10_path),
            ratios=[0.1, 0.2, 0.5],
            replicates=20,
            strategies=["bdeu:1+u", "bds:1+mu:0.5", "bdeu:10+u", "bds:10+mu:0.5"],
            test_set_size=10000,
            seed=20240101,
            record_timing=False,
        )
        frame = run_simulation(config, registry).to_frame()
        assert all(error == "" for error in frame["error"])
        frame["strategy"] = frame["score"] + ":" + frame["alpha"].astype(str) + "+" + frame["prior"]
        means = frame.groupby(["n_over_p", "strategy"])[["shd", "arcs_ratio"]].mean()
        for ratio in config.ratios:
            assert means.loc[(ratio, "bds:1.0+mu"), "shd"] <= means.loc[(ratio, "bdeu:1.0+u"), "shd"]
            assert (
                means.loc[(ratio, "bdeu:10.0+u"), "arcs_ratio"]
                > means.loc[(ratio, "bds:10.0+mu"), "arcs_ratio"]
            )
