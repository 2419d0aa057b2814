import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from elastic_clust.cli import cli, cli_main
from elastic_clust.distances import DistanceSpec, resolve_distance
from tests.conftest import SERIES_A, SERIES_B, write_results_run
from version import __version__


def as_literal(x) -> str:
    return ",".join(repr(float(v)) for v in x)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def two_algorithm_results(tmp_path):
    root = tmp_path / "results"
    for dataset in ("D1", "D2"):
        write_results_run(root, "A", dataset, [0, 0, 1, 1])
        write_results_run(root, "B", dataset, [0, 1, 0, 1])
    return str(root)


class TestDist:
    def test_value(self, runner):
        args = ["dist", as_literal(SERIES_A), as_literal(SERIES_B), "--window", "0.2"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.stderr
        assert float(result.stdout) == pytest.approx(17.3039, abs=1e-4)

    def test_euclidean(self, runner):
        result = runner.invoke(cli, ["dist", "0,0", "3,4", "--metric", "ed"])
        assert result.stdout == "5.0\n"

    def test_series_from_file(self, runner, tmp_path):
        path = tmp_path / "a.txt"
        path.write_text("0\n0\n")
        result = runner.invoke(cli, ["dist", str(path), "3 4", "--metric", "ed"])
        assert result.stdout == "5.0\n"

    def test_alignment_path(self, runner):
        args = ["dist", as_literal(SERIES_A), as_literal(SERIES_B), "--window", "0.2", "--path"]
        lines = runner.invoke(cli, args).stdout.splitlines()
        assert float(lines[0]) == pytest.approx(17.3039, abs=1e-4)
        pairs = [tuple(map(int, line.split(","))) for line in lines[1:]]
        assert pairs[0] == (0, 0)
        assert pairs[-1] == (9, 9)
        for (i, j), (k, l) in zip(pairs, pairs[1:]):
            assert (k - i, l - j) in {(1, 0), (0, 1), (1, 1)}

    def test_usage_errors_exit_2(self, runner):
        assert runner.invoke(cli, ["dist", "1,2"]).exit_code == 2
        assert runner.invoke(cli, ["dist", "1,2", "1,2", "--metric", "cosine"]).exit_code == 2

    def test_toolkit_errors_exit_1(self, runner):
        result = runner.invoke(cli, ["dist", "1,2", "1,x"])
        assert result.exit_code == 1
        assert result.stderr.startswith("Error: ")
        assert result.stdout == ""

    def test_unequal_lengths(self, runner):
        result = runner.invoke(cli, ["dist", "1,2,3", "1,2", "--metric", "ed"])
        assert result.exit_code == 1


class TestDatasetCommands:
    def test_pairwise(self, runner, ucr_problem, tmp_path):
        out = str(tmp_path / "matrix" / "msm.csv")
        args = ["pairwise", "--train", ucr_problem[0], "--out", out, "--metric", "msm"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.stderr
        assert result.stdout == f"{out}\n"
        matrix = np.loadtxt(out, delimiter=",")
        assert matrix.shape == (20, 20)
        np.testing.assert_array_equal(np.diag(matrix), 0.0)
        np.testing.assert_array_equal(matrix, matrix.T)

    def test_cluster(self, runner, ucr_problem):
        args = ["cluster", "--train", ucr_problem[0], "--clusterer", "kmedoids", "--metric", "msm"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.stderr
        rows = dict(line.split("\t", 1) for line in result.stdout.splitlines())
        assert rows["algorithm"] == "kmedoids-msm"
        assert rows["k"] == "2"
        assert float(rows["clacc"]) >= 0.9
        assert len(rows["assignments"].split(",")) == 20

    def test_malformed_dataset_header(self, runner, tmp_path):
        bad = tmp_path / "Bad_TRAIN.ts"
        bad.write_text("@seriesLength abc\n@data\n1.0,2.0:a\n3.0,4.0:b\n")
        result = runner.invoke(cli, ["cluster", "--train", str(bad), "--k", "2"])
        assert result.exit_code == 1
        assert result.stderr.startswith("Error: ")
        assert "@seriesLength must be an integer" in result.stderr

    def test_unwritable_output(self, runner, ucr_problem, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory\n")
        out = str(blocker / "msm.csv")
        result = runner.invoke(cli, ["pairwise", "--train", ucr_problem[0], "--out", out])
        assert result.exit_code == 1
        assert result.stderr.startswith("Error: ")

    def test_experiment_then_rerun(self, runner, ucr_problem, tmp_path):
        out = str(tmp_path / "results")
        args = ["experiment", "--train", ucr_problem[0], "--test", ucr_problem[1], "--out", out]
        args += ["--clusterer", "kmedoids", "--metric", "msm"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.stderr
        lines = result.stdout.splitlines()
        assert lines[0].startswith("train\tclacc=")
        assert lines[1].startswith("test\tclacc=")
        assert lines[2] == os.path.join(out, "kmedoids-msm", "Sines", "trainResample0.csv")
        assert os.path.isfile(lines[3])

        again = runner.invoke(cli, args)
        assert again.exit_code == 1
        assert "exists" in again.stderr
        assert runner.invoke(cli, args + ["--overwrite"]).exit_code == 0

    def test_collate(self, runner, two_algorithm_results, tmp_path):
        out = str(tmp_path / "tables")
        result = runner.invoke(cli, ["collate", two_algorithm_results, "--out", out])
        assert result.exit_code == 0, result.stderr
        assert result.stdout.splitlines()[0] == "test\tclacc\t2 datasets\t2 algorithms"
        assert os.path.isfile(os.path.join(out, "test_clacc.csv"))

    def test_collate_without_results(self, runner, tmp_path):
        result = runner.invoke(cli, ["collate", str(tmp_path)])
        assert result.exit_code == 1
        assert "No test results files" in result.stderr


class TestComparisonCommands:
    def test_rank(self, runner, two_algorithm_results, tmp_path):
        summary = tmp_path / "cd.json"
        result = runner.invoke(cli, ["rank", two_algorithm_results, "--summary", str(summary)])
        assert result.exit_code == 0, result.stderr
        assert result.stdout == "1.0000  A\n2.0000  B\nclique: A, B\n"
        assert json.loads(summary.read_text())["cliques"] == [["A", "B"]]

    def test_rank_collated_table(self, runner, two_algorithm_results, tmp_path):
        out = str(tmp_path / "tables")
        runner.invoke(cli, ["collate", two_algorithm_results, "--out", out])
        result = runner.invoke(cli, ["rank", os.path.join(out, "test_clacc.csv")])
        assert result.stdout == "1.0000  A\n2.0000  B\nclique: A, B\n"

    def test_compare(self, runner, two_algorithm_results):
        result = runner.invoke(cli, ["compare", "A", "B", two_algorithm_results])
        assert result.stdout == "A vs B (clacc, test): 2 wins, 0 losses, 0 ties\n"

    def test_compare_unknown_algorithm(self, runner, two_algorithm_results):
        assert runner.invoke(cli, ["compare", "A", "Z", two_algorithm_results]).exit_code == 1

    def test_bench(self, runner):
        result = runner.invoke(cli, ["bench", "--metric", "ed", "--length", "10", "--reps", "3"])
        assert result.exit_code == 0, result.stderr
        assert result.stdout.startswith("ed\tlength=10\treps=3\tseconds=")


class TestConfigFile:
    def test_subcommand_section(self, runner, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("dist:\n  metric: msm\n  cost: 0.5\n")
        result = runner.invoke(cli, ["--config", str(path), "dist", "0,0,1", "3,4,1"])
        expected = resolve_distance(DistanceSpec("msm", c=0.5))([0.0, 0.0, 1.0], [3.0, 4.0, 1.0])
        assert float(result.stdout) == expected

    def test_flags_win_over_file(self, runner, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("metric: msm\n")
        result = runner.invoke(cli, ["--config", str(path), "dist", "0,0", "3,4", "--metric", "ed"])
        assert result.stdout == "5.0\n"

    def test_not_a_mapping(self, runner, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- a\n- b\n")
        assert runner.invoke(cli, ["--config", str(path), "dist", "0", "1"]).exit_code == 1

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert __version__ in result.stdout


class TestCliMain:
    def test_exit_codes(self, capsys):
        assert cli_main(["dist", "0,0", "3,4", "--metric", "ed"]) == 0
        assert capsys.readouterr().out == "5.0\n"
        assert cli_main(["dist", "0,0"]) == 2
        assert cli_main(["dist", "0,0", "3,x"]) == 1
        assert "Error: " in capsys.readouterr().err

    def test_malformed_dataset_returns_1(self, capsys, tmp_path):
        bad = tmp_path / "Bad_TRAIN.ts"
        bad.write_text("@seriesLength abc\n@data\n1.0,2.0:a\n3.0,4.0:b\n")
        assert cli_main(["cluster", "--train", str(bad), "--k", "2"]) == 1
        assert "@seriesLength must be an integer" in capsys.readouterr().err
