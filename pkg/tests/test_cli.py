import json
import os

import pytest

from obprox.cli import main
from obprox.dataio import load_dataset, to_libsvm
from obprox.synthetic import make_synthetic


@pytest.fixture
def dataset_path(tmp_path):
    dataset, _ = make_synthetic(n=12, num_examples=80, sparsity=3, seed=23)
    path = tmp_path / "synth.libsvm"
    path.write_text(to_libsvm(dataset))
    return str(path)


class TestSynthCommand:
    def test_writes_parseable_file_and_truth(self, tmp_path, capsys):
        out = str(tmp_path / "gen.libsvm")
        rc = main(
            ["synth", "--features", "10", "--examples", "40", "--sparsity", "4",
             "--seed", "5", "--out", out]
        )
        assert rc == 0
        dataset = load_dataset(out)
        assert dataset.num_examples == 40
        with open(out + ".truth.json") as handle:
            truth = json.load(handle)
        assert sum(1 for v in truth["x"] if v != 0.0) == 4
        assert "wrote 40 examples" in capsys.readouterr().out


class TestInspectCommand:
    def test_prints_summary_stats(self, dataset_path, capsys):
        rc = main(["inspect", "--dataset", dataset_path])
        assert rc == 0
        out = capsys.readouterr().out
        assert "examples (N):      80" in out
        assert "features (n):      12" in out

    def test_unreadable_file_fails_cleanly(self, capsys):
        rc = main(["inspect", "--dataset", "/nonexistent/file.libsvm"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestRunCommand:
    def test_single_solver_run(self, dataset_path, tmp_path, capsys):
        out_dir = str(tmp_path / "out")
        rc = main(
            ["run", "--dataset", dataset_path, "--solver", "prox_sg",
             "--epochs", "2", "--out-dir", out_dir, "--no-plots"]
        )
        assert rc == 0
        assert os.path.exists(os.path.join(out_dir, "trace_prox_sg.csv"))
        assert not os.path.exists(os.path.join(out_dir, "objective.png"))
        assert "prox_sg" in capsys.readouterr().out

    def test_infinite_orthant_flag(self, dataset_path, tmp_path):
        out_dir = str(tmp_path / "out_inf")
        rc = main(
            ["run", "--dataset", dataset_path, "--solver", "obprox_sg_plus",
             "--epochs", "2", "--np", "10", "--no", "inf",
             "--out-dir", out_dir, "--no-plots"]
        )
        assert rc == 0
        with open(os.path.join(out_dir, "summary_obprox_sg_plus.json")) as handle:
            summary = json.load(handle)
        assert summary["config"]["n_p"] == 10
        assert summary["config"]["n_o"] == "inf"

    def test_config_file_with_flag_override(self, dataset_path, tmp_path):
        config_path = tmp_path / "exp.json"
        config_path.write_text(
            json.dumps(
                {
                    "dataset": dataset_path,
                    "solvers": ["prox_sg"],
                    "epochs": 4,
                    "out_dir": str(tmp_path / "cfg_out"),
                    "plots": False,
                    "lam": 0.05,
                }
            )
        )
        rc = main(["run", "--config", str(config_path), "--epochs", "2"])
        assert rc == 0
        with open(tmp_path / "cfg_out" / "summary_prox_sg.json") as handle:
            summary = json.load(handle)
        assert summary["config"]["epochs"] == 2  # flag wins
        assert summary["config"]["lam"] == 0.05  # file survives

    def test_unknown_solver_exits_nonzero(self, dataset_path, capsys):
        rc = main(["run", "--dataset", dataset_path, "--solver", "adamw"])
        assert rc == 2
        assert "unknown solver" in capsys.readouterr().err

    def test_missing_dataset_exits_nonzero(self, capsys):
        rc = main(["run", "--solver", "prox_sg"])
        assert rc == 2
        assert "no dataset" in capsys.readouterr().err

    def test_unreadable_dataset_exits_nonzero(self, capsys):
        rc = main(["run", "--dataset", "/nope.libsvm", "--solver", "prox_sg"])
        assert rc == 2


def test_entry_point_help():
    with pytest.raises(SystemExit) as err:
        main(["--help"])
    assert err.value.code == 0
