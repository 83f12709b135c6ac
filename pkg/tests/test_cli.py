"""Runs the sgsvp command line on a small synthetic dataset.
"""
import os

import pandas as pd
import pytest

from sgsvp import sgsvp_commands
from sgsvp import sgsvp_data
from sgsvp import sgsvp_io
from sgsvp import sgsvp_metrics
from sgsvp import sgsvp_settings
from sgsvp.__main__ import main

import oracles

SETTINGS = """{
    "label_column": "label",
    "positive_label": "pos",
    "drop_columns": ("id",),
    "alpha": 0.01,
    "delta1": 0.001,
    "delta2": 0.001,
    "maxiter": 3000,
    "delta1_grid": (0.001, 0.01),
    "delta2_grid": (0.001,),
    "alpha_grid": (0.01,),
}
"""


@pytest.fixture(name="workspace")
def fixture_workspace(tmp_path):
    data_path = oracles.write_synthetic_csv(tmp_path / "synthetic.csv")
    settings_path = tmp_path / "settings.py"
    settings_path.write_text(SETTINGS, encoding="utf-8")
    return tmp_path, str(data_path), str(settings_path)


def _run(command, data_path, settings_path, out_dir, *extra):
    main(
        [command, "-c", settings_path, "--dataset", data_path, "--out", str(out_dir)]
        + list(extra)
    )


def _exit_status(*argv):
    with pytest.raises(SystemExit) as excinfo:
        main(list(argv))
    return excinfo.value.code


def test_split(workspace):
    tmp_path, data_path, settings_path = workspace
    out_dir = tmp_path / "out"
    _run("split", data_path, settings_path, out_dir)
    manifest = pd.read_csv(out_dir / sgsvp_data.SPLIT_MANIFEST)
    assert len(manifest) == 60
    counts = manifest.groupby(["partition", "label"]).size()
    for partition, expected in (("train", 21), ("validation", 5), ("test", 4)):
        for label in (0, 1):
            assert counts[(partition, label)] == expected, f"{partition} {label}"
    assert os.path.exists(out_dir / sgsvp_data.SPLIT_SUMMARY)


def test_fit_and_plot(workspace, capsys):
    tmp_path, data_path, settings_path = workspace
    out_dir = tmp_path / "out"
    _run("fit", data_path, settings_path, out_dir)
    for fname in (
        sgsvp_io.MODEL_FNAME,
        sgsvp_commands.REPORTS_FNAME,
        sgsvp_io.SELECTION_FNAME,
        sgsvp_io.SELECTED_NAMES_FNAME,
        sgsvp_io.TRACE_FNAME.format(1),
        sgsvp_io.TRACE_FNAME.format(2),
        sgsvp_commands.STANDARDIZATION_FNAME,
        sgsvp_data.SPLIT_MANIFEST,
    ):
        assert os.path.exists(out_dir / fname), f"{fname} not written"
    reports = sgsvp_metrics.read_reports_csv(out_dir / sgsvp_commands.REPORTS_FNAME)
    assert list(reports) == ["validation", "test"]
    assert reports["test"].balanced_accuracy >= 0.85, f"{reports['test']}"
    model = sgsvp_io.read_model(out_dir / sgsvp_io.MODEL_FNAME)
    assert model.feature_names == tuple(f"f{j}" for j in range(6))
    assert "Bal. Acc." in capsys.readouterr().out

    _run("plot", data_path, settings_path, out_dir)
    for fname in (
        "sorted_weights.svg",
        "objective_history.svg",
        "relative_change.svg",
        "top_features.svg",
        "pca_embedding.svg",
    ):
        assert os.path.exists(out_dir / fname), f"{fname} not written"
    assert not os.path.exists(out_dir / "features_vs_q.svg")


def test_reruns_are_identical(workspace):
    tmp_path, data_path, settings_path = workspace
    for sub in ("a", "b"):
        _run("fit", data_path, settings_path, tmp_path / sub)
        _run("plot", data_path, settings_path, tmp_path / sub)
    for fname in (
        sgsvp_io.MODEL_FNAME,
        sgsvp_commands.REPORTS_FNAME,
        sgsvp_io.TRACE_FNAME.format(1),
        sgsvp_data.SPLIT_MANIFEST,
        "sorted_weights.svg",
        "sorted_weights.csv",
    ):
        a = (tmp_path / "a" / fname).read_bytes()
        b = (tmp_path / "b" / fname).read_bytes()
        assert a == b, f"{fname} differs between runs"


def test_tune(workspace):
    tmp_path, data_path, settings_path = workspace
    out_dir = tmp_path / "out"
    _run("tune", data_path, settings_path, out_dir)
    trials = pd.read_csv(out_dir / sgsvp_commands.TRIALS_FNAME)
    assert len(trials) == 2
    best = sgsvp_settings.read_settings_files_into_dict(
        [out_dir / sgsvp_commands.BEST_SETTINGS_FNAME], False, False
    )
    assert best["delta1"] in (0.001, 0.01)
    assert best["alpha"] == 0.01
    # the chosen parameters can be fed back in
    _run(
        "fit",
        data_path,
        settings_path,
        out_dir,
        "-c",
        settings_path,
        str(out_dir / sgsvp_commands.BEST_SETTINGS_FNAME),
    )
    assert os.path.exists(out_dir / sgsvp_io.MODEL_FNAME)


def test_stability(workspace):
    tmp_path, data_path, settings_path = workspace
    out_dir = tmp_path / "out"
    _run("stability", data_path, settings_path, out_dir, "--q", "0.5,1")
    runs = pd.read_csv(out_dir / sgsvp_commands.STABILITY_FNAME)
    assert runs["q"].tolist() == [0.5, 1.0]
    assert runs["penalty"].tolist() == ["lq", "weighted-l1"]
    jsi = pd.read_csv(out_dir / sgsvp_commands.STABILITY_JSI_FNAME)
    assert len(jsi) == 4
    diagonal = jsi[jsi["q_a"] == jsi["q_b"]]["jsi"]
    assert (diagonal == 1.0).all()
    avg = pd.read_csv(out_dir / sgsvp_commands.STABILITY_AVG_FNAME)
    assert 0.0 <= avg["avg_jsi"].iloc[0] <= 1.0

    _run("fit", data_path, settings_path, out_dir)
    _run("plot", data_path, settings_path, out_dir)
    assert os.path.exists(out_dir / "features_vs_q.svg")


def test_exit_statuses(workspace):
    tmp_path, data_path, settings_path = workspace
    out_dir = str(tmp_path / "out")
    # bad input
    assert (
        _exit_status(
            "fit", "-c", settings_path, "--dataset", "nowhere.csv", "--out", out_dir
        )
        == 2
    )
    assert (
        _exit_status(
            "stability", "-c", settings_path, "--dataset", data_path, "--q", "0.5"
        )
        == 2
    )
    # no fitted model to plot
    assert (
        _exit_status("plot", "-c", settings_path, "--dataset", data_path, "--out", out_dir)
        == 3
    )
    # the solver blows up
    assert (
        _exit_status(
            "fit",
            "-c",
            settings_path,
            "--dataset",
            data_path,
            "--out",
            out_dir,
            "--alpha",
            "1e300",
        )
        == 4
    )


if __name__ == "__main__":
    print("Run these tests with pytest")
