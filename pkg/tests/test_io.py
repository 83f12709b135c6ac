"""Tests for sgsvp_io.
"""
import dataclasses

import numpy as np
import pytest

from sgsvp import sgsvp_classifier
from sgsvp import sgsvp_io
from sgsvp.sgsvp_errors import ArtifactError
from sgsvp.sgsvp_solver import InitMode, PenaltyKind, PgdConfig

import oracles


def _model(kind=PenaltyKind.L1, q=1.0):
    X, y = oracles.planted_dataset(15, 5, 2, shift=4.0, seed=0)
    cfg = PgdConfig(
        q=q, alpha=1e-3, delta1=1e-3, delta2=2e-3, maxiter=50, init="seeded-gaussian"
    )
    return sgsvp_classifier.fit(
        X[y == 0],
        X[y == 1],
        cfg,
        kind,
        feature_names=[f"gene {j}" for j in range(5)],
    )


def _assert_models_equal(a, b):
    for plane in ("plane0", "plane1"):
        assert np.array_equal(getattr(a, plane).w, getattr(b, plane).w)
        assert getattr(a, plane).b == getattr(b, plane).b
    assert a.config == b.config
    assert a.penalty is b.penalty
    assert a.discriminative == b.discriminative
    assert a.feature_names == b.feature_names
    sa = sgsvp_io.selection_to_dict(a.selection)
    sb = sgsvp_io.selection_to_dict(b.selection)
    assert sa == sb, f"{sa} != {sb}"


def test_model_round_trip(tmp_path):
    for kind, q in ((PenaltyKind.L1, 1.0), (PenaltyKind.LQ, 0.3)):
        model = _model(kind, q)
        path = tmp_path / f"{kind.value}.txt"
        sgsvp_io.write_model(path, model)
        restored = sgsvp_io.read_model(path)
        _assert_models_equal(model, restored)
        assert restored.config.init is InitMode.SEEDED_GAUSSIAN
        assert restored.traces is None
        X = oracles.rng(1).standard_normal((20, 5))
        assert np.array_equal(
            sgsvp_classifier.predict_batch(model, X),
            sgsvp_classifier.predict_batch(restored, X),
        )


def test_selection_round_trip(tmp_path):
    model = _model()
    path = tmp_path / sgsvp_io.SELECTION_FNAME
    sgsvp_io.write_selection(path, model.selection, model.feature_names)
    sel, names = sgsvp_io.read_selection(path)
    assert names == model.feature_names
    assert sgsvp_io.selection_to_dict(sel) == sgsvp_io.selection_to_dict(
        model.selection
    )


def test_selected_names(tmp_path):
    sel = dataclasses.replace(
        _model().selection,
        selected_1=(0, 2),
        selected_2=(2, 4),
        selected_union=(0, 2, 4),
        exclusive_1=(0,),
        exclusive_2=(4,),
        common=(2,),
    )
    path = tmp_path / sgsvp_io.SELECTED_NAMES_FNAME
    sgsvp_io.write_selected_names(path, sel, ["a", "b", "c", "d", "e"])
    with open(path, encoding="utf-8") as inf:
        lines = inf.read().splitlines()
    assert lines == ["a\tplane 0", "c\tboth", "e\tplane 1"], f"{lines}"


def test_trace(tmp_path):
    model = _model()
    trace = model.traces[0]
    path = tmp_path / sgsvp_io.TRACE_FNAME.format(1)
    sgsvp_io.write_trace(path, trace)
    frame = sgsvp_io.read_trace(path)
    assert len(frame) == trace.iterations_run + 1
    assert np.array_equal(frame["objective"].to_numpy(), trace.objective_history)
    assert np.isnan(frame["relative_change"].iloc[0])
    assert np.array_equal(
        frame["relative_change"].to_numpy()[1:], trace.relative_change_history
    )
    assert frame["iteration"].tolist() == list(range(len(frame)))


def test_missing_and_corrupt_artifacts(tmp_path):
    with pytest.raises(ArtifactError, match="sgsvp fit"):
        sgsvp_io.read_model(tmp_path / "missing.txt")
    with pytest.raises(ArtifactError):
        sgsvp_io.read_trace(tmp_path / "missing.csv")

    model = _model()
    path = tmp_path / "model.txt"
    sgsvp_io.write_model(path, model)
    with open(path, encoding="utf-8") as inf:
        lines = inf.read().splitlines()

    def _write(new_lines):
        with open(path, "w", encoding="utf-8") as outf:
            outf.write("\n".join(new_lines) + "\n")

    for bad in (
        # wrong header
        ["# something else"] + lines[1:],
        # unparseable value
        lines + ["w0 = [1.0, oops]"],
        # a line with no "="
        lines + ["w0"],
        # unsupported version
        [lines[0], "format_version = 99"] + lines[2:],
        # missing key
        [line for line in lines if not line.startswith("b1 =")],
        # weight vectors of different length
        lines + ["w1 = [1.0]"],
    ):
        _write(bad)
        with pytest.raises(ArtifactError):
            sgsvp_io.read_model(path)

    path = tmp_path / "trace.csv"
    oracles.write_csv(path, ["step", "value"], [[0, 1.0]])
    with pytest.raises(ArtifactError):
        sgsvp_io.read_trace(path)


if __name__ == "__main__":
    import tempfile
    import pathlib

    for test in (
        test_model_round_trip,
        test_selection_round_trip,
        test_selected_names,
        test_trace,
        test_missing_and_corrupt_artifacts,
    ):
        with tempfile.TemporaryDirectory() as tmp_dir:
            test(pathlib.Path(tmp_dir))
