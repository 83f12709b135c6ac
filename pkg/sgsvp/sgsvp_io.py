"""Reading and writing run artifacts: the fitted model, the feature
selection and the solver traces.

Model and selection files are plain text with one `key = <python literal>`
per line, parsed back with `ast.literal_eval` like the settings files.
Floats are written with repr() so they read back bit-for-bit.
"""
import ast
import os
import typing as t

import numpy as np
import pandas as pd

from . import sgsvp_classifier
from . import sgsvp_select
from . import sgsvp_solver
from .sgsvp_errors import ArtifactError, InputError

FORMAT_VERSION = 1
MODEL_HEADER = "# sgsvp model"
SELECTION_HEADER = "# sgsvp selection"

MODEL_FNAME = "model.txt"
SELECTION_FNAME = "selection.txt"
SELECTED_NAMES_FNAME = "selected_features.txt"
TRACE_FNAME = "trace_{}.csv"
TRACE_COLUMNS = ("iteration", "objective", "relative_change")


def _floats(arr) -> t.List[float]:
    return [float(v) for v in np.asarray(arr).ravel()]


def _ints(arr) -> t.List[int]:
    return [int(v) for v in np.asarray(arr).ravel()]


def write_literal_file(path, header: str, items: t.Dict[str, t.Any]):
    lines = [header, f"format_version = {FORMAT_VERSION!r}"]
    for key, val in items.items():
        lines.append(f"{key} = {val!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as outf:
        outf.write("\n".join(lines) + "\n")


def read_literal_file(path, header: str) -> t.Dict[str, t.Any]:
    """Raises ArtifactError if the file is missing, has the wrong header or
    version, or has a line that is not `key = <python literal>`."""
    if not os.path.exists(path):
        raise ArtifactError(f"{path} does not exist; run `sgsvp fit` first")
    with open(path, "r", encoding="utf-8") as inf:
        lines = inf.read().splitlines()
    if not lines or lines[0].strip() != header:
        raise ArtifactError(f"{path}: expected first line {header!r}")
    out = {}
    for line_i, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ArtifactError(f"{path}, line {line_i}: no '=' in {line!r}")
        try:
            out[key.strip()] = ast.literal_eval(val.strip())
        except (ValueError, SyntaxError) as exc:
            raise ArtifactError(
                f"{path}, line {line_i}: cannot parse value of {key.strip()!r}"
            ) from exc
    if out.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(
            f"{path}: unsupported format_version {out.get('format_version')!r}"
        )
    return out


def selection_to_dict(sel: sgsvp_select.SelectionResult) -> t.Dict[str, t.Any]:
    return {
        "sorted_magnitudes_1": _floats(sel.sorted_magnitudes_1),
        "sorted_magnitudes_2": _floats(sel.sorted_magnitudes_2),
        "rank_indices_1": _ints(sel.rank_indices_1),
        "rank_indices_2": _ints(sel.rank_indices_2),
        "elbow_1": (sel.elbow_1.x, sel.elbow_1.y),
        "elbow_2": (sel.elbow_2.x, sel.elbow_2.y),
        "selected_1": sel.selected_1,
        "selected_2": sel.selected_2,
        "selected_union": sel.selected_union,
        "exclusive_1": sel.exclusive_1,
        "exclusive_2": sel.exclusive_2,
        "common": sel.common,
        "degenerate_1": sel.degenerate_1,
        "degenerate_2": sel.degenerate_2,
    }


def selection_from_dict(d: t.Dict[str, t.Any]) -> sgsvp_select.SelectionResult:
    kwargs = {}
    for key in ("sorted_magnitudes_1", "sorted_magnitudes_2"):
        kwargs[key] = np.array(d[key], dtype=np.float64)
    for key in ("rank_indices_1", "rank_indices_2"):
        kwargs[key] = np.array(d[key], dtype=np.intp)
    for key in ("elbow_1", "elbow_2"):
        x, y = d[key]
        kwargs[key] = sgsvp_select.ElbowPoint(x=int(x), y=float(y))
    for key in (
        "selected_1",
        "selected_2",
        "selected_union",
        "exclusive_1",
        "exclusive_2",
        "common",
    ):
        kwargs[key] = tuple(int(i) for i in d[key])
    kwargs["degenerate_1"] = bool(d["degenerate_1"])
    kwargs["degenerate_2"] = bool(d["degenerate_2"])
    return sgsvp_select.SelectionResult(**kwargs)


def _config_to_dict(cfg: sgsvp_solver.PgdConfig) -> t.Dict[str, t.Any]:
    return {
        "q": cfg.q,
        "epsilon": cfg.epsilon,
        "alpha": cfg.alpha,
        "delta1": cfg.delta1,
        "delta2": cfg.delta2,
        "maxiter": cfg.maxiter,
        "tol": cfg.tol,
        "init": cfg.init.value,
        "seed": cfg.seed,
    }


def _trace_summary(trace: sgsvp_solver.SolveTrace) -> t.Dict[str, t.Any]:
    return {
        "iterations_run": trace.iterations_run,
        "converged": trace.converged,
        "final_objective": trace.final_objective,
        "final_rayleigh": trace.final_rayleigh,
    }


def write_model(path, model: sgsvp_classifier.GsvpSvmModel):
    items = {
        "penalty": model.penalty.value,
        "config": _config_to_dict(model.config),
        "discriminative": model.discriminative,
        "feature_names": tuple(model.feature_names),
        "w0": _floats(model.plane0.w),
        "b0": float(model.plane0.b),
        "w1": _floats(model.plane1.w),
        "b1": float(model.plane1.b),
        "selection": selection_to_dict(model.selection),
    }
    if model.traces is not None:
        items["trace_1"] = _trace_summary(model.traces[0])
        items["trace_2"] = _trace_summary(model.traces[1])
    write_literal_file(path, MODEL_HEADER, items)


def read_model(path) -> sgsvp_classifier.GsvpSvmModel:
    """Reads a model written by write_model(). The solver traces are not
    stored, so `traces` is None on the result."""
    d = read_literal_file(path, MODEL_HEADER)
    try:
        model = sgsvp_classifier.GsvpSvmModel(
            plane0=sgsvp_classifier.Hyperplane(
                np.array(d["w0"], dtype=np.float64), float(d["b0"])
            ),
            plane1=sgsvp_classifier.Hyperplane(
                np.array(d["w1"], dtype=np.float64), float(d["b1"])
            ),
            selection=selection_from_dict(d["selection"]),
            config=sgsvp_solver.PgdConfig(**d["config"]),
            penalty=sgsvp_solver.PenaltyKind(d["penalty"]),
            discriminative=bool(d["discriminative"]),
            feature_names=tuple(d["feature_names"]),
        )
    except (KeyError, TypeError, ValueError, InputError) as exc:
        raise ArtifactError(f"{path}: corrupt model ({exc})") from exc
    if model.plane0.w.shape != model.plane1.w.shape:
        raise ArtifactError(f"{path}: weight vectors differ in length")
    return model


def write_selection(path, sel: sgsvp_select.SelectionResult, feature_names=()):
    items = selection_to_dict(sel)
    items["feature_names"] = tuple(feature_names)
    write_literal_file(path, SELECTION_HEADER, items)


def read_selection(
    path,
) -> t.Tuple[sgsvp_select.SelectionResult, t.Tuple[str, ...]]:
    d = read_literal_file(path, SELECTION_HEADER)
    try:
        return selection_from_dict(d), tuple(d.get("feature_names", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"{path}: corrupt selection ({exc})") from exc


def write_selected_names(path, sel: sgsvp_select.SelectionResult, feature_names):
    """One feature name per line, in selection order, tagged with the
    plane(s) that selected it."""
    common = set(sel.common)
    only_1 = set(sel.exclusive_1)
    with open(path, "w", encoding="utf-8", newline="\n") as outf:
        for i in sel.selected_union:
            if i in common:
                tag = "both"
            elif i in only_1:
                tag = "plane 0"
            else:
                tag = "plane 1"
            outf.write(f"{feature_names[i]}\t{tag}\n")


def write_trace(path, trace: sgsvp_solver.SolveTrace):
    """One row per objective value. Row 0 (the initial iterate) has no
    relative change."""
    changes = np.concatenate(([np.nan], trace.relative_change_history))
    pd.DataFrame(
        {
            "iteration": np.arange(len(trace.objective_history)),
            "objective": trace.objective_history,
            "relative_change": changes,
        }
    ).to_csv(
        path,
        index=False,
        lineterminator="\n",
        encoding="utf-8",
        float_format="%.17g",
    )


def read_trace(path) -> pd.DataFrame:
    if not os.path.exists(path):
        raise ArtifactError(f"{path} does not exist; run `sgsvp fit` first")
    try:
        frame = pd.read_csv(path, encoding="utf-8")
    except (ValueError, pd.errors.ParserError) as exc:
        raise ArtifactError(f"{path}: corrupt trace ({exc})") from exc
    if tuple(frame.columns) != TRACE_COLUMNS or frame.empty:
        raise ArtifactError(f"{path}: expected columns {TRACE_COLUMNS}")
    return frame
