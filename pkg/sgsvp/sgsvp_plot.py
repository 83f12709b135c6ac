"""Writes the figures of a run. Every figure is written twice: as SVG, and
as a CSV holding the plotted data.
"""

import os
import typing as t

import numpy as np
import pandas as pd
from sklearn.decomposition import PCA

from . import plt_boss
from . import sgsvp_classifier
from . import sgsvp_select

ELBOW_DESCRIPTION = "elbow_{side} x={x} y={y!r}"


def _write_csv(frame: pd.DataFrame, path):
    frame.to_csv(
        path, index=False, lineterminator="\n", encoding="utf-8", float_format="%.17g"
    )


def elbow_description(sel: sgsvp_select.SelectionResult) -> str:
    return "; ".join(
        ELBOW_DESCRIPTION.format(side=side, x=elbow.x, y=elbow.y)
        for side, elbow in ((1, sel.elbow_1), (2, sel.elbow_2))
    )


def plot_sorted_weights(
    out_dir, sel: sgsvp_select.SelectionResult, feature_names=()
) -> t.List[str]:
    """Sorted |w| curves of both planes, with their elbows marked."""
    n = sel.n_features
    ranks = np.arange(1, n + 1)
    if not feature_names:
        feature_names = tuple(str(i) for i in range(n))
    frame = pd.DataFrame(
        {
            "rank": ranks,
            "magnitude_1": sel.sorted_magnitudes_1,
            "feature_1": [feature_names[i] for i in sel.rank_indices_1],
            "magnitude_2": sel.sorted_magnitudes_2,
            "feature_2": [feature_names[i] for i in sel.rank_indices_2],
        }
    )
    csv_path = os.path.join(out_dir, "sorted_weights.csv")
    svg_path = os.path.join(out_dir, "sorted_weights.svg")
    _write_csv(frame, csv_path)
    boss = plt_boss.MPLBoss()
    with boss.make_svg(svg_path, description=elbow_description(sel)):
        boss.labels("Sorted weight magnitudes", "rank", "|w|")
        for side, (mags, elbow) in enumerate(
            (
                (sel.sorted_magnitudes_1, sel.elbow_1),
                (sel.sorted_magnitudes_2, sel.elbow_2),
            ),
            start=1,
        ):
            boss.plot_line(ranks, mags, label=f"w{side}", color_i=side - 1)
            if elbow.x >= 1:
                boss.marker(
                    elbow.x,
                    elbow.y,
                    gid=f"elbow_{side}",
                    label=f"elbow {side} (x={elbow.x})",
                    color_i=side - 1,
                )
    return [svg_path, csv_path]


def _plot_histories(out_dir, traces, column, stem, title, ylabel, skip_first):
    paths = []
    boss = plt_boss.MPLBoss()
    svg_path = os.path.join(out_dir, f"{stem}.svg")
    with boss.make_svg(svg_path):
        boss.labels(title, "iteration", ylabel)
        for side, trace in enumerate(traces, start=1):
            frame = trace.loc[:, ["iteration", column]]
            if skip_first:
                frame = frame.iloc[1:]
            csv_path = os.path.join(out_dir, f"{stem}_{side}.csv")
            _write_csv(frame, csv_path)
            paths.append(csv_path)
            boss.plot_line(
                frame["iteration"], frame[column], label=f"w{side}", color_i=side - 1
            )
        if skip_first:
            boss.log_y()
    return [svg_path] + paths


def plot_objective_history(out_dir, traces: t.Sequence[pd.DataFrame]):
    """`traces` are the frames returned by sgsvp_io.read_trace()."""
    return _plot_histories(
        out_dir,
        traces,
        "objective",
        "objective_history",
        "Objective",
        "h(z)",
        skip_first=False,
    )


def plot_relative_change(out_dir, traces: t.Sequence[pd.DataFrame]):
    return _plot_histories(
        out_dir,
        traces,
        "relative_change",
        "relative_change",
        "Relative change of the objective",
        "|dh| / |h|",
        skip_first=True,
    )


def plot_features_vs_q(out_dir, counts: pd.DataFrame) -> t.List[str]:
    """`counts` has columns epsilon, q, n_selected (one row per run)."""
    csv_path = os.path.join(out_dir, "features_vs_q.csv")
    svg_path = os.path.join(out_dir, "features_vs_q.svg")
    _write_csv(counts, csv_path)
    epsilons = list(dict.fromkeys(counts["epsilon"]))
    qs = list(dict.fromkeys(counts["q"]))
    heights = []
    for eps in epsilons:
        sub = counts[counts["epsilon"] == eps].set_index("q")["n_selected"]
        heights.append([float(sub.get(q, 0)) for q in qs])
    boss = plt_boss.MPLBoss()
    with boss.make_svg(svg_path):
        boss.labels("Selected features", "q", "number of features")
        boss.bars(
            [f"{q:g}" for q in qs],
            heights,
            [f"epsilon = {eps:.3g}" for eps in epsilons],
        )
    return [svg_path, csv_path]


def plot_top_features(
    out_dir, model: sgsvp_classifier.GsvpSvmModel, k: int = 10
) -> t.List[str]:
    """|w| of both planes for the k selected features with the largest
    weight magnitude on either plane."""
    names = model.feature_names or tuple(
        str(i) for i in range(model.n_features)
    )
    selected = np.array(model.selection.selected_union, dtype=np.intp)
    abs_w0 = np.abs(model.plane0.w[selected])
    abs_w1 = np.abs(model.plane1.w[selected])
    order = np.argsort(-np.maximum(abs_w0, abs_w1), kind="stable")[:k]
    frame = pd.DataFrame(
        {
            "feature": [names[i] for i in selected[order]],
            "index": selected[order],
            "abs_w0": abs_w0[order],
            "abs_w1": abs_w1[order],
        }
    )
    csv_path = os.path.join(out_dir, "top_features.csv")
    svg_path = os.path.join(out_dir, "top_features.svg")
    _write_csv(frame, csv_path)
    boss = plt_boss.MPLBoss()
    with boss.make_svg(svg_path):
        boss.labels("Top features", "", "|w|")
        boss.bars(
            list(frame["feature"]),
            [frame["abs_w0"], frame["abs_w1"]],
            ["plane 0", "plane 1"],
            rotate_labels=True,
        )
    return [svg_path, csv_path]


def pca_2d(X: np.ndarray) -> np.ndarray:
    """Projection of the centred rows of X on the first two principal axes
    (zeros for missing axes). Each axis is signed so its largest loading
    is positive."""
    out = np.zeros((X.shape[0], 2))
    n_components = min(2, *X.shape)
    if n_components == 0:
        return out
    pca = PCA(n_components=n_components, svd_solver="full")
    projected = pca.fit_transform(X)
    for i, axis in enumerate(pca.components_):
        sign = -1.0 if axis[np.argmax(np.abs(axis))] < 0 else 1.0
        out[:, i] = sign * projected[:, i]
    return out


def plot_pca_embedding(
    out_dir,
    X: np.ndarray,
    y: np.ndarray,
    selected: t.Sequence[int],
    class_names=("0", "1"),
) -> t.List[str]:
    """Training samples projected on 2 principal axes, computed from all
    features and from the selected features only."""
    all_2d = pca_2d(X)
    sel_2d = pca_2d(X[:, list(selected)])
    frame = pd.DataFrame(
        {
            "label": y,
            "pc1_all": all_2d[:, 0],
            "pc2_all": all_2d[:, 1],
            "pc1_selected": sel_2d[:, 0],
            "pc2_selected": sel_2d[:, 1],
        }
    )
    csv_path = os.path.join(out_dir, "pca_embedding.csv")
    svg_path = os.path.join(out_dir, "pca_embedding.svg")
    _write_csv(frame, csv_path)
    boss = plt_boss.MPLBoss()
    with boss.make_svg(svg_path, n_axes=2):
        for ax_i, (points, title) in enumerate(
            (
                (all_2d, f"All {X.shape[1]} features"),
                (sel_2d, f"{len(selected)} selected features"),
            )
        ):
            boss.select_axes(ax_i)
            boss.labels(title, "PC 1", "PC 2")
            boss.scatter(points[:, 0], points[:, 1], y, class_names)
    return [svg_path, csv_path]
