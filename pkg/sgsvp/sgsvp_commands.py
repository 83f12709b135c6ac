"""The sgsvp subcommands. Each takes a RunConfig, writes its files into
`config.output_dirname` and returns what it computed.
"""

import dataclasses
import itertools
import os
import typing as t
import warnings

import pandas as pd

from . import sgsvp_classifier
from . import sgsvp_data
from . import sgsvp_io
from . import sgsvp_metrics
from . import sgsvp_plot
from . import sgsvp_solver
from . import sgsvp_tuning
from .sgsvp_errors import ArtifactError, InputError
from .sgsvp_settings import RunConfig

TRIALS_FNAME = "trials.csv"
BEST_SETTINGS_FNAME = "best_settings.py"
REPORTS_FNAME = "reports.csv"
STANDARDIZATION_FNAME = "standardization.csv"
STABILITY_FNAME = "stability.csv"
STABILITY_JSI_FNAME = "stability_jsi.csv"
STABILITY_AVG_FNAME = "stability_avg_jsi.csv"


@dataclasses.dataclass
class PreparedData:
    dataset: sgsvp_data.LabeledDataset
    # split of the raw dataset (what the manifest describes)
    split: sgsvp_data.DatasetSplit
    # what the models see: standardized if config.standardize
    train: sgsvp_data.LabeledDataset
    validation: sgsvp_data.LabeledDataset
    test: sgsvp_data.LabeledDataset
    standardization: t.Optional[sgsvp_data.Standardization] = None


def _makedirs(config: RunConfig):
    os.makedirs(config.output_dirname, exist_ok=True)


def _load_dataset(config: RunConfig) -> sgsvp_data.LabeledDataset:
    return sgsvp_data.load_csv(
        config.dataset_fname,
        config.label_column,
        config.positive_label,
        drop_columns=config.drop_columns,
    )


def prepare_data(config: RunConfig) -> PreparedData:
    """Loads the dataset and its split. An existing split manifest in the
    output directory is reused; otherwise the split is made and written."""
    _makedirs(config)
    ds = _load_dataset(config)
    if os.path.exists(config.path(sgsvp_data.SPLIT_MANIFEST)):
        split = sgsvp_data.read_split_manifest(config.output_dirname, ds)
    else:
        split = sgsvp_data.stratified_split(ds, config.split_spec())
        sgsvp_data.write_split_manifest(config.output_dirname, split)
    if config.standardize:
        train, (validation, test), stats = sgsvp_data.standardize(
            split.train, (split.validation, split.test)
        )
    else:
        train, validation, test = split.train, split.validation, split.test
        stats = None
    return PreparedData(ds, split, train, validation, test, stats)


def cmd_split(config: RunConfig) -> sgsvp_data.DatasetSplit:
    """Always re-splits, overwriting any existing manifest."""
    _makedirs(config)
    ds = _load_dataset(config)
    split = sgsvp_data.stratified_split(ds, config.split_spec())
    sgsvp_data.write_split_manifest(config.output_dirname, split)
    return split


def _print_trial(record: sgsvp_tuning.TrialRecord):
    params = (
        f"delta1={record.delta1:.4g} delta2={record.delta2:.4g} "
        f"alpha={record.alpha:.4g}"
    )
    if record.ok:
        print(
            f"{params}: balanced accuracy {record.report.percentages()[0]}, "
            f"{record.n_selected} features"
        )
    else:
        print(f"{params}: failed ({record.error})")


def write_best_settings(path, config: RunConfig, best: sgsvp_solver.PgdConfig):
    lines = [
        "# Parameters chosen by `sgsvp tune`",
        "{",
        f'    "penalty": {config.penalty!r},',
        f'    "q": {best.q!r},',
        f'    "epsilon": {best.epsilon!r},',
        f'    "alpha": {best.alpha!r},',
        f'    "delta1": {best.delta1!r},',
        f'    "delta2": {best.delta2!r},',
        "}",
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as outf:
        outf.write("\n".join(lines) + "\n")


def cmd_tune(
    config: RunConfig,
) -> t.Tuple[sgsvp_solver.PgdConfig, t.List[sgsvp_tuning.TrialRecord]]:
    data = prepare_data(config)
    best, records = sgsvp_tuning.grid_search(
        data.train,
        data.validation,
        config.grid_spec(),
        config.penalty_kind(),
        base_config=config.pgd_config(),
        n_jobs=config.n_jobs,
        mask=config.mask,
        elbow_rule=config.elbow_rule,
        degenerate_fallback=config.degenerate_fallback,
        on_trial=_print_trial if config.verbose else None,
    )
    sgsvp_tuning.write_trial_log(config.path(TRIALS_FNAME), records)
    write_best_settings(config.path(BEST_SETTINGS_FNAME), config, best)
    return best, records


def _fit(config: RunConfig, train, pgd_config=None, kind=None):
    if pgd_config is None:
        pgd_config = config.pgd_config()
    if kind is None:
        kind = config.penalty_kind()
    C1, C2 = train.class_blocks()
    model = sgsvp_classifier.fit(
        C1,
        C2,
        pgd_config,
        kind,
        mask=config.mask,
        elbow_rule=config.elbow_rule,
        degenerate_fallback=config.degenerate_fallback,
        feature_names=train.feature_names,
    )
    if config.verbose:
        for side, trace in enumerate(model.traces, start=1):
            print(
                f"plane {side - 1}: {trace.iterations_run} iterations, "
                f"{'converged' if trace.converged else 'not converged'}, "
                f"objective {trace.final_objective:.6g}"
            )
    return model


def cmd_fit_eval(
    config: RunConfig,
) -> t.Tuple[
    sgsvp_classifier.GsvpSvmModel, t.Dict[str, sgsvp_metrics.ClassificationReport]
]:
    """Fits on the training set and reports on the validation and test
    sets."""
    data = prepare_data(config)
    model = _fit(config, data.train)
    reports = {
        name: sgsvp_metrics.evaluate(
            ds.y, sgsvp_classifier.predict_batch(model, ds.X)
        )
        for name, ds in (("validation", data.validation), ("test", data.test))
    }
    sgsvp_io.write_model(config.path(sgsvp_io.MODEL_FNAME), model)
    sgsvp_metrics.write_reports_csv(config.path(REPORTS_FNAME), reports)
    sgsvp_io.write_selection(
        config.path(sgsvp_io.SELECTION_FNAME), model.selection, model.feature_names
    )
    sgsvp_io.write_selected_names(
        config.path(sgsvp_io.SELECTED_NAMES_FNAME),
        model.selection,
        model.feature_names,
    )
    for side, trace in enumerate(model.traces, start=1):
        sgsvp_io.write_trace(config.path(sgsvp_io.TRACE_FNAME.format(side)), trace)
    if data.standardization is not None:
        sgsvp_data.write_standardization(
            config.path(STANDARDIZATION_FNAME),
            data.standardization,
            data.train.feature_names,
        )
    return model, reports


@dataclasses.dataclass
class StabilityResult:
    # one row per (epsilon, q): epsilon, q, penalty, n_selected, ...
    runs: pd.DataFrame
    # epsilon -> (q values, JSI matrix)
    jsi: t.Dict[float, t.Tuple[t.Tuple[float, ...], t.Any]]
    avg_jsi: t.Dict[float, float]


def cmd_stability(config: RunConfig) -> StabilityResult:
    """Fits one model per (epsilon, q) and compares the selected feature
    sets across q with the Jaccard similarity index."""
    if len(config.q_list) < 2:
        raise InputError(
            f"stability needs at least 2 values of q, got {config.q_list}"
        )
    data = prepare_data(config)
    rows = []
    jsi = {}
    avg = {}
    for eps in config.epsilons:
        selections = []
        for q in config.q_list:
            kind = sgsvp_solver.penalty_for_q(q)
            if config.verbose:
                print(f"epsilon={eps:.4g} q={q:g} ({kind.value})")
            model = _fit(
                config, data.train, config.pgd_config(q=q, epsilon=eps), kind
            )
            sel = model.selection
            selections.append(sel.selected_union)
            rows.append(
                {
                    "epsilon": eps,
                    "q": q,
                    "penalty": kind.value,
                    "n_selected": len(sel.selected_union),
                    "n_selected_1": len(sel.selected_1),
                    "n_selected_2": len(sel.selected_2),
                    "features": ";".join(
                        model.feature_names[i] for i in sel.selected_union
                    ),
                }
            )
        jsi[eps] = (config.q_list, sgsvp_metrics.jaccard_matrix(selections))
        avg[eps] = sgsvp_metrics.avg_jaccard(selections)
    result = StabilityResult(pd.DataFrame(rows), jsi, avg)
    write_stability(config, result)
    return result


def write_stability(config: RunConfig, result: StabilityResult):
    result.runs.to_csv(
        config.path(STABILITY_FNAME),
        index=False,
        lineterminator="\n",
        encoding="utf-8",
        float_format="%.17g",
    )
    pairs = []
    for eps, (qs, matrix) in result.jsi.items():
        for (i, q_a), (j, q_b) in itertools.product(enumerate(qs), repeat=2):
            pairs.append((eps, q_a, q_b, f"{matrix[i, j]:.4f}"))
    pd.DataFrame(pairs, columns=("epsilon", "q_a", "q_b", "jsi")).to_csv(
        config.path(STABILITY_JSI_FNAME),
        index=False,
        lineterminator="\n",
        encoding="utf-8",
        float_format="%.17g",
    )
    pd.DataFrame(
        [(eps, f"{val:.4f}") for eps, val in result.avg_jsi.items()],
        columns=("epsilon", "avg_jsi"),
    ).to_csv(
        config.path(STABILITY_AVG_FNAME),
        index=False,
        lineterminator="\n",
        encoding="utf-8",
        float_format="%.17g",
    )


def format_jsi_matrix(qs, matrix) -> str:
    header = ["q"] + [f"{q:g}" for q in qs]
    rows = [header] + [
        [f"{q:g}"] + [f"{matrix[i, j]:.4f}" for j in range(len(qs))]
        for i, q in enumerate(qs)
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in rows
    )


def cmd_plot(config: RunConfig) -> t.List[str]:
    """Draws the figures of a completed `fit` run (and of a `stability`
    run, if there is one).

    Raises:
        ArtifactError if the model or the traces are missing.
    """
    model = sgsvp_io.read_model(config.path(sgsvp_io.MODEL_FNAME))
    traces = [
        sgsvp_io.read_trace(config.path(sgsvp_io.TRACE_FNAME.format(side)))
        for side in (1, 2)
    ]
    out_dir = config.output_dirname
    paths = []
    paths += sgsvp_plot.plot_sorted_weights(
        out_dir, model.selection, model.feature_names
    )
    paths += sgsvp_plot.plot_objective_history(out_dir, traces)
    paths += sgsvp_plot.plot_relative_change(out_dir, traces)
    paths += sgsvp_plot.plot_top_features(out_dir, model, config.top_features)

    stability_path = config.path(STABILITY_FNAME)
    if os.path.exists(stability_path):
        try:
            counts = pd.read_csv(stability_path, encoding="utf-8")
            counts = counts.loc[:, ["epsilon", "q", "n_selected"]]
        except (KeyError, ValueError, pd.errors.ParserError) as exc:
            raise ArtifactError(f"{stability_path}: corrupt ({exc})") from exc
        paths += sgsvp_plot.plot_features_vs_q(out_dir, counts)

    if os.path.exists(config.path(sgsvp_data.SPLIT_MANIFEST)):
        try:
            data = prepare_data(config)
        except InputError as exc:
            warnings.warn(f"skipping the PCA embedding: {exc}")
        else:
            if data.train.X.shape[1] != model.n_features:
                raise ArtifactError(
                    f"model has {model.n_features} features but the dataset "
                    f"has {data.train.X.shape[1]}"
                )
            paths += sgsvp_plot.plot_pca_embedding(
                out_dir,
                data.train.X,
                data.train.y,
                model.selection.selected_union,
                data.train.class_names,
            )
    return paths
