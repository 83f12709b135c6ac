"""Grid search over (delta1, delta2, alpha), scored by validation balanced
accuracy.
"""
import collections
import concurrent.futures
import dataclasses
import itertools
import typing as t
import warnings

import numpy as np
import pandas as pd

from . import sgsvp_classifier
from . import sgsvp_data
from . import sgsvp_metrics
from . import sgsvp_solver
from .sgsvp_errors import ExhaustedGridError, InputError, ShapeError, SolverError

DEFAULT_ALPHA_EXPONENTS = (-0.5, -1.0, -1.5, -2.0, -2.5, -3.0, -3.5)
DEFAULT_GRID_POINTS = 12


def _default_delta1_grid():
    return tuple(float(v) for v in np.logspace(-4, 0, DEFAULT_GRID_POINTS))


def _default_delta2_grid():
    return tuple(
        float(v) for v in np.logspace(np.log10(2e-4), 0, DEFAULT_GRID_POINTS)
    )


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """Keyword args:
    delta1_grid, delta2_grid: regularization values to try for each plane.
    alpha_base: the step sizes tried are alpha_base * 10 ** e for each e
        in alpha_exponents...
    alpha_grid: ...unless alpha_grid is nonempty, in which case exactly these
        step sizes are tried.
    q, epsilon: fixed penalty parameters.
    """

    delta1_grid: t.Tuple[float, ...] = dataclasses.field(
        default_factory=_default_delta1_grid
    )
    delta2_grid: t.Tuple[float, ...] = dataclasses.field(
        default_factory=_default_delta2_grid
    )
    alpha_base: float = 1.0
    alpha_exponents: t.Tuple[float, ...] = DEFAULT_ALPHA_EXPONENTS
    alpha_grid: t.Tuple[float, ...] = ()
    q: float = 1.0
    epsilon: float = sgsvp_solver.DEFAULT_EPSILON

    def __post_init__(self):
        for name in ("delta1_grid", "delta2_grid", "alpha_exponents", "alpha_grid"):
            object.__setattr__(
                self, name, tuple(float(v) for v in getattr(self, name))
            )
        for name in ("delta1_grid", "delta2_grid"):
            vals = getattr(self, name)
            if not vals or not all(v > 0 for v in vals):
                raise InputError(f"{name} must be nonempty and positive")
        if not self.alpha_grid and not self.alpha_exponents:
            raise InputError("need alpha_exponents or alpha_grid")
        if not self.alpha_base > 0 or not all(a > 0 for a in self.alpha_grid):
            raise InputError("step sizes must be positive")

    @property
    def alphas(self) -> t.Tuple[float, ...]:
        if self.alpha_grid:
            return self.alpha_grid
        return tuple(self.alpha_base * 10 ** e for e in self.alpha_exponents)

    def points(self) -> t.List[t.Tuple[float, float, float]]:
        """(delta1, delta2, alpha) triples in grid order."""
        return list(itertools.product(self.delta1_grid, self.delta2_grid, self.alphas))


@dataclasses.dataclass
class TrialRecord:
    delta1: float
    delta2: float
    alpha: float
    report: t.Optional[sgsvp_metrics.ClassificationReport] = None
    n_selected_1: int = 0
    n_selected_2: int = 0
    n_selected: int = 0
    elbow_1: t.Optional[t.Tuple[int, float]] = None
    elbow_2: t.Optional[t.Tuple[int, float]] = None
    iterations: t.Tuple[int, int] = (0, 0)
    converged: t.Tuple[bool, bool] = (False, False)
    # message of the solver error for failed trials
    error: t.Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


_Task = collections.namedtuple(
    "_Task",
    "C1 C2 X_val y_val cfg kind mask elbow_rule degenerate_fallback",
)


def _run_trial(task: _Task) -> TrialRecord:
    record = TrialRecord(task.cfg.delta1, task.cfg.delta2, task.cfg.alpha)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            model = sgsvp_classifier.fit(
                task.C1,
                task.C2,
                task.cfg,
                task.kind,
                mask=task.mask,
                elbow_rule=task.elbow_rule,
                degenerate_fallback=task.degenerate_fallback,
            )
        y_pred = sgsvp_classifier.predict_batch(model, task.X_val)
    except SolverError as exc:
        record.error = f"{type(exc).__name__}: {exc}"
        return record
    sel = model.selection
    record.report = sgsvp_metrics.evaluate(task.y_val, y_pred)
    record.n_selected_1 = len(sel.selected_1)
    record.n_selected_2 = len(sel.selected_2)
    record.n_selected = len(sel.selected_union)
    record.elbow_1 = (sel.elbow_1.x, sel.elbow_1.y)
    record.elbow_2 = (sel.elbow_2.x, sel.elbow_2.y)
    record.iterations = tuple(trace.iterations_run for trace in model.traces)
    record.converged = tuple(trace.converged for trace in model.traces)
    return record


def _best_key(record: TrialRecord):
    return (record.report.balanced_accuracy, -record.n_selected, -record.alpha)


def grid_search(
    train: sgsvp_data.LabeledDataset,
    validation: sgsvp_data.LabeledDataset,
    grid: GridSpec,
    kind: sgsvp_solver.PenaltyKind,
    base_config: t.Optional[sgsvp_solver.PgdConfig] = None,
    n_jobs: int = 1,
    mask: bool = True,
    elbow_rule: str = "per-vector",
    degenerate_fallback: bool = True,
    on_trial: t.Optional[t.Callable[[TrialRecord], None]] = None,
) -> t.Tuple[sgsvp_solver.PgdConfig, t.List[TrialRecord]]:
    """Fits on `train` and scores on `validation` at every grid point.

    The best point has the highest validation balanced accuracy; ties go
    to fewer selected features, then to the smaller alpha, then to the
    earlier grid point. Trials whose fit raises a SolverError are recorded
    with their error and skipped.

    Keyword args:
        base_config: maxiter, tol, init and seed are taken from here.
        n_jobs: number of worker processes. Records are returned in grid
            order whatever the completion order.
        on_trial: called with every record, in grid order.

    Raises:
        ExhaustedGridError if every trial failed.
    """
    if train.X.shape[1] != validation.X.shape[1]:
        raise ShapeError(
            f"train has {train.X.shape[1]} features, validation "
            f"{validation.X.shape[1]}"
        )
    if base_config is None:
        base_config = sgsvp_solver.PgdConfig()
    C1, C2 = train.class_blocks()
    tasks = [
        _Task(
            C1,
            C2,
            validation.X,
            validation.y,
            dataclasses.replace(
                base_config,
                delta1=delta1,
                delta2=delta2,
                alpha=alpha,
                q=grid.q,
                epsilon=grid.epsilon,
            ),
            kind,
            mask,
            elbow_rule,
            degenerate_fallback,
        )
        for delta1, delta2, alpha in grid.points()
    ]
    if n_jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = pool.map(
                _run_trial, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))
            )
            records = []
            for record in results:
                records.append(record)
                if on_trial is not None:
                    on_trial(record)
    else:
        records = []
        for task in tasks:
            record = _run_trial(task)
            records.append(record)
            if on_trial is not None:
                on_trial(record)

    succeeded = [record for record in records if record.ok]
    if not succeeded:
        failures = collections.Counter(
            record.error.split(":", maxsplit=1)[0] for record in records
        )
        summary = ", ".join(f"{n} x {name}" for name, n in failures.items())
        raise ExhaustedGridError(
            f"all {len(records)} grid points failed ({summary})"
        )
    best = max(succeeded, key=_best_key)
    return (
        dataclasses.replace(
            base_config,
            delta1=best.delta1,
            delta2=best.delta2,
            alpha=best.alpha,
            q=grid.q,
            epsilon=grid.epsilon,
        ),
        records,
    )


TRIAL_LOG_COLUMNS = (
    ("delta1", "delta2", "alpha", "status")
    + sgsvp_metrics.REPORT_COLUMNS
    + (
        "n_selected",
        "n_selected_1",
        "n_selected_2",
        "elbow_1",
        "elbow_2",
        "iterations_1",
        "iterations_2",
        "converged_1",
        "converged_2",
        "error",
    )
)


def trial_log_frame(records: t.Sequence[TrialRecord]) -> pd.DataFrame:
    rows = []
    for record in records:
        if record.ok:
            report_cells = record.report.row()
            status = "ok"
        else:
            report_cells = ("",) * len(sgsvp_metrics.REPORT_COLUMNS)
            status = "failed"
        rows.append(
            (repr(record.delta1), repr(record.delta2), repr(record.alpha), status)
            + report_cells
            + (
                record.n_selected,
                record.n_selected_1,
                record.n_selected_2,
                "" if record.elbow_1 is None else record.elbow_1[0],
                "" if record.elbow_2 is None else record.elbow_2[0],
                record.iterations[0],
                record.iterations[1],
                record.converged[0],
                record.converged[1],
                record.error or "",
            )
        )
    return pd.DataFrame(rows, columns=TRIAL_LOG_COLUMNS)


def write_trial_log(path, records: t.Sequence[TrialRecord]):
    trial_log_frame(records).to_csv(
        path, index=False, lineterminator="\n", encoding="utf-8"
    )
