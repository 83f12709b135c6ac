"""Provides the RunConfig object holding every setting of an sgsvp run.
"""

import ast
import dataclasses
import os
import typing
import warnings

from . import sgsvp_data
from . import sgsvp_select
from . import sgsvp_solver
from . import sgsvp_tuning
from .sgsvp_errors import InputError

ENV_PREFIX = "SGSVP_"


def read_settings_files_into_dict(settings_paths, use_eval, verbose=True):
    """Reads one Python dict literal from each file; later files win, and
    nested dicts are merged."""

    def _merge(dict1, dict2):
        for key, val in dict2.items():
            if (
                isinstance(val, dict)
                and key in dict1
                and isinstance(dict1[key], dict)
            ):
                dict2[key] = _merge(dict1[key], val)
        return {**dict1, **dict2}

    out = {}
    for user_settings_path in settings_paths:
        if verbose:
            print(f"Reading settings from {user_settings_path}")
        if not os.path.exists(user_settings_path):
            raise InputError(f"settings file {user_settings_path} does not exist")
        with open(user_settings_path, "r", encoding="utf-8") as inf:
            try:
                if use_eval:
                    user_settings = eval(inf.read())  # pylint: disable=eval-used
                else:
                    user_settings = ast.literal_eval(inf.read())
            except (ValueError, SyntaxError) as exc:
                raise InputError(
                    f"settings file {user_settings_path} is not a Python dict "
                    f"literal: {exc}"
                ) from exc
        if not isinstance(user_settings, dict):
            raise InputError(
                f"settings file {user_settings_path} does not contain a dict"
            )
        out = _merge(out, user_settings)
    return out


def read_env_overrides(environ=None) -> typing.Dict[str, typing.Any]:
    """Collects SGSVP_<KEY> variables for every RunConfig field. Values are
    parsed as Python literals where possible, otherwise kept as strings."""
    if environ is None:
        environ = os.environ
    out = {}
    for field in dataclasses.fields(RunConfig):
        name = ENV_PREFIX + field.name.upper()
        if name not in environ:
            continue
        raw = environ[name]
        try:
            out[field.name] = ast.literal_eval(raw)
        except (ValueError, SyntaxError):
            out[field.name] = raw
    return out


@dataclasses.dataclass
class RunConfig:
    """Settings for an sgsvp run.

    Settings are read from (later wins): these defaults, the settings files
    passed with `--config`, `SGSVP_<KEY>` environment variables (e.g.,
    `SGSVP_SEED=7`), and command-line flags. The defaults reproduce the
    breast cancer l1 run.

    Keyword args:

        General
        =======

        seed: int. Seeds the stratified split and the "seeded-gaussian"
            initial iterate.
            Default: 42
        verbose: bool. If True, print a line for every grid-search trial and
            every solve.
            Default: False
        n_jobs: int. Number of worker processes for the grid search.
            Default: 1

        Data
        ====

        dataset_fname: str. Path to a CSV file with a header row. Comma and
            semicolon delimiters are both recognized.
            Default: "data/breast_cancer.csv"
        label_column: str. Name of the column holding the class labels.
            Default: "diagnosis"
        positive_label: str. Label value of Class 1. The other label value
            is Class 0.
            Default: "M"
        drop_columns: tuple of str. Columns that are not features (e.g., an
            identifier). Columns that are entirely empty are always dropped.
            Default: ("id",)
        train_fraction: float in (0, 1). Fraction of each class used for
            training.
            Default: 0.7
        holdout_val_fraction: float in (0, 1). Fraction of the remaining
            samples of each class used for validation; the rest are the test
            set.
            Default: 0.6
        standardize: bool. If True, every feature is centred and scaled with
            the mean and standard deviation of the training set.
            Default: True

        Solver
        ======

        penalty: str. One of
            - "l1": soft-thresholding.
            - "lq": weighted-l2 surrogate of the lq quasi-norm; needs q < 1.
            - "weighted-l1": the same surrogate with q = 1.
            Default: "l1"
        q: float in (0, 1].
            Default: 1.0
        epsilon: float > 0. Smoothing parameter of the lq surrogate.
            Default: 10 ** -2.5
        alpha: float > 0. Step size.
            Default: 1e-3
        delta1, delta2: float > 0. Regularization of plane 0 and plane 1.
            Default: 20627 / 23750
        maxiter: int >= 1.
            Default: 10000
        tol: float >= 0. The solver stops once the relative change of the
            objective is below `tol`.
            Default: 1e-4
        init: str. Initial iterate: "ones-unit-norm" or "seeded-gaussian".
            Default: "ones-unit-norm"
        mask: bool. If False, no feature selection is done and every feature
            is kept.
            Default: True
        elbow_rule: str. "per-vector" keeps, for each plane, the features
            before its own elbow; "smallest-x" keeps the same number of
            features (the smaller of the two elbows) for both planes.
            Default: "per-vector"
        degenerate_fallback: bool. When a sorted weight curve has no elbow
            (it is a straight line, or there are fewer than 3 features),
            keep all features of that plane (True) or none (False).
            Default: True

        Grid search
        ===========

        delta1_grid, delta2_grid: tuple of floats. Values tried by
            `sgsvp tune`. If empty, 12 logarithmically spaced values in
            [1e-4, 1] (for delta1) and [2e-4, 1] (for delta2) are used.
            Default: ()
        alpha_base: float > 0. The step sizes tried are
            alpha_base * 10 ** e for e in `alpha_exponents`...
            Default: 1.0
        alpha_exponents: tuple of floats.
            Default: (-0.5, -1.0, -1.5, -2.0, -2.5, -3.0, -3.5)
        alpha_grid: tuple of floats. ...unless `alpha_grid` is nonempty, in
            which case exactly these step sizes are tried.
            Default: ()

        Stability
        =========

        q_list: tuple of floats in (0, 1]. Values of q compared by
            `sgsvp stability`. q < 1 uses the "lq" penalty, q = 1 the
            "weighted-l1" penalty.
            Default: (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
        epsilon_list: tuple of floats. Smoothing parameters for
            `sgsvp stability`. If empty, only `epsilon` is used.
            Default: ()

        Output
        ======

        output_dirname: str. Directory for every file written by the run.
            Created if it doesn't exist.
            Default: "sgsvp_output"
        top_features: int. Number of features shown in the top features
            plot.
            Default: 10
    """

    # General
    seed: int = 42
    verbose: bool = False
    n_jobs: int = 1

    # Data
    dataset_fname: str = "data/breast_cancer.csv"
    label_column: str = "diagnosis"
    positive_label: str = "M"
    drop_columns: typing.Tuple[str, ...] = ("id",)
    train_fraction: float = 0.7
    holdout_val_fraction: float = 0.6
    standardize: bool = True

    # Solver
    penalty: str = "l1"
    q: float = 1.0
    epsilon: float = sgsvp_solver.DEFAULT_EPSILON
    alpha: float = 1e-3
    delta1: float = sgsvp_solver.DEFAULT_DELTA
    delta2: float = sgsvp_solver.DEFAULT_DELTA
    maxiter: int = 10_000
    tol: float = 1e-4
    init: str = "ones-unit-norm"
    mask: bool = True
    elbow_rule: str = "per-vector"
    degenerate_fallback: bool = True

    # Grid search
    delta1_grid: typing.Tuple[float, ...] = ()
    delta2_grid: typing.Tuple[float, ...] = ()
    alpha_base: float = 1.0
    alpha_exponents: typing.Tuple[float, ...] = sgsvp_tuning.DEFAULT_ALPHA_EXPONENTS
    alpha_grid: typing.Tuple[float, ...] = ()

    # Stability
    q_list: typing.Tuple[float, ...] = (
        0.1,
        0.2,
        0.3,
        0.4,
        0.5,
        0.6,
        0.7,
        0.8,
        0.9,
        1.0,
    )
    epsilon_list: typing.Tuple[float, ...] = ()

    # Output
    output_dirname: str = "sgsvp_output"
    top_features: int = 10

    def __post_init__(self):
        for name in (
            "drop_columns",
            "delta1_grid",
            "delta2_grid",
            "alpha_exponents",
            "alpha_grid",
            "q_list",
            "epsilon_list",
        ):
            val = getattr(self, name)
            if isinstance(val, (str, int, float)):
                val = (val,)
            setattr(self, name, tuple(val))
        self.positive_label = str(self.positive_label)
        for name in ("dataset_fname", "output_dirname"):
            setattr(
                self,
                name,
                os.path.abspath(
                    os.path.expandvars(os.path.expanduser(getattr(self, name)))
                ),
            )
        if self.penalty not in [kind.value for kind in sgsvp_solver.PenaltyKind]:
            raise InputError(
                f"unknown penalty {self.penalty!r}; expected one of "
                f"{[kind.value for kind in sgsvp_solver.PenaltyKind]}"
            )
        if self.elbow_rule not in sgsvp_select.ELBOW_RULES:
            raise InputError(
                f"unknown elbow_rule {self.elbow_rule!r}; expected one of "
                f"{sgsvp_select.ELBOW_RULES}"
            )
        if self.penalty == "lq" and not self.q < 1:
            raise InputError(
                "penalty 'lq' needs q < 1; use penalty 'weighted-l1' for q = 1"
            )
        if not all(0 < q <= 1 for q in self.q_list):
            raise InputError(f"q_list values must lie in (0, 1]: {self.q_list}")
        if not all(eps > 0 for eps in self.epsilon_list):
            raise InputError("epsilon_list values must be positive")
        if int(self.n_jobs) != self.n_jobs or self.n_jobs < 1:
            raise InputError("n_jobs must be a positive integer")
        if self.top_features < 1:
            raise InputError("top_features must be positive")
        if self.penalty == "l1" and self.q != 1:
            warnings.warn(f"q={self.q} has no effect with the l1 penalty")
        # builds (and so validates) the value objects
        self.pgd_config()
        self.split_spec()
        self.grid_spec()

    @classmethod
    def from_sources(
        cls,
        settings_paths=(),
        use_eval=False,
        cli_overrides=None,
        environ=None,
        verbose=True,
    ) -> "RunConfig":
        """Merges settings files, environment variables and command-line
        overrides (in that order of increasing precedence)."""
        kwargs = read_settings_files_into_dict(settings_paths, use_eval, verbose)
        kwargs.update(read_env_overrides(environ))
        if cli_overrides:
            kwargs.update(
                {key: val for key, val in cli_overrides.items() if val is not None}
            )
        known = {field.name for field in dataclasses.fields(cls)}
        unknown = sorted(set(kwargs) - known)
        if unknown:
            raise InputError(f"unknown settings: {', '.join(unknown)}")
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InputError(f"invalid settings: {exc}") from exc

    def penalty_kind(self) -> sgsvp_solver.PenaltyKind:
        return sgsvp_solver.PenaltyKind(self.penalty)

    def pgd_config(self, **changes) -> sgsvp_solver.PgdConfig:
        kwargs = dict(
            q=self.q,
            epsilon=self.epsilon,
            alpha=self.alpha,
            delta1=self.delta1,
            delta2=self.delta2,
            maxiter=self.maxiter,
            tol=self.tol,
            init=self.init,
            seed=self.seed,
        )
        kwargs.update(changes)
        return sgsvp_solver.PgdConfig(**kwargs)

    def split_spec(self) -> sgsvp_data.SplitSpec:
        return sgsvp_data.SplitSpec(
            train_fraction=self.train_fraction,
            holdout_val_fraction=self.holdout_val_fraction,
            seed=self.seed,
        )

    def grid_spec(self) -> sgsvp_tuning.GridSpec:
        kwargs = dict(
            alpha_base=self.alpha_base,
            alpha_exponents=self.alpha_exponents,
            alpha_grid=self.alpha_grid,
            q=self.q,
            epsilon=self.epsilon,
        )
        if self.delta1_grid:
            kwargs["delta1_grid"] = self.delta1_grid
        if self.delta2_grid:
            kwargs["delta2_grid"] = self.delta2_grid
        return sgsvp_tuning.GridSpec(**kwargs)

    @property
    def epsilons(self) -> typing.Tuple[float, ...]:
        return self.epsilon_list or (self.epsilon,)

    def path(self, fname: str) -> str:
        return os.path.join(self.output_dirname, fname)
