import argparse
import sys
import typing as t

from . import sgsvp_commands
from . import sgsvp_data
from . import sgsvp_io
from . import sgsvp_metrics
from . import sgsvp_settings
from . import sgsvp_solver
from .sgsvp_errors import SgsvpError

ARGPARSE_DESCRIPTION = """Sparse generalized singular vectors for feature
selection and classification. Settings are read from the files passed with
-c/--config, then from SGSVP_<KEY> environment variables, then from the
flags below (later wins)."""

COMMANDS = {
    "split": "split the dataset into training, validation and test sets",
    "tune": "grid search over delta1, delta2 and alpha on the validation set",
    "fit": "fit on the training set and report on validation and test sets",
    "stability": "compare the features selected for several values of q",
    "plot": "draw the figures of a completed fit run",
}


def get_floats(in_str: str) -> t.Tuple[float, ...]:
    try:
        return tuple(float(bit) for bit in in_str.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(  # pylint: disable=raise-missing-from
            f"Didn't understand {in_str!r}. Pass a comma separated list with "
            "no spaces, e.g., '--q 0.1,0.5,1'"
        )


def _common_args():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "-c",
        "--config",
        nargs="*",
        default=(),
        help="path to settings files, each containing a Python dictionary",
    )
    parser.add_argument(
        "-e",
        "--eval",
        help="use 'eval()' rather than 'ast.literal_eval()' to parse settings",
        action="store_true",
    )
    parser.add_argument("--dataset", help="path to the dataset CSV file")
    parser.add_argument("--seed", type=int)
    parser.add_argument(
        "--q",
        type=get_floats,
        help=(
            "a comma-separated list of values of q; a single value also "
            "sets q for 'fit' and 'tune'"
        ),
    )
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--delta1", type=float)
    parser.add_argument("--delta2", type=float)
    parser.add_argument("--maxiter", type=int)
    parser.add_argument(
        "--penalty", choices=[kind.value for kind in sgsvp_solver.PenaltyKind]
    )
    parser.add_argument(
        "--no-standardize",
        dest="standardize",
        action="store_const",
        const=False,
        help="don't standardize the features",
    )
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--jobs", type=int, help="worker processes for 'tune'")
    parser.add_argument(
        "-v", "--verbose", action="store_const", const=True, help="print more"
    )
    return parser


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=ARGPARSE_DESCRIPTION)
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_args()
    for name, help_str in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_str)
    return parser.parse_args(argv)


def cli_overrides(args) -> t.Dict[str, t.Any]:
    out = {
        "dataset_fname": args.dataset,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "delta1": args.delta1,
        "delta2": args.delta2,
        "maxiter": args.maxiter,
        "penalty": args.penalty,
        "standardize": args.standardize,
        "output_dirname": args.out,
        "n_jobs": args.jobs,
        "verbose": args.verbose,
    }
    if args.q is not None:
        out["q_list"] = args.q
        if len(args.q) == 1:
            out["q"] = args.q[0]
    return out


def _print_outputs(paths):
    print("The output files are:")
    for path in paths:
        print(path)


def run(config: sgsvp_settings.RunConfig, command: str):
    if command == "split":
        split = sgsvp_commands.cmd_split(config)
        print(sgsvp_data.format_split_summary(split))
        _print_outputs(
            [
                config.path(sgsvp_data.SPLIT_MANIFEST),
                config.path(sgsvp_data.SPLIT_SUMMARY),
            ]
        )
    elif command == "tune":
        best, records = sgsvp_commands.cmd_tune(config)
        n_failed = sum(not record.ok for record in records)
        print(
            f"{len(records)} grid points tried, {n_failed} failed. Best: "
            f"delta1={best.delta1!r} delta2={best.delta2!r} alpha={best.alpha!r}"
        )
        _print_outputs(
            [
                config.path(sgsvp_commands.TRIALS_FNAME),
                config.path(sgsvp_commands.BEST_SETTINGS_FNAME),
            ]
        )
    elif command == "fit":
        model, reports = sgsvp_commands.cmd_fit_eval(config)
        print(sgsvp_metrics.format_reports(reports))
        print(
            f"\n{len(model.selection.selected_union)} of {model.n_features} "
            "features selected:"
        )
        for i in model.selection.selected_union:
            print(f"    {model.feature_names[i]}")
        out = [
            sgsvp_io.MODEL_FNAME,
            sgsvp_commands.REPORTS_FNAME,
            sgsvp_io.SELECTION_FNAME,
            sgsvp_io.SELECTED_NAMES_FNAME,
            sgsvp_io.TRACE_FNAME.format(1),
            sgsvp_io.TRACE_FNAME.format(2),
        ]
        if config.standardize:
            out.append(sgsvp_commands.STANDARDIZATION_FNAME)
        _print_outputs([config.path(fname) for fname in out])
    elif command == "stability":
        result = sgsvp_commands.cmd_stability(config)
        for eps, (qs, matrix) in result.jsi.items():
            print(f"epsilon = {eps:.4g}")
            print(sgsvp_commands.format_jsi_matrix(qs, matrix))
            print(f"Avg. JSI: {result.avg_jsi[eps]:.4f}\n")
        _print_outputs(
            [
                config.path(fname)
                for fname in (
                    sgsvp_commands.STABILITY_FNAME,
                    sgsvp_commands.STABILITY_JSI_FNAME,
                    sgsvp_commands.STABILITY_AVG_FNAME,
                )
            ]
        )
    elif command == "plot":
        _print_outputs(sgsvp_commands.cmd_plot(config))


def main(argv=None):
    args = parse_args(argv)
    print("sgsvp: sparse generalized singular vectors")
    print("==========================================\n")
    try:
        config = sgsvp_settings.RunConfig.from_sources(
            settings_paths=args.config or (),
            use_eval=args.eval,
            cli_overrides=cli_overrides(args),
        )
        run(config, args.command)
    except SgsvpError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        sys.exit(exc.exit_status)


if __name__ == "__main__":
    main()
