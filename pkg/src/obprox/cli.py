"""Command-line entry points: run experiments, generate synthetic data,
inspect datasets.

``run`` accepts an optional JSON config file; any flag passed on the
command line overrides the file. Exit status is 0 on success, 2 on bad
input (unknown solver, unreadable file, malformed dataset).
"""

import argparse
import json
import sys

import numpy as np

from .bench import run_experiment, spec_from_dict
from .dataio import LibsvmParseError, load_dataset, to_libsvm
from .run import SOLVER_METHODS
from .synthetic import make_synthetic


def build_parser():
    parser = argparse.ArgumentParser(
        prog="obprox",
        description="Stochastic l1-regularized logistic regression benchmark runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one or more solvers on a dataset")
    run_p.add_argument("--config", help="JSON experiment config; flags override it")
    run_p.add_argument("--dataset", help="LIBSVM file (.gz accepted)")
    run_p.add_argument(
        "--solver",
        action="append",
        dest="solvers",
        metavar="NAME",
        help=f"solver to run, repeatable (default: all of {', '.join(SOLVER_METHODS)})",
    )
    run_p.add_argument("--epochs", type=int)
    run_p.add_argument("--lambda", dest="lam", help='l1 weight, a float or "1/N"')
    run_p.add_argument("--batch-size", dest="batch_size", help='count or "paper"')
    run_p.add_argument("--alpha0", type=float)
    run_p.add_argument("--decay", type=float)
    run_p.add_argument("--np", dest="n_p", help='proximal-phase iterations or "inf"')
    run_p.add_argument("--no", dest="n_o", help='orthant-phase iterations or "inf"')
    run_p.add_argument("--rda-gamma", dest="rda_gamma", type=float)
    run_p.add_argument("--svrg-inner", dest="svrg_inner", type=int)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--out-dir", dest="out_dir")
    run_p.add_argument("--feature-count", dest="feature_count", type=int)
    run_p.add_argument(
        "--no-plots", action="store_true", help="skip figure rendering (CSV/JSON only)"
    )

    synth_p = sub.add_parser("synth", help="generate a planted sparse logistic dataset")
    synth_p.add_argument("--features", type=int, default=50)
    synth_p.add_argument("--examples", type=int, default=1000)
    synth_p.add_argument("--sparsity", type=int, default=5)
    synth_p.add_argument("--seed", type=int, default=0)
    synth_p.add_argument("--out", required=True, help="output LIBSVM path")

    inspect_p = sub.add_parser("inspect", help="print dataset statistics")
    inspect_p.add_argument("--dataset", required=True)
    inspect_p.add_argument("--feature-count", dest="feature_count", type=int)
    return parser


def _cmd_run(args):
    raw = {}
    if args.config:
        with open(args.config) as handle:
            raw = json.load(handle)
    spec = spec_from_dict(
        raw,
        dataset=args.dataset,
        solvers=args.solvers,
        epochs=args.epochs,
        lam=args.lam,
        batch_size=args.batch_size,
        alpha0=args.alpha0,
        decay=args.decay,
        n_p=args.n_p,
        n_o=args.n_o,
        rda_gamma=args.rda_gamma,
        svrg_inner=args.svrg_inner,
        seed=args.seed,
        out_dir=args.out_dir,
        feature_count=args.feature_count,
        plots=False if args.no_plots else None,
    )
    if spec.dataset is None:
        raise ValueError("no dataset given (use --dataset or a config file)")
    report = run_experiment(spec)
    with open(report.paths["comparison"]["txt"]) as handle:
        print(handle.read(), end="")
    print(f"reports written to {report.out_dir}")
    return 0


def _cmd_synth(args):
    dataset, truth = make_synthetic(
        n=args.features, num_examples=args.examples, sparsity=args.sparsity, seed=args.seed
    )
    with open(args.out, "w") as handle:
        handle.write(to_libsvm(dataset))
    truth_path = args.out + ".truth.json"
    with open(truth_path, "w") as handle:
        json.dump(truth.to_json_dict(), handle)
        handle.write("\n")
    print(f"wrote {dataset.num_examples} examples x {dataset.num_features} features to {args.out}")
    print(f"planted weights ({args.sparsity} nonzero) in {truth_path}")
    return 0


def _cmd_inspect(args):
    dataset = load_dataset(args.dataset, num_features=args.feature_count)
    nnz = dataset.features.nnz
    total = dataset.num_examples * dataset.num_features
    values = dataset.features.data
    print(f"examples (N):      {dataset.num_examples}")
    print(f"features (n):      {dataset.num_features}")
    print(f"nonzero entries:   {nnz} ({100.0 * nnz / total:.2f}%)")
    if nnz:
        print(f"value range:       [{values.min():g}, {values.max():g}]")
    positive = int(np.sum(dataset.labels > 0))
    print(f"labels:            +1 x {positive}, -1 x {dataset.num_examples - positive}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "synth": _cmd_synth, "inspect": _cmd_inspect}
    try:
        return handlers[args.command](args)
    except (OSError, ValueError, LibsvmParseError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
