"""Command-line interface: gen, train, predict, eval, benchmark.

Exit codes: 0 success, 2 validation error, 3 numerical failure. Every
output file embeds the resolved configuration and seed, and identical
invocations produce byte-identical files.
"""

import argparse
import sys

import numpy as np

from hypersvm import data as dataio
from hypersvm.data import LabeledDataset
from hypersvm.errors import NumericalError, ValidationError
from hypersvm.evaluation import _derive_seed, cross_validate, evaluate, paired_t_test
from hypersvm.multiclass import OvaModel, ova_predict, ova_train
from hypersvm.solver import TrainConfig
from hypersvm.synth import GaussianMixtureSpec, gen_gaussian_mixture, gen_ps_dataset

METHODS = ("hyperbolic", "euclidean")


def _add_config_args(parser):
    parser.add_argument("--C", type=float, default=1.0)
    parser.add_argument("--max-iters", type=int, default=10000)
    parser.add_argument("--step-size", type=float, default=0.01)
    parser.add_argument("--step-decay", type=float, default=0.01)
    parser.add_argument("--feas-eps", type=float, default=1e-8)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--seed", type=int, default=0)


def _config_from_args(args, C=None, seed=None):
    return TrainConfig(
        C=args.C if C is None else C,
        max_iters=args.max_iters,
        step_size=args.step_size,
        step_decay=args.step_decay,
        feas_eps=args.feas_eps,
        tol=args.tol,
        seed=args.seed if seed is None else seed,
    )


def _config_dict(config):
    return {
        "max_iters": config.max_iters,
        "step_size": config.step_size,
        "step_decay": config.step_decay,
        "feas_eps": config.feas_eps,
        "tol": config.tol,
    }


def _parse_size_range(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError("size range must be 'lo,hi'")
    return int(parts[0]), int(parts[1])


def cmd_gen(args):
    if args.kind == "gaussian":
        spec = GaussianMixtureSpec(
            num_classes=args.classes,
            points_per_class=args.per_class,
            centroid_variance=args.centroid_var,
            component_variance=args.component_var,
            seed=args.seed,
        )
        dataset = gen_gaussian_mixture(spec)
    else:
        dataset = gen_ps_dataset(
            N=args.nodes,
            avg_degree=args.avg_degree,
            gamma=args.gamma,
            num_labels=args.labels,
            size_range=_parse_size_range(args.size_range),
            propagate_prob=args.prop,
            seed=args.seed,
        )
    dataset.save(args.out)
    print(f"wrote {dataset.n_points} points, {dataset.n_classes} classes -> {args.out}")
    return 0


def cmd_train(args):
    dataset = LabeledDataset.load(args.dataset)
    config = _config_from_args(args)
    model = ova_train(dataset, config, args.method)
    doc = model.to_file_dict()
    doc["config"] = {"C": config.C, "seed": config.seed, **_config_dict(config)}
    dataio.save_json(doc, args.out)
    for cid in model.excluded:
        print(f"warning: class {cid} has no positives, skipped", file=sys.stderr)
    for cid in model.flagged:
        print(f"warning: class {cid} trained from sparse labels", file=sys.stderr)
    print(f"trained {args.method} model on {dataset.n_points} points -> {args.out}")
    return 0


def cmd_predict(args):
    model = OvaModel.from_file_dict(dataio.load_json(args.model))
    dataset = LabeledDataset.load(args.dataset)
    probs = ova_predict(model, dataset)
    dataio.save_json(
        {
            "format": "hypersvm-predictions",
            "class_ids": list(model.class_ids),
            "probabilities": probs,
        },
        args.out,
    )
    print(f"wrote {probs.shape[0]}x{probs.shape[1]} probabilities -> {args.out}")
    return 0


def cmd_eval(args):
    model = OvaModel.from_file_dict(dataio.load_json(args.model))
    dataset = LabeledDataset.load(args.dataset)
    report = evaluate(model, dataset, seed=args.seed)
    doc = report.to_file_dict()
    doc["seed"] = args.seed
    dataio.save_json(doc, args.out)
    print(f"macro AUPR {report.macro_aupr:.4f}, macro AUROC {report.macro_auroc:.4f}")
    return 0


def _benchmark_datasets(args):
    if args.inputs:
        return [(path, LabeledDataset.load(path)) for path in args.inputs]
    datasets = []
    for i in range(args.num_datasets):
        seed = _derive_seed(args.seed, 1000 + i)
        if args.generator == "gaussian":
            ds = gen_gaussian_mixture(
                GaussianMixtureSpec(
                    num_classes=args.classes,
                    points_per_class=args.per_class,
                    centroid_variance=args.centroid_var,
                    component_variance=args.component_var,
                    seed=seed,
                )
            )
        else:
            ds = gen_ps_dataset(
                N=args.nodes,
                avg_degree=args.avg_degree,
                gamma=args.gamma,
                num_labels=args.labels,
                size_range=_parse_size_range(args.size_range),
                propagate_prob=args.prop,
                seed=seed,
            )
        datasets.append((f"{args.generator}-{i}", ds))
    return datasets


def cmd_benchmark(args):
    methods = tuple(args.methods.split(","))
    for m in methods:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r}")
    c_grid = [float(c) for c in args.c_grid.split(",")]
    if args.folds < 2:
        raise ValidationError("folds must be at least 2")
    config = _config_from_args(args, C=c_grid[0])
    datasets = _benchmark_datasets(args)
    if not datasets:
        raise ValidationError("no datasets to benchmark")
    per_dataset = []
    means = {m: [] for m in methods}
    for name, ds in datasets:
        results = cross_validate(
            ds,
            c_grid,
            methods=methods,
            folds=args.folds,
            trials=args.trials,
            seed=args.seed,
            config=config,
        )
        entry = {"dataset": name}
        for m in methods:
            entry[m] = results[m].to_file_dict()
            means[m].append(results[m].mean)
        per_dataset.append(entry)
    summary = {
        "format": "hypersvm-benchmark",
        "config": {
            "methods": list(methods),
            "c_grid": c_grid,
            "folds": args.folds,
            "trials": args.trials,
            "seed": args.seed,
            **_config_dict(config),
        },
        "datasets": per_dataset,
        "method_means": {m: float(np.mean(means[m])) for m in methods},
    }
    if len(methods) == 2 and len(datasets) >= 2:
        diffs = np.asarray(means[methods[0]]) - np.asarray(means[methods[1]])
        t, p = paired_t_test(diffs)
        summary["paired_test"] = {
            "order": f"{methods[0]} minus {methods[1]}",
            "differences": diffs,
            "mean_difference": float(np.mean(diffs)),
            "t_statistic": t,
            "one_sided_p": p,
        }
    dataio.save_json(summary, args.out)
    for m in methods:
        print(f"{m}: mean macro AUPR {summary['method_means'][m]:.4f}")
    if "paired_test" in summary:
        pt = summary["paired_test"]
        print(f"paired t = {pt['t_statistic']:.3f}, one-sided p = {pt['one_sided_p']:.3g}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hypersvm",
        description="Hyperbolic-space SVM training, evaluation and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic dataset")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    gg = gen_sub.add_parser("gaussian", help="hyperbolic Gaussian mixture")
    gg.add_argument("--classes", type=int, default=4)
    gg.add_argument("--per-class", type=int, default=100)
    gg.add_argument("--centroid-var", type=float, default=1.5)
    gg.add_argument("--component-var", type=float, default=1.0)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--out", required=True)
    gg.set_defaults(func=cmd_gen)
    gp = gen_sub.add_parser("ps", help="PS-model network with propagated labels")
    gp.add_argument("--nodes", type=int, default=500)
    gp.add_argument("--avg-degree", type=float, default=4.0)
    gp.add_argument("--gamma", type=float, default=2.25)
    gp.add_argument("--labels", type=int, default=10)
    gp.add_argument("--size-range", default="20,50")
    gp.add_argument("--prop", type=float, default=0.8)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--out", required=True)
    gp.set_defaults(func=cmd_gen)

    tr = sub.add_parser("train", help="train a one-vs-all model")
    tr.add_argument("dataset")
    tr.add_argument("--method", choices=METHODS, required=True)
    _add_config_args(tr)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="per-class probabilities for a dataset")
    pr.add_argument("model")
    pr.add_argument("dataset")
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("eval", help="evaluate a model on a labeled dataset")
    ev.add_argument("model")
    ev.add_argument("dataset")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--out", required=True)
    ev.set_defaults(func=cmd_eval)

    bm = sub.add_parser("benchmark", help="cross-validated method comparison")
    src = bm.add_mutually_exclusive_group(required=True)
    src.add_argument("--inputs", nargs="+", help="existing dataset files")
    src.add_argument("--generator", choices=("gaussian", "ps"))
    bm.add_argument("--num-datasets", type=int, default=20)
    bm.add_argument("--classes", type=int, default=4)
    bm.add_argument("--per-class", type=int, default=100)
    bm.add_argument("--centroid-var", type=float, default=1.5)
    bm.add_argument("--component-var", type=float, default=1.0)
    bm.add_argument("--nodes", type=int, default=500)
    bm.add_argument("--avg-degree", type=float, default=4.0)
    bm.add_argument("--gamma", type=float, default=2.25)
    bm.add_argument("--labels", type=int, default=10)
    bm.add_argument("--size-range", default="20,50")
    bm.add_argument("--prop", type=float, default=0.8)
    bm.add_argument("--methods", default="hyperbolic,euclidean")
    bm.add_argument("--c-grid", default="0.1,1,10")
    bm.add_argument("--folds", type=int, default=2)
    bm.add_argument("--trials", type=int, default=5)
    _add_config_args(bm)
    bm.add_argument("--out", required=True)
    bm.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
