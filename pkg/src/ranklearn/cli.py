"""Command line front end.

Subcommands: gen-data, train, predict, eval, cv, noise-sweep,
mallows-sweep, selftest. All outputs are CSV, written to stdout or to
``--out``. Exit codes: 0 on success, 2 on an input or validation
problem, 1 on an internal error. The default seed comes from the
``RANKLEARN_SEED`` environment variable when set, and any flag can also
be supplied through ``--config FILE`` holding ``key=value`` lines
(flag names without the leading dashes, dashes may be written as-is or
as underscores); explicit flags win over the config file.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import evaluation, learners, oracles
from .datasets import dumps_dataset, load_dataset, save_dataset
from .learners import LearnerSpec

__all__ = ["main", "build_parser"]


def _default_seed() -> int:
    return int(os.environ.get("RANKLEARN_SEED", "0"))


def _parse_noise(text: str) -> oracles.NoiseSpec:
    if text == "none":
        return oracles.NoiseSpec.none()
    kind, _, value = text.partition(":")
    if kind == "gaussian":
        return oracles.NoiseSpec.gaussian(float(value))
    if kind == "mallows":
        return oracles.NoiseSpec.mallows(float(value))
    raise ValueError(f"unknown noise spec {text!r} (use none, gaussian:STD, mallows:THETA)")


def _parse_floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def _learner_spec(args) -> LearnerSpec:
    if args.learner in learners.PRESETS and not args.raw_learner:
        base = learners.PRESETS[args.learner]
    else:
        base = LearnerSpec(args.learner)
    overrides = {}
    for key in ("honest", "max_levels", "max_nodes", "max_depth", "leaf_cap", "n_trees", "subsample"):
        value = getattr(args, key, None)
        if value is not None and value is not False:
            overrides[key] = value
    if getattr(args, "forest_criterion", None):
        overrides["forest_criterion"] = args.forest_criterion
    from dataclasses import replace

    return replace(base, **overrides)


def _add_learner_flags(p: argparse.ArgumentParser):
    p.add_argument("--learner", default="forest",
                   help="preset (tree-full, tree-shallow, level-splits-full, forest, ovo-stump) "
                        "or raw kind (level-splits, breiman, forest, ovo-stump)")
    p.add_argument("--raw-learner", action="store_true", help="treat --learner as a raw kind")
    p.add_argument("--honest", action="store_true", default=None)
    p.add_argument("--max-levels", type=int, dest="max_levels")
    p.add_argument("--max-nodes", type=int, dest="max_nodes")
    p.add_argument("--max-depth", type=int, dest="max_depth")
    p.add_argument("--leaf-cap", type=int, dest="leaf_cap")
    p.add_argument("--n-trees", type=int, dest="n_trees")
    p.add_argument("--subsample", type=int)
    p.add_argument("--forest-criterion", dest="forest_criterion", choices=["breiman", "level-splits"])


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--config", help="key=value file providing flag defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ranklearn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic ranking dataset")
    p.add_argument("--kind", choices=["complete", "incomplete", "partial"], default="complete")
    p.add_argument("--d", type=int, default=30)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--r", type=int, default=5)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--target-seed", type=int, default=None,
                   help="seed for the sparse target (default: the run seed)")
    p.add_argument("--noise", default="none", help="none | gaussian:STD | mallows:THETA")
    p.add_argument("--feature-bias", help="comma list of per-coordinate one-probabilities")
    p.add_argument("--survival", help="incomplete: survival probability, scalar or comma list")
    p.add_argument("--survival-coord", type=int, help="incomplete: coordinate for the threshold rule")
    p.add_argument("--survival-on", help="incomplete threshold rule: probabilities when the coordinate is 1")
    p.add_argument("--survival-off", help="incomplete threshold rule: probabilities when it is 0")
    p.add_argument("--blocks", help="partial: fixed block count, or 'uniform', or comma weights")
    _add_common(p)

    p = sub.add_parser("train", help="fit a model and write it to a file")
    p.add_argument("--data", required=True)
    p.add_argument("--model-out", required=True)
    _add_learner_flags(p)
    _add_common(p)

    p = sub.add_parser("predict", help="predict rankings for a dataset's features")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    _add_common(p)

    p = sub.add_parser("eval", help="mean KT of a model against a dataset's labels")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    _add_common(p)

    p = sub.add_parser("cv", help="repeated k-fold cross-validation")
    p.add_argument("--data", required=True)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--folds", type=int, default=10)
    _add_learner_flags(p)
    _add_common(p)

    p = sub.add_parser("noise-sweep", help="score-noise grid study")
    p.add_argument("--d", type=int, default=30)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--r", type=int, default=5)
    p.add_argument("--n-train", type=int, default=4000)
    p.add_argument("--n-test", type=int, default=1000)
    p.add_argument("--stddev-grid", default=",".join(str(v) for v in evaluation.DEFAULT_GAUSSIAN_GRID))
    p.add_argument("--skip-noiseless", action="store_true",
                   help="do not prepend the zero-noise point")
    p.add_argument("--learners", default="tree-full,tree-shallow,forest")
    _add_common(p)

    p = sub.add_parser("mallows-sweep", help="Mallows vs alpha-matched Gaussian study")
    p.add_argument("--d", type=int, default=30)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--r", type=int, default=5)
    p.add_argument("--n-train", type=int, default=4000)
    p.add_argument("--n-test", type=int, default=1000)
    p.add_argument("--theta-grid", default=",".join(str(v) for v in evaluation.DEFAULT_THETA_GRID))
    p.add_argument("--alpha-tol", type=float, default=0.01)
    p.add_argument("--learners", default="tree-full")
    _add_common(p)

    p = sub.add_parser("selftest", help="run the quick built-in checks")
    _add_common(p)
    return parser


def _apply_config(parser, argv):
    """Let a --config file supply defaults for anything not given explicitly."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    path = argv[at + 1]
    pairs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            pairs[key.strip().replace("_", "-")] = value.strip()
    extra = []
    for key, value in pairs.items():
        flag = f"--{key}"
        if flag in argv:
            continue
        if value.lower() in ("true", "1", "yes") and key in ("honest", "raw-learner", "skip-noiseless"):
            extra.append(flag)
        else:
            extra.extend([flag, value])
    # insert config-derived flags right after the subcommand so explicit
    # flags (which argparse reads later) win on conflicts
    return argv[:1] + extra + argv[1:]


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _learner_list(names: str):
    specs = []
    for name in names.split(","):
        name = name.strip()
        if not name:
            continue
        if name not in learners.PRESETS:
            raise ValueError(f"unknown learner preset {name!r}")
        specs.append(learners.PRESETS[name])
    if not specs:
        raise ValueError("no learners selected")
    return specs


def _cmd_gen_data(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    target_seed = args.target_seed if args.target_seed is not None else seed
    m = oracles.make_sparse_target(args.d, args.k, args.r, target_seed)
    noise = _parse_noise(args.noise)
    bias = _parse_floats(args.feature_bias) if args.feature_bias else None
    if args.kind == "complete":
        if noise.kind == "mallows":
            clean = oracles.sample_complete(m, oracles.NoiseSpec.none(), args.n, seed, bias)
            data = oracles.mallows_noisy_copy(clean, noise.theta, seed ^ 0x4D4E)
        else:
            data = oracles.sample_complete(m, noise, args.n, seed, bias)
    elif args.kind == "incomplete":
        if args.survival_coord is not None:
            survival = oracles.SurvivalSpec.threshold(
                args.survival_coord,
                _parse_floats(args.survival_on or "1"),
                _parse_floats(args.survival_off or "1"),
            )
        else:
            survival = oracles.SurvivalSpec.constant(_parse_floats(args.survival or "0.7"))
        if noise.kind == "mallows":
            raise ValueError("mallows noise applies to complete rankings only")
        data = oracles.sample_incomplete(m, noise, survival, args.n, seed, bias)
    else:
        blocks = args.blocks or "uniform"
        if blocks == "uniform":
            spec = oracles.PartitionSpec(args.k, None)
        elif "," in blocks:
            spec = oracles.PartitionSpec(args.k, np.asarray(_parse_floats(blocks)))
        else:
            spec = oracles.PartitionSpec(args.k, int(blocks))
        if noise.kind == "mallows":
            raise ValueError("mallows noise applies to complete rankings only")
        data = oracles.sample_partial(m, noise, spec, args.n, seed, bias)
    return dumps_dataset(data)


def _cmd_train(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    data = load_dataset(args.data)
    spec = _learner_spec(args)
    fitted = learners.fit_ranking_model(data, spec, seed)
    with open(args.model_out, "w", encoding="utf-8") as fh:
        fh.write(fitted.to_text())
    return f"status,model\nok,{args.model_out}\n"


def _load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return learners.load_fitted(fh.read())


def _cmd_predict(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    data = load_dataset(args.data)
    fitted = _load_model(args.model)
    rng = np.random.default_rng(seed)
    pos = fitted.predict_positions(data.features, rng)
    k = pos.shape[1]
    lines = [",".join(f"rank_{i + 1}" for i in range(k))]
    for row in pos:
        lines.append(",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def _cmd_eval(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    data = load_dataset(args.data)
    fitted = _load_model(args.model)
    rng = np.random.default_rng(seed)
    pos = fitted.predict_positions(data.features, rng)
    score = evaluation.mean_kt_against(data, pos)
    return f"n,mean_kt\n{data.n},{score!r}\n"


def _cmd_cv(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    data = load_dataset(args.data)
    report = evaluation.cross_validate(data, _learner_spec(args), args.repetitions, args.folds, seed)
    return report.to_csv()


def _cmd_noise_sweep(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    m = oracles.make_sparse_target(args.d, args.k, args.r, seed)
    grid = [] if args.skip_noiseless else [oracles.NoiseSpec.none()]
    grid += [oracles.NoiseSpec.gaussian(v) for v in _parse_floats(args.stddev_grid)]
    rows = evaluation.noise_sweep(m, grid, _learner_list(args.learners), args.n_train, args.n_test, seed)
    return evaluation.rows_to_csv(rows)


def _cmd_mallows_sweep(args) -> str:
    seed = args.seed if args.seed is not None else _default_seed()
    m = oracles.make_sparse_target(args.d, args.k, args.r, seed)
    rows = evaluation.mallows_vs_gaussian(
        m,
        _parse_floats(args.theta_grid),
        _learner_list(args.learners),
        args.n_train,
        args.n_test,
        seed,
        alpha_tol=args.alpha_tol,
    )
    return evaluation.rows_to_csv(rows)


def _cmd_selftest(args) -> str:
    from .selftest import run_selftest

    seed = args.seed if args.seed is not None else _default_seed()
    lines, ok = run_selftest(seed)
    if not ok:
        raise RuntimeError("selftest failed:\n" + "\n".join(lines))
    return "check,status\n" + "".join(f"{name},ok\n" for name in lines)


_COMMANDS = {
    "gen-data": _cmd_gen_data,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "eval": _cmd_eval,
    "cv": _cmd_cv,
    "noise-sweep": _cmd_noise_sweep,
    "mallows-sweep": _cmd_mallows_sweep,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and exit 1
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
