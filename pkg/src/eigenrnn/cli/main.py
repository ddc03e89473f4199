"""Command-line experiment runner.

Subcommands write CSV artifacts plus a ``run.json`` metadata file into the
output directory. Failures print one ``error: <Type>: <message>`` line to
stderr and exit with status 1 (status 2 for usage errors).
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .. import __version__
from ..analysis import (
    CurveBundle,
    average_curves,
    direct_recurrence,
    hidden_scatter,
    iir_reconstruct,
    recurrent_spectrum,
    write_average_csv,
    write_spectrum_csv,
)
from ..data import load_mnist_idx, mackey_glass, tomita_dataset
from ..errors import ConfigurationError, EigenRnnError
from ..initializers import parse_kind, spectrum_stats
from ..linalg import Rng, unique_moduli
from ..nets import TrainingDiverged, make_params, train
from . import checkpoint
from .config import ExperimentConfig, load_config

TABLE3_KINDS = (
    "default",
    "np_rnn",
    "xavier_normal",
    "xavier_uniform",
    "kaiming_normal",
    "kaiming_uniform",
    "identity",
    "eigen0.95",
)

MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


def _out_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _write_run_json(out: Path, command: str, config: dict, artifacts, started: float, extra=None) -> None:
    meta = {
        "command": command,
        "config": config,
        "versions": {
            "eigenrnn": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "artifacts": sorted(str(a) for a in artifacts),
        "wall_time_s": round(time.perf_counter() - started, 3),
    }
    if extra:
        meta.update(extra)
    (out / "run.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


# -- datasets -------------------------------------------------------------


def _mnist_path(directory: Path, stem: str) -> Path:
    for candidate in (directory / stem, directory / f"{stem}.gz"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"MNIST file {stem}[.gz] not found in {directory}")


def build_datasets(cfg: ExperimentConfig):
    """``(train_set, eval_set)`` for a config; ``eval_set`` may be ``None``."""
    if cfg.task == "tomita":
        data = tomita_dataset(cfg.grammar, cfg.max_len, cfg.per_class, Rng(cfg.data_seed))
        return data, None
    if cfg.task == "mnist":
        if not cfg.mnist_dir:
            raise ConfigurationError("key 'mnist_dir': required for the mnist task")
        root = Path(cfg.mnist_dir)
        train_set = load_mnist_idx(_mnist_path(root, MNIST_FILES["train_images"]), _mnist_path(root, MNIST_FILES["train_labels"]))
        test_set = load_mnist_idx(_mnist_path(root, MNIST_FILES["test_images"]), _mnist_path(root, MNIST_FILES["test_labels"]))
        if cfg.train_limit:
            train_set = train_set.subset(range(min(cfg.train_limit, len(train_set))))
        if cfg.test_limit:
            test_set = test_set.subset(range(min(cfg.test_limit, len(test_set))))
        return train_set, test_set
    data = mackey_glass(cfg.mackey_length, warmup=cfg.mackey_warmup, window=cfg.mackey_window)
    cut = max(1, int(0.8 * len(data)))
    if cut >= len(data):
        return data, None
    return data.subset(range(cut)), data.subset(range(cut, len(data)))


def build_model(cfg: ExperimentConfig, data, seed: int):
    return make_params(
        cfg.cell,
        data.input_size,
        cfg.hidden,
        data.output_size,
        Rng(seed).spawn(0),
        recurrent_init=cfg.init,
        forget_bias=cfg.forget_bias,
    )


# -- table3 ---------------------------------------------------------------


def cmd_table3(n: int, trials: int, out, seed: int = 0) -> list[Path]:
    """Ordered eigenvalue-norm statistics for every initializer."""
    started = time.perf_counter()
    out = _out_dir(out)
    written = []
    stats = {}
    for i, label in enumerate(TABLE3_KINDS):
        kind = parse_kind(label)
        st = spectrum_stats(kind, n, trials, Rng(seed).spawn(i))
        stats[kind.label] = st
        path = out / f"table3_{kind.label}.csv"
        st.to_csv(path)
        written.append(path)
    combined = out / "table3.csv"
    with open(combined, "w") as fh:
        header = ["rank"] + [f"{k}_{s}" for k in stats for s in ("mean", "std")]
        fh.write(",".join(header) + "\n")
        for r in range(n):
            row = [str(r + 1)]
            for st in stats.values():
                row += [f"{st.ordered_means[r]:.4f}", f"{st.ordered_stds[r]:.4f}"]
            fh.write(",".join(row) + "\n")
    written.append(combined)
    _write_run_json(out, "table3", {"n": n, "trials": trials, "seed": seed}, [p.name for p in written], started)
    return written


# -- train ----------------------------------------------------------------


def _run_seed(cfg: ExperimentConfig, seed: int, out: Path) -> dict:
    train_set, eval_set = build_datasets(cfg)
    model = build_model(cfg, train_set, seed)
    seed_dir = out / f"seed_{seed}"
    seed_dir.mkdir(parents=True, exist_ok=True)
    checkpoint.save(model, seed_dir / "init.ckpt", epoch=0)
    diverged = None
    try:
        report = train(model, train_set, cfg.train_config(seed), eval_set=eval_set)
    except TrainingDiverged as exc:
        report = exc.report
        diverged = str(exc)
    report.write_curve(seed_dir / "curve.csv")
    if eval_set is not None:
        report.write_curve(seed_dir / "eval_curve.csv", evaluation=True)
    report.write_spectra(seed_dir / "spectra.csv")
    checkpoint.save(report.params, seed_dir / "final.ckpt", epoch=len(report.curve))
    return {
        "seed": seed,
        "losses": report.losses.tolist(),
        "accuracies": report.accuracies.tolist(),
        "diverged": diverged,
    }


def cmd_train(config_path, out=None, workers: int = 1) -> list[Path]:
    """Train every seed of a config, then average the curves."""
    started = time.perf_counter()
    cfg = load_config(config_path)
    out = _out_dir(out or cfg.out)
    if workers > 1 and len(cfg.seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_seed, [cfg] * len(cfg.seeds), cfg.seeds, [out] * len(cfg.seeds)))
    else:
        results = [_run_seed(cfg, s, out) for s in cfg.seeds]

    written = []
    for s in cfg.seeds:
        seed_dir = out / f"seed_{s}"
        written += sorted(p.relative_to(out) for p in seed_dir.iterdir())
    complete = [r for r in results if r["diverged"] is None]
    if complete and cfg.epochs > 0:
        losses = CurveBundle([r["losses"] for r in complete])
        accs = CurveBundle([r["accuracies"] for r in complete])
        mean_l, std_l = average_curves(losses)
        mean_a, std_a = average_curves(accs)
        write_average_csv(mean_l, std_l, mean_a, std_a, out / "average.csv")
        written.append(Path("average.csv"))
    extra = {
        "non_paper_defaults": cfg.non_paper_defaults(),
        "diverged": {str(r["seed"]): r["diverged"] for r in results if r["diverged"]},
    }
    _write_run_json(out, "train", cfg.as_dict(), written, started, extra)
    return [out / p for p in written]


# -- scatter / spectrum ---------------------------------------------------


def cmd_scatter(config_path, checkpoint_path, out=None, svg: bool = False) -> list[Path]:
    """Hidden-state PCA scatter of a checkpoint on the config's training data."""
    started = time.perf_counter()
    cfg = load_config(config_path)
    params, epoch = checkpoint.load(checkpoint_path)
    data, _ = build_datasets(cfg)
    sc = hidden_scatter(params, data, sample_cap=cfg.sample_cap, seed=cfg.data_seed)
    out = _out_dir(out or cfg.out)
    sc.to_csv(out / "scatter.csv")
    written = [Path("scatter.csv")]
    if svg:
        from .plots import scatter_svg

        scatter_svg(sc.points, sc.labels, out / "scatter.svg", title=f"{params.kind.value}, epoch {epoch}")
        written.append(Path("scatter.svg"))
    extra = {
        "checkpoint": str(checkpoint_path),
        "points": int(len(sc.points)),
        "explained_variance": [float(v) for v in sc.variances],
    }
    _write_run_json(out, "scatter", cfg.as_dict(), written, started, extra)
    return [out / p for p in written]


def cmd_spectrum(checkpoint_path, out, top: int = 10) -> list[Path]:
    """All recurrent-block moduli of a checkpoint plus the top unique ones."""
    started = time.perf_counter()
    params, epoch = checkpoint.load(checkpoint_path)
    snap = recurrent_spectrum(params, epoch)
    out = _out_dir(out)
    write_spectrum_csv([snap], out / "spectrum.csv")
    with open(out / "spectrum_unique.csv", "w") as fh:
        fh.write("block,rank,modulus\n")
        for block, spectrum in snap.spectra.items():
            for rank, mod in enumerate(unique_moduli(spectrum)[:top], start=1):
                fh.write(f"{block},{rank},{float(mod)!r}\n")
    written = [Path("spectrum.csv"), Path("spectrum_unique.csv")]
    _write_run_json(out, "spectrum", {"checkpoint": str(checkpoint_path), "top": top}, written, started)
    return [out / p for p in written]


# -- iir-check ------------------------------------------------------------


def cmd_iir_check(out, seed: int = 0, trials: int = 100, n_max: int = 8, steps: int = 50, tol: float = 1e-8):
    """Compare eigen-filter reconstruction against the direct recurrence on random stable systems."""
    started = time.perf_counter()
    rng = Rng(seed)
    out = _out_dir(out)
    rows = []
    for trial in range(trials):
        n = 1 + int(rng.integers(n_max))
        t = 1 + int(rng.integers(steps))
        d = 1 + int(rng.integers(4))
        w_h = rng.normal((n, n))
        radius = np.abs(np.linalg.eigvals(w_h)).max()
        w_h *= rng.uniform(0.1, 0.99) / radius
        w_x = rng.normal((n, d))
        x = rng.normal((t, d))
        err = float(np.abs(iir_reconstruct(w_h, w_x, x) - direct_recurrence(w_h, w_x, x)).max())
        rows.append((trial, n, t, err))
    path = out / "iir_check.csv"
    with open(path, "w") as fh:
        fh.write("trial,n,steps,max_abs_error\n")
        for trial, n, t, err in rows:
            fh.write(f"{trial},{n},{t},{err!r}\n")
    worst = max(r[3] for r in rows)
    _write_run_json(
        out,
        "iir-check",
        {"seed": seed, "trials": trials, "n_max": n_max, "steps": steps, "tol": tol},
        ["iir_check.csv"],
        started,
        {"max_abs_error": worst, "passed": worst <= tol},
    )
    return path, worst


# -- entry point ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"error: usage: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eigenrnn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table3", help="initializer eigenvalue-norm statistics")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train every seed of a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("scatter", help="hidden-state PCA scatter of a checkpoint")
    p.add_argument("--config", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true")

    p = sub.add_parser("spectrum", help="recurrent-block spectra of a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("iir-check", help="eigen-filter vs direct recurrence on random systems")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--steps", type=int, default=50)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table3":
            cmd_table3(args.n, args.trials, args.out, seed=args.seed)
        elif args.command == "train":
            cmd_train(args.config, args.out, workers=args.workers)
        elif args.command == "scatter":
            cmd_scatter(args.config, args.checkpoint, args.out, svg=args.svg)
        elif args.command == "spectrum":
            cmd_spectrum(args.checkpoint, args.out, top=args.top)
        else:
            _, worst = cmd_iir_check(args.out, args.seed, args.trials, args.n_max, args.steps)
            if worst > 1e-8:
                raise EigenRnnError(f"IIR reconstruction error {worst:.3g} exceeds 1e-08")
    except (EigenRnnError, OSError) as exc:
        message = " ".join(str(exc).split())
        sys.stderr.write(f"error: {type(exc).__name__}: {message}\n")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
