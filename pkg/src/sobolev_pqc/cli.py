"""Command-line front end: configs in, deterministic .dat tables out.

Exit codes: 0 success, 2 configuration problem, 3 numerical divergence,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bounds as bounds_mod
from . import config as config_mod
from . import datatable, selftest, trainer, trigseries
from .pqc import CircuitSpec, surrogate_series

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

VERBS = (
    "train",
    "reproduce-fig5",
    "reproduce-fig6",
    "fejer",
    "norms",
    "bounds",
    "gap-study",
    "selftest",
)


class NumericalDivergence(Exception):
    pass


def _ensure_finite(*arrays) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise NumericalDivergence("non-finite values in results")


def _write(out_dir: str, name: str, header, rows) -> str:
    path = os.path.join(out_dir, name)
    datatable.write_dat(path, header, rows)
    print(f"wrote {path}")
    return path


def _experiment(cfg: dict, args, **field_overrides) -> trainer.RunResult:
    exp = config_mod.build_experiment(
        cfg, base_seed=args.seed, repeats=args.repeats, **field_overrides
    )
    result = trainer.run_experiment(exp, threads=args.threads)
    _ensure_finite(result.curves, result.final_losses)
    return result


def _cmd_train(cfg: dict, args) -> int:
    result = _experiment(cfg, args)
    header, rows = result.to_table()
    _write(args.out, "train.dat", header, rows)
    print(f"median final loss {np.median(result.final_losses):.6g}")
    print(f"median-curve max error {result.median_dist_c0():.6g}")
    return EXIT_OK


def _cmd_fig5(cfg: dict, args) -> int:
    norms = cfg.get("normalizations", ["half", "full", "double"])
    for name in norms:
        result = _experiment(cfg, args, normalization=name, loss=cfg.get("loss", "l2"))
        header, rows = result.to_table()
        _write(args.out, f"fig5_{name}.dat", header, rows)
        print(f"  {name}: median-curve max error {result.median_dist_c0():.6g}")
    return EXIT_OK


def _cmd_fig6(cfg: dict, args) -> int:
    arms = cfg.get("arms", [["l2", "half"], ["h1", "half"], ["l2", "full"], ["h1", "full"]])
    for loss, norm in arms:
        result = _experiment(cfg, args, normalization=norm, loss=loss)
        header, rows = result.to_table()
        _write(args.out, f"fig6_{loss}_{norm}.dat", header, rows)
        print(
            f"  {loss}/{norm}: interquartile band area {result.iqr_band_area():.6g}, "
            f"median-curve max error {result.median_dist_c0():.6g}"
        )
    return EXIT_OK


def _cmd_fejer(cfg: dict, args) -> int:
    target = trainer.TARGETS["linear"]
    study = trigseries.fejer_convergence_study(
        target.value,
        (cfg["u"][0], cfg["u"][1]),
        float(cfg["delta"]),
        degrees=[int(k) for k in cfg["degrees"]],
        n_grid=int(cfg["n_grid"]),
    )
    _ensure_finite(study.dist_l2, study.dist_c0)
    header, rows = study.table()
    _write(args.out, "fejer.dat", header, rows)
    return EXIT_OK


def _cmd_norms(cfg: dict, args) -> int:
    spec = CircuitSpec.from_dict(cfg.get("circuit") or {})
    if cfg.get("theta") is not None:
        theta = np.asarray(cfg["theta"], dtype=float)
    else:
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        theta = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, spec.n_params)
    series = surrogate_series(spec, theta)
    b_est, b_tilde = series.coefficient_norms()
    _ensure_finite([b_est, b_tilde])
    _write(
        args.out,
        "norms.dat",
        ["B_est", "B_tilde", "degree", "n_frequencies"],
        [[b_est, b_tilde, (len(series) - 1) // 2, len(series)]],
    )
    return EXIT_OK


def _cmd_bounds(cfg: dict, args) -> int:
    inputs = config_mod.build_bound_inputs(cfg)
    value = bounds_mod.bound_term(inputs)
    _ensure_finite([value])
    _write(
        args.out,
        "bounds.dat",
        ["n_frequencies", "xi", "B", "B_tilde", "c", "L", "I", "delta", "r"],
        [
            [
                inputs.n_frequencies,
                inputs.xi,
                inputs.sup_bound,
                inputs.coeff_bound,
                inputs.loss_bound,
                inputs.lipschitz,
                inputs.n_samples,
                inputs.delta,
                value,
            ]
        ],
    )
    print(f"bound value r = {value:.6g}")
    return EXIT_OK


def _cmd_gap_study(cfg: dict, args) -> int:
    gap_cfg = config_mod.build_gap_study(cfg, base_seed=args.seed)
    result = bounds_mod.empirical_gap_study(gap_cfg)
    _ensure_finite(result.gaps, result.bound_values)
    header, rows = result.table()
    _write(args.out, "gap_study.dat", header, rows)
    print(f"log-log gap slope {result.slope:.4f}")
    print(f"bound-holds fraction {result.bound_holds.mean():.3f} (diagnostic)")
    return EXIT_OK


def _cmd_selftest(cfg: dict, args) -> int:
    return EXIT_OK if selftest.run_all(verbose=True) else EXIT_NUMERIC


_HANDLERS = {
    "train": _cmd_train,
    "reproduce-fig5": _cmd_fig5,
    "reproduce-fig6": _cmd_fig6,
    "fejer": _cmd_fejer,
    "norms": _cmd_norms,
    "bounds": _cmd_bounds,
    "gap-study": _cmd_gap_study,
    "selftest": _cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobolev-pqc",
        description="Trigonometric-model regression experiments and diagnostics.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="base seed override")
        p.add_argument("--repeats", type=int, default=None, help="repeat-count override")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help=f"worker threads (default: ${trainer.THREADS_ENV_VAR} or 1)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_mod.for_verb(args.verb, args.config)
        return _HANDLERS[args.verb](cfg, args)
    except config_mod.ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDivergence as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
