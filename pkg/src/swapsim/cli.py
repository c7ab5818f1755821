"""Command-line surface: run, sweep, validate.

Exit codes: 0 success, 1 validation/parse error, 2 insufficient events on
all rows, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .bsm import BsmPolicy
from .config import ParseError, RunConfig, ValidationError, parse_config
from .harness import SweepResult, aggregate, run_point, run_sweep
from .results import write_results
from .validate import check_covariance, check_tomography_roundtrip

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INSUFFICIENT = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapsim",
        description="Monte Carlo model of optical entanglement swapping "
                    "with classical threshold detectors")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one parameter point and print its metrics")
    sweep_p = sub.add_parser("sweep", help="simulate a parameter grid and write results.csv")
    for sp in (run_p, sweep_p):
        sp.add_argument("--config", required=True, help="config file path")
        sp.add_argument("--seed", type=int, default=None, help="override master_seed")
        sp.add_argument("--out", default=None, help="override out_dir")
        sp.add_argument("--workers", type=int, default=1,
                        help="parallel workers (performance only; results are identical)")
        sp.add_argument("--policy", default=None,
                        choices=[m.value for m in BsmPolicy], help="override bsm_policy")

    val_p = sub.add_parser("validate", help="run the covariance and tomography round-trip oracles")
    val_p.add_argument("--seed", type=int, default=20260810)
    return parser


def _load_config(args) -> RunConfig:
    text = Path(args.config).read_text(encoding="utf-8")
    cfg = parse_config(text)
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            raise ValidationError("--seed must be a non-negative 64-bit integer")
        cfg = replace(cfg, master_seed=args.seed)
    if args.policy is not None:
        cfg = replace(cfg, bsm_policy=BsmPolicy.from_name(args.policy))
    if args.out is not None:
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _print_point(point, cfg) -> None:
    print(f"point: r={cfg.r:g} gamma_bsm={cfg.gamma_bsm:g} gamma_qst={cfg.gamma_qst:g} "
          f"policy={cfg.bsm_policy.value} units={cfg.threshold_units} mode={cfg.mode} "
          f"trials={cfg.trials} seed={cfg.master_seed}")
    if point.failures:
        for trial, reason in point.failures:
            print(f"trial {trial}: FAILED ({reason})")
    if not point.trials:
        return

    def line(name, values):
        mean, std = aggregate(values)
        print(f"{name:<16} = {mean:.6g} +/- {std:.3g}")

    line("bsm_efficiency", point.bsm_efficiencies())
    line("qst_efficiency", point.qst_efficiencies())
    if point.fidelities():
        line("fidelity", point.fidelities())
    if point.chsh_scores():
        line("chsh_s", point.chsh_scores())
        from_rho = [t.chsh_from_rho for t in point.trials if t.chsh_from_rho is not None]
        if from_rho:
            line("chsh_s_from_rho", from_rho)


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    point_cfg = cfg.at_point(cfg.r, cfg.gamma_bsm, cfg.gamma_qst)
    point = run_point(cfg, workers=args.workers)
    _print_point(point, point_cfg)
    if cfg.out_dir is not None:
        path = write_results(SweepResult(config=point_cfg, points=[point]), cfg.out_dir)
        print(f"wrote {path}")
    return EXIT_OK if point.status == "ok" else EXIT_INSUFFICIENT


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    sweep = run_sweep(cfg, workers=args.workers)
    out_dir = cfg.out_dir or "results"
    path = write_results(sweep, out_dir)
    n_ok = sum(1 for p in sweep.points if p.status == "ok")
    print(f"wrote {path} ({len(sweep.points)} rows, {n_ok} ok)")
    return EXIT_INSUFFICIENT if sweep.all_insufficient else EXIT_OK


def _cmd_validate(args) -> int:
    cov = check_covariance(seed=args.seed)
    print(f"covariance oracle (r={cov['r']}, n={cov['n']}): "
          f"{'PASS' if cov['ok'] else 'FAIL'} "
          f"(max |z| = {cov['max_abs_z']:.2f}, limit {cov['z_max']})")
    if not cov["ok"]:
        for entry in cov["entries"]:
            if abs(entry["z"]) > cov["z_max"]:
                print(f"  {entry['moment']}: sample {entry['sample']:.5f} "
                      f"expected {entry['expected']:.5f} z={entry['z']:.1f}")
    rt = check_tomography_roundtrip()
    print(f"tomography round-trip ({rt['total_events']} events): "
          f"{'PASS' if rt['ok'] else 'FAIL'} "
          f"(entry error = {rt['entry_error']:.2e}, fidelity error = {rt['fidelity_error']:.2e})")
    return EXIT_OK if cov["ok"] and rt["ok"] else EXIT_INVALID


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
