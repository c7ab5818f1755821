"""Result persistence: the flat results CSV, per-point state documents,
and the canonical config echo.

The CSV is the single source for all downstream figures; state documents
carry the per-trial details and the averaged physical density matrix
(row-major 4x4, each entry a [re, im] pair, basis order HH, HV, VH, VV).
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .config import RunConfig, write_config
from .harness import PointResult, SweepResult, aggregate

CSV_HEADER = ("r,gamma_bsm,gamma_qst,trials,target_bsm_events,"
              "bsm_eff_mean,bsm_eff_std,qst_eff_mean,qst_eff_std,"
              "fidelity_mean,fidelity_std,chsh_mean,chsh_std,master_seed,status")


def _fmt(x) -> str:
    return format(float(x), ".8g")


def _mean_std_fields(values) -> list:
    if not values:
        return ["", ""]
    mean, std = aggregate(values)
    return [_fmt(mean), _fmt(std)]


def csv_row(point: PointResult, cfg: RunConfig) -> str:
    fields = [_fmt(point.r), _fmt(point.gamma_bsm), _fmt(point.gamma_qst),
              str(cfg.trials), str(cfg.target_bsm_events)]
    if point.status == "ok":
        fields += _mean_std_fields(point.bsm_efficiencies())
        fields += _mean_std_fields(point.qst_efficiencies())
        fields += _mean_std_fields(point.fidelities())
        fields += _mean_std_fields(point.chsh_scores())
    else:
        fields += [""] * 8
    fields += [str(cfg.master_seed), point.status]
    return ",".join(fields)


def results_csv(sweep: SweepResult) -> str:
    lines = [CSV_HEADER]
    lines.extend(csv_row(point, sweep.config) for point in sweep.points)
    return "\n".join(lines) + "\n"


def rho_to_pairs(rho) -> list:
    """4x4 complex -> nested row-major lists of [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(rho)]


def rho_from_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (4, 4, 2):
        raise ValueError(f"expected 4x4 [re, im] entries, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_document(point: PointResult, cfg: RunConfig) -> dict:
    point_cfg = cfg.at_point(point.r, point.gamma_bsm, point.gamma_qst)
    trials = []
    for t in point.trials:
        trials.append({
            "n_raw": t.n_raw,
            "n_bsm_success": t.n_bsm_success,
            "n_qst_valid": t.n_qst_valid,
            "bsm_efficiency": t.bsm_efficiency,
            "qst_efficiency": t.qst_efficiency,
            "fidelity": t.fidelity,
            "chsh_s": t.chsh.s if t.chsh is not None else None,
            "chsh_correlations": list(t.chsh.correlations) if t.chsh is not None else None,
            "chsh_from_rho": t.chsh_from_rho,
        })
    mean_rho = point.mean_rho()
    return {
        "config": write_config(point_cfg),
        "r": point.r,
        "gamma_bsm": point.gamma_bsm,
        "gamma_qst": point.gamma_qst,
        "master_seed": cfg.master_seed,
        "status": point.status,
        "trials": trials,
        "failures": [{"trial": i, "reason": reason} for i, reason in point.failures],
        "density_matrix": rho_to_pairs(mean_rho) if mean_rho is not None else None,
    }


def _write_text_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_results(sweep: SweepResult, out_dir) -> Path:
    """Write results.csv, config.cfg, and states/point_NNNN.json; returns
    the CSV path.  Writes are atomic per file and overwrite idempotently."""
    out = Path(out_dir)
    states = out / "states"
    states.mkdir(parents=True, exist_ok=True)
    _write_text_atomic(out / "config.cfg", write_config(sweep.config))
    for i, point in enumerate(sweep.points):
        doc = state_document(point, sweep.config)
        _write_text_atomic(states / f"point_{i:04d}.json",
                           json.dumps(doc, indent=2, sort_keys=True) + "\n")
    csv_path = out / "results.csv"
    _write_text_atomic(csv_path, results_csv(sweep))
    return csv_path


def load_state(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
