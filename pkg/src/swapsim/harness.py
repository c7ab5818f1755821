"""Monte Carlo driver: realizations -> heralding -> analyzer tallies ->
per-trial reconstruction and scoring.

Every trial owns deterministic random streams keyed by (master seed, the
point's parameter values, trial index, stream role), so results never
depend on scheduling or worker count.  Realizations are drawn in
fixed-size batches until the trial has its target number of heralded
events or hits the raw-realization cap.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bsm import port_clicks, success_mask
from .chsh import ChshCounts, ChshResult, chsh_score_from_state, result_from_correlations
from .config import RunConfig
from .fields import SqueezeParams, sample_source_pair
from .optics import basis_transform, click, effective_gamma, outcome_codes, rotate
from .tomography import CountsTable, ZeroValidCounts, reconstruct, singlet_fidelity

BATCH_SIZE = 1 << 16

ROLE_FIELDS = 0
ROLE_TOMO_SETTINGS = 1
ROLE_CHSH_SETTINGS = 2

_MASK64 = (1 << 64) - 1


class EmptyInput(ValueError):
    """aggregate() called with no values."""


class InsufficientEvents(RuntimeError):
    """Hit the raw-realization cap before reaching the heralding target."""

    def __init__(self, message, n_raw=0, n_bsm_success=0):
        super().__init__(message)
        self.n_raw = n_raw
        self.n_bsm_success = n_bsm_success


def aggregate(values):
    """Mean and sample standard deviation (n-1 denominator; 0 when n=1)."""
    vals = np.asarray([float(v) for v in values], dtype=float)
    if vals.size == 0:
        raise EmptyInput("aggregate needs at least one value")
    mean = float(vals.mean())
    std = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return mean, std


def _float_key(x) -> int:
    """Stable 64-bit key for a float parameter value."""
    return int(np.float64(x).view(np.uint64))


def derive_rng(master_seed, *key_parts) -> np.random.Generator:
    """Deterministic stream from the master seed and integer key parts."""
    entropy = [int(master_seed) & _MASK64] + [int(k) & _MASK64 for k in key_parts]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def trial_rng(cfg: RunConfig, trial_index: int, role: int) -> np.random.Generator:
    """Stream for one trial.  Keyed by the point's parameter values rather
    than its grid position so a sweep row can be reproduced by a standalone
    run with the same master seed."""
    return derive_rng(cfg.master_seed, _float_key(cfg.r),
                      _float_key(cfg.gamma_bsm), _float_key(cfg.gamma_qst),
                      trial_index, role)


@dataclass(frozen=True)
class TrialResult:
    n_raw: int
    n_bsm_success: int
    n_qst_valid: int
    rho: np.ndarray | None = None
    fidelity: float | None = None
    chsh: ChshResult | None = None
    chsh_from_rho: float | None = None
    tomo_counts: CountsTable | None = None
    chsh_counts: ChshCounts | None = None

    @property
    def bsm_efficiency(self) -> float:
        return self.n_bsm_success / self.n_raw

    @property
    def qst_efficiency(self) -> float:
        return self.n_qst_valid / self.n_bsm_success


def _pauli_outcomes(vecs, basis_idx, gamma, sigma_sq):
    """Outcome codes for a batch measured in per-event bases (0=x, 1=y, 2=z)."""
    tx = basis_transform(vecs, "x")
    ty = basis_transform(vecs, "y")
    pick = np.arange(vecs.shape[0])
    plus_amp = np.stack([tx[:, 0], ty[:, 0], vecs[:, 0]])[basis_idx, pick]
    minus_amp = np.stack([tx[:, 1], ty[:, 1], vecs[:, 1]])[basis_idx, pick]
    return outcome_codes(click(plus_amp, gamma, sigma_sq),
                         click(minus_amp, gamma, sigma_sq))


def _tally_tomography(counts, va, vb, gamma, sigma_sq, rng):
    """Assign uniform joint Pauli settings, analyze both sides, tally.
    Returns the number of valid coincidences."""
    m = va.shape[0]
    joint = rng.integers(0, 9, size=m)
    ia = joint // 3
    ib = joint % 3
    oa = _pauli_outcomes(va, ia, gamma, sigma_sq)
    ob = _pauli_outcomes(vb, ib, gamma, sigma_sq)
    valid = (oa < 2) & (ob < 2)
    cells = (joint * 4 + oa * 2 + ob)[valid]
    counts.joint += np.bincount(cells, minlength=36).reshape(3, 3, 2, 2)
    counts.invalid += np.bincount(joint[~valid], minlength=9).reshape(3, 3)
    return int(np.count_nonzero(valid))


def _tally_chsh(counts, va, vb, gamma, sigma_sq, rng, theta_a, theta_b):
    """Assign uniform CHSH setting pairs, analyze at those angles, tally."""
    m = va.shape[0]
    s = rng.integers(0, 4, size=m)
    ra = rotate(va, theta_a[s])
    rb = rotate(vb, theta_b[s])
    oa = outcome_codes(click(ra[:, 0], gamma, sigma_sq), click(ra[:, 1], gamma, sigma_sq))
    ob = outcome_codes(click(rb[:, 0], gamma, sigma_sq), click(rb[:, 1], gamma, sigma_sq))
    valid = (oa < 2) & (ob < 2)
    cells = (s * 4 + oa * 2 + ob)[valid]
    counts.joint += np.bincount(cells, minlength=16).reshape(4, 2, 2)
    counts.invalid += np.bincount(s[~valid], minlength=4)
    return int(np.count_nonzero(valid))


def run_trial(cfg: RunConfig, trial_index: int = 0) -> TrialResult:
    """One trial: draw realizations until the heralding target is met, then
    reconstruct the state and/or score the CHSH game.

    In 'both' mode heralded events alternate between the tomography and
    CHSH streams (disjoint events) and each stream must reach the target.
    Raises InsufficientEvents when the cap is hit first.
    """
    do_tomo = cfg.mode in ("tomography", "both")
    do_chsh = cfg.mode in ("chsh", "both")
    params = SqueezeParams(cfg.r, cfg.sigma_sq)
    g_bsm = effective_gamma(cfg.gamma_bsm, cfg.threshold_units)
    g_qst = effective_gamma(cfg.gamma_qst, cfg.threshold_units)

    field_rng = trial_rng(cfg, trial_index, ROLE_FIELDS)
    tomo_rng = trial_rng(cfg, trial_index, ROLE_TOMO_SETTINGS) if do_tomo else None
    chsh_rng = trial_rng(cfg, trial_index, ROLE_CHSH_SETTINGS) if do_chsh else None

    settings = cfg.chsh_settings()
    pairs = np.asarray(settings.pairs())
    theta_a = pairs[:, 0]
    theta_b = pairs[:, 1]

    tomo_counts = CountsTable() if do_tomo else None
    chsh_counts = ChshCounts() if do_chsh else None

    n_raw = 0
    n_success = 0
    n_valid = 0
    n_tomo = 0
    n_chsh = 0

    def target_met():
        if cfg.mode == "tomography":
            return n_tomo >= cfg.target_bsm_events
        if cfg.mode == "chsh":
            return n_chsh >= cfg.target_bsm_events
        return min(n_tomo, n_chsh) >= cfg.target_bsm_events

    while not target_met():
        batch = min(BATCH_SIZE, cfg.max_raw_realizations - n_raw)
        if batch <= 0:
            raise InsufficientEvents(
                f"raw-realization cap {cfg.max_raw_realizations} reached with "
                f"{n_success} heralded events (target {cfg.target_bsm_events})",
                n_raw=n_raw, n_bsm_success=n_success)
        a1, a2 = sample_source_pair(field_rng, batch, params)
        b1, b2 = sample_source_pair(field_rng, batch, params)
        mask = success_mask(*port_clicks(a1, b1, g_bsm, cfg.sigma_sq), cfg.bsm_policy)
        n_raw += batch
        k = int(np.count_nonzero(mask))
        if k == 0:
            continue
        va = a2[mask]
        vb = b2[mask]
        if cfg.mode == "both":
            to_tomo = ((n_success + np.arange(k)) % 2) == 0
            kt = int(np.count_nonzero(to_tomo))
            if kt:
                n_valid += _tally_tomography(tomo_counts, va[to_tomo], vb[to_tomo],
                                             g_qst, cfg.sigma_sq, tomo_rng)
            if k - kt:
                n_valid += _tally_chsh(chsh_counts, va[~to_tomo], vb[~to_tomo],
                                       g_qst, cfg.sigma_sq, chsh_rng, theta_a, theta_b)
            n_tomo += kt
            n_chsh += k - kt
        elif cfg.mode == "tomography":
            n_valid += _tally_tomography(tomo_counts, va, vb, g_qst, cfg.sigma_sq, tomo_rng)
            n_tomo += k
        else:
            n_valid += _tally_chsh(chsh_counts, va, vb, g_qst, cfg.sigma_sq,
                                   chsh_rng, theta_a, theta_b)
            n_chsh += k
        n_success += k

    rho = None
    fidelity = None
    chsh_res = None
    s_from_rho = None
    if do_tomo:
        rho = reconstruct(tomo_counts)
        fidelity = singlet_fidelity(rho)
    if do_chsh:
        chsh_res = result_from_correlations(chsh_counts.correlations())
    if do_tomo and do_chsh:
        s_from_rho = chsh_score_from_state(rho, settings)
    return TrialResult(n_raw=n_raw, n_bsm_success=n_success, n_qst_valid=n_valid,
                       rho=rho, fidelity=fidelity, chsh=chsh_res,
                       chsh_from_rho=s_from_rho, tomo_counts=tomo_counts,
                       chsh_counts=chsh_counts)


@dataclass
class PointResult:
    """All trials of one (r, gamma_bsm, gamma_qst) grid point."""

    r: float
    gamma_bsm: float
    gamma_qst: float
    trials: list = field(default_factory=list)
    failures: list = field(default_factory=list)   # (trial_index, reason)

    @property
    def status(self) -> str:
        return "ok" if not self.failures else "insufficient_events"

    def bsm_efficiencies(self):
        return [t.bsm_efficiency for t in self.trials]

    def qst_efficiencies(self):
        return [t.qst_efficiency for t in self.trials]

    def fidelities(self):
        return [t.fidelity for t in self.trials if t.fidelity is not None]

    def chsh_scores(self):
        return [t.chsh.s for t in self.trials if t.chsh is not None]

    def mean_rho(self):
        rhos = [t.rho for t in self.trials if t.rho is not None]
        if not rhos:
            return None
        return np.mean(rhos, axis=0)


@dataclass
class SweepResult:
    config: RunConfig
    points: list

    @property
    def all_insufficient(self) -> bool:
        return all(p.status != "ok" for p in self.points)


def _trial_task(cfg: RunConfig, trial_index: int):
    try:
        return ("ok", run_trial(cfg, trial_index), "")
    except InsufficientEvents as exc:
        return ("insufficient_events", None, str(exc))
    except ZeroValidCounts as exc:
        return ("insufficient_events", None, f"no valid coincidences: {exc}")


def run_sweep(cfg: RunConfig, workers: int = 1) -> SweepResult:
    """Run every grid point x trial; deterministic for any worker count.

    Trials are the unit of parallel work; their streams depend only on the
    config, so the assembled result is identical for workers=1 and N.
    """
    point_cfgs = [cfg.at_point(*pt) for pt in cfg.grid()]
    tasks = [(i, t) for i in range(len(point_cfgs)) for t in range(cfg.trials)]
    outcomes = {}
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {key: pool.submit(_trial_task, point_cfgs[key[0]], key[1])
                       for key in tasks}
            for key, fut in futures.items():
                outcomes[key] = fut.result()
    else:
        for key in tasks:
            outcomes[key] = _trial_task(point_cfgs[key[0]], key[1])

    points = []
    for i, pcfg in enumerate(point_cfgs):
        point = PointResult(pcfg.r, pcfg.gamma_bsm, pcfg.gamma_qst)
        for t in range(cfg.trials):
            status, result, reason = outcomes[(i, t)]
            if status == "ok":
                point.trials.append(result)
            else:
                point.failures.append((t, reason))
        points.append(point)
    return SweepResult(config=cfg, points=points)


def run_point(cfg: RunConfig, workers: int = 1) -> PointResult:
    """All trials of the config's scalar (r, gamma_bsm, gamma_qst) point."""
    single = cfg.at_point(cfg.r, cfg.gamma_bsm, cfg.gamma_qst)
    return run_sweep(single, workers=workers).points[0]
