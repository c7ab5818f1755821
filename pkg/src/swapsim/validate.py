"""Independent oracles for the source covariance and the tomography chain.

Both checks are built from closed forms and textbook projector algebra,
deliberately sharing no code with the Monte Carlo analyzer path they
vouch for.  They back the ``validate`` CLI subcommand and the test suite.
"""

from __future__ import annotations

import numpy as np

from .fields import RandomJonesPair, SqueezeParams, sample_source_pair
from .harness import derive_rng
from .tomography import BASES, CountsTable, SINGLET, reconstruct, singlet_fidelity

QUADRATURE_LABELS = ("Re a_H", "Im a_H", "Re a_V", "Im a_V",
                     "Re b_H", "Im b_H", "Re b_V", "Im b_V")


def quadratures(pair: RandomJonesPair) -> np.ndarray:
    """(n, 8) real matrix of the quadratures of (mode1, mode2)."""
    cols = []
    for vec in (pair.mode1, pair.mode2):
        for comp in (vec[..., 0], vec[..., 1]):
            cols.append(np.real(comp))
            cols.append(np.imag(comp))
    return np.stack(cols, axis=-1)


def covariance_closed_form(r: float, sigma_sq: float = 1.0) -> np.ndarray:
    """Exact 8x8 quadrature covariance of one source pair.

    Diagonals are sigma_sq*cosh(2r)/2 per quadrature (sigma_sq*cosh(2r)
    per complex component); the only off-diagonal entries are the H<->V
    quadrature pairings at +/- sigma_sq*sinh(r)cosh(r); everything else
    vanishes.
    """
    cov = np.diag(np.full(8, sigma_sq * np.cosh(2.0 * r) / 2.0))
    s = sigma_sq * np.sinh(r) * np.cosh(r)
    for i, j, sign in ((0, 6, +1.0),   # Re a_H, Re b_V
                       (1, 7, -1.0),   # Im a_H, Im b_V
                       (2, 4, -1.0),   # Re a_V, Re b_H
                       (3, 5, +1.0)):  # Im a_V, Im b_H
        cov[i, j] = cov[j, i] = sign * s
    return cov


def check_covariance(r: float = 0.9, sigma_sq: float = 1.0, n: int = 1_000_000,
                     seed: int = 20260810, z_max: float = 5.0) -> dict:
    """Compare every second moment of the sampled source pair with the
    closed form, in units of its own standard error.

    Checks all 36 distinct quadrature moments plus the four complex
    modulus-squared diagonals.  Passes when every |z| <= z_max.
    """
    rng = derive_rng(seed, 0)
    pair = sample_source_pair(rng, n, SqueezeParams(r, sigma_sq))
    x = quadratures(pair)
    expected = covariance_closed_form(r, sigma_sq)

    moments = x.T @ x / n
    entries = []
    worst = 0.0
    for i in range(8):
        for j in range(i, 8):
            prod = x[:, i] * x[:, j]
            sample = moments[i, j]
            se = float(prod.std() / np.sqrt(n))
            z = (sample - expected[i, j]) / se
            worst = max(worst, abs(z))
            entries.append({
                "moment": f"E[{QUADRATURE_LABELS[i]} * {QUADRATURE_LABELS[j]}]",
                "sample": float(sample),
                "expected": float(expected[i, j]),
                "z": float(z),
            })

    diag_expected = sigma_sq * np.cosh(2.0 * r)
    for k, label in enumerate(("a_H", "a_V", "b_H", "b_V")):
        w = x[:, 2 * k] ** 2 + x[:, 2 * k + 1] ** 2
        sample = float(w.mean())
        se = float(w.std() / np.sqrt(n))
        z = (sample - diag_expected) / se
        worst = max(worst, abs(z))
        entries.append({
            "moment": f"E[|{label}|^2]",
            "sample": sample,
            "expected": float(diag_expected),
            "z": float(z),
        })

    return {"ok": bool(worst <= z_max), "max_abs_z": float(worst),
            "z_max": z_max, "n": n, "r": r, "sigma_sq": sigma_sq,
            "entries": entries}


def measurement_kets() -> dict:
    """Plus/minus eigenstates of each analyzer basis, from first principles."""
    isq = 1.0 / np.sqrt(2.0)
    return {
        "x": (np.array([isq, isq], dtype=complex), np.array([isq, -isq], dtype=complex)),
        "y": (np.array([isq, 1j * isq]), np.array([isq, -1j * isq])),
        "z": (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)),
    }


def setting_probabilities(rho, basis_a: str, basis_b: str) -> np.ndarray:
    """(2, 2) outcome probabilities of a joint setting via projectors."""
    kets = measurement_kets()
    rho = np.asarray(rho)
    probs = np.empty((2, 2))
    for i, ka in enumerate(kets[basis_a]):
        for j, kb in enumerate(kets[basis_b]):
            ket = np.kron(ka, kb)
            probs[i, j] = float(np.real(ket.conj() @ rho @ ket))
    return probs


def synthetic_counts(rho, events_per_setting: int,
                     rng: np.random.Generator | None = None) -> CountsTable:
    """Brute-force sampler of a known state: exact expected tallies when
    ``rng`` is None, otherwise one multinomial draw per setting."""
    counts = CountsTable()
    for ia, ba in enumerate(BASES):
        for ib, bb in enumerate(BASES):
            p = setting_probabilities(rho, ba, bb).reshape(-1)
            p = np.clip(p, 0.0, None)
            if rng is None:
                cells = np.rint(p * events_per_setting).astype(np.int64)
            else:
                cells = rng.multinomial(events_per_setting, p / p.sum())
            counts.joint[ia, ib] += cells.reshape(2, 2)
    return counts


def mixed_singlet(weight: float = 0.9) -> np.ndarray:
    """weight * |singlet><singlet| + (1 - weight) * I/4."""
    pure = np.outer(SINGLET, SINGLET.conj())
    return weight * pure + (1.0 - weight) * np.eye(4) / 4.0


def check_tomography_roundtrip(weight: float = 0.9,
                               total_events: int = 100_000_000) -> dict:
    """Feed exact projector probabilities of a known state through the
    reconstruction and compare entrywise plus in fidelity."""
    rho0 = mixed_singlet(weight)
    counts = synthetic_counts(rho0, total_events // 9)
    rec = reconstruct(counts)
    entry_err = float(np.abs(rec - rho0).max())
    expected_f = weight + (1.0 - weight) * 0.25
    fid_err = abs(singlet_fidelity(rec) - expected_f)
    return {"ok": bool(entry_err < 1e-4 and fid_err < 1e-4),
            "entry_error": entry_err, "fidelity_error": float(fid_err),
            "expected_fidelity": expected_f, "total_events": total_events}
