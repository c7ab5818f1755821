"""Coincidence bookkeeping and two-qubit state reconstruction.

Counts are kept per joint measurement setting (x, y, z on each side) over
the four plus/minus outcome pairs; events where either analyzer saw no
click or a double click are tallied separately per setting.  The state is
reconstructed by linear inversion over the Pauli basis and then projected
to the nearest physical (unit-trace PSD) matrix by clipping negative
eigenvalues and rescaling.

Density matrices are 4x4 complex in the basis order (HH, HV, VH, VV),
with H identified with the plus outcome of the z setting.
"""

from __future__ import annotations

import numpy as np

from .optics import AnalyzerOutcome

BASES = ("x", "y", "z")
_BASIS_INDEX = {"x": 0, "y": 1, "z": 2}

# I, X, Y, Z; BASES above map to indices 1..3.
PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


class ZeroValidCounts(ValueError):
    """A setting (or pooled side) has no valid coincidences to normalize by."""


class DegenerateState(ValueError):
    """Every eigenvalue clipped to zero; no physical state can be formed."""


def _basis_index(basis) -> int:
    if isinstance(basis, str):
        try:
            return _BASIS_INDEX[basis.lower()]
        except KeyError:
            raise ValueError(f"unknown basis {basis!r} (expected 'x', 'y' or 'z')") from None
    i = int(basis)
    if not 0 <= i < 3:
        raise ValueError(f"basis index {i} out of range")
    return i


class CountsTable:
    """Tallies N[settingA, settingB, outcomeA, outcomeB] plus invalid totals.

    ``joint`` has shape (3, 3, 2, 2) indexed by (basis A, basis B,
    plus/minus A, plus/minus B); ``invalid`` has shape (3, 3).  Tables
    accumulated by independent workers combine with ``merge`` (elementwise
    addition), so reconstruction is independent of how events were split.
    """

    __slots__ = ("joint", "invalid")

    def __init__(self, joint=None, invalid=None):
        self.joint = (np.zeros((3, 3, 2, 2), dtype=np.int64) if joint is None
                      else np.array(joint, dtype=np.int64))
        self.invalid = (np.zeros((3, 3), dtype=np.int64) if invalid is None
                        else np.array(invalid, dtype=np.int64))

    def record(self, basis_a, basis_b, out_a, out_b) -> None:
        """Tally one event; anything but a single click per side is invalid."""
        ia = _basis_index(basis_a)
        ib = _basis_index(basis_b)
        oa = AnalyzerOutcome(out_a)
        ob = AnalyzerOutcome(out_b)
        if oa.valid and ob.valid:
            self.joint[ia, ib, oa, ob] += 1
        else:
            self.invalid[ia, ib] += 1

    def merge(self, other: "CountsTable") -> "CountsTable":
        return CountsTable(self.joint + other.joint, self.invalid + other.invalid)

    __add__ = merge

    @property
    def n_valid_total(self) -> int:
        return int(self.joint.sum())

    @property
    def n_invalid_total(self) -> int:
        return int(self.invalid.sum())

    def n_valid(self, basis_a, basis_b) -> int:
        return int(self.joint[_basis_index(basis_a), _basis_index(basis_b)].sum())

    def correlation(self, basis_a, basis_b) -> float:
        """(N++ + N-- - N+- - N-+) / N_valid for one joint setting."""
        cell = self.joint[_basis_index(basis_a), _basis_index(basis_b)]
        n = cell.sum()
        if n == 0:
            raise ZeroValidCounts(f"no valid coincidences for setting ({basis_a}, {basis_b})")
        return float((cell[0, 0] + cell[1, 1] - cell[0, 1] - cell[1, 0]) / n)

    def single_correlation(self, side: str, basis) -> float:
        """(N+ - N-)/N for one side, pooled across the partner's settings."""
        i = _basis_index(basis)
        if side == "a":
            block = self.joint[i]           # (3, 2, 2): partner basis, outA, outB
            n_plus = block[:, 0, :].sum()
            n_minus = block[:, 1, :].sum()
        elif side == "b":
            block = self.joint[:, i]        # (3, 2, 2): partner basis, outA, outB
            n_plus = block[:, :, 0].sum()
            n_minus = block[:, :, 1].sum()
        else:
            raise ValueError(f"side must be 'a' or 'b', got {side!r}")
        n = n_plus + n_minus
        if n == 0:
            raise ZeroValidCounts(f"no valid coincidences pooled for side {side}, basis {basis}")
        return float((n_plus - n_minus) / n)


def pauli_tensor(counts: CountsTable) -> np.ndarray:
    """The 4x4 correlation tensor over (I, X, Y, Z): T[0,0]=1, marginals on
    the first row/column, joint correlations elsewhere."""
    t = np.empty((4, 4))
    t[0, 0] = 1.0
    for i, basis in enumerate(BASES):
        t[i + 1, 0] = counts.single_correlation("a", basis)
        t[0, i + 1] = counts.single_correlation("b", basis)
    for i, ba in enumerate(BASES):
        for j, bb in enumerate(BASES):
            t[i + 1, j + 1] = counts.correlation(ba, bb)
    return t


def density_from_tensor(t) -> np.ndarray:
    """Linear inversion: rho = (1/4) sum_ij T[i,j] sigma_i (x) sigma_j.

    Hermitian with unit trace by construction, but possibly non-PSD for
    finite counts; follow with :func:`project_physical`.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (4, 4):
        raise ValueError("correlation tensor must be 4x4")
    return np.einsum("ij,iab,jcd->acbd", t, PAULI, PAULI).reshape(4, 4) / 4.0


def project_physical(rho) -> np.ndarray:
    """Clip negative eigenvalues to zero and renormalize to unit trace."""
    rho = np.asarray(rho, dtype=complex)
    herm = (rho + rho.conj().T) / 2.0
    w, v = np.linalg.eigh(herm)
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise DegenerateState("all eigenvalues clipped to zero")
    w /= total
    return (v * w) @ v.conj().T


def singlet_fidelity(rho) -> float:
    """Overlap of a physical state with the target (|HV> - |VH>)/sqrt2."""
    f = float(np.real(SINGLET.conj() @ np.asarray(rho) @ SINGLET))
    return min(max(f, 0.0), 1.0)


def reconstruct(counts: CountsTable) -> np.ndarray:
    """Counts -> linear inversion -> physical density matrix."""
    return project_physical(density_from_tensor(pauli_tensor(counts)))
