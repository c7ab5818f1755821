"""CHSH game bookkeeping: four analyzer-angle pairs and the S score."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .tomography import ZeroValidCounts


@dataclass(frozen=True)
class ChshSettings:
    """Analyzer angles in radians; defaults are the singlet-optimal set."""

    a: float = 0.0
    a_prime: float = math.pi / 4
    b: float = math.pi / 8
    b_prime: float = 3 * math.pi / 8

    def pairs(self):
        """The four (thetaA, thetaB) pairs in score order:
        (a,b), (a,b'), (a',b), (a',b')."""
        return ((self.a, self.b), (self.a, self.b_prime),
                (self.a_prime, self.b), (self.a_prime, self.b_prime))

    @classmethod
    def from_degrees(cls, values) -> "ChshSettings":
        a, a_prime, b, b_prime = (math.radians(float(v)) for v in values)
        return cls(a, a_prime, b, b_prime)


class ChshResult(NamedTuple):
    e_ab: float
    e_ab_prime: float
    e_a_prime_b: float
    e_a_prime_b_prime: float
    s: float

    @property
    def correlations(self):
        return (self.e_ab, self.e_ab_prime, self.e_a_prime_b, self.e_a_prime_b_prime)


def chsh_score(correlations) -> float:
    """S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|."""
    e = np.asarray(correlations, dtype=float)
    if e.shape != (4,):
        raise ValueError("need exactly four correlations")
    return float(abs(e[0] - e[1] + e[2] + e[3]))


def result_from_correlations(correlations) -> ChshResult:
    e = tuple(float(x) for x in correlations)
    return ChshResult(*e, chsh_score(e))


def ideal_singlet_correlation(theta_a, theta_b):
    """Noise-free singlet anticorrelation -cos(2(thetaA - thetaB))."""
    return -np.cos(2.0 * (np.asarray(theta_a) - np.asarray(theta_b)))


def analyzer_operator(theta: float) -> np.ndarray:
    """Plus/minus observable of an analyzer at angle theta:
    cos(2 theta) sigma_z + sin(2 theta) sigma_x."""
    c = math.cos(2.0 * theta)
    s = math.sin(2.0 * theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def chsh_score_from_state(rho, settings: ChshSettings) -> float:
    """Score predicted by a density matrix at the given settings; used as a
    cross-check against the directly counted score."""
    rho = np.asarray(rho)
    e = [float(np.real(np.trace(rho @ np.kron(analyzer_operator(ta),
                                              analyzer_operator(tb)))))
         for ta, tb in settings.pairs()]
    return chsh_score(e)


class ChshCounts:
    """Coincidence tallies for the four CHSH setting pairs.

    ``joint`` has shape (4, 2, 2) indexed by (setting pair, plus/minus A,
    plus/minus B); ``invalid`` has shape (4,).  Mergeable like CountsTable.
    """

    __slots__ = ("joint", "invalid")

    def __init__(self, joint=None, invalid=None):
        self.joint = (np.zeros((4, 2, 2), dtype=np.int64) if joint is None
                      else np.array(joint, dtype=np.int64))
        self.invalid = (np.zeros(4, dtype=np.int64) if invalid is None
                        else np.array(invalid, dtype=np.int64))

    def record(self, setting: int, out_a, out_b) -> None:
        if not 0 <= setting < 4:
            raise ValueError(f"setting index {setting} out of range")
        if out_a < 2 and out_b < 2:
            self.joint[setting, out_a, out_b] += 1
        else:
            self.invalid[setting] += 1

    def merge(self, other: "ChshCounts") -> "ChshCounts":
        return ChshCounts(self.joint + other.joint, self.invalid + other.invalid)

    __add__ = merge

    @property
    def n_valid_total(self) -> int:
        return int(self.joint.sum())

    @property
    def n_invalid_total(self) -> int:
        return int(self.invalid.sum())

    def correlation(self, setting: int) -> float:
        cell = self.joint[setting]
        n = cell.sum()
        if n == 0:
            raise ZeroValidCounts(f"no valid coincidences for setting pair {setting}")
        return float((cell[0, 0] + cell[1, 1] - cell[0, 1] - cell[1, 0]) / n)

    def correlations(self) -> np.ndarray:
        return np.array([self.correlation(k) for k in range(4)])
