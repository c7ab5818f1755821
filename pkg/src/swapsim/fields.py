"""Correlated Jones-vector sources built from a reified Gaussian vacuum.

Each downconversion source turns four independent complex Gaussian vacuum
modes into two correlated random Jones vectors: ``mode1`` goes to the joint
heralding measurement, ``mode2`` to local polarization analysis.  The
cosh/sinh mixing places all cross-mode correlation in the H<->V quadrature
products, with opposite signs for the two pairings -- the classical
analogue of a polarization singlet.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class SqueezeParams(NamedTuple):
    """Squeezing strength ``r`` and vacuum scale ``sigma_sq`` = E[|z|^2]."""

    r: float
    sigma_sq: float = 1.0


class VacuumRealization(NamedTuple):
    """Two vacuum Jones vectors; last axis indexes polarization (H, V)."""

    z1: np.ndarray
    z2: np.ndarray


class RandomJonesPair(NamedTuple):
    """One source's output: ``mode1`` to the heralding arm, ``mode2`` local."""

    mode1: np.ndarray
    mode2: np.ndarray


def sample_vacuum(rng: np.random.Generator, size: int | None = None,
                  sigma_sq: float = 1.0) -> VacuumRealization:
    """Draw the four complex vacuum modes feeding one source.

    Every component is an independent circular complex Gaussian whose
    quadratures have variance ``sigma_sq / 2``, so E[|z|^2] = sigma_sq and
    E[z^2] = 0.  ``size=None`` gives a single realization (shape ``(2,)``
    per vector), otherwise arrays of shape ``(size, 2)``.
    """
    if sigma_sq <= 0:
        raise ValueError("sigma_sq must be positive")
    shape = (2, 2, 2) if size is None else (int(size), 2, 2, 2)
    quads = rng.normal(0.0, np.sqrt(sigma_sq / 2.0), size=shape)
    z = quads[..., 0] + 1j * quads[..., 1]
    return VacuumRealization(z1=z[..., 0, :], z2=z[..., 1, :])


def generate_source_pair(vac: VacuumRealization,
                         params: SqueezeParams) -> RandomJonesPair:
    """Mix the vacuum modes into one source's pair of Jones vectors.

    With ch = cosh(r), sh = sinh(r)::

        mode1_H = ch * z1_H + sh * conj(z2_V)
        mode1_V = ch * z1_V - sh * conj(z2_H)
        mode2_H = ch * z2_H - sh * conj(z1_V)
        mode2_V = ch * z2_V + sh * conj(z1_H)

    At r = 0 this is the identity.  For r > 0 every component has
    E[|.|^2] = sigma_sq * cosh(2r) and the only nonzero cross moments are
    the H<->V pairings E[mode1_H mode2_V] = -E[mode1_V mode2_H]
    = sigma_sq * sinh(2r); per quadrature that is +/- sigma_sq *
    sinh(r)cosh(r), with opposite signs for the real and imaginary parts.
    """
    if params.r < 0:
        raise ValueError("squeezing strength r must be >= 0")
    ch = np.cosh(params.r)
    sh = np.sinh(params.r)
    z1, z2 = vac.z1, vac.z2
    mode1 = np.empty_like(z1)
    mode2 = np.empty_like(z2)
    mode1[..., 0] = ch * z1[..., 0] + sh * np.conj(z2[..., 1])
    mode1[..., 1] = ch * z1[..., 1] - sh * np.conj(z2[..., 0])
    mode2[..., 0] = ch * z2[..., 0] - sh * np.conj(z1[..., 1])
    mode2[..., 1] = ch * z2[..., 1] + sh * np.conj(z1[..., 0])
    return RandomJonesPair(mode1=mode1, mode2=mode2)


def sample_source_pair(rng: np.random.Generator, size: int | None,
                       params: SqueezeParams) -> RandomJonesPair:
    """Vacuum draw plus squeezing transform in one call."""
    return generate_source_pair(sample_vacuum(rng, size, params.sigma_sq), params)
