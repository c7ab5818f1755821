"""Joint heralding measurement: beam-splitter interference and click patterns."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

import numpy as np

from .optics import beam_splitter, click


class BsmPolicy(Enum):
    """Success rule applied to the detectors behind the beam splitter.

    ORTHOGONAL_PATTERN: four detectors; exactly one click in each output
    port and the clicked polarizations are orthogonal ({cH, dV} or
    {cV, dH}).
    ANY_ONE_PER_PORT: four detectors; exactly one click per port, any
    polarizations.
    FIXED_POLARIZERS: two detectors; port c is filtered to H and port d to
    V, and both must click.
    """

    ORTHOGONAL_PATTERN = "orthogonal-pattern"
    ANY_ONE_PER_PORT = "any-one-per-port"
    FIXED_POLARIZERS = "fixed-polarizers"

    @classmethod
    def from_name(cls, name: str) -> "BsmPolicy":
        for member in cls:
            if member.value == name:
                return member
        names = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown bsm policy {name!r} (expected one of: {names})")


class BsmOutcome(NamedTuple):
    success: bool
    pattern: str | None


_PATTERNS = {
    (True, False, False, True): "ch_dv",
    (False, True, True, False): "cv_dh",
    (True, False, True, False): "ch_dh",
    (False, True, False, True): "cv_dv",
}


def port_clicks(a1, b1, gamma, sigma_sq=1.0):
    """Click decisions for the four heralding detectors (cH, cV, dH, dV)."""
    c, d = beam_splitter(a1, b1)
    return (click(c[..., 0], gamma, sigma_sq), click(c[..., 1], gamma, sigma_sq),
            click(d[..., 0], gamma, sigma_sq), click(d[..., 1], gamma, sigma_sq))


def success_mask(ch, cv, dh, dv, policy: BsmPolicy):
    """Vectorized success rule; FIXED_POLARIZERS ignores the cV/dH detectors."""
    if policy is BsmPolicy.FIXED_POLARIZERS:
        return ch & dv
    one_c = ch ^ cv
    one_d = dh ^ dv
    if policy is BsmPolicy.ANY_ONE_PER_PORT:
        return one_c & one_d
    if policy is BsmPolicy.ORTHOGONAL_PATTERN:
        return one_c & one_d & ((ch & dv) | (cv & dh))
    raise ValueError(f"unknown policy {policy!r}")


def bsm_measure(a1, b1, gamma, policy: BsmPolicy, sigma_sq=1.0) -> BsmOutcome:
    """Heralding decision for a single realization pair."""
    ch, cv, dh, dv = (bool(x) for x in port_clicks(a1, b1, gamma, sigma_sq))
    if policy is BsmPolicy.FIXED_POLARIZERS:
        ok = ch and dv
        return BsmOutcome(ok, "fixed" if ok else None)
    ok = bool(success_mask(ch, cv, dh, dv, policy))
    return BsmOutcome(ok, _PATTERNS[(ch, cv, dh, dv)] if ok else None)
