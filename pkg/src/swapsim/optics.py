"""Jones-calculus elements and the threshold detector model.

A Jones vector is any complex array whose last axis has length 2 (H, V);
operations broadcast over leading axes.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

INV_SQRT2 = 1.0 / np.sqrt(2.0)


class AnalyzerOutcome(IntEnum):
    PLUS = 0
    MINUS = 1
    INVALID_NONE = 2
    INVALID_DOUBLE = 3

    @property
    def valid(self) -> bool:
        return self < 2


def beam_splitter(a, b):
    """Symmetric 50/50 splitter: returns ((a+b)/sqrt2, (a-b)/sqrt2).

    The matrix is involutive, so applying it twice restores the inputs.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    return (a + b) * INV_SQRT2, (a - b) * INV_SQRT2


def rotate(vec, theta):
    """Rotate the polarization axes by ``theta`` radians.

    ``theta`` may be a scalar or an array broadcasting against the leading
    axes of ``vec``.
    """
    vec = np.asarray(vec)
    c = np.cos(theta)
    s = np.sin(theta)
    out = np.empty(np.broadcast(vec[..., 0], c).shape + (2,),
                   dtype=np.result_type(vec.dtype, float))
    out[..., 0] = c * vec[..., 0] + s * vec[..., 1]
    out[..., 1] = -s * vec[..., 0] + c * vec[..., 1]
    return out


def basis_transform(vec, basis):
    """Map ``vec`` so its H component feeds the plus detector of ``basis``.

    ``basis`` is one of the strings 'z' (H/V, identity), 'x' (diagonal),
    'y' (circular), or a float read as an analyzer angle in radians:

        x: (h', v') = (h + v, h - v) / sqrt2
        y: (h', v') = (h - i v, h + i v) / sqrt2
    """
    vec = np.asarray(vec)
    if isinstance(basis, str):
        b = basis.lower()
        if b == "z":
            return vec
        if b == "x":
            out = np.empty_like(vec)
            out[..., 0] = (vec[..., 0] + vec[..., 1]) * INV_SQRT2
            out[..., 1] = (vec[..., 0] - vec[..., 1]) * INV_SQRT2
            return out
        if b == "y":
            out = np.empty(vec.shape, dtype=np.result_type(vec.dtype, complex))
            out[..., 0] = (vec[..., 0] - 1j * vec[..., 1]) * INV_SQRT2
            out[..., 1] = (vec[..., 0] + 1j * vec[..., 1]) * INV_SQRT2
            return out
        raise ValueError(f"unknown basis {basis!r} (expected 'x', 'y', 'z' or an angle)")
    return rotate(vec, float(basis))


def effective_gamma(gamma: float, units: str = "amplitude") -> float:
    """Convert a configured threshold to amplitude units.

    'amplitude': a detector clicks when |s| > gamma * sqrt(sigma_sq).
    'intensity': the configured value bounds |s|^2 / sigma_sq, so the
    equivalent amplitude threshold is sqrt(gamma).
    """
    if gamma < 0:
        raise ValueError("threshold must be >= 0")
    if units == "amplitude":
        return float(gamma)
    if units == "intensity":
        return float(np.sqrt(gamma))
    raise ValueError(f"unknown threshold units {units!r}")


def click(s, gamma, sigma_sq=1.0):
    """Threshold detector: True iff |s| strictly exceeds gamma*sqrt(sigma_sq)."""
    return np.abs(s) > gamma * np.sqrt(sigma_sq)


def outcome_codes(plus_click, minus_click) -> np.ndarray:
    """Combine the two detector decisions into AnalyzerOutcome codes."""
    p = np.asarray(plus_click)
    m = np.asarray(minus_click)
    return np.where(
        p & ~m, np.int8(AnalyzerOutcome.PLUS),
        np.where(m & ~p, np.int8(AnalyzerOutcome.MINUS),
                 np.where(~p & ~m, np.int8(AnalyzerOutcome.INVALID_NONE),
                          np.int8(AnalyzerOutcome.INVALID_DOUBLE))))


def analyze(vec, basis, gamma, sigma_sq=1.0):
    """Two-detector polarization analyzer.

    Transforms into the measurement basis, thresholds both output
    components, and classifies the click pattern.  Returns an
    AnalyzerOutcome for a single vector, or an int8 array of outcome codes
    for a batch.
    """
    t = basis_transform(vec, basis)
    codes = outcome_codes(click(t[..., 0], gamma, sigma_sq),
                          click(t[..., 1], gamma, sigma_sq))
    if codes.ndim == 0:
        return AnalyzerOutcome(int(codes))
    return codes
