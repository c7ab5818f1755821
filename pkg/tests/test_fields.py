import numpy as np
import pytest

from swapsim.fields import (RandomJonesPair, SqueezeParams, generate_source_pair,
                            sample_source_pair, sample_vacuum)
from swapsim.harness import derive_rng
from swapsim.optics import rotate
from swapsim.validate import (check_covariance, covariance_closed_form, quadratures)

N_MOMENTS = 300_000


def test_vacuum_moments():
    rng = derive_rng(42, 0)
    vac = sample_vacuum(rng, 1_000_000, sigma_sq=1.0)
    z1h = vac.z1[:, 0]
    assert abs(z1h.mean().real) < 5e-3
    assert abs(z1h.mean().imag) < 5e-3
    assert abs(np.mean(np.abs(z1h) ** 2) - 1.0) < 5e-3
    cross = np.mean(z1h * np.conj(vac.z2[:, 1]))
    assert abs(cross) < 5e-3


def test_vacuum_scale():
    rng = derive_rng(42, 0)
    vac = sample_vacuum(rng, 200_000, sigma_sq=2.5)
    assert abs(np.mean(np.abs(vac.z1[:, 1]) ** 2) - 2.5) < 0.03
    with pytest.raises(ValueError):
        sample_vacuum(rng, 10, sigma_sq=0.0)


def test_single_realization_shape():
    rng = derive_rng(1, 0)
    vac = sample_vacuum(rng)
    assert vac.z1.shape == (2,)
    pair = generate_source_pair(vac, SqueezeParams(0.5))
    assert pair.mode1.shape == (2,)


def test_zero_squeezing_is_identity():
    rng = derive_rng(7, 0)
    vac = sample_vacuum(rng, 1000)
    pair = generate_source_pair(vac, SqueezeParams(0.0))
    np.testing.assert_array_equal(pair.mode1, vac.z1)
    np.testing.assert_array_equal(pair.mode2, vac.z2)


def test_negative_r_rejected():
    rng = derive_rng(7, 0)
    vac = sample_vacuum(rng, 4)
    with pytest.raises(ValueError):
        generate_source_pair(vac, SqueezeParams(-0.1))


def test_determinism_bit_identical():
    a = sample_source_pair(derive_rng(123, 0, 5), 5000, SqueezeParams(0.9))
    b = sample_source_pair(derive_rng(123, 0, 5), 5000, SqueezeParams(0.9))
    np.testing.assert_array_equal(a.mode1, b.mode1)
    np.testing.assert_array_equal(a.mode2, b.mode2)


def test_diagonal_moment_matches_cosh2r():
    pair = sample_source_pair(derive_rng(11, 0), N_MOMENTS, SqueezeParams(0.9))
    sample = np.mean(np.abs(pair.mode1[:, 0]) ** 2)
    assert sample == pytest.approx(np.cosh(1.8), rel=0.01)


def test_quadrature_cross_moment_matches_shch():
    # E[Re(mode1_H) Re(mode2_V)] = +sinh(r)cosh(r); imaginary parts carry
    # the opposite sign; the H<->V pairing with swapped roles is negated.
    pair = sample_source_pair(derive_rng(11, 0), N_MOMENTS, SqueezeParams(0.9))
    s = np.sinh(0.9) * np.cosh(0.9)
    re_hv = np.mean(pair.mode1[:, 0].real * pair.mode2[:, 1].real)
    im_hv = np.mean(pair.mode1[:, 0].imag * pair.mode2[:, 1].imag)
    re_vh = np.mean(pair.mode1[:, 1].real * pair.mode2[:, 0].real)
    assert re_hv == pytest.approx(s, rel=0.02)
    assert im_hv == pytest.approx(-s, rel=0.02)
    assert re_vh == pytest.approx(-s, rel=0.02)


def test_same_polarization_cross_moment_vanishes():
    pair = sample_source_pair(derive_rng(11, 0), N_MOMENTS, SqueezeParams(0.9))
    cross = np.mean(pair.mode1[:, 0] * pair.mode2[:, 0])
    assert abs(cross) < 0.03


def test_covariance_oracle_all_moments():
    report = check_covariance(r=0.9, n=N_MOMENTS, seed=2024)
    assert report["ok"], (
        f"max |z| = {report['max_abs_z']:.2f}; offending entries: "
        + str([e for e in report["entries"] if abs(e["z"]) > report["z_max"]]))


def _max_abs_z(pair: RandomJonesPair, r: float, sigma_sq: float) -> float:
    x = quadratures(pair)
    n = x.shape[0]
    expected = covariance_closed_form(r, sigma_sq)
    worst = 0.0
    for i in range(8):
        for j in range(i, 8):
            prod = x[:, i] * x[:, j]
            se = prod.std() / np.sqrt(n)
            worst = max(worst, abs((prod.mean() - expected[i, j]) / se))
    return worst


def test_joint_rotation_leaves_covariance_invariant():
    pair = sample_source_pair(derive_rng(19, 0), N_MOMENTS, SqueezeParams(0.9))
    rotated = RandomJonesPair(rotate(pair.mode1, 0.7), rotate(pair.mode2, 0.7))
    assert _max_abs_z(rotated, 0.9, 1.0) <= 5.0


def test_independent_sources_uncorrelated():
    alice = sample_source_pair(derive_rng(77, 0), N_MOMENTS, SqueezeParams(0.9))
    bob = sample_source_pair(derive_rng(77, 1), N_MOMENTS, SqueezeParams(0.9))
    xa = quadratures(alice)
    xb = quadratures(bob)
    n = xa.shape[0]
    for i in range(8):
        for j in range(8):
            prod = xa[:, i] * xb[:, j]
            se = prod.std() / np.sqrt(n)
            assert abs(prod.mean() / se) <= 5.0
