import numpy as np
import pytest

from swapsim.bsm import BsmPolicy, bsm_measure, port_clicks, success_mask
from swapsim.fields import SqueezeParams, sample_source_pair
from swapsim.harness import derive_rng


def test_policy_names():
    assert BsmPolicy.from_name("orthogonal-pattern") is BsmPolicy.ORTHOGONAL_PATTERN
    assert BsmPolicy.from_name("any-one-per-port") is BsmPolicy.ANY_ONE_PER_PORT
    assert BsmPolicy.from_name("fixed-polarizers") is BsmPolicy.FIXED_POLARIZERS
    with pytest.raises(ValueError):
        BsmPolicy.from_name("mystery")


def test_hand_example_orthogonal_success():
    # c = (2.2, 0)/sqrt2 ~ (1.556, 0); d = (0, 2.2)/sqrt2 ~ (0, 1.556):
    # only cH and dV exceed 1.
    a1 = np.array([1.1, 1.1], dtype=complex)
    b1 = np.array([1.1, -1.1], dtype=complex)
    out = bsm_measure(a1, b1, 1.0, BsmPolicy.ORTHOGONAL_PATTERN)
    assert out.success
    assert out.pattern == "ch_dv"


def test_hand_example_double_click_port_failure():
    # d = (4, -2)/sqrt2: both dH ~ 2.83 and dV ~ 1.41 exceed 1.
    a1 = np.array([2.0, 0.0], dtype=complex)
    b1 = np.array([-2.0, 2.0], dtype=complex)
    out = bsm_measure(a1, b1, 1.0, BsmPolicy.ORTHOGONAL_PATTERN)
    assert not out.success
    assert out.pattern is None


def test_fixed_polarizers_unity_at_zero_threshold():
    rng = derive_rng(31, 0)
    for _ in range(20):
        a1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        b1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        out = bsm_measure(a1, b1, 0.0, BsmPolicy.FIXED_POLARIZERS)
        assert out.success
        assert out.pattern == "fixed"


def test_same_pol_pattern_rejected_by_orthogonal():
    # force clicks on cH and dH only: a1 = (x, 0), b1 = (y, 0) with
    # |x+y| and |x-y| both large
    a1 = np.array([3.0, 0.0], dtype=complex)
    b1 = np.array([3.0j, 0.0], dtype=complex)
    assert not bsm_measure(a1, b1, 1.0, BsmPolicy.ORTHOGONAL_PATTERN).success
    out = bsm_measure(a1, b1, 1.0, BsmPolicy.ANY_ONE_PER_PORT)
    assert out.success
    assert out.pattern == "ch_dh"


def test_swap_inputs_leaves_success_unchanged():
    rng = derive_rng(32, 0)
    pair_a = sample_source_pair(rng, 2000, SqueezeParams(0.9))
    pair_b = sample_source_pair(rng, 2000, SqueezeParams(0.9))
    for policy in BsmPolicy:
        fwd = success_mask(*port_clicks(pair_a.mode1, pair_b.mode1, 1.0), policy)
        rev = success_mask(*port_clicks(pair_b.mode1, pair_a.mode1, 1.0), policy)
        np.testing.assert_array_equal(fwd, rev)


def test_fixed_polarizers_monotone_in_gamma_exact():
    rng = derive_rng(33, 0)
    a1 = sample_source_pair(rng, 50_000, SqueezeParams(0.9)).mode1
    b1 = sample_source_pair(rng, 50_000, SqueezeParams(0.9)).mode1
    counts = []
    for gamma in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        mask = success_mask(*port_clicks(a1, b1, gamma), BsmPolicy.FIXED_POLARIZERS)
        counts.append(int(mask.sum()))
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == 50_000  # gamma=0 heralds everything


def test_four_detector_policies_monotone_in_tail():
    # on a fixed realization set, success counts fall with gamma once the
    # expected click count per port is below one
    rng = derive_rng(34, 0)
    a1 = sample_source_pair(rng, 200_000, SqueezeParams(0.9)).mode1
    b1 = sample_source_pair(rng, 200_000, SqueezeParams(0.9)).mode1
    for policy in (BsmPolicy.ORTHOGONAL_PATTERN, BsmPolicy.ANY_ONE_PER_PORT):
        counts = []
        for gamma in (2.0, 2.4, 2.8, 3.2):
            mask = success_mask(*port_clicks(a1, b1, gamma), policy)
            counts.append(int(mask.sum()))
        assert counts == sorted(counts, reverse=True), (policy, counts)


def test_efficiency_collapses_at_low_squeezing():
    # at gamma=1 the heralding rate at r=0.1 is at least 10x below r=1.5
    rng = derive_rng(35, 0)
    rates = {}
    for r in (0.1, 1.5):
        a1 = sample_source_pair(derive_rng(35, 0), 200_000, SqueezeParams(r)).mode1
        b1 = sample_source_pair(derive_rng(35, 1), 200_000, SqueezeParams(r)).mode1
        rates[r] = {
            policy: success_mask(*port_clicks(a1, b1, 1.0), policy).mean()
            for policy in (BsmPolicy.FIXED_POLARIZERS, BsmPolicy.ORTHOGONAL_PATTERN)
        }
    for policy in (BsmPolicy.FIXED_POLARIZERS, BsmPolicy.ORTHOGONAL_PATTERN):
        assert rates[0.1][policy] <= 0.1 * rates[1.5][policy]
