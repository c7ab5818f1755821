import math

import numpy as np
import pytest

from swapsim.chsh import (ChshCounts, ChshSettings, analyzer_operator,
                          chsh_score, chsh_score_from_state,
                          ideal_singlet_correlation, result_from_correlations)
from swapsim.tomography import SINGLET, ZeroValidCounts


def test_default_angles():
    s = ChshSettings()
    assert s.pairs() == ((0.0, math.pi / 8), (0.0, 3 * math.pi / 8),
                         (math.pi / 4, math.pi / 8), (math.pi / 4, 3 * math.pi / 8))


def test_from_degrees_roundtrip():
    s = ChshSettings.from_degrees((0, 45, 22.5, 67.5))
    assert s == ChshSettings()


def test_score_arithmetic():
    assert chsh_score([1.0, 1.0, 1.0, 1.0]) == pytest.approx(2.0)
    assert chsh_score([-1.0, 1.0, -1.0, -1.0]) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        chsh_score([1.0, 1.0])


def test_ideal_singlet_closed_form_hits_tsirelson():
    s = ChshSettings()
    e = [ideal_singlet_correlation(ta, tb) for ta, tb in s.pairs()]
    assert chsh_score(e) == pytest.approx(2 * math.sqrt(2), abs=1e-12)


def test_score_bounded_by_four():
    rng = np.random.default_rng(1)
    for _ in range(100):
        e = rng.uniform(-1, 1, size=4)
        assert 0.0 <= chsh_score(e) <= 4.0


def test_result_from_correlations():
    res = result_from_correlations([-0.7, 0.7, -0.7, -0.7])
    assert res.s == pytest.approx(2.8)
    assert res.correlations == (-0.7, 0.7, -0.7, -0.7)
    assert res.e_ab_prime == 0.7


def test_counts_correlation_arithmetic():
    counts = ChshCounts()
    counts.joint[0] = [[15, 85], [85, 15]]
    assert counts.correlation(0) == pytest.approx(-0.7)
    counts.joint[1] = [[50, 0], [0, 50]]
    assert counts.correlation(1) == pytest.approx(1.0)
    counts.joint[2] = [[10, 10], [10, 10]]
    assert counts.correlation(2) == pytest.approx(0.0)
    with pytest.raises(ZeroValidCounts):
        counts.correlation(3)


def test_counts_record_and_merge():
    a = ChshCounts()
    b = ChshCounts()
    a.record(0, 0, 1)
    a.record(2, 3, 0)   # invalid side A
    b.record(0, 1, 0)
    merged = a.merge(b)
    assert merged.joint[0, 0, 1] == 1
    assert merged.joint[0, 1, 0] == 1
    assert merged.invalid[2] == 1
    assert merged.n_valid_total == 2
    assert merged.n_invalid_total == 1


def test_analyzer_operator_eigenstructure():
    op = analyzer_operator(0.0)
    np.testing.assert_allclose(op, [[1, 0], [0, -1]])
    w = np.linalg.eigvalsh(analyzer_operator(0.613))
    np.testing.assert_allclose(sorted(w), [-1.0, 1.0], atol=1e-12)


def test_score_from_singlet_state():
    rho = np.outer(SINGLET, SINGLET.conj())
    assert chsh_score_from_state(rho, ChshSettings()) == pytest.approx(
        2 * math.sqrt(2), abs=1e-12)
    assert chsh_score_from_state(np.eye(4) / 4, ChshSettings()) == pytest.approx(0.0)
