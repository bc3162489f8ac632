import math

import numpy as np
import pytest

import ltdec


def quantity(report, label):
    for section in ("gaussian_factors", "diagnostics"):
        for q in report[section]:
            if q["label"] == label:
                return q["value"]
    raise KeyError(label)


def test_scenarios_listed():
    names = ltdec.scenario_names()
    for s in ("two_qubit", "four_qubit", "spin_bath", "position", "wcm", "clock"):
        assert s in names


def test_two_qubit_coherence_override():
    rep = ltdec.run_scenario("two_qubit", {"lambda": 3.5})
    assert quantity(rep, "coherence") == pytest.approx(math.exp(-1.0 / (16 * 3.5)), rel=1e-12)


def test_bad_override_raises():
    with pytest.raises(Exception):
        ltdec.run_scenario("two_qubit", {"lambda": -1.0})


def test_sigma_matches_closed_form():
    levels = np.array([0.0, 0.5, 2.0])
    c = np.array([0.6, 0.0 + 0.48j, 0.64], dtype=complex)
    lam, t0 = 1.7, 0.3
    sigma = ltdec.sigma_analytic(levels, c, t0, lam, 1.0)
    gap = levels[:, None] - levels[None, :]
    expected = np.outer(c, c.conj()) * np.exp(-1j * gap * t0) * np.exp(-gap**2 / (4 * lam))
    assert np.allclose(sigma, expected, atol=1e-13)
    assert ltdec.purity(levels, c, lam) == pytest.approx(np.trace(sigma @ sigma).real, abs=1e-13)


def test_entropy_and_partial_trace():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    rho = np.outer(bell, bell.conj())
    reduced = ltdec.partial_trace(rho, [2, 2], [0])
    assert np.allclose(reduced, np.eye(2) / 2)
    assert ltdec.entropy(reduced) == pytest.approx(math.log(2))
    with pytest.raises(ltdec.LtdError):
        ltdec.entropy(np.array([[2.0, 0.0], [0.0, 0.0]], dtype=complex))


def test_tau_min_two_level():
    # dh = 1/2 for equal weights on levels 0 and 1
    assert ltdec.tau_min(np.array([0.0, 1.0]), np.array([0.5, 0.5])) == pytest.approx(math.pi)
