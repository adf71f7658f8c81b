import math

import numpy as np
import pytest

import cbs


def test_version():
    assert cbs.__version__ == "0.1.0"


def test_angular():
    assert cbs.clebsch_gordan("1/2", "1/2", "1", "1", "3/2", "3/2") == pytest.approx(1.0)
    assert cbs.configuration_average(-1, 1, 1, -1).real == pytest.approx(2.0 / 15.0, abs=1e-15)


def test_bad_input_raises():
    with pytest.raises(ValueError):
        cbs.Model("1/3", 1.0)
    with pytest.raises(ValueError):
        cbs.Model("0", -1.0)


def test_steady_state_is_a_density_matrix():
    rho = cbs.steady_state("1", 3.0, 0.5)
    assert rho.shape == (8, 8)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_elastic_closed_form():
    m = cbs.Model("1", 2.0, 1.0)
    ref = cbs.elastic_intensity_analytic("1", 1.0, cbs.saturation(2.0, 1.0))
    assert m.ladder_elastic() == pytest.approx(ref, rel=1e-9)
    assert m.crossed_elastic() == pytest.approx(m.ladder_elastic(), rel=1e-12)


def test_spectrum_and_totals():
    m = cbs.Model("0", 18.0, rel_tol=1e-6)
    t = m.totals()
    assert t["alpha"] == pytest.approx(1.095, abs=0.01)
    out = m.spectrum([-2.0, 0.0, 2.0], with_crossed=False)
    lad = out["ladder_inelastic"]
    assert lad[0] == pytest.approx(lad[2], rel=1e-8)
    assert min(lad) > 0.0


def test_dressed_resonances():
    nu = cbs.dressed_resonances("1", 10.0, 0.0)
    assert nu[2] == pytest.approx(2.96, abs=0.01)
    assert nu[3] == pytest.approx(7.04, abs=0.01)


def test_criterion_report():
    r = cbs.run_criterion("A4")
    assert r["passed"]
    assert "A1" in cbs.acceptance_ids()
