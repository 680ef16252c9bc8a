import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from invistunnel.packet import (GaussianSpec, arrival_time,
                                evolve_transmitted, free_packet,
                                invisibility_score, momentum_profile)
from invistunnel.potential import preset
from invistunnel.units import GAAS


def narrow_spec():
    # k0 = 2.0; negative-k weight ~ erfc(8.5), utterly negligible
    return GaussianSpec(sigma=3.0, x0=-30.0, E0=GAAS.hbar2_over_2m * 4.0)


def test_momentum_profile_normalized_and_peaked():
    g = narrow_spec()
    phi = momentum_profile(g, GAAS)
    norm, _ = quad(lambda k: abs(phi(k)) ** 2, -np.inf, np.inf)
    assert norm == pytest.approx(1.0, abs=1e-8)
    k0 = g.k0(GAAS)
    assert abs(phi(k0)) > abs(phi(k0 + 0.3))
    assert abs(phi(k0)) > abs(phi(k0 - 0.3))


def test_k_width_convention():
    assert GaussianSpec(sigma=0.5, x0=-5.0, E0=0.06).k_width == pytest.approx(1.0)


def test_spec_validation_and_tail_warning():
    with pytest.raises(ValueError):
        GaussianSpec(sigma=0.0, x0=-5.0, E0=0.06)
    with pytest.raises(ValueError):
        GaussianSpec(sigma=0.5, x0=1.0, E0=0.06)
    with pytest.warns(UserWarning):
        GaussianSpec(sigma=3.0, x0=-2.0, E0=0.06)


def test_free_potential_scores_zero():
    g = narrow_spec()
    t0 = arrival_time(g, GAAS, 60.0)
    trace = evolve_transmitted(preset("free"), g, 60.0,
                               np.linspace(0.5, 2 * t0, 80))
    assert invisibility_score(trace) < 1e-8
    # free density peaks near the ballistic arrival time
    t_peak = trace.t_grid[np.argmax(trace.rho_free)]
    assert t_peak == pytest.approx(t0, rel=0.15)


def test_quadrature_free_packet_matches_closed_form():
    g = narrow_spec()
    times = np.linspace(1.0, 40.0, 40)
    trace = evolve_transmitted(preset("free"), g, 60.0, times)
    ref = free_packet(g, GAAS, 60.0, times)
    assert np.max(np.abs(trace.psi_free - ref)) < 1e-6 * np.max(np.abs(ref))


def test_negative_k_truncation_warns_and_reports():
    g = GaussianSpec(sigma=0.5, x0=-5.0, E0=0.06)
    with pytest.warns(UserWarning, match="k < 0"):
        trace = evolve_transmitted(preset("free"), g, 100.0,
                                   np.linspace(1.0, 50.0, 10))
    assert trace.truncated_weight == pytest.approx(0.3727, abs=1e-3)
    assert trace.notes


def test_xi_cauchy_schwarz_pointwise():
    g = narrow_spec()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = evolve_transmitted(preset("2bwb"), g, 60.0,
                                   np.linspace(1.0, 40.0, 60))
    bound = np.sqrt(trace.rho_free * np.abs(trace.psi) ** 2)
    assert np.all(np.abs(trace.xi) <= bound + 1e-15)


def test_probe_point_must_be_outside():
    g = narrow_spec()
    with pytest.raises(ValueError):
        evolve_transmitted(preset("2bwb"), g, 1.0, np.linspace(1, 10, 5))


def test_tunneling_attenuates_opaque_barrier():
    # strongly opaque system: transmitted density far below free
    g = GaussianSpec(sigma=8.0, x0=-60.0, E0=0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = evolve_transmitted(preset("db-wide"), g, 100.0,
                                   np.linspace(10.0, 400.0, 80))
    # the band still clips two sharp resonances, so attenuation is strong
    # but not uniform
    assert np.max(np.abs(trace.psi) ** 2) < 0.2 * np.max(trace.rho_free)
