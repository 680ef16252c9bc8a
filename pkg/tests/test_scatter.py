import numpy as np
import pytest

from invistunnel.potential import build_rect, preset
from invistunnel.scatter import (amplitudes, transfer_matrix,
                                 transmission_curve, wavefunction)
from invistunnel.units import GAAS, k_of_E

RNG = np.random.default_rng(20260823)


def single_barrier_T(V0, b, E, params=GAAS):
    """Textbook closed form for one rectangular barrier, E < V0."""
    c = params.hbar2_over_2m
    kappa = np.sqrt((V0 - E) / c)
    return 1.0 / (1.0 + V0**2 * np.sinh(kappa * b) ** 2 / (4 * E * (V0 - E)))


def test_single_barrier_closed_form():
    V0, b = 0.12, 0.4
    prof = build_rect([(b, V0)])
    for E in [0.001, 0.03, 0.06, 0.1, 0.119]:
        sol = amplitudes(prof, E)
        assert sol.T == pytest.approx(single_barrier_T(V0, b, E), rel=1e-12)


def test_free_profile_is_transparent():
    prof = preset("free")
    for E in [1e-8, 0.06, 2.0]:
        sol = amplitudes(prof, E)
        assert sol.t == pytest.approx(1.0, abs=1e-13)
        assert abs(sol.r) < 1e-13


def test_unitarity_random_sample():
    names = [n for n in ("bwb", "2bwb", "5bwb", "2bsb", "db-wide")]
    for name in names:
        prof = preset(name)
        E = 10 ** RNG.uniform(-8, 0.3, size=200)
        k = k_of_E(E, prof.params)
        from invistunnel.scatter import _raw_amplitudes
        t, r = _raw_amplitudes(prof, k.astype(complex))
        assert np.max(np.abs(np.abs(t) ** 2 + np.abs(r) ** 2 - 1.0)) < 1e-12


def test_transfer_matrix_determinant_complex_k():
    # |Im k| L kept moderate: the plane-wave change of basis cancels
    # catastrophically deeper in the plane
    prof = preset("2bwb")
    for _ in range(50):
        k = complex(RNG.uniform(0.05, 5.0), RNG.uniform(-0.5, 0.5))
        M = transfer_matrix(prof, k)
        assert M.det == pytest.approx(1.0, abs=1e-10)


def test_transfer_matrix_amplitudes_match_direct():
    prof = preset("2bwb")
    E = 0.06
    k = k_of_E(E, prof.params)
    sol = amplitudes(prof, E)
    M = transfer_matrix(prof, k)
    assert M.t == pytest.approx(sol.t, rel=1e-12)
    assert M.r == pytest.approx(sol.r, rel=1e-12)


def test_time_reversal_symmetry():
    # t(-k*) = conj(t(k)) for real potentials
    prof = preset("5bwb")
    from invistunnel.scatter import _raw_amplitudes
    ks = np.array([0.3 - 0.1j, 1.2 - 0.02j, 0.05 - 0.3j])
    t1, _ = _raw_amplitudes(prof, ks)
    t2, _ = _raw_amplitudes(prof, -np.conj(ks))
    assert np.allclose(t2, np.conj(t1), rtol=1e-12)


def test_amplitudes_requires_positive_E():
    prof = preset("bwb")
    with pytest.raises(ValueError):
        amplitudes(prof, 0.0)
    with pytest.raises(ValueError):
        amplitudes(prof, -0.1)


def test_transmission_curve_unwraps_phase():
    prof = preset("db-wide")
    E = np.linspace(0.01, 0.6, 500)
    _, T, theta = transmission_curve(prof, E)
    assert np.all((0 <= T) & (T <= 1 + 1e-12))
    assert np.max(np.abs(np.diff(theta))) < np.pi


def test_wavefunction_boundary_matching():
    prof = preset("2bwb")
    E = 0.06
    sol = amplitudes(prof, E)
    k = sol.k
    psi0 = wavefunction(prof, E, [0.0])[0]
    psiL = wavefunction(prof, E, [prof.L])[0]
    assert psi0 == pytest.approx(1.0 + sol.r, rel=1e-12)
    assert psiL == pytest.approx(sol.t * np.exp(1j * k * prof.L), rel=1e-12)


def test_wavefunction_continuity_at_slice_edges():
    prof = preset("5bwb")
    E = 0.03
    eps = 1e-9
    for edge in prof.edges[1:-1]:
        left, right = wavefunction(prof, E, [edge - eps, edge + eps])
        assert abs(left - right) < 1e-6 * max(abs(left), 1.0)
