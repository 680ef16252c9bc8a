import numpy as np
import pytest

from invistunnel.poles import (axis_poles, default_region, find_poles,
                               refine_pole, thin_barrier_estimate,
                               threshold_pole, winding_count)
from invistunnel.potential import build_rect, preset
from invistunnel.scatter import inverse_t
from invistunnel.units import GAAS


@pytest.fixture(scope="module")
def fig1_wide_poles():
    return find_poles(preset("db-wide"), n_poles=40)


def test_threshold_pole_2bwb_is_bound():
    tp = threshold_pole(preset("2bwb"))
    assert tp.kind == "bound"
    assert tp.gamma == pytest.approx(3.9082e-3, rel=1e-3)


def test_threshold_pole_5bwb_antibound():
    tp = threshold_pole(preset("5bwb"))
    assert tp.kind == "antibound"
    E_q = GAAS.hbar2_over_2m * tp.gamma**2
    assert E_q == pytest.approx(1.6715e-7, rel=1e-3)


def test_threshold_pole_free_none():
    assert threshold_pole(preset("free")) is None


def test_axis_poles_real_symmetry():
    # 1/t is real on the imaginary axis, so refined roots stay there
    for p in axis_poles(preset("2bsb"), -2.0, 2.0):
        assert p.k.real == 0.0


def test_refine_pole_converges_and_verifies():
    prof = preset("db-wide")
    seed = 0.35 - 0.05j
    pole = refine_pole(prof, seed)
    f_at = abs(inverse_t(prof, np.array([pole.k]))[0])
    f_near = abs(inverse_t(prof, np.array([pole.k + 0.05]))[0])
    assert f_at < 1e-8 * f_near


def test_find_poles_complete_and_counted(fig1_wide_poles):
    ps = fig1_wide_poles
    assert ps.complete
    n_resonant = sum(p.kind == "resonant" for p in ps.poles)
    assert ps.winding_count == n_resonant
    assert n_resonant >= 40


def test_pole_positions_fourth_quadrant(fig1_wide_poles):
    for p in fig1_wide_poles.poles:
        if p.kind == "resonant":
            assert p.k.real > 0 and p.k.imag < 0


def test_pole_imag_depth_exceeds_pi_over_L(fig1_wide_poles):
    # nu_n > pi/L asymptotically; only the low-lying below-barrier
    # resonances sit closer to the real axis, two of them very sharp
    ps = fig1_wide_poles
    L = ps.L
    res = sorted((p for p in ps.poles if p.kind == "resonant"),
                 key=lambda p: p.k.real)
    assert all(-p.k.imag > np.pi / L for p in res[-20:])
    very_sharp = [p for p in res if -p.k.imag * L < 0.5]
    assert len(very_sharp) == 2


def test_pole_spacing_near_pi_over_L(fig1_wide_poles):
    ps = fig1_wide_poles
    res = sorted(p.k.real for p in ps.poles if p.kind == "resonant")
    gaps = np.diff(res) / (np.pi / ps.L)
    assert np.all((0.4 < gaps) & (gaps < 2.5))


def test_pole_mirror_symmetry(fig1_wide_poles):
    # zeros of 1/t come in pairs (k, -k*)
    prof = preset("db-wide")
    ks = np.array([p.k for p in fig1_wide_poles.poles[:5]])
    mirrored = -np.conj(ks)
    f_m = np.abs(inverse_t(prof, mirrored))
    f_ref = np.abs(inverse_t(prof, mirrored + np.pi / (4 * prof.L)))
    assert np.max(f_m / f_ref) < 1e-8


def test_winding_count_matches_region():
    prof = preset("db-wide")
    region = default_region(prof, 10)
    n = winding_count(prof, region)
    ps = find_poles(prof, region=region)
    assert n == sum(p.kind == "resonant" for p in ps.poles)


def test_threshold_residue_near_half_i():
    tp = threshold_pole(preset("2bwb"))
    assert tp.residue_r_n == pytest.approx(-0.5j, abs=0.02)


def test_thin_barrier_estimate_checkpoint():
    gamma = thin_barrier_estimate(0.12, 0.012, GAAS)
    assert gamma == pytest.approx(-1.2662e-3, rel=1e-3)
    E_q = GAAS.hbar2_over_2m * gamma**2
    assert E_q == pytest.approx(9.1e-7, rel=0.02)


def test_thin_barrier_estimate_vs_exact_root():
    V0, L = 0.05, 0.02
    prof = build_rect([(L, V0)])
    tp = threshold_pole(prof)
    est = thin_barrier_estimate(V0, L, GAAS)
    assert tp.kind == "antibound"
    assert tp.gamma == pytest.approx(est, rel=0.05)
