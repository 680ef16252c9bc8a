import numpy as np
import pytest

from invistunnel.expansion import (OnePoleModel, E_q_of_pole, T_single_pole,
                                   pt_eta, residue_symmetry_defect,
                                   t_expansion, t_pt_analytic, t_single_pole,
                                   threshold_anchor)
from invistunnel.poles import find_poles, threshold_pole
from invistunnel.potential import PTTerm, build_pt_composite, preset
from invistunnel.scatter import _raw_amplitudes
from invistunnel.units import GAAS, k_of_E


@pytest.fixture(scope="module")
def db_wide_poles():
    return find_poles(preset("db-wide"), n_poles=60)


def test_expansion_converges_to_exact(db_wide_poles):
    prof = preset("db-wide")
    E = np.linspace(0.01, 0.4, 120)
    k = k_of_E(E, prof.params)
    t_ref, _ = _raw_amplitudes(prof, k.astype(complex))
    errs = []
    for N in (15, 30, 60):
        t_N = t_expansion(db_wide_poles, k, N, profile=prof)
        errs.append(np.max(np.abs(np.abs(t_N) ** 2 - np.abs(t_ref) ** 2)))
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 5e-3


def test_expansion_anchored_beats_plain(db_wide_poles):
    prof = preset("db-wide")
    k = k_of_E(np.linspace(0.05, 0.4, 60), prof.params)
    t_ref, _ = _raw_amplitudes(prof, k.astype(complex))
    err_plain = np.max(np.abs(
        t_expansion(db_wide_poles, k, 60, threshold_anchored=False) - t_ref))
    err_anch = np.max(np.abs(
        t_expansion(db_wide_poles, k, 60, profile=prof) - t_ref))
    assert err_anch < err_plain


def test_expansion_argument_checks(db_wide_poles):
    with pytest.raises(ValueError):
        t_expansion(db_wide_poles, np.array([0.1]), 10**6)
    with pytest.raises(ValueError):
        t_expansion(db_wide_poles, np.array([0.1]), 5, profile=None,
                    threshold_anchored=True)


def test_threshold_anchor_matches_limit():
    prof = preset("2bwb")
    k_small = 1e-7
    t, _ = _raw_amplitudes(prof, np.array([complex(k_small)]))
    assert t[0] / (2j * k_small) == pytest.approx(threshold_anchor(prof),
                                                  rel=1e-4)


def test_residue_symmetry(db_wide_poles):
    assert residue_symmetry_defect(preset("db-wide"), db_wide_poles) < 1e-8


def test_one_pole_model_construction():
    tp = threshold_pole(preset("2bwb"))
    m = OnePoleModel.from_pole(tp, GAAS)
    assert m.E_q == pytest.approx(E_q_of_pole(tp, GAAS))
    assert m.E_q == pytest.approx(GAAS.hbar2_over_2m * tp.gamma**2)


def test_E_q_of_pole_requires_axis_pole():
    ps = find_poles(preset("db-wide"), n_poles=3)
    res = next(p for p in ps.poles if p.kind == "resonant")
    with pytest.raises(ValueError):
        E_q_of_pole(res, GAAS)


def test_t_single_pole_limits():
    m = OnePoleModel.from_gamma(-1e-3, GAAS)
    assert t_single_pole(m, 0.0) == 0.0
    assert abs(t_single_pole(m, 10.0)) == pytest.approx(1.0, abs=1e-7)
    # |t|^2 equals 1/(1+E_q/E)
    k = 0.02
    E = GAAS.hbar2_over_2m * k * k
    assert abs(t_single_pole(m, k)) ** 2 == pytest.approx(
        T_single_pole(E, m.E_q), rel=1e-12)


def test_T_single_pole_validation():
    with pytest.raises(ValueError):
        T_single_pole(np.array([0.1, -0.1]), 1e-6)
    with pytest.raises(ValueError):
        T_single_pole(0.1, -1e-6)


def test_pt_analytic_vs_sliced_barrier():
    strength, d = 0.12, 0.0709
    prof = build_pt_composite([PTTerm(0.0, strength, d)])
    k = k_of_E(np.logspace(-5, np.log10(0.3), 40), GAAS)
    t_num, _ = _raw_amplitudes(prof, k.astype(complex))
    t_ana = t_pt_analytic(strength, d, GAAS, k)
    assert np.max(np.abs(np.abs(t_num) ** 2 - np.abs(t_ana) ** 2)) < 1e-4


def test_pt_transparent_well():
    # 1 - eta = 9, the first transparency point for a P-T well
    d = 0.2
    strength = -2.0 * GAAS.hbar2_over_2m / d**2
    assert 1.0 - pt_eta(strength, d, GAAS) == pytest.approx(9.0, rel=1e-12)
    k = k_of_E(np.logspace(-6, 0, 60), GAAS)
    T = np.abs(t_pt_analytic(strength, d, GAAS, k)) ** 2
    assert np.max(np.abs(T - 1.0)) < 1e-10
