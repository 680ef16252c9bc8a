import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invistunnel.potential import (PRESETS, PTTerm, build_chain,
                                   build_pt_composite, build_rect, bwb_unit,
                                   evaluate, preset, pt_sum, pt4_terms,
                                   slice_continuous)


def test_build_rect_basic():
    prof = build_rect([(0.4, 0.12), (0.8, -0.12), (0.4, 0.12)])
    assert prof.L == pytest.approx(1.6)
    assert np.allclose(prof.edges, [0.0, 0.4, 1.2, 1.6])


def test_build_rect_rejects_empty_and_bad_width():
    with pytest.raises(ValueError):
        build_rect([])
    with pytest.raises(ValueError):
        build_rect([(0.0, 0.1)])


def test_evaluate_piecewise_and_outside():
    prof = build_rect([(1.0, 0.2), (1.0, -0.1)])
    x = np.array([-0.5, 0.5, 1.5, 2.5])
    assert np.allclose(evaluate(prof, x), [0.0, 0.2, -0.1, 0.0])


def test_chain_lengths_match_known_systems():
    assert preset("2bwb").L == pytest.approx(4.0)
    assert preset("5bwb").L == pytest.approx(11.2)
    assert preset("10bwb").L == pytest.approx(23.2)


def test_chain_overrides_well_depths():
    prof = preset("5bwb")
    wells = [s.height for s in prof.slices if s.height < 0]
    assert wells == [-0.12, -0.113, -0.12, -0.113, -0.12]


def test_chain_override_validation():
    unit = bwb_unit()
    with pytest.raises(ValueError):
        build_chain(unit, 2, 0.8, overrides={5: -0.1})
    barrier_only = build_rect([(0.4, 0.12)])
    with pytest.raises(ValueError):
        build_chain(barrier_only, 2, 0.8, overrides={0: -0.1})


def test_2bsb_has_no_wells():
    assert all(s.height >= 0 for s in preset("2bsb").slices)


def test_slice_continuous_midpoint_sampling():
    prof = slice_continuous(lambda x: x, (0.0, 1.0), 4)
    assert np.allclose(prof.heights, [0.125, 0.375, 0.625, 0.875])


def test_pt_composite_support_and_symmetry():
    prof = build_pt_composite(pt4_terms())
    # support cut where the composite falls to 1e-6 of the peak scale
    V = pt_sum(pt4_terms())
    assert abs(float(V(np.array([-prof.L / 10.0]))[0])) < 0.12
    # the preset layout is mirror-symmetric
    h = prof.heights
    assert np.allclose(h, h[::-1], atol=1e-9)


def test_pt_term_validation():
    with pytest.raises(ValueError):
        PTTerm(0.0, 0.1, 0.0)
    with pytest.raises(ValueError):
        build_pt_composite([])


def test_preset_lookup_errors():
    with pytest.raises(KeyError):
        preset("does-not-exist")
    assert set(PRESETS) >= {"free", "bwb", "2bwb", "5bwb", "10bwb", "2bsb",
                            "pt4"}


@given(st.lists(st.tuples(st.floats(0.01, 10.0), st.floats(-1.0, 1.0)),
                min_size=1, max_size=12))
@settings(max_examples=50, deadline=None)
def test_rect_invariants(layout):
    prof = build_rect(layout)
    assert prof.L == pytest.approx(sum(w for w, _ in layout))
    assert np.all(np.diff(prof.edges) > 0)
    assert evaluate(prof, np.array([-1.0]))[0] == 0.0
    assert evaluate(prof, np.array([prof.L + 1.0]))[0] == 0.0
    mids = 0.5 * (prof.edges[:-1] + prof.edges[1:])
    assert np.allclose(evaluate(prof, mids), prof.heights)
