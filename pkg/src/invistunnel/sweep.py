"""Parameter sweeps and invisibility-window extraction.

A sweep regenerates the profile for each axis value (no caching of
scattering data) and evaluates the exact transmission on an energy
grid.  Window extraction then reports the maximal axis intervals over
which T stays above a floor across a chosen energy band.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .potential import PotentialProfile, Slice, preset
from .scatter import _raw_amplitudes
from .units import k_of_E

AXES = ("V", "mass_ratio", "widths_scale")

# reference height: sweeps rescale barrier tops (and well bottoms) of the
# named family so that axis value V means V0 = |U| = V
V_REF = 0.12


@dataclass(frozen=True)
class SweepSpec:
    """One-axis family sweep over an energy grid."""

    family: str
    axis: str
    axis_grid: np.ndarray
    E_grid: np.ndarray
    T_floor: float = 0.5

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        ax = np.asarray(self.axis_grid, dtype=float)
        Eg = np.asarray(self.E_grid, dtype=float)
        if ax.size == 0 or Eg.size == 0:
            raise ValueError("grids must be nonempty")
        if ax.size > 1 and not np.all(np.diff(ax) > 0):
            raise ValueError("axis_grid must be strictly increasing")
        if Eg.size > 1 and not np.all(np.diff(Eg) > 0):
            raise ValueError("E_grid must be strictly increasing")
        if np.any(Eg <= 0):
            raise ValueError("E_grid must be positive")
        if not 0 < self.T_floor <= 1:
            raise ValueError("T_floor must be in (0, 1]")
        object.__setattr__(self, "axis_grid", ax)
        object.__setattr__(self, "E_grid", Eg)


@dataclass(frozen=True)
class ContourTable:
    """T(axis_value, E) on the sweep grid."""

    spec: SweepSpec
    axis_values: np.ndarray
    E: np.ndarray
    T: np.ndarray  # shape (n_axis, n_E)

    def rows(self):
        """Long-format (axis_value, E_eV, T) row iterator."""
        for i, a in enumerate(self.axis_values):
            for j, e in enumerate(self.E):
                yield float(a), float(e), float(self.T[i, j])


def family_profile(family: str, axis: str, value: float) -> PotentialProfile:
    """Profile of the named family at one axis value.

    V rescales every slice height by value/V_REF, so negative values
    flip barriers into wells.  widths_scale stretches all widths;
    mass_ratio swaps the effective mass.
    """
    base = preset(family)
    if axis == "V":
        slices = tuple(Slice(s.width, s.height * value / V_REF)
                       for s in base.slices)
        return PotentialProfile(slices, base.params,
                                f"{family}[V={value:g}]")
    if axis == "widths_scale":
        if not value > 0:
            raise ValueError("widths_scale must be positive")
        slices = tuple(Slice(s.width * value, s.height) for s in base.slices)
        return PotentialProfile(slices, base.params,
                                f"{family}[w*={value:g}]")
    if axis == "mass_ratio":
        if not value > 0:
            raise ValueError("mass_ratio must be positive")
        params = replace(base.params, mass_ratio=value)
        return PotentialProfile(base.slices, params,
                                f"{family}[m={value:g}]")
    raise ValueError(f"unknown axis {axis!r}")


def transmission_contour(spec: SweepSpec) -> ContourTable:
    """Exact T on the sweep grid, regenerated per axis value."""
    T = np.empty((spec.axis_grid.size, spec.E_grid.size))
    for i, val in enumerate(spec.axis_grid):
        prof = family_profile(spec.family, spec.axis, float(val))
        if spec.axis == "V" and val == 0.0:
            T[i] = 1.0  # free case exactly
            continue
        k = k_of_E(spec.E_grid, prof.params)
        t, _ = _raw_amplitudes(prof, k.astype(complex))
        T[i] = np.abs(t) ** 2
    return ContourTable(spec=spec, axis_values=spec.axis_grid.copy(),
                        E=spec.E_grid.copy(), T=T)


def invisibility_window(table: ContourTable, E_band: tuple[float, float],
                        T_min: float) -> list[tuple[float, float]]:
    """Maximal axis intervals with min_{E in band} T >= T_min.

    The band is evaluated on the table's grid points falling inside it;
    intervals are reported in axis units, closed at grid points.
    """
    lo, hi = E_band
    if lo > hi:
        raise ValueError("E_band must be ordered")
    if lo < table.E[0] - 1e-15 or hi > table.E[-1] + 1e-15:
        raise ValueError("E_band must lie within the table's energy range")
    mask = (table.E >= lo) & (table.E <= hi)
    if not mask.any():
        raise ValueError("E_band contains no grid energies")
    ok = np.min(table.T[:, mask], axis=1) >= T_min
    windows: list[tuple[float, float]] = []
    start = None
    for i, flag in enumerate(ok):
        if flag and start is None:
            start = table.axis_values[i]
        if not flag and start is not None:
            windows.append((float(start), float(table.axis_values[i - 1])))
            start = None
    if start is not None:
        windows.append((float(start), float(table.axis_values[-1])))
    return windows
