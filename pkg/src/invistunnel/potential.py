"""Potential profiles of compact support [0, L].

A profile is an ordered sequence of constant-potential slices.  Builders
cover rectangular layouts, chains of repeated units (with optional
per-unit well-depth overrides), and truncated sums of Poschl-Teller
terms, which are discretized onto slices at midpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .units import GAAS, PhysicalParams


@dataclass(frozen=True)
class Slice:
    """One constant-potential segment: width in nm, height in eV."""

    width: float
    height: float

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise ValueError(f"slice width must be positive, got {self.width}")


@dataclass(frozen=True)
class PTTerm:
    """One term strength / cosh^2((x - center)/d) of a composite profile."""

    center: float
    strength: float
    d: float

    def __post_init__(self) -> None:
        if not self.d > 0:
            raise ValueError(f"width parameter d must be positive, got {self.d}")


@dataclass(frozen=True)
class PotentialProfile:
    """V(x) on [0, L] as constant slices; V = 0 outside by construction."""

    slices: tuple[Slice, ...]
    params: PhysicalParams = GAAS
    label: str = ""

    def __post_init__(self) -> None:
        if not self.slices:
            raise ValueError("profile needs at least one slice")

    @property
    def L(self) -> float:
        return float(sum(s.width for s in self.slices))

    @cached_property
    def widths(self) -> np.ndarray:
        return np.array([s.width for s in self.slices])

    @cached_property
    def heights(self) -> np.ndarray:
        return np.array([s.height for s in self.slices])

    @cached_property
    def edges(self) -> np.ndarray:
        """Slice boundary positions, edges[0] = 0, edges[-1] = L."""
        return np.concatenate([[0.0], np.cumsum(self.widths)])


def evaluate(profile: PotentialProfile, x) -> np.ndarray | float:
    """V(x) in eV; zero outside [0, L]."""
    x = np.asarray(x, dtype=float)
    idx = np.clip(np.searchsorted(profile.edges, x, side="right") - 1, 0,
                  len(profile.slices) - 1)
    v = np.where((x >= 0.0) & (x <= profile.L), profile.heights[idx], 0.0)
    return v if v.ndim else float(v)


def build_rect(layout: Sequence[tuple[float, float]],
               params: PhysicalParams = GAAS,
               label: str | None = None) -> PotentialProfile:
    """Profile from an ordered list of (width_nm, height_eV) pairs."""
    if len(layout) == 0:
        raise ValueError("layout must be nonempty")
    slices = tuple(Slice(float(w), float(h)) for w, h in layout)
    if label is None:
        label = "rect[" + ",".join(f"({s.width:g},{s.height:g})" for s in slices) + "]"
    return PotentialProfile(slices, params, label)


def build_chain(unit: PotentialProfile, count: int, spacing: float,
                overrides: Mapping[int, float] | None = None,
                label: str | None = None) -> PotentialProfile:
    """Concatenate ``count`` copies of ``unit`` separated by free spacers.

    ``overrides`` maps a 0-based unit index to a replacement depth for the
    negative-height (well) slices of that unit.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if spacing < 0:
        raise ValueError("spacing must be nonnegative")
    overrides = dict(overrides or {})
    for idx in overrides:
        if not 0 <= idx < count:
            raise ValueError(f"override index {idx} out of range for count={count}")
        if not any(s.height < 0 for s in unit.slices):
            raise ValueError("unit has no well slice to override")
    slices: list[Slice] = []
    for i in range(count):
        if i > 0 and spacing > 0:
            slices.append(Slice(spacing, 0.0))
        for s in unit.slices:
            if i in overrides and s.height < 0:
                s = replace(s, height=float(overrides[i]))
            slices.append(s)
    if label is None:
        label = f"{count}x({unit.label})/h={spacing:g}"
    return PotentialProfile(tuple(slices), unit.params, label)


def slice_continuous(V: Callable[[np.ndarray], np.ndarray],
                     support: tuple[float, float], n_slices: int,
                     params: PhysicalParams = GAAS,
                     label: str = "sliced") -> PotentialProfile:
    """Discretize V on [x0, x1] into uniform slices sampled at midpoints."""
    x0, x1 = support
    if n_slices < 1:
        raise ValueError("n_slices must be >= 1")
    if not x1 > x0:
        raise ValueError("support must have positive length")
    w = (x1 - x0) / n_slices
    mids = x0 + w * (np.arange(n_slices) + 0.5)
    heights = np.asarray(V(mids), dtype=float)
    slices = tuple(Slice(w, float(h)) for h in heights)
    return PotentialProfile(slices, params, label)


def pt_sum(terms: Sequence[PTTerm]) -> Callable[[np.ndarray], np.ndarray]:
    """Callable V(x) = sum_i strength_i / cosh^2((x - center_i)/d_i)."""
    def V(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in terms:
            out += t.strength / np.cosh((x - t.center) / t.d) ** 2
        return out
    return V


def build_pt_composite(terms: Sequence[PTTerm], cutoff_eps: float = 1e-6,
                       n_slices: int = 2000,
                       params: PhysicalParams = GAAS,
                       label: str = "pt-composite") -> PotentialProfile:
    """Truncate a sum of Poschl-Teller terms and slice it.

    The support is cut where |V| falls below cutoff_eps * max|strength|,
    then shifted so it starts at x = 0.
    """
    if len(terms) == 0:
        raise ValueError("terms must be nonempty")
    if not 0 < cutoff_eps < 1:
        raise ValueError("cutoff_eps must be in (0, 1)")
    V = pt_sum(terms)
    smax = max(abs(t.strength) for t in terms)
    thr = cutoff_eps * smax
    # conservative bracket from single-term tails
    lo = min(t.center - t.d * math.acosh(math.sqrt(max(abs(t.strength), thr) / thr))
             for t in terms)
    hi = max(t.center + t.d * math.acosh(math.sqrt(max(abs(t.strength), thr) / thr))
             for t in terms)
    xs = np.linspace(lo, hi, 20001)
    above = np.abs(V(xs)) >= thr
    if not above.any():
        raise ValueError("cutoff produced empty support")
    i0, i1 = np.argmax(above), len(above) - 1 - np.argmax(above[::-1])
    x0 = _refine_crossing(V, thr, xs[max(i0 - 1, 0)], xs[i0])
    x1 = _refine_crossing(V, thr, xs[min(i1 + 1, len(xs) - 1)], xs[i1])
    shifted = lambda x: V(np.asarray(x) + x0)
    return slice_continuous(shifted, (0.0, x1 - x0), n_slices, params, label)


def _refine_crossing(V, thr, x_out, x_in):
    """Bisect |V| = thr between an outside point and an inside point."""
    f = lambda x: abs(float(V(np.array([x]))[0])) - thr
    a, b = x_out, x_in
    if f(a) >= 0:
        return a
    for _ in range(60):
        m = 0.5 * (a + b)
        if f(m) < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# Built-in systems

#: Canonical rectangular parameters (nm / eV) shared by the built-ins.
B, W, H, V0, U0 = 0.4, 0.8, 0.8, 0.12, 0.12


def bwb_unit(b: float = B, w: float = W, v0: float = V0, u0: float = U0,
             params: PhysicalParams = GAAS) -> PotentialProfile:
    """Barrier-well-barrier unit."""
    return build_rect([(b, v0), (w, -u0), (b, v0)], params, label="BWB")


def _preset_free(params):
    return build_rect([(1.6, 0.0)], params, label="free")


def _preset_bwb(params):
    return bwb_unit(params=params)


def _preset_2bwb(params):
    return build_chain(bwb_unit(params=params), 2, H, label="2BWB")


def _preset_5bwb(params):
    return build_chain(bwb_unit(params=params), 5, H,
                       overrides={1: -0.113, 3: -0.113}, label="5BWB")


def _preset_10bwb(params):
    return build_chain(_preset_5bwb(params), 2, H, label="10BWB")


def _preset_2bsb(params):
    return build_chain(bwb_unit(u0=0.0, params=params), 2, H, label="2BSB")


def _preset_db_wide(params):
    return build_rect([(4.0, 0.2), (8.0, 0.0), (4.0, 0.2)], params,
                      label="double-barrier b=4.0")


def _preset_db_narrow(params):
    return build_rect([(0.4, 0.2), (0.8, 0.0), (0.4, 0.2)], params,
                      label="double-barrier b=0.4")


#: Poschl-Teller widths for the quadruple-barrier composite (nm).
PT_DB, PT_DW = 0.0709, 0.1399
#: Tuned center spacing scale for the quadruple-barrier composite; chosen
#: so the near-threshold pole energy comes out at 6.19e-10 eV.
PT_CENTER_SCALE = 1.0177990109


def pt4_terms(scale: float = None) -> tuple[PTTerm, ...]:
    """Quadruple-barrier Poschl-Teller terms mirroring the 2BWB layout."""
    if scale is None:
        scale = PT_CENTER_SCALE
    centers = np.array([0.2, 0.8, 1.4, 2.6, 3.2, 3.8])
    mid = 2.0
    centers = mid + scale * (centers - mid)
    strengths = [V0, -U0, V0, V0, -U0, V0]
    ds = [PT_DB, PT_DW, PT_DB, PT_DB, PT_DW, PT_DB]
    return tuple(PTTerm(c, s, d) for c, s, d in zip(centers, strengths, ds))


def _preset_pt4(params):
    return build_pt_composite(pt4_terms(), params=params, label="PT quadruple barrier")


PRESETS: dict[str, Callable[[PhysicalParams], PotentialProfile]] = {
    "free": _preset_free,
    "bwb": _preset_bwb,
    "2bwb": _preset_2bwb,
    "5bwb": _preset_5bwb,
    "10bwb": _preset_10bwb,
    "2bsb": _preset_2bsb,
    "db-wide": _preset_db_wide,
    "db-narrow": _preset_db_narrow,
    "pt4": _preset_pt4,
}


def preset(name: str, params: PhysicalParams = GAAS) -> PotentialProfile:
    """Look up a built-in system by name."""
    try:
        factory = PRESETS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
    return factory(params)
