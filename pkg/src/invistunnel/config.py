"""Validated configuration models shared by the service and the CLI.

All models reject unknown keys so that typos in config files fail loudly
before any computation starts.  Field names carry unit suffixes matching
the CSV headers (nm, eV, fs).
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .potential import (PotentialProfile, PTTerm, build_pt_composite,
                        build_rect, preset)
from .units import GAAS, PhysicalParams


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PresetPotential(_Strict):
    kind: Literal["preset"] = "preset"
    name: str
    mass_ratio: float = Field(default=0.067, gt=0)

    def build(self) -> PotentialProfile:
        return preset(self.name, _params(self.mass_ratio))


class RectSlice(_Strict):
    width_nm: float = Field(gt=0)
    height_eV: float


class RectPotential(_Strict):
    kind: Literal["rect"]
    slices: list[RectSlice] = Field(min_length=1)
    mass_ratio: float = Field(default=0.067, gt=0)

    def build(self) -> PotentialProfile:
        layout = [(s.width_nm, s.height_eV) for s in self.slices]
        return build_rect(layout, _params(self.mass_ratio))


class PTTermConfig(_Strict):
    center_nm: float
    strength_eV: float
    d_nm: float = Field(gt=0)


class PTPotential(_Strict):
    kind: Literal["pt"]
    terms: list[PTTermConfig] = Field(min_length=1)
    n_slices: int = Field(default=2000, ge=1)
    cutoff_eps: float = Field(default=1e-6, gt=0, lt=1)
    mass_ratio: float = Field(default=0.067, gt=0)

    def build(self) -> PotentialProfile:
        terms = [PTTerm(t.center_nm, t.strength_eV, t.d_nm)
                 for t in self.terms]
        return build_pt_composite(terms, cutoff_eps=self.cutoff_eps,
                                  n_slices=self.n_slices,
                                  params=_params(self.mass_ratio))


PotentialConfig = Union[PresetPotential, RectPotential, PTPotential]


def _params(mass_ratio: float) -> PhysicalParams:
    if mass_ratio == GAAS.mass_ratio:
        return GAAS
    return PhysicalParams(mass_ratio=mass_ratio)


class EnergyGrid(_Strict):
    e_min_eV: float = Field(gt=0)
    e_max_eV: float = Field(gt=0)
    points: int = Field(default=400, ge=2)
    log: bool = True

    @model_validator(mode="after")
    def _ordered(self):
        if not self.e_max_eV > self.e_min_eV:
            raise ValueError("e_max_eV must exceed e_min_eV")
        return self

    def values(self):
        import numpy as np
        if self.log:
            return np.logspace(np.log10(self.e_min_eV),
                               np.log10(self.e_max_eV), self.points)
        return np.linspace(self.e_min_eV, self.e_max_eV, self.points)


class TransmitRequest(_Strict):
    potential: PotentialConfig = Field(discriminator="kind")
    grid: EnergyGrid
    include_one_pole: bool = False
    expansion_n: int | None = Field(default=None, ge=1)


class PolesRequest(_Strict):
    potential: PotentialConfig = Field(discriminator="kind")
    n_poles: int = Field(default=50, ge=1)
    threshold_only: bool = False


class DwellRequest(_Strict):
    potential: PotentialConfig = Field(discriminator="kind")
    grid: EnergyGrid


class PacketRequest(_Strict):
    potential: PotentialConfig = Field(discriminator="kind")
    sigma_nm: float = Field(gt=0)
    x0_nm: float = Field(lt=0)
    E0_eV: float = Field(gt=0)
    x_nm: float = Field(gt=0)
    t_max_over_t0: float = Field(default=2.0, gt=0)
    points: int = Field(default=400, ge=2)


class SweepRequest(_Strict):
    family: str
    axis: Literal["V", "mass_ratio", "widths_scale"]
    axis_min: float
    axis_max: float
    axis_points: int = Field(default=200, ge=2)
    grid: EnergyGrid
    band_eV: tuple[float, float] | None = None
    T_min: float = Field(default=0.99, gt=0, le=1)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.axis_max > self.axis_min:
            raise ValueError("axis_max must exceed axis_min")
        if self.band_eV is not None and self.band_eV[0] > self.band_eV[1]:
            raise ValueError("band_eV must be ordered")
        return self
