"""Response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class _Row(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TransmitRow(_Row):
    E_eV: float
    T: float
    theta_rad: float
    T_one_pole: float | None = None
    T_expansion: float | None = None


class TransmitResponse(_Row):
    label: str
    L_nm: float
    E_q_eV: float | None = None
    rows: list[TransmitRow]


class PoleRecord(_Row):
    re_k_per_nm: float
    im_k_per_nm: float
    kind: str
    E_re_eV: float
    E_im_eV: float
    residue_re: float
    residue_im: float


class PolesResponse(_Row):
    label: str
    L_nm: float
    complete: bool
    winding_count: int | None = None
    threshold: PoleRecord | None = None
    E_q_eV: float | None = None
    poles: list[PoleRecord]
    notes: list[str]


class DwellRow(_Row):
    E_eV: float
    tau_dwell_fs: float
    tau_decomposed_fs: float
    tau_free_fs: float
    ratio: float
    T_term: float
    transmission_time_term: float
    reflection_time_term: float
    interference_term: float


class DwellResponse(_Row):
    label: str
    L_nm: float
    rows: list[DwellRow]


class PacketRow(_Row):
    t_fs: float
    t_over_t0: float
    xi: float
    rho_free: float
    abs_psi_sq: float


class PacketResponse(_Row):
    label: str
    t0_fs: float
    invisibility_score: float
    truncated_weight: float
    notes: list[str]
    rows: list[PacketRow]


class SweepRow(_Row):
    axis_value: float
    E_eV: float
    T: float


class SweepResponse(_Row):
    family: str
    axis: str
    windows: list[tuple[float, float]] | None = None
    rows: list[SweepRow]


class PresetInfo(_Row):
    name: str
    label: str
    L_nm: float
    n_slices: int


class PresetsResponse(_Row):
    presets: list[PresetInfo]


class ErrorBody(_Row):
    error_type: str  # "config" or "numerics"
    detail: str
