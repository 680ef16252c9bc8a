"""FastAPI service exposing the scattering toolkit.

Each endpoint validates its request model, builds the profile, runs the
corresponding core computation, and returns a typed response.  Config
errors map to HTTP 400 and numerical non-convergence to HTTP 500, both
with a machine-readable body.
"""

from __future__ import annotations

import warnings

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import (DwellRequest, PacketRequest, PolesRequest,
                      SweepRequest, TransmitRequest)
from ..expansion import T_single_pole, t_expansion, E_q_of_pole
from ..packet import (GaussianSpec, arrival_time, evolve_transmitted,
                      invisibility_score)
from ..poles import Pole, find_poles, threshold_pole
from ..potential import PRESETS, preset
from ..scatter import NumericsError, transmission_curve
from ..sweep import SweepSpec, invisibility_window, transmission_contour
from ..times import dwell_components, dwell_time, free_time
from ..units import E_of_k
from . import schemas as S

app = FastAPI(title="invistunnel", version=__version__)


@app.exception_handler(NumericsError)
async def _numerics_handler(request: Request, exc: NumericsError):
    body = S.ErrorBody(error_type="numerics", detail=str(exc))
    return JSONResponse(status_code=500, content=body.model_dump())


@app.exception_handler(ValueError)
async def _value_handler(request: Request, exc: ValueError):
    body = S.ErrorBody(error_type="config", detail=str(exc))
    return JSONResponse(status_code=400, content=body.model_dump())


@app.exception_handler(KeyError)
async def _key_handler(request: Request, exc: KeyError):
    body = S.ErrorBody(error_type="config", detail=str(exc.args[0]))
    return JSONResponse(status_code=400, content=body.model_dump())


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.get("/presets", response_model=S.PresetsResponse)
def presets():
    infos = []
    for name in sorted(PRESETS):
        prof = preset(name)
        infos.append(S.PresetInfo(name=name, label=prof.label,
                                  L_nm=prof.L, n_slices=len(prof.slices)))
    return S.PresetsResponse(presets=infos)


@app.post("/transmit", response_model=S.TransmitResponse,
          response_model_exclude_none=True)
def transmit(req: TransmitRequest):
    prof = req.potential.build()
    E, T, theta = transmission_curve(prof, req.grid.values())
    E_q = None
    T_op = [None] * len(E)
    if req.include_one_pole:
        tp = threshold_pole(prof)
        if tp is None:
            raise ValueError("no imaginary-axis pole found for the one-pole "
                             "model column")
        E_q = E_q_of_pole(tp, prof.params)
        T_op = T_single_pole(E, E_q)
    T_exp = [None] * len(E)
    if req.expansion_n is not None:
        ps = find_poles(prof, n_poles=req.expansion_n)
        from ..units import k_of_E
        t_n = t_expansion(ps, k_of_E(E, prof.params), req.expansion_n,
                          profile=prof)
        T_exp = np.abs(t_n) ** 2
    rows = [S.TransmitRow(E_eV=float(e), T=float(t), theta_rad=float(th),
                          T_one_pole=None if o is None else float(o),
                          T_expansion=None if x is None else float(x))
            for e, t, th, o, x in zip(E, T, theta, T_op, T_exp)]
    return S.TransmitResponse(label=prof.label, L_nm=prof.L,
                              E_q_eV=E_q, rows=rows)


def _pole_record(p: Pole, params) -> S.PoleRecord:
    Ec = E_of_k(p.k, params)
    return S.PoleRecord(re_k_per_nm=float(p.k.real),
                        im_k_per_nm=float(p.k.imag), kind=p.kind,
                        E_re_eV=float(np.real(Ec)), E_im_eV=float(np.imag(Ec)),
                        residue_re=float(p.residue_r_n.real),
                        residue_im=float(p.residue_r_n.imag))


@app.post("/poles", response_model=S.PolesResponse,
          response_model_exclude_none=True)
def poles(req: PolesRequest):
    prof = req.potential.build()
    tp = threshold_pole(prof)
    threshold = _pole_record(tp, prof.params) if tp is not None else None
    E_q = E_q_of_pole(tp, prof.params) if tp is not None else None
    if req.threshold_only:
        return S.PolesResponse(label=prof.label, L_nm=prof.L, complete=True,
                               threshold=threshold, E_q_eV=E_q, poles=[],
                               notes=[])
    ps = find_poles(prof, n_poles=req.n_poles)
    return S.PolesResponse(
        label=prof.label, L_nm=prof.L, complete=ps.complete,
        winding_count=ps.winding_count, threshold=threshold, E_q_eV=E_q,
        poles=[_pole_record(p, prof.params) for p in ps.poles],
        notes=[ps.notes] if ps.notes else [])


@app.post("/dwell", response_model=S.DwellResponse)
def dwell(req: DwellRequest):
    prof = req.potential.build()
    rows = []
    for E in req.grid.values():
        E = float(E)
        tau_dec, terms = dwell_components(prof, E)
        tau_int = dwell_time(prof, E)
        tau0 = free_time(prof, E)
        rows.append(S.DwellRow(E_eV=E, tau_dwell_fs=tau_int,
                               tau_decomposed_fs=tau_dec, tau_free_fs=tau0,
                               ratio=tau_int / tau0, **terms))
    return S.DwellResponse(label=prof.label, L_nm=prof.L, rows=rows)


@app.post("/packet", response_model=S.PacketResponse)
def packet(req: PacketRequest):
    prof = req.potential.build()
    g = GaussianSpec(sigma=req.sigma_nm, x0=req.x0_nm, E0=req.E0_eV)
    t0 = arrival_time(g, prof.params, req.x_nm)
    t_grid = np.linspace(t0 / req.points, req.t_max_over_t0 * t0, req.points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        trace = evolve_transmitted(prof, g, req.x_nm, t_grid)
    score = invisibility_score(trace)
    rho_t = np.abs(trace.psi) ** 2
    rows = [S.PacketRow(t_fs=float(t), t_over_t0=float(t / t0), xi=float(x),
                        rho_free=float(rf), abs_psi_sq=float(rt))
            for t, x, rf, rt in zip(trace.t_grid, trace.xi, trace.rho_free,
                                    rho_t)]
    return S.PacketResponse(label=prof.label, t0_fs=t0,
                            invisibility_score=score,
                            truncated_weight=trace.truncated_weight,
                            notes=list(trace.notes), rows=rows)


@app.post("/sweep", response_model=S.SweepResponse,
          response_model_exclude_none=True)
def sweep(req: SweepRequest):
    spec = SweepSpec(
        family=req.family, axis=req.axis,
        axis_grid=np.linspace(req.axis_min, req.axis_max, req.axis_points),
        E_grid=req.grid.values(), T_floor=req.T_min)
    table = transmission_contour(spec)
    windows = None
    if req.band_eV is not None:
        windows = invisibility_window(table, req.band_eV, req.T_min)
    rows = [S.SweepRow(axis_value=a, E_eV=e, T=t) for a, e, t in table.rows()]
    return S.SweepResponse(family=req.family, axis=req.axis,
                           windows=windows, rows=rows)
