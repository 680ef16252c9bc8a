"""Pole expansions and closed-form models of the transmission amplitude.

The N-pole expansion sums r_n e^{-i k_n L} / (k - k_n) over the stored
poles plus their time-reversal partners k_{-n} = -conj(k_n) with
r_{-n} = -conj(r_n) (the partner relation is verified numerically, see
residue_symmetry_defect).  By default the sum is anchored by the exact
threshold value of t(k)/2ik, which removes the slowly decaying constant
tail of the plain sum and gains one order of convergence without
changing the N -> infinity limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poles import AXIS_TOL, Pole, PoleSet
from .potential import PotentialProfile
from .scatter import _raw_amplitudes, pole_function
from .units import PhysicalParams


@dataclass(frozen=True)
class OnePoleModel:
    """Transmission model governed by one imaginary-axis pole i*gamma_q."""

    gamma_q: float
    E_q: float

    def __post_init__(self) -> None:
        if self.E_q < 0:
            raise ValueError("E_q must be nonnegative")

    @classmethod
    def from_gamma(cls, gamma_q: float, params: PhysicalParams) -> "OnePoleModel":
        return cls(gamma_q=gamma_q, E_q=params.hbar2_over_2m * gamma_q**2)

    @classmethod
    def from_pole(cls, pole: Pole, params: PhysicalParams) -> "OnePoleModel":
        if pole.gamma is None:
            raise ValueError("one-pole model needs an imaginary-axis pole")
        return cls.from_gamma(pole.gamma, params)


def E_q_of_pole(pole: Pole, params: PhysicalParams) -> float:
    """(hbar^2/2m) gamma_q^2 in eV for an imaginary-axis pole."""
    if pole.gamma is None:
        raise ValueError(f"pole at {pole.k} is not on the imaginary axis")
    return params.hbar2_over_2m * pole.gamma**2


def threshold_anchor(profile: PotentialProfile) -> complex:
    """Exact limit of t(k)/(2ik) as k -> 0."""
    D, s = pole_function(profile, np.array([0.0 + 0.0j]))
    return complex(np.exp(-s[0]) / D[0])


def _pole_pairs(pole: Pole):
    yield pole.k, pole.residue_r_n
    if abs(pole.k.real) > AXIS_TOL:
        yield -np.conj(pole.k), -np.conj(pole.residue_r_n)


def t_expansion(pole_set: PoleSet, k, N: int,
                profile: PotentialProfile | None = None,
                threshold_anchored: bool = True):
    """Transmission amplitude from the first N poles (plus partners).

    With ``threshold_anchored`` (requires ``profile``) the sum uses the
    subtracted form anchored at the exact k = 0 value; otherwise it is
    the plain pole sum.
    """
    if N > len(pole_set.poles):
        raise ValueError(f"pole set holds {len(pole_set.poles)} poles, N={N}")
    k_in = np.asarray(k, dtype=complex)
    k = np.atleast_1d(k_in)
    L = pole_set.L
    if threshold_anchored:
        if profile is None:
            raise ValueError("threshold_anchored expansion needs the profile")
        tot = np.full_like(k, threshold_anchor(profile))
    else:
        tot = np.zeros_like(k)
    near = np.abs(k) < 1e-14  # t -> 0 at threshold
    with np.errstate(invalid="ignore", divide="ignore"):
        for pole in pole_set.poles[:N]:
            for kn, rn in _pole_pairs(pole):
                c = rn * np.exp(-1j * kn * L)
                tot = tot + c / (k - kn)
                if threshold_anchored:
                    tot = tot + c / kn
        out = 2j * k * tot
    out[near] = 0.0
    return out if k_in.ndim else complex(out[0])


def residue_symmetry_defect(profile: PotentialProfile, pole_set: PoleSet,
                            n_check: int = 5) -> float:
    """Numerical check of the partner rule r_{-n} = -conj(r_n).

    Returns the maximum relative deviation of 1/t at the mirrored pole
    positions -conj(k_n); values near zero confirm the symmetry used to
    generate the negative-n terms.
    """
    from .scatter import inverse_t

    res = [p for p in pole_set.poles if abs(p.k.real) > AXIS_TOL][:n_check]
    if not res:
        return 0.0
    ks = np.array([p.k for p in res])
    mirrored = -np.conj(ks)
    f_m = np.abs(inverse_t(profile, mirrored))
    f_ref = np.abs(inverse_t(profile, mirrored + np.pi / (4 * pole_set.L)))
    return float(np.max(f_m / f_ref))


def t_single_pole(model: OnePoleModel, k):
    """One-pole transmission amplitude 1/(1 - i gamma_q / k)."""
    k_in = np.asarray(k, dtype=float)
    k = np.atleast_1d(k_in)
    out = np.empty(k.shape, dtype=complex)
    zero = k == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~zero] = 1.0 / (1.0 - 1j * model.gamma_q / k[~zero])
    out[zero] = 0.0
    return out if k_in.ndim else complex(out[0])


def phase_single_pole(model: OnePoleModel, k):
    """Small-phase approximation theta = gamma_q / k of the one-pole model."""
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore"):
        th = model.gamma_q / k
    return th if th.ndim else float(th)


def T_single_pole(E, E_q: float):
    """One-pole transmission coefficient 1/(1 + E_q/E)."""
    if E_q < 0:
        raise ValueError("E_q must be nonnegative")
    E_in = np.asarray(E, dtype=float)
    E = np.atleast_1d(E_in)
    if np.any(E <= 0):
        raise ValueError("E must be positive")
    T = 1.0 / (1.0 + E_q / E)
    return T if E_in.ndim else float(T[0])


def pt_eta(strength: float, d: float, params: PhysicalParams) -> float:
    """Dimensionless depth parameter 8 m strength d^2 / hbar^2 (signed)."""
    return 4.0 * strength * d * d / params.hbar2_over_2m


def t_pt_analytic(strength: float, d: float, params: PhysicalParams, k):
    """Analytic single Poschl-Teller transmission amplitude (modulus only).

    Valid for either sign of ``strength``; for deep barriers the cosine
    argument turns imaginary and is continued through the complex cosine.
    The returned phase is not modeled (set to zero).
    """
    if not d > 0:
        raise ValueError("d must be positive")
    k_in = np.asarray(k, dtype=float)
    k = np.atleast_1d(k_in)
    eta = pt_eta(strength, d, params)
    cterm = abs(np.cos(0.5 * np.pi * np.sqrt(complex(1.0 - eta)))) ** 2
    sh2 = np.sinh(np.pi * k * d) ** 2
    T = sh2 / (sh2 + cterm)
    out = np.sqrt(T).astype(complex)
    return out if k_in.ndim else complex(out[0])
