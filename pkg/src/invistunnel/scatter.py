"""Coherent 1D scattering at real or complex wavenumber.

Transfer matrices are accumulated in the (psi, psi') basis, whose slice
entries are entire functions of k^2, so the whole k plane is accessible
without branch-cut bookkeeping.  Products are renormalized per step with
a tracked log-scale factor so deep lower-half-plane evaluations (|Im k| L
up to ~40 during pole scans) never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potential import PotentialProfile
from .units import k_of_E


class NumericsError(RuntimeError):
    """Raised when an iterative numerical procedure fails to converge."""


def _slice_entries(q2: np.ndarray, w: float):
    """Entries (m11, m12, m21) of the (psi, psi') matrix across one slice.

    m11 = m22 = cos(q w), m12 = sin(q w)/q, m21 = -q sin(q w); all are
    even in q, evaluated through q^2 with a series near q = 0.
    """
    with np.errstate(all="ignore"):
        q = np.sqrt(q2.astype(complex))
        z = q * w
        z2 = q2 * (w * w)
        m11 = np.cos(z)
        small = np.abs(z2) < 1e-8
        safe_q = np.where(small, 1.0, q)
        m12 = np.where(small, w * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0)),
                       np.sin(z) / safe_q)
        m21 = -q2 * m12
    return m11, m12, m21


_RENORM = 1e120


def _wave_matrix(profile: PotentialProfile, k):
    """Accumulated (psi, psi') matrix entries (a, b, c, d) and log scale.

    The true matrix is exp(logscale) * [[a, b], [c, d]].
    """
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    c_m = profile.params.hbar2_over_2m
    a = np.ones_like(k)
    b = np.zeros_like(k)
    c = np.zeros_like(k)
    d = np.ones_like(k)
    logscale = np.zeros(k.shape, dtype=float)
    k2 = k * k
    with np.errstate(all="ignore"):
        for sl in profile.slices:
            q2 = k2 - sl.height / c_m
            m11, m12, m21 = _slice_entries(q2, sl.width)
            a, b, c, d = (m11 * a + m12 * c, m11 * b + m12 * d,
                          m21 * a + m11 * c, m21 * b + m11 * d)
            norm = np.maximum(np.maximum(np.abs(a), np.abs(b)),
                              np.maximum(np.abs(c), np.abs(d)))
            big = norm > _RENORM
            if big.any():
                scale = np.where(big, norm, 1.0)
                a, b, c, d = a / scale, b / scale, c / scale, d / scale
                logscale = logscale + np.where(big, np.log(norm), 0.0)
    return a, b, c, d, logscale


def _raw_amplitudes(profile: PotentialProfile, k):
    """t and r for array-valued complex k (matched to e^{+-ikx} asymptotics)."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    a, b, c, d, s = _wave_matrix(profile, k)
    denom = 1j * k * (a + d) + k * k * b - c
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        t = 2j * k * np.exp(-1j * k * profile.L - s) / denom
        r = (1j * k * (d - a) + k * k * b + c) / denom
    return t, r


def inverse_t(profile: PotentialProfile, k):
    """1/t(k), whose zeros are the poles of the transmission amplitude."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    a, b, c, d, s = _wave_matrix(profile, k)
    denom = 1j * k * (a + d) + k * k * b - c
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return denom * np.exp(1j * k * profile.L + s) / (2j * k)


def pole_function(profile: PotentialProfile, k):
    """Entire function whose zeros are the poles of t (no 1/k factor).

    Returns (value, logscale): the true value is value * exp(logscale).
    Used for argument-principle winding counts and axis scans.
    """
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    a, b, c, d, s = _wave_matrix(profile, k)
    return 1j * k * (a + d) + k * k * b - c, s


@dataclass(frozen=True)
class TransferMatrix:
    """Plane-wave transfer matrix mapping (A, B) at x=0- to x=L+.

    True entries are exp(logscale) * m; determinant of the true matrix
    is 1 for equal asymptotic wavenumbers.
    """

    m: np.ndarray  # 2x2 complex
    k: complex
    logscale: float = 0.0

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.m) * np.exp(2.0 * self.logscale))

    @property
    def t(self) -> complex:
        """Transmission amplitude 1/M22."""
        return complex(np.exp(-self.logscale) / self.m[1, 1])

    @property
    def r(self) -> complex:
        """Reflection amplitude -M21/M22."""
        return complex(-self.m[1, 0] / self.m[1, 1])


def transfer_matrix(profile: PotentialProfile, k) -> TransferMatrix:
    """Plane-wave transfer matrix at (possibly complex) wavenumber k."""
    k = complex(k)
    a, b, c, d, s = _wave_matrix(profile, np.array([k]))
    a, b, c, d, s = a[0], b[0], c[0], d[0], float(s[0])
    L = profile.L
    ik = 1j * k
    # Phi^{-1} W Phi with Phi = [[1, 1], [ik, -ik]], then undo e^{+-ikL}
    w11 = 0.5 * (a + d + b * ik + c / ik)
    w12 = 0.5 * (a - d - b * ik + c / ik)
    w21 = 0.5 * (a - d + b * ik - c / ik)
    w22 = 0.5 * (a + d - b * ik - c / ik)
    m = np.array([[w11 * np.exp(-ik * L), w12 * np.exp(-ik * L)],
                  [w21 * np.exp(ik * L), w22 * np.exp(ik * L)]])
    return TransferMatrix(m=m, k=k, logscale=s)


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes and derived quantities at one wavenumber."""

    k: complex
    t: complex
    r: complex

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def theta(self) -> float:
        """Phase of the transmission amplitude."""
        return float(np.angle(self.t))

    @property
    def phi(self) -> float:
        """Phase of the reflection amplitude."""
        return float(np.angle(self.r))


def amplitudes(profile: PotentialProfile, E: float) -> ScatteringSolution:
    """Exact t, r at real energy E > 0 (eV)."""
    if not E > 0:
        raise ValueError(f"energy must be positive, got {E}")
    k = k_of_E(E, profile.params)
    t, r = _raw_amplitudes(profile, k)
    return ScatteringSolution(k=complex(k), t=complex(t[0]), r=complex(r[0]))


def transmission_curve(profile: PotentialProfile, E_grid):
    """T and unwrapped transmission phase on an energy grid.

    Returns (E, T, theta) arrays; theta is unwrapped along the grid order.
    """
    E = np.asarray(E_grid, dtype=float)
    if np.any(E <= 0):
        raise ValueError("all grid energies must be positive")
    k = k_of_E(E, profile.params)
    t, _ = _raw_amplitudes(profile, k)
    T = np.abs(t) ** 2
    theta = np.unwrap(np.angle(t))
    return E, T, theta


def wavefunction(profile: PotentialProfile, E: float, xs) -> np.ndarray:
    """psi(x) for unit incidence from the left at energy E (eV).

    Valid for any x; outside [0, L] the asymptotic forms are used.
    """
    sol = amplitudes(profile, E)
    k = sol.k
    c_m = profile.params.hbar2_over_2m
    # (psi, psi') at each slice start
    psi_b = [1.0 + sol.r]
    dpsi_b = [1j * k * (1.0 - sol.r)]
    for sl in profile.slices:
        q2 = np.array([k * k - sl.height / c_m])
        m11, m12, m21 = _slice_entries(q2, sl.width)
        p, dp = psi_b[-1], dpsi_b[-1]
        psi_b.append(m11[0] * p + m12[0] * dp)
        dpsi_b.append(m21[0] * p + m11[0] * dp)

    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.empty(xs.shape, dtype=complex)
    left = xs <= 0
    right = xs >= profile.L
    out[left] = np.exp(1j * k * xs[left]) + sol.r * np.exp(-1j * k * xs[left])
    out[right] = sol.t * np.exp(1j * k * xs[right])
    inner = ~(left | right)
    if inner.any():
        idx = np.clip(np.searchsorted(profile.edges, xs[inner], side="right") - 1,
                      0, len(profile.slices) - 1)
        xi = xs[inner] - profile.edges[idx]
        vals = np.empty(idx.shape, dtype=complex)
        for j in np.unique(idx):
            sel = idx == j
            q = np.sqrt(complex(k * k - profile.slices[j].height / c_m))
            z = q * xi[sel]
            if abs(q) * profile.slices[j].width < 1e-6:
                m11 = 1.0 - z * z / 2.0
                m12 = xi[sel] * (1.0 - z * z / 6.0)
            else:
                m11 = np.cos(z)
                m12 = np.sin(z) / q
            vals[sel] = m11 * psi_b[j] + m12 * dpsi_b[j]
        out[inner] = vals
    return out
