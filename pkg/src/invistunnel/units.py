"""Physical constants and unit conventions.

Everything in this package uses eV / nm / fs.  The effective mass enters
only through hbar^2/2m, so no SI kilograms appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# hbar^2 / (2 m_e) in eV nm^2 (CODATA-derived)
HBAR2_OVER_2ME = 0.0380998
# hbar in eV fs
HBAR = 0.6582119569


@dataclass(frozen=True)
class PhysicalParams:
    """Unit conventions for a particle of effective mass ``mass_ratio * m_e``."""

    mass_ratio: float = 0.067
    hbar2_over_2me: float = HBAR2_OVER_2ME
    hbar: float = HBAR

    def __post_init__(self) -> None:
        if not self.mass_ratio > 0:
            raise ValueError(f"mass_ratio must be positive, got {self.mass_ratio}")
        if abs(self.hbar2_over_2me - HBAR2_OVER_2ME) > 1e-6:
            raise ValueError("hbar2_over_2me is a fixed constant (eV nm^2)")

    @property
    def hbar2_over_2m(self) -> float:
        """hbar^2 / (2 m) in eV nm^2 for the effective mass."""
        return self.hbar2_over_2me / self.mass_ratio

    @property
    def mass(self) -> float:
        """Effective mass in eV fs^2 / nm^2."""
        return self.hbar**2 / (2.0 * self.hbar2_over_2m)

    def velocity(self, k):
        """Group velocity hbar k / m in nm/fs."""
        return 2.0 * self.hbar2_over_2m * k / self.hbar


#: GaAs effective mass, used throughout the built-in systems.
GAAS = PhysicalParams(mass_ratio=0.067)


def k_of_E(E, params: PhysicalParams):
    """Wavenumber k = sqrt(2mE)/hbar in nm^-1 for energy E >= 0 in eV."""
    E = np.asarray(E, dtype=float)
    if np.any(E < 0):
        raise ValueError("energy must be nonnegative")
    k = np.sqrt(E / params.hbar2_over_2m)
    return k if k.ndim else float(k)


def E_of_k(k, params: PhysicalParams):
    """Energy (hbar^2/2m) k^2 in eV; accepts real or complex k."""
    k = np.asarray(k)
    E = params.hbar2_over_2m * k * k
    return E if E.ndim else E[()]
