"""Poles of the transmission amplitude in the complex k plane.

Poles are located as zeros of 1/t(k) via Newton-Raphson with central
finite differences; grid-seeded searches are cross-checked with an
argument-principle winding count over the search rectangle.  Residues of
the outgoing Green's function follow from the local expansion of t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .potential import PotentialProfile
from .scatter import NumericsError, inverse_t, pole_function
from .units import E_of_k, PhysicalParams

#: |Re k| below which a pole is treated as sitting on the imaginary axis.
AXIS_TOL = 1e-9
#: default merge radius for de-duplication (nm^-1); pole spacings are ~pi/L
#: so this is far below any genuine separation, yet above the position
#: noise floor of zeros found deep in the lower half plane.
MERGE_RADIUS = 1e-6


@dataclass(frozen=True)
class Pole:
    """One pole k_n of t(k) with its Green's-function residue r_n."""

    k: complex
    kind: str  # "bound" | "antibound" | "resonant"
    residue_r_n: complex
    E: complex
    gamma: float | None = None  # Im k for imaginary-axis poles

    @property
    def mirror_k(self) -> complex:
        """Partner pole -conj(k) from time-reversal symmetry."""
        return -np.conj(self.k)


@dataclass
class PoleSet:
    """Fourth-quadrant and imaginary-axis poles, sorted by |Re k|."""

    poles: tuple[Pole, ...]
    L: float
    region: tuple[float, float, float, float] | None = None
    n_requested: int | None = None
    winding_count: int | None = None
    complete: bool = True
    notes: str = ""

    def __len__(self) -> int:
        return len(self.poles)


def _classify(k: complex) -> str:
    if abs(k.real) <= AXIS_TOL:
        return "bound" if k.imag > 0 else "antibound"
    return "resonant"


def _make_pole(profile: PotentialProfile, k: complex) -> Pole:
    if abs(k.real) <= AXIS_TOL:
        k = 1j * k.imag
    res_t = _residue_of_t(profile, k)
    r_n = res_t * np.exp(1j * k * profile.L) / (2j * k)
    gamma = k.imag if abs(k.real) <= AXIS_TOL else None
    return Pole(k=k, kind=_classify(k), residue_r_n=complex(r_n),
                E=complex(E_of_k(k, profile.params)), gamma=gamma)


def _fprime(profile: PotentialProfile, k: complex, delta: float) -> complex:
    fp = inverse_t(profile, np.array([k + delta, k - delta]))
    return complex((fp[0] - fp[1]) / (2.0 * delta))


def _residue_of_t(profile: PotentialProfile, k: complex) -> complex:
    """Residue of t at a simple pole k: 1/f'(k) with f = 1/t.

    One Richardson step on the central-difference derivative.
    """
    delta = 1e-4 * max(abs(k), 1e-6)
    d1 = _fprime(profile, k, delta)
    d2 = _fprime(profile, k, delta / 2.0)
    return 1.0 / complex((4.0 * d2 - d1) / 3.0)


def refine_pole(profile: PotentialProfile, seed: complex, max_iter: int = 100,
                tol_dk: float = 1e-12, tol_f: float = 1e-13) -> Pole:
    """Newton-Raphson refinement of a pole of t from a complex seed."""
    k = complex(seed)
    for _ in range(max_iter):
        delta = 1e-7 * max(abs(k), 1e-4)
        vals = inverse_t(profile, np.array([k, k + delta, k - delta]))
        f = vals[0]
        fp = (vals[1] - vals[2]) / (2.0 * delta)
        if fp == 0 or not np.isfinite(fp):
            raise NumericsError(f"degenerate Newton step at k={k}")
        dk = -f / fp
        k = k + complex(dk)
        if abs(dk) < max(tol_dk, 5e-15 * abs(k)) or abs(f) < tol_f:
            break
    else:
        raise NumericsError(f"pole refinement did not converge from seed {seed}")
    if abs(k) < 1e-9:
        raise NumericsError("refinement converged to k = 0 (not a pole)")
    return _make_pole(profile, k)


def _newton_batch(profile: PotentialProfile, seeds: np.ndarray,
                  max_iter: int = 60, tol_dk: float = 1e-12) -> np.ndarray:
    """Vectorized Newton iteration; returns converged roots (may repeat)."""
    k = seeds.astype(complex).copy()
    active = np.ones(k.shape, dtype=bool)
    converged = np.zeros(k.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        ka = k[active]
        delta = 1e-7 * np.maximum(np.abs(ka), 1e-4)
        with np.errstate(all="ignore"):
            f0 = inverse_t(profile, ka)
            fp = (inverse_t(profile, ka + delta)
                  - inverse_t(profile, ka - delta)) / (2.0 * delta)
            dk = -f0 / fp
        bad = ~np.isfinite(dk)
        dk[bad] = 0.0
        ka = ka + dk
        bad |= np.abs(ka) > 1e6  # runaway seeds
        done = (np.abs(dk) < np.maximum(tol_dk, 5e-15 * np.abs(ka))) | bad
        idx = np.flatnonzero(active)
        k[idx] = ka
        converged[idx[done & ~bad]] = True
        active[idx[done | bad]] = False
    return k[converged]


def _dedupe(roots: np.ndarray, radius: float = MERGE_RADIUS) -> list[complex]:
    """Collapse near-coincident roots, keeping full-precision members."""
    if len(roots) == 0:
        return []
    # coarse pre-collapse on a grid finer than the merge radius, keeping
    # one original (unrounded) representative per occupied cell
    grid = radius / 8.0
    cells: dict[tuple[int, int], complex] = {}
    for z in map(complex, roots):
        cells.setdefault((round(z.real / grid), round(z.imag / grid)), z)
    out: list[complex] = []
    for z in sorted(cells.values(), key=lambda z: (z.real, z.imag)):
        if not any(abs(z - w) <= radius for w in out):
            out.append(z)
    return out


def _polish(profile: PotentialProfile, roots: np.ndarray,
            n_iter: int = 10) -> np.ndarray:
    """A few extra Newton steps per root, keeping the best-|1/t| iterate."""
    k = roots.astype(complex).copy()
    best_k = k.copy()
    with np.errstate(all="ignore"):
        best_f = np.abs(inverse_t(profile, k))
        for _ in range(n_iter):
            delta = 1e-7 * np.maximum(np.abs(k), 1e-4)
            f0 = inverse_t(profile, k)
            fp = (inverse_t(profile, k + delta)
                  - inverse_t(profile, k - delta)) / (2.0 * delta)
            dk = -f0 / fp
            dk[~np.isfinite(dk)] = 0.0
            k = k + dk
            fabs = np.abs(inverse_t(profile, k))
            better = fabs < best_f
            best_k[better] = k[better]
            best_f[better] = fabs[better]
    return best_k


def winding_count(profile: PotentialProfile,
                  region: tuple[float, float, float, float],
                  max_refine: int = 30) -> int:
    """Argument-principle zero count of 1/t over a rectangle boundary.

    The 1/k factor of 1/t is analytic and nonzero away from the origin, so
    the winding of the entire denominator function is used; the rectangle
    must not contain k = 0.
    """
    re0, re1, im0, im1 = region
    corners = [re0 + 1j * im0, re1 + 1j * im0, re1 + 1j * im1, re0 + 1j * im1,
               re0 + 1j * im0]
    # phase turns ~2pi per pole spacing pi/L along the contour: seed well
    # above Nyquist so the adaptive refinement cannot alias whole turns
    L = profile.L
    n_init = max(64, int(8 * (re1 - re0) * L / math.pi),
                 int(8 * (im1 - im0) * L / math.pi))
    ts = np.linspace(0.0, 4.0, 4 * n_init + 1)

    def boundary(t):
        t = np.asarray(t)
        seg = np.clip(t.astype(int), 0, 3)
        frac = t - seg
        p0 = np.array(corners)[seg]
        p1 = np.array(corners)[seg + 1]
        return p0 + frac * (p1 - p0)

    pts = boundary(ts)
    vals, _ = pole_function(profile, pts)
    args = np.angle(vals)
    for _ in range(max_refine):
        d = np.angle(np.exp(1j * np.diff(args)))
        rough = np.abs(d) > 1.0
        if not rough.any():
            break
        new_t = 0.5 * (ts[:-1][rough] + ts[1:][rough])
        new_pts = boundary(new_t)
        new_vals, _ = pole_function(profile, new_pts)
        ts = np.concatenate([ts, new_t])
        order = np.argsort(ts)
        ts = ts[order]
        args = np.concatenate([args, np.angle(new_vals)])[order]
    else:
        raise NumericsError("winding-count boundary refinement did not settle; "
                            "a pole may sit on the contour")
    total = np.sum(np.angle(np.exp(1j * np.diff(args)))) / (2.0 * math.pi)
    return int(round(total))


def _axis_value(profile: PotentialProfile, gamma):
    """Real-valued pole function on the imaginary axis k = i gamma."""
    vals, _ = pole_function(profile, 1j * np.asarray(gamma, dtype=float))
    return vals.real


def axis_poles(profile: PotentialProfile, gamma_min: float, gamma_max: float,
               n_scan: int = 1600) -> list[Pole]:
    """All imaginary-axis poles with gamma in [gamma_min, gamma_max].

    Sign changes are bracketed on a log-spaced scan of |gamma| (the pole
    function is real on the axis by time-reversal symmetry).
    """
    found: list[Pole] = []
    for sign in (-1.0, 1.0):
        hi = gamma_max if sign > 0 else -gamma_min
        if hi <= 0:
            continue
        mags = np.logspace(-8, math.log10(hi), n_scan)
        g = sign * mags
        F = _axis_value(profile, g)
        flips = np.flatnonzero(np.sign(F[:-1]) * np.sign(F[1:]) < 0)
        for i in flips:
            root = brentq(lambda gg: float(_axis_value(profile, [gg])[0]),
                          g[i], g[i + 1], xtol=1e-15, rtol=8.9e-16)
            try:
                pole = refine_pole(profile, 1j * root)
                k = 1j * float(np.imag(pole.k))
            except NumericsError:
                # brentq already brackets to machine precision; Newton can
                # wander for deep roots where 1/t is steeply scaled
                k = 1j * root
            found.append(_make_pole(profile, k))
    return found


def threshold_pole(profile: PotentialProfile,
                   gamma_limit: float = 10.0) -> Pole | None:
    """The imaginary-axis pole of smallest |gamma|, or None if absent."""
    candidates = axis_poles(profile, -gamma_limit, gamma_limit)
    if not candidates:
        return None
    return min(candidates, key=lambda p: abs(p.gamma))


def default_region(profile: PotentialProfile, n_poles: int,
                   im_depth: float = 40.0,
                   axis_margin: float = 0.1) -> tuple[float, float, float, float]:
    """Search rectangle for the first ``n_poles`` fourth-quadrant poles."""
    L = profile.L
    return (axis_margin * math.pi / L, (n_poles + 2) * math.pi / L,
            -im_depth / L, axis_margin * math.pi / L)


def find_poles(profile: PotentialProfile,
               region: tuple[float, float, float, float] | None = None,
               n_poles: int | None = None,
               grid_density: float = 6.0,
               include_axis: bool = True,
               check_winding: bool = True) -> PoleSet:
    """Grid-seeded pole search over a lower-half-plane rectangle.

    ``region`` is (re_min, re_max, im_min, im_max) in nm^-1; if omitted it
    is derived from ``n_poles``.  Imaginary-axis poles within the region's
    Im range are found by a separate axis scan and included once.
    """
    if region is None:
        if n_poles is None:
            raise ValueError("give either region or n_poles")
        region = default_region(profile, n_poles)
    re0, re1, im0, im1 = region
    L = profile.L
    spacing = math.pi / (grid_density * L)
    re_seeds = np.arange(re0, re1 + spacing, spacing)
    im_seeds = np.arange(im0, im1 + spacing, spacing)
    seeds = (re_seeds[:, None] + 1j * im_seeds[None, :]).ravel()
    roots = _newton_batch(profile, seeds)
    margin = 10 * MERGE_RADIUS
    inside = ((roots.real > re0 - margin) & (roots.real < re1 + margin)
              & (roots.imag > im0 - margin) & (roots.imag < im1 + margin)
              & (roots.real > AXIS_TOL) & (np.abs(roots) > 1e-9))
    deduped = _dedupe(roots[inside])
    complex_roots: list[complex] = []
    if deduped:
        polished = _polish(profile, np.array(deduped))
        # a genuine pole suppresses |1/t| by many orders relative to a
        # nearby off-pole point (pole spacings are ~pi/L)
        with np.errstate(all="ignore"):
            f_at = np.abs(inverse_t(profile, polished))
            f_near = np.abs(inverse_t(profile, polished + math.pi / (4.0 * L)))
        complex_roots = [complex(z) for z, fv, fn in zip(polished, f_at, f_near)
                         if abs(z.real) > AXIS_TOL and fv < 1e-8 * fn]
    poles = [_make_pole(profile, z) for z in complex_roots]

    wind = None
    complete = True
    notes = ""
    if check_winding:
        try:
            wind = winding_count(profile, region)
        except NumericsError as exc:
            notes = str(exc)
        else:
            if wind != len(poles):
                complete = False
                notes = (f"winding count {wind} != {len(poles)} poles found "
                         f"in region {region}")

    if include_axis:
        poles.extend(axis_poles(profile, im0, im1))

    poles.sort(key=lambda p: (abs(p.k.real), p.k.real, p.k.imag))
    return PoleSet(poles=tuple(poles), L=L, region=region, n_requested=n_poles,
                   winding_count=wind, complete=complete, notes=notes)


def thin_barrier_estimate(V0: float, L: float, params: PhysicalParams) -> float:
    """Antibound-pole estimate gamma_a = -m V0 L / hbar^2 for thin barriers."""
    return -V0 * L / (2.0 * params.hbar2_over_2m)
