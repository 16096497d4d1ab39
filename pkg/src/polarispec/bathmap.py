"""Surrogate harmonic-bath mapping of a molecular ensemble.

A large ensemble coupled linearly to one photon mode acts on the photon
like a bath of harmonic oscillators whose coupling density and
occupation reproduce the ensemble's two-point dipole correlation
function.  This module provides the pieces of that dictionary:

* the dipole correlation function of a transition set,
* the coupling (spectral) density, either from sampled correlations or
  directly from Im chi,
* the frequency-resolved effective inverse temperature,
* reconstruction of the correlation function from (density, temperature),
* discretization of the density into a finite list of surrogate modes.

Conventions: hbar = 1; densities live on positive frequencies only; the
two-sided extension C(-t) = conj(C(t)) of a stationary ensemble is used
wherever an integral runs over all times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FrequencyGrid, RealSpectrum, TimeGrid, ValidationError
from .susceptibility import ComplexSpectrum, TransitionSet

__all__ = [
    "CorrelationFunction",
    "EffectiveTemperature",
    "BathMode",
    "DiscretizedBath",
    "correlation_from_transitions",
    "spectral_density_from_correlation",
    "spectral_density_from_chi",
    "effective_temperature",
    "reconstruct_correlation",
    "discretize_bath",
]

_INVERSION_MSG = (
    "the ensemble is population inverted; an inverted stationary state has "
    "negative effective temperature and cannot be represented by a passive "
    "harmonic bath"
)


@dataclass(frozen=True)
class CorrelationFunction:
    """Complex two-point dipole correlation samples for t >= 0.

    The squared field-dipole prefactor is folded into the values, so
    C(0) equals the total transition weight of the ensemble.
    """

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1 or v.size != self.grid.n_points:
            raise ValidationError("need one correlation sample per time point")
        if not np.isfinite(v).all():
            raise ValidationError("correlation samples must be finite")
        peak = abs(v[0])
        if v[0].real < -1e-12 * peak:
            raise ValidationError("C(0) must have a nonnegative real part")
        if peak > 0 and np.abs(v).max() > peak * (1.0 + 1e-6):
            raise ValidationError("|C(t)| must not exceed C(0)")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class EffectiveTemperature:
    """Frequency-resolved inverse temperature of the surrogate bath.

    Values are nonnegative; +inf marks frequencies with no emission
    weight at all (zero temperature), where the bath occupation factor
    coth(beta*w/2) is exactly one.
    """

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        if self.grid.omega_min <= 0:
            raise ValidationError("effective temperature lives on omega > 0")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size != self.grid.n_points:
            raise ValidationError("need one value per grid point")
        if np.isnan(v).any() or np.any(v < 0):
            raise ValidationError("beta_eff must be >= 0 (or +inf)")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class BathMode:
    """One surrogate oscillator: frequency, coupling, linewidth."""

    omega: float
    coupling: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise ValidationError("mode frequency must be > 0")
        if not (np.isfinite(self.coupling) and self.coupling >= 0):
            raise ValidationError("mode coupling must be >= 0")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValidationError("mode linewidth must be > 0")


@dataclass(frozen=True)
class DiscretizedBath:
    """Finite surrogate bath; couplings are stored real and nonnegative."""

    modes: tuple[BathMode, ...]

    def __init__(self, modes):
        object.__setattr__(self, "modes", tuple(modes))
        if not self.modes:
            raise ValidationError("bath needs at least one mode")

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    @property
    def total_coupling_sq(self) -> float:
        return float(sum(m.coupling**2 for m in self.modes))


# ---------------------------------------------------------------------------


def correlation_from_transitions(
    ts: TransitionSet, tg: TimeGrid
) -> CorrelationFunction:
    """Dipole correlation function of a transition set.

    Each line contributes its initial-state population times its weight,
    oscillating at the (signed) transition frequency and decaying at half
    its linewidth.  Pass a mirror-completed set when the emission side of
    a stationary ensemble matters (see
    :func:`polarispec.susceptibility.with_mirror_transitions`).
    """
    if len(ts) == 0:
        raise ValidationError("transition set is empty")
    t = tg.times
    vals = np.zeros(t.size, dtype=complex)
    for tr in ts:
        vals += (tr.p_y * tr.weight) * np.exp(
            (-1j * tr.omega_zy - 0.5 * tr.gamma) * t
        )
    return CorrelationFunction(tg, vals)


def spectral_density_from_correlation(
    c2: CorrelationFunction, grid: FrequencyGrid
) -> RealSpectrum:
    """Coupling density via the sine transform of the correlation samples.

    Uses the two-sided extension C(-t) = conj(C(t)), under which the full
    transform reduces to -2 * Int_0^inf Im C(t) sin(w t) dt.  The result
    is clipped to zero where small negative quadrature residue appears
    (below 1e-10 of the maximum); a structurally negative density means
    population inversion and raises instead.
    """
    t = c2.grid.times
    w = np.full(t.size, c2.grid.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    weighted = -2.0 * w * c2.values.imag

    omega = grid.points
    vals = np.zeros(grid.n_points)
    pos = omega >= 0
    omega_pos = omega[pos]
    out = np.empty(omega_pos.size)
    chunk = max(1, 2_000_000 // t.size)
    for lo in range(0, omega_pos.size, chunk):
        hi = min(lo + chunk, omega_pos.size)
        out[lo:hi] = np.sin(np.outer(omega_pos[lo:hi], t)) @ weighted
    vals[pos] = out
    return RealSpectrum(grid, _clip_density(vals))


def spectral_density_from_chi(chi: ComplexSpectrum) -> RealSpectrum:
    """Coupling density as the positive-frequency absorption, Im chi."""
    omega = chi.grid.points
    vals = np.where(omega >= 0, chi.values.imag, 0.0)
    return RealSpectrum(chi.grid, _clip_density(vals))


def _clip_density(vals: np.ndarray) -> np.ndarray:
    peak = max(vals.max(initial=0.0), 0.0)
    floor = -1e-10 * peak
    if np.any(vals < floor):
        raise ValidationError(_INVERSION_MSG)
    return np.where(vals < 0, 0.0, vals)


def effective_temperature(
    ts: TransitionSet, grid: FrequencyGrid
) -> EffectiveTemperature:
    """Effective inverse temperature beta_eff(w) = ln[C(w)/C(-w)] / w.

    The ratio is evaluated from the linewidth-broadened line decomposition
    with absorption and emission paired per line: each uphill transition
    contributes its initial population to C(+w) and its final population
    to C(-w) through the same Lorentzian kernel.  Thermal populations
    therefore give beta_eff equal to beta at every transition frequency
    to machine precision, regardless of linewidth.

    The set must be in uphill form (all transition frequencies positive);
    emission content is carried by the final-state populations.
    """
    if len(ts) == 0:
        raise ValidationError("transition set is empty")
    if grid.omega_min <= 0:
        raise ValidationError("effective temperature needs a positive grid")
    for tr in ts:
        if tr.omega_zy < 0:
            raise ValidationError(
                "effective_temperature expects uphill transitions only; "
                "emission weights are taken from p_z"
            )
    omega = grid.points
    num = np.zeros(grid.n_points)
    den = np.zeros(grid.n_points)
    for tr in ts:
        kern = tr.weight * tr.gamma / (
            (omega - tr.omega_zy) ** 2 + 0.25 * tr.gamma**2
        )
        num += tr.p_y * kern
        den += tr.p_z * kern

    vals = np.empty(grid.n_points)
    dead = den < 1e-300
    vals[dead] = math.inf
    with np.errstate(divide="ignore"):
        ratio = num[~dead] / den[~dead]
    if np.any(ratio < 1.0 - 1e-10):
        raise ValidationError(_INVERSION_MSG)
    vals[~dead] = np.log(np.maximum(ratio, 1.0)) / omega[~dead]
    return EffectiveTemperature(grid, vals)


def reconstruct_correlation(
    J: RealSpectrum, beta_eff: EffectiveTemperature, tg: TimeGrid
) -> CorrelationFunction:
    """Correlation function of the surrogate bath.

    C(t) = (1/pi) * Int dw J(w) [coth(beta_eff(w) w / 2) cos(wt) - i sin(wt)]

    by trapezoidal quadrature over the shared positive-frequency grid.
    At beta_eff = +inf the occupation factor is exactly one.
    """
    if J.grid != beta_eff.grid:
        raise ValidationError("J and beta_eff must share one frequency grid")
    omega = J.grid.points
    jv = J.values
    bv = beta_eff.values

    occ = np.ones(omega.size)
    finite = ~np.isinf(bv)
    with np.errstate(divide="ignore"):
        occ[finite] = 1.0 / np.tanh(0.5 * bv[finite] * omega[finite])
    if np.any(np.isinf(occ) & (jv > 0)):
        raise ValidationError(
            "J > 0 where beta_eff = 0: a saturated line cannot carry weight"
        )

    w = np.full(omega.size, J.grid.spacing)
    w[0] *= 0.5
    w[-1] *= 0.5
    cos_part = np.where(jv == 0, 0.0, w * jv * occ) / math.pi
    sin_part = (w * jv) / math.pi

    # Phase recurrence over the uniform time grid: one complex rotation per
    # step instead of fresh trig evaluations (grids here can reach 1e6+
    # points; accumulated rounding stays at ~n_steps * eps).
    t = tg.times
    dt = tg.spacing
    phase = np.ones(omega.size, dtype=complex)
    step = np.exp(-1j * omega * dt)
    vals = np.empty(t.size, dtype=complex)
    for k in range(t.size):
        if k:
            phase *= step
        # cos(wt) = Re(phase); sin(wt) = -Im(phase) for phase = e^{-iwt}
        vals[k] = cos_part @ phase.real + 1j * (sin_part @ phase.imag)
    return CorrelationFunction(tg, vals)


def discretize_bath(
    J: RealSpectrum, n_modes: int, gamma_mode: float | None = None
) -> DiscretizedBath:
    """Sample a coupling density into equal-width surrogate modes.

    The support (first to last strictly positive point of J) is split
    into ``n_modes`` equal bins; each bin becomes one mode at the bin
    midpoint with squared coupling (1/pi) * Int_bin J.  Bin integrals are
    differences of one interpolated cumulative integral, so the total
    squared coupling is independent of ``n_modes`` exactly.  Every mode
    gets linewidth ``gamma_mode`` (default: the bin width, the smallest
    broadening that lets a finite bath mimic a continuum).
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValidationError("n_modes must be an integer >= 1")
    n_modes = int(n_modes)
    omega = J.grid.points
    jv = J.values
    if np.any(jv < 0):
        raise ValidationError("spectral density must be >= 0")
    nz = np.nonzero(jv > 0)[0]
    if nz.size == 0:
        raise ValidationError("spectral density is identically zero")
    lo, hi = omega[nz[0]], omega[nz[-1]]
    if lo < 0:
        raise ValidationError("spectral density must be supported on omega >= 0")
    if lo == hi:
        raise ValidationError("support is a single grid point; nothing to bin")

    dx = J.grid.spacing
    cumulative = np.concatenate(
        ([0.0], np.cumsum(0.5 * dx * (jv[1:] + jv[:-1])))
    )
    edges = np.linspace(lo, hi, n_modes + 1)
    cum_at_edges = np.interp(edges, omega, cumulative)
    coupling_sq = np.diff(cum_at_edges) / math.pi
    mids = 0.5 * (edges[:-1] + edges[1:])
    if gamma_mode is None:
        gamma_mode = (hi - lo) / n_modes
    if not (np.isfinite(gamma_mode) and gamma_mode > 0):
        raise ValidationError("gamma_mode must be > 0")
    return DiscretizedBath(
        BathMode(float(m), float(math.sqrt(max(c2, 0.0))), float(gamma_mode))
        for m, c2 in zip(mids, coupling_sq)
    )
