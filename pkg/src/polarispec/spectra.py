"""Cavity spectra from the photon retarded Green function.

Two equivalent routes are provided.  The closed route takes a molecular
susceptibility and dresses the photon propagator with the self-energy
-chi(w); the finite route builds the single-excitation arrowhead matrix
of a discretized surrogate bath and extracts the photon element by a
per-frequency linear solve.  For harmonic (or effectively harmonic)
ensembles both agree, which the test suite uses as a cross-check.

Port formulas (input drive on the left, detection on both sides):

    T = kappa_L kappa_R |D|^2
    R = 1 + 2 kappa_L Im D + kappa_L^2 |D|^2
    A = -kappa_L (kappa |D|^2 + 2 Im D)

These satisfy T + R + A = 1 identically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bathmap import DiscretizedBath
from .core import (
    ComplexSpectrum,
    FrequencyGrid,
    GainWarning,
    NumericalError,
    RealSpectrum,
    TraSpectra,
    ValidationError,
)

__all__ = [
    "CavityParams",
    "GreenFunction",
    "photon_green_function",
    "spectra_from_green",
    "spectra_harmonic",
    "green_finite_n",
    "landauer_transmission",
]


@dataclass(frozen=True)
class CavityParams:
    """Photon mode frequency and the two port escape rates.

    A cavity with no escape at all has no spectroscopic signal, so
    kappa_L + kappa_R must be positive.
    """

    omega_ph: float
    kappa_L: float
    kappa_R: float

    def __post_init__(self):
        if not np.isfinite(self.omega_ph):
            raise ValidationError("omega_ph must be finite")
        for name, k in (("kappa_L", self.kappa_L), ("kappa_R", self.kappa_R)):
            if not (np.isfinite(k) and k >= 0):
                raise ValidationError(f"{name} must be >= 0")
        if self.kappa <= 0:
            raise ValidationError("kappa_L + kappa_R must be > 0")

    @property
    def kappa(self) -> float:
        return self.kappa_L + self.kappa_R


@dataclass(frozen=True)
class GreenFunction:
    """Retarded photon propagator sampled on a frequency grid."""

    spectrum: ComplexSpectrum

    @property
    def grid(self) -> FrequencyGrid:
        return self.spectrum.grid

    @property
    def values(self) -> np.ndarray:
        return self.spectrum.values


def photon_green_function(
    chi: ComplexSpectrum, cav: CavityParams
) -> GreenFunction:
    """Photon propagator dressed by the molecular response.

    D(w) = 1 / (w - omega_ph + i kappa/2 + chi(w)).  The denominator can
    only vanish for a lossless, transparent system, which the cavity
    validation already excludes; a near-zero is reported as a numerical
    error rather than returned as an overflow.
    """
    omega = chi.grid.points
    den = omega - cav.omega_ph + 0.5j * cav.kappa + chi.values
    small = np.abs(den)
    if small.min() < 1e-14:
        raise NumericalError(
            "photon propagator denominator vanishes "
            f"(min |den| = {small.min():.3e}); inputs are unphysical"
        )
    return GreenFunction(ComplexSpectrum(chi.grid, 1.0 / den))


def _assemble(grid, transmission, reflection, absorption) -> TraSpectra:
    if absorption.min() < -1e-12:
        warnings.warn(
            "negative absorption: the medium has gain; values are reported "
            "as computed",
            GainWarning,
            stacklevel=3,
        )
    return TraSpectra(
        RealSpectrum(grid, transmission),
        RealSpectrum(grid, reflection),
        RealSpectrum(grid, absorption),
    )


def spectra_from_green(D: GreenFunction, cav: CavityParams) -> TraSpectra:
    """Transmission, reflection and absorption from the photon propagator."""
    v = D.values
    mag2 = v.real**2 + v.imag**2
    im = v.imag
    transmission = cav.kappa_L * cav.kappa_R * mag2
    reflection = 1.0 + 2.0 * cav.kappa_L * im + cav.kappa_L**2 * mag2
    absorption = -cav.kappa_L * (cav.kappa * mag2 + 2.0 * im)
    return _assemble(D.grid, transmission, reflection, absorption)


def spectra_harmonic(chi: ComplexSpectrum, cav: CavityParams) -> TraSpectra:
    """Spectra directly from the susceptibility (thermodynamic limit).

    Algebraically identical to composing :func:`photon_green_function`
    with :func:`spectra_from_green`; kept separate because this is the
    formula users quote, with R obtained by subtraction.
    """
    omega = chi.grid.points
    den = omega - cav.omega_ph + 0.5j * cav.kappa + chi.values
    mag2 = den.real**2 + den.imag**2
    transmission = cav.kappa_L * cav.kappa_R / mag2
    absorption = 2.0 * cav.kappa_L * chi.values.imag / mag2
    reflection = 1.0 - transmission - absorption
    return _assemble(chi.grid, transmission, reflection, absorption)


def green_finite_n(
    bath: DiscretizedBath, cav: CavityParams, grid: FrequencyGrid
) -> GreenFunction:
    """Photon propagator of a finite surrogate bath.

    Builds the (1+M) x (1+M) single-excitation matrix with the photon on
    the first row/column (arrowhead form: photon couples to every mode,
    modes do not couple to each other) and solves (w*I - H) x = e_photon
    per frequency, keeping only the photon component.  Only a linear
    solve is performed; the full inverse is never formed.
    """
    omega = grid.points
    n_modes = len(bath)
    mode_omega = np.array([m.omega for m in bath.modes])
    mode_gamma = np.array([m.gamma for m in bath.modes])
    couplings = np.array([m.coupling for m in bath.modes])

    diag = np.concatenate(
        (
            [cav.omega_ph - 0.5j * cav.kappa],
            mode_omega - 0.5j * mode_gamma,
        )
    )
    size = n_modes + 1
    h = np.zeros((size, size), dtype=complex)
    h[np.arange(size), np.arange(size)] = diag
    h[0, 1:] = -couplings
    h[1:, 0] = -couplings

    rhs = np.zeros((size, 1), dtype=complex)
    rhs[0, 0] = 1.0
    vals = np.empty(grid.n_points, dtype=complex)
    chunk = max(1, 4_000_000 // (size * size))
    eye = np.eye(size, dtype=complex)
    for lo in range(0, grid.n_points, chunk):
        hi = min(lo + chunk, grid.n_points)
        mats = omega[lo:hi, None, None] * eye[None, :, :] - h[None, :, :]
        try:
            sol = np.linalg.solve(mats, np.broadcast_to(rhs, (hi - lo, size, 1)))
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericalError(f"singular single-excitation solve: {exc}")
        vals[lo:hi] = sol[:, 0, 0]
    return GreenFunction(ComplexSpectrum(grid, vals))


def landauer_transmission(D: GreenFunction, cav: CavityParams) -> RealSpectrum:
    """Transmission as a transport trace through the photon port.

    With both port coupling matrices of rank one on the photon entry the
    trace Tr[Gamma_L G^dag Gamma_R G] collapses to
    kappa_L * kappa_R * D* D, which is evaluated here literally as the
    conjugate product (an independent path from the |D|^2 route used by
    :func:`spectra_from_green`).
    """
    v = D.values
    trace = cav.kappa_L * (np.conj(v) * cav.kappa_R * v)
    return RealSpectrum(D.grid, trace.real)
