"""CSV and SVG emission, plus tabulated susceptibility import.

All CSV output uses 17 significant digits (``%.16e``), which round-trips
float64 exactly, and is written atomically (temp file in the target
directory, then rename) so partially written files never appear under
the final name.  Headers are fixed strings; readers validate them
byte-for-byte so column mixups fail loudly.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .core import ComplexSpectrum, FrequencyGrid, RealSpectrum, TraSpectra, ValidationError
from .bathmap import CorrelationFunction, EffectiveTemperature

__all__ = [
    "write_columns",
    "write_tra_csv",
    "write_chi_csv",
    "read_chi_csv",
    "write_jeff_csv",
    "write_beta_eff_csv",
    "write_c2_csv",
    "write_tra_svg",
]

_FMT = "%.16e"


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_columns(path: str, header: str, columns) -> None:
    """Write comma-separated numeric columns under an exact header line."""
    cols = [np.asarray(c, dtype=float) for c in columns]
    n = cols[0].size
    if any(c.size != n for c in cols):
        raise ValidationError("all columns must have equal length")
    lines = [header]
    for i in range(n):
        lines.append(",".join(_FMT % c[i] for c in cols))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_tra_csv(path: str, tra: TraSpectra) -> None:
    write_columns(
        path,
        "omega,T,R,A",
        (
            tra.grid.points,
            tra.transmission.values,
            tra.reflection.values,
            tra.absorption.values,
        ),
    )


def write_chi_csv(path: str, chi: ComplexSpectrum) -> None:
    write_columns(
        path,
        "omega,re_chi,im_chi",
        (chi.grid.points, chi.values.real, chi.values.imag),
    )


def read_chi_csv(path: str) -> ComplexSpectrum:
    """Read a tabulated susceptibility (``omega,re_chi,im_chi``).

    The frequency column must be a uniform ascending grid; it becomes the
    spectrum's grid verbatim.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "omega,re_chi,im_chi":
            raise ValidationError(
                f"{path}: expected header 'omega,re_chi,im_chi', got {header!r}"
            )
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 3:
        raise ValidationError(f"{path}: expected 3 columns, got {data.shape[1]}")
    omega = data[:, 0]
    if omega.size < 2:
        raise ValidationError(f"{path}: need at least two rows")
    spacing = np.diff(omega)
    if spacing.min() <= 0 or np.abs(spacing - spacing[0]).max() > 1e-9 * abs(
        spacing[0]
    ):
        raise ValidationError(f"{path}: frequency column must be uniform ascending")
    grid = FrequencyGrid(float(omega[0]), float(omega[-1]), omega.size)
    return ComplexSpectrum(grid, data[:, 1] + 1j * data[:, 2])


def write_jeff_csv(path: str, J: RealSpectrum) -> None:
    write_columns(path, "omega,j_eff", (J.grid.points, J.values))


def write_beta_eff_csv(path: str, beta_eff: EffectiveTemperature) -> None:
    write_columns(
        path, "omega,beta_eff", (beta_eff.grid.points, beta_eff.values)
    )


def write_c2_csv(path: str, c2: CorrelationFunction) -> None:
    write_columns(
        path,
        "t,re_c2,im_c2",
        (c2.grid.times, c2.values.real, c2.values.imag),
    )


# ---------------------------------------------------------------------------
# Minimal static SVG line chart


_SVG_W, _SVG_H = 840, 520
_ML, _MR, _MT, _MB = 72, 24, 24, 56
_TRACES = (("T", "#1f77b4"), ("R", "#2ca02c"), ("A", "#d62728"))


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def write_tra_svg(path: str, tra: TraSpectra, title: str = "") -> None:
    """Render T/R/A as a static SVG line chart (axes, ticks, legend)."""
    omega = tra.grid.points
    series = [
        tra.transmission.values,
        tra.reflection.values,
        tra.absorption.values,
    ]
    ylo = min(float(s.min()) for s in series)
    yhi = max(float(s.max()) for s in series)
    if yhi == ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    xlo, xhi = float(omega[0]), float(omega[-1])

    plot_w = _SVG_W - _ML - _MR
    plot_h = _SVG_H - _MT - _MB

    def sx(x):
        return _ML + (x - xlo) / (xhi - xlo) * plot_w

    def sy(y):
        return _MT + (yhi - y) / (yhi - ylo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" '
        f'height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_ML}" y="16" font-family="sans-serif" '
            f'font-size="13">{title}</text>'
        )
    for xv in _ticks(xlo, xhi):
        parts.append(
            f'<line x1="{sx(xv):.2f}" y1="{_MT + plot_h}" x2="{sx(xv):.2f}" '
            f'y2="{_MT + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{sx(xv):.2f}" y="{_MT + plot_h + 20}" '
            'font-family="sans-serif" font-size="12" '
            f'text-anchor="middle">{xv:g}</text>'
        )
    for yv in _ticks(ylo, yhi):
        parts.append(
            f'<line x1="{_ML - 5}" y1="{sy(yv):.2f}" x2="{_ML}" '
            f'y2="{sy(yv):.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{sy(yv):.2f}" font-family="sans-serif" '
            f'font-size="12" text-anchor="end" dominant-baseline="middle">'
            f"{yv:.3g}</text>"
        )
    parts.append(
        f'<text x="{_ML + plot_w / 2:.0f}" y="{_SVG_H - 12}" '
        'font-family="sans-serif" font-size="13" '
        'text-anchor="middle">frequency</text>'
    )
    # decimate long traces to keep files small; peaks survive because the
    # grid is much denser than any plotted feature
    stride = max(1, omega.size // 2000)
    for (label, color), vals in zip(_TRACES, series):
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(omega[::stride], vals[::stride])
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
    for i, (label, color) in enumerate(_TRACES):
        y = _MT + 16 + 18 * i
        x = _SVG_W - _MR - 70
        parts.append(
            f'<line x1="{x}" y1="{y}" x2="{x + 24}" y2="{y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{x + 30}" y="{y + 4}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    _atomic_write_text(path, "\n".join(parts) + "\n")
