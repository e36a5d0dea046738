"""Magnitude responses, lobe metrics and main-lobe-matched alpha calibration."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import CalibrationError, InvalidArgumentError
from .catalog import build_window
from .optimizer import SolveOptions

__all__ = [
    "SpectrumReport",
    "LobeComparison",
    "magnitude_response",
    "main_lobe_width",
    "lobe_metrics",
    "family_window",
    "match_main_lobe_alpha",
]

log = logging.getLogger(__name__)

FAMILIES = ("kbd", "ola-dpss")
DEFAULT_BRACKET = (0.1, 16.0)


@dataclass(frozen=True)
class SpectrumReport:
    """Zero-padded magnitude response of a window on ``[0, 1/2]`` cycles/sample.

    ``side_lobes`` holds ``(frequency, level_db)`` pairs beyond the first
    null, in increasing frequency.
    """

    window_label: str
    length: int
    pad_factor: int
    bins: np.ndarray
    magnitude_db: np.ndarray
    main_lobe_width: float
    side_lobes: tuple

    def to_dict(self, include_curve=True):
        d = {
            "window_label": self.window_label,
            "length": self.length,
            "pad_factor": self.pad_factor,
            "main_lobe_width": self.main_lobe_width,
            "side_lobes": [{"frequency": f, "level_db": v} for f, v in self.side_lobes],
        }
        if include_curve:
            d["frequency"] = [float(x) for x in self.bins]
            d["magnitude_db"] = [float(x) for x in self.magnitude_db]
        return d


@dataclass(frozen=True)
class LobeComparison:
    """Differences ``a - b`` between two spectra."""

    label_a: str
    label_b: str
    main_lobe_width_diff: float
    side_lobe_diffs_db: tuple

    def to_dict(self):
        return {
            "label_a": self.label_a,
            "label_b": self.label_b,
            "main_lobe_width_diff": self.main_lobe_width_diff,
            "side_lobe_diffs_db": list(self.side_lobe_diffs_db),
        }


def _zero_phase_amplitude(samples, f):
    n = np.arange(samples.size) - 0.5 * (samples.size - 1)
    return float(np.sum(samples * np.cos(2.0 * math.pi * f * n)))


def _first_null(samples, bins, spectrum):
    """First spectral null in cycles/sample.

    For symmetric windows the zero-phase amplitude is real and the null is
    its first sign change, refined by root finding on the continuous DTFT.
    Otherwise the first local minimum of ``|W|`` is refined parabolically.
    """
    L = samples.size
    symmetric = np.allclose(samples, samples[::-1], rtol=0.0, atol=1e-12 * np.abs(samples).max())
    if symmetric:
        amp = np.real(spectrum * np.exp(1j * math.pi * bins * (L - 1)))
        sign0 = np.sign(amp[0])
        flips = np.nonzero(np.sign(amp[1:]) != sign0)[0]
        if flips.size:
            i = flips[0] + 1
            a, b = bins[i - 1], bins[i]
            g = lambda f: _zero_phase_amplitude(samples, f)
            ga, gb = g(a), g(b)
            if np.sign(ga) == np.sign(gb) or ga == 0.0 or gb == 0.0:
                # null sits on a grid point; FFT and direct sums disagree on its sign
                return float(a if abs(ga) < abs(gb) else b)
            return float(brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    mag = np.abs(spectrum)
    for i in range(1, mag.size - 1):
        if mag[i] <= mag[i - 1] and mag[i] < mag[i + 1]:
            f, _ = _parabolic(bins, mag, i)
            return f
    raise InvalidArgumentError("window spectrum has no measurable first null")


def _parabolic(x, y, i):
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2.0 * y1 + y2
    p = 0.0 if den == 0 else 0.5 * (y0 - y2) / den
    dx = x[i + 1] - x[i]
    return float(x[i] + p * dx), float(y1 - 0.25 * (y0 - y2) * p)


def _side_lobes(bins, mag_db, first_null):
    lobes = []
    start = int(np.searchsorted(bins, first_null, side="right"))
    start = max(start, 1)
    for i in range(start, mag_db.size - 1):
        # >= on the right picks the first sample of a flat-topped peak
        if mag_db[i] > mag_db[i - 1] and mag_db[i] >= mag_db[i + 1]:
            lobes.append(_parabolic(bins, mag_db, i))
    return tuple(lobes)


def magnitude_response(w, pad_factor=16):
    """Magnitude response of ``w`` zero-padded to ``pad_factor * L`` points.

    Levels are ``20 log10(|W| / max|W|)``. Side lobes are three-point local
    maxima beyond the first null, refined by parabolic interpolation.
    """
    if int(pad_factor) != pad_factor or pad_factor < 4:
        raise InvalidArgumentError(f"pad_factor must be an integer >= 4, got {pad_factor}")
    pad_factor = int(pad_factor)
    s = w.samples
    if not np.any(s):
        raise InvalidArgumentError("cannot analyse an all-zero window")
    N = pad_factor * s.size
    W = np.fft.rfft(s, N)
    bins = np.arange(W.size) / N
    mag = np.abs(W)
    with np.errstate(divide="ignore"):
        mag_db = 20.0 * np.log10(np.maximum(mag / mag.max(), 1e-300))
    null = _first_null(s, bins, W)
    return SpectrumReport(
        window_label=w.label,
        length=s.size,
        pad_factor=pad_factor,
        bins=bins,
        magnitude_db=mag_db,
        main_lobe_width=null,
        side_lobes=_side_lobes(bins, mag_db, null),
    )


def main_lobe_width(w, pad_factor=16):
    """First-null frequency of ``w`` in cycles/sample."""
    s = w.samples
    N = int(pad_factor) * s.size
    W = np.fft.rfft(s, N)
    return _first_null(s, np.arange(W.size) / N, W)


def lobe_metrics(a, b, n_lobes=5):
    """Compare two spectra: main-lobe width and side-lobe level differences ``a - b``."""
    if a.length != b.length or a.pad_factor != b.pad_factor:
        raise InvalidArgumentError("spectra must share window length and pad factor")
    n = min(n_lobes, len(a.side_lobes), len(b.side_lobes))
    diffs = tuple(a.side_lobes[i][1] - b.side_lobes[i][1] for i in range(n))
    return LobeComparison(a.window_label, b.window_label, a.main_lobe_width - b.main_lobe_width, diffs)


def family_window(family, L, alpha, overlap=None, opts=None):
    """Member of a tunable window family (``kbd`` or ``ola-dpss``) at ``alpha``.

    ``overlap`` below ``L/2`` gives the low-overlap member: the KBD of length
    ``2T`` flat-extended to ``L``, or the low-overlap OLA-DPSS design.
    """
    if family not in FAMILIES:
        raise InvalidArgumentError(f"unknown window family {family!r}; expected one of {FAMILIES}")
    return build_window(family, L, alpha, overlap, opts)[0]


def match_main_lobe_alpha(reference, family, L=None, tol=1e-3, overlap=None, opts=None,
                          bracket=DEFAULT_BRACKET, max_iters=80, pad_factor=16, scan_points=64):
    """Alpha at which a family's first null matches that of ``reference``.

    The bracket is scanned on a uniform grid for the first interval where
    the family's first-null frequency rises through the reference's; that
    interval is then bisected. Widths must increase strictly on the scanned
    grid up to the crossing, otherwise :class:`CalibrationError` is raised.
    (For OLA-DPSS the width is not monotone over the whole default bracket;
    it dips between roughly alpha = 3 and 4, so only the segment below the
    first crossing is required to be increasing.)

    Returns
    -------
    float
        The calibrated alpha. Its first null lies within ``tol``
        (cycles/sample) of the reference's.
    """
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    if family not in FAMILIES:
        raise InvalidArgumentError(f"unknown window family {family!r}; expected one of {FAMILIES}")
    L = reference.length if L is None else int(L)
    if overlap is None:
        overlap = reference.overlap if reference.length == L else L // 2
    target = main_lobe_width(reference, pad_factor)
    opts = opts or SolveOptions()

    def width(alpha):
        return main_lobe_width(family_window(family, L, alpha, overlap, opts), pad_factor)

    lo, hi = bracket
    scan_alphas = np.linspace(lo, hi, scan_points)
    widths = []
    crossing = None
    for i, a in enumerate(scan_alphas):
        widths.append(width(a))
        if i and widths[-1] <= widths[-2]:
            raise CalibrationError(
                f"main-lobe width of {family} stops increasing at alpha={a:.4g} "
                f"before reaching the target {target:.6g}",
                bracket=(lo, a), widths=np.array(widths),
            )
        if widths[-1] >= target:
            crossing = i
            break
    if crossing is None or crossing == 0 and widths[0] > target:
        raise CalibrationError(
            f"target width {target:.6g} not bracketed by {family} over alpha in [{lo}, {hi}] "
            f"(scanned widths {widths[0]:.6g}..{max(widths):.6g})",
            bracket=(lo, hi), widths=np.array(widths),
        )
    if crossing == 0:
        return float(lo)
    a, b = scan_alphas[crossing - 1], scan_alphas[crossing]
    for _ in range(max_iters):
        mid = 0.5 * (a + b)
        if width(mid) < target:
            a = mid
        else:
            b = mid
        if b - a <= 1e-9 * max(1.0, b):
            break
    alpha = 0.5 * (a + b)
    err = abs(width(alpha) - target)
    if err > tol:
        raise CalibrationError(
            f"calibrated {family} width misses the target by {err:.3g} > tol {tol:g}",
            bracket=(a, b),
        )
    log.info("calibrated %s alpha=%.6g (target width %.6g)", family, alpha, target)
    return float(alpha)
