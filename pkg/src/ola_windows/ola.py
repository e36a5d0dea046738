"""Overlap-add analysis/synthesis with double windowing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError

__all__ = [
    "FrameSet",
    "ReconstructionReport",
    "segment",
    "overlap_add",
    "interior_range",
    "square_sum",
    "verify_reconstruction",
]


@dataclass(frozen=True)
class FrameSet:
    """Windowed frames ``frames[h] = w * signal[origin + hop*h : origin + hop*h + L]``."""

    frames: np.ndarray
    hop: int
    origin: int = 0
    window_label: str = ""

    @property
    def n_frames(self):
        return self.frames.shape[0]

    @property
    def frame_length(self):
        return self.frames.shape[1]

    def modified(self, frames):
        return FrameSet(np.asarray(frames, dtype=float), self.hop, self.origin, self.window_label)


@dataclass(frozen=True)
class ReconstructionReport:
    max_abs_error: float
    interior_range: tuple
    square_sum_deviation: float
    window_label: str = ""

    def to_dict(self):
        return {
            "window_label": self.window_label,
            "max_abs_error": self.max_abs_error,
            "interior_range": list(self.interior_range),
            "square_sum_deviation": self.square_sum_deviation,
        }


def segment(signal, w):
    """Cut ``signal`` into frames at hop ``L - T`` and window each one."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be one-dimensional")
    L, hop = w.length, w.hop
    if x.size < 2 * L:
        raise InvalidArgumentError(f"signal of {x.size} samples is shorter than 2L = {2 * L}")
    n_frames = (x.size - L) // hop + 1
    idx = hop * np.arange(n_frames)[:, None] + np.arange(L)[None, :]
    return FrameSet(x[idx] * w.samples, hop, 0, w.label)


def overlap_add(frames, w):
    """Window each frame again and add them at the hop spacing.

    Output length is ``hop * (n_frames - 1) + L``.
    """
    F = np.asarray(frames.frames, dtype=float)
    if F.ndim != 2 or F.shape[1] != w.length:
        raise InvalidArgumentError(f"frames must have shape (n, {w.length}), got {F.shape}")
    if frames.hop != w.hop:
        raise InvalidArgumentError(f"frame hop {frames.hop} does not match window hop {w.hop}")
    n, L = F.shape
    out = np.zeros(frames.hop * max(n - 1, 0) + L)
    for h in range(n):
        start = frames.hop * h
        out[start:start + L] += w.samples * F[h]
    return out


def interior_range(n_out, w):
    """Half-open index range where every sample is covered by a full set of frames.

    The first and last ``L - hop = T`` output samples are transients.
    """
    edge = w.length - w.hop
    return edge, n_out - edge


def square_sum(n_frames, w):
    """Sum over frames of the squared, shifted window: ``sum_h w[k - hop h]**2``."""
    n_out = w.hop * (n_frames - 1) + w.length
    acc = np.zeros(n_out)
    sq = w.samples ** 2
    for h in range(n_frames):
        acc[w.hop * h : w.hop * h + w.length] += sq
    return acc


def verify_reconstruction(signal, w):
    """Round-trip ``signal`` through segment/overlap-add without modification.

    Reports the largest interior reconstruction error and the largest
    interior deviation of the squared-window sum from one.
    """
    x = np.asarray(signal, dtype=float)
    frames = segment(x, w)
    y = overlap_add(frames, w)
    lo, hi = interior_range(y.size, w)
    err = float(np.max(np.abs(y[lo:hi] - x[lo:hi]))) if hi > lo else 0.0
    ss = square_sum(frames.n_frames, w)
    dev = float(np.max(np.abs(ss[lo:hi] - 1.0))) if hi > lo else 0.0
    return ReconstructionReport(err, (int(lo), int(hi)), dev, w.label)
