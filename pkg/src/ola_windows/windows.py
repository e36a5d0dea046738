"""Baseline overlap-add windows and Princen-Bradley validation.

All formulas below use 1-based sample indices ``k = 1..L``; arrays are stored
0-based, so ``samples[k - 1]`` holds sample ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidArgumentError

__all__ = [
    "Window",
    "PbResidual",
    "half_sine",
    "bessel_i0",
    "kaiser",
    "kbd",
    "rectangular",
    "flat_extend",
    "validate_princen_bradley",
]


def _check_even_length(L):
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)):
        raise InvalidArgumentError(f"window length must be an integer, got {L!r}")
    if L < 2 or L % 2:
        raise InvalidArgumentError(f"window length must be a positive even integer, got {L}")
    return int(L)


@dataclass(frozen=True)
class Window:
    """A finite window with a declared overlap structure.

    Parameters
    ----------
    samples : array_like
        Window amplitudes, length ``L``.
    overlap : int, optional
        Number of samples ``T`` shared with each neighbouring frame. Defaults
        to ``L // 2`` (full overlap). The hop between frames is ``L - T``.
    label : str
        Free-form identifier used in reports.
    princen_bradley : bool
        Whether the window is meant for overlap-add use. Reference objects
        such as the unconstrained DPSS set this to False.
    """

    samples: np.ndarray
    overlap: int | None = None
    label: str = ""
    princen_bradley: bool = True
    length: int = field(init=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size == 0:
            raise InvalidArgumentError("window samples must be a non-empty 1-D vector")
        if not np.all(np.isfinite(s)):
            raise InvalidArgumentError("window samples must be finite")
        s.setflags(write=False)
        L = s.size
        T = L // 2 if self.overlap is None else int(self.overlap)
        if T < 1 or T > L // 2:
            raise InvalidArgumentError(f"overlap must lie in [1, L/2] = [1, {L // 2}], got {T}")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "overlap", T)
        object.__setattr__(self, "length", L)

    @property
    def hop(self):
        return self.length - self.overlap

    @property
    def is_full_overlap(self):
        return 2 * self.overlap == self.length

    def is_positive(self):
        return bool(np.all(self.samples > 0))

    def is_symmetric(self, atol=0.0):
        return bool(np.all(np.abs(self.samples - self.samples[::-1]) <= atol))

    def scaled(self, c):
        return Window(c * self.samples, self.overlap, self.label, self.princen_bradley)

    def to_dict(self):
        return {
            "label": self.label,
            "length": self.length,
            "overlap": self.overlap,
            "samples": [float(x) for x in self.samples],
        }

    def __eq__(self, other):
        if not isinstance(other, Window):
            return NotImplemented
        return (
            self.overlap == other.overlap
            and self.label == other.label
            and self.princen_bradley == other.princen_bradley
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None


@dataclass(frozen=True)
class PbResidual:
    """Princen-Bradley residual of a window.

    ``per_index[k - 1] = w[k]**2 + w[k + L - T]**2 - 1`` for ``k = 1..T``.
    ``max_abs`` also folds in the flat-top deviation of low-overlap windows.
    """

    max_abs: float
    per_index: np.ndarray
    flat_top_deviation: float = 0.0


def half_sine(L, label=None):
    """Half-sine window ``sin(pi (k - 1/2) / L)``, ``k = 1..L``."""
    L = _check_even_length(L)
    k = np.arange(1, L + 1)
    w = np.sin(np.pi * (k - 0.5) / L)
    # exact mirror so symmetry holds bit-for-bit
    w[L // 2:] = w[: L // 2][::-1]
    return Window(w, L // 2, label or f"half-sine(L={L})")


def bessel_i0(x):
    """Modified Bessel function of the first kind, order zero.

    Evaluated by the power series ``sum((x/2)**(2m) / (m!)**2)``, stopping
    once a term is below 1e-16 of the running sum.
    """
    x = float(x)
    if not x >= 0.0:
        raise InvalidArgumentError(f"bessel_i0 requires x >= 0, got {x}")
    q = 0.25 * x * x
    total = 1.0
    term = 1.0
    m = 0
    while True:
        m += 1
        term *= q / (m * m)
        total += term
        if term < 1e-16 * total:
            return total


def kaiser(N, alpha):
    """Symmetric Kaiser-Bessel window of ``N`` samples with shape ``alpha``.

    ``u_j = I0(alpha * sqrt(1 - (2 j / (N - 1) - 1)**2))`` for ``j = 0..N-1``.
    """
    if N < 1:
        raise InvalidArgumentError(f"Kaiser length must be positive, got {N}")
    if not alpha >= 0:
        raise InvalidArgumentError(f"Kaiser alpha must be nonnegative, got {alpha}")
    if N == 1:
        return np.ones(1)
    j = np.arange(N)
    r = 2.0 * j / (N - 1) - 1.0
    arg = alpha * np.sqrt(np.clip(1.0 - r * r, 0.0, None))
    u = np.array([bessel_i0(a) for a in arg])
    u[N - (N // 2):] = u[: N // 2][::-1]
    return u


def kbd(L, alpha, label=None):
    """Kaiser-Bessel-derived window.

    A Kaiser window of ``L/2 + 1`` samples is accumulated, normalised by its
    total and square-rooted to give the first half; the second half mirrors
    it. The result satisfies the Princen-Bradley condition exactly up to
    rounding.
    """
    L = _check_even_length(L)
    if not alpha >= 0:
        raise InvalidArgumentError(f"KBD alpha must be nonnegative, got {alpha}")
    u = kaiser(L // 2 + 1, alpha)
    csum = np.cumsum(u)
    first = np.sqrt(csum[: L // 2] / csum[-1])
    w = np.concatenate([first, first[::-1]])
    return Window(w, L // 2, label or f"kbd(L={L}, alpha={alpha:g})")


def rectangular(L, overlap=None, label=None):
    """All-ones window; a test fixture, not a valid overlap-add window."""
    if L < 1:
        raise InvalidArgumentError(f"window length must be positive, got {L}")
    return Window(np.ones(int(L)), overlap, label or f"rectangular(L={L})", princen_bradley=False)


def flat_extend(w, L, label=None):
    """Turn a full-overlap window of length ``2T`` into a low-overlap one.

    The rising half is placed first, ``L - 2T`` ones fill the middle and the
    falling half closes the window, so the overlap with each neighbour is
    ``T`` samples.
    """
    if not w.is_full_overlap:
        raise InvalidArgumentError("flat_extend expects a full-overlap window")
    T = w.length // 2
    if L < 2 * T:
        raise InvalidArgumentError(f"target length {L} is shorter than the source window {2 * T}")
    s = np.concatenate([w.samples[:T], np.ones(L - 2 * T), w.samples[T:]])
    return Window(s, T, label or f"{w.label} extended to L={L}", w.princen_bradley)


def validate_princen_bradley(w):
    """Return the Princen-Bradley residual of ``w`` at offset ``L - T``.

    For low-overlap windows the deviation of the flat middle section
    ``k = T+1..L-T`` from one is folded into ``max_abs``.
    """
    s = w.samples
    L, T = w.length, w.overlap
    per_index = s[:T] ** 2 + s[L - T:] ** 2 - 1.0
    flat = s[T : L - T]
    flat_dev = float(np.max(np.abs(flat - 1.0))) if flat.size else 0.0
    max_abs = max(float(np.max(np.abs(per_index))), flat_dev)
    return PbResidual(max_abs, per_index, flat_dev)

