"""Named window families shared by the calibration and the command line."""
from __future__ import annotations

import numpy as np

from .exceptions import InvalidArgumentError
from .optimizer import SolveOptions, design_low_overlap
from .windows import flat_extend, half_sine, kbd

FAMILIES = ("half-sine", "kbd", "ola-dpss", "ola-dpss-low")
DEFAULT_ALPHA = {"kbd": 4.25, "ola-dpss": 2.75, "ola-dpss-low": 5.0}


def check_params(family, L, overlap=None, alpha=None):
    """Validate a family/length/overlap/alpha combination without building anything."""
    if family not in FAMILIES:
        raise InvalidArgumentError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or L < 2 or L % 2:
        raise InvalidArgumentError(f"length must be a positive even integer, got {L!r}")
    T = L // 2 if overlap is None else overlap
    if isinstance(T, bool) or not isinstance(T, (int, np.integer)) or not 1 <= T <= L // 2:
        raise InvalidArgumentError(f"overlap must be an integer in [1, L/2] = [1, {L // 2}], got {T!r}")
    if family == "ola-dpss-low" and overlap is None:
        raise InvalidArgumentError("ola-dpss-low needs an explicit overlap")
    if family != "half-sine":
        a = DEFAULT_ALPHA[family] if alpha is None else alpha
        if family.startswith("ola-dpss") and not 0 < a < L:
            raise InvalidArgumentError(f"alpha must lie in (0, L) = (0, {L}), got {a}")
        if family == "kbd" and not a >= 0:
            raise InvalidArgumentError(f"kbd alpha must be nonnegative, got {a}")
    return int(T)


def build_window(family, L, alpha=None, overlap=None, opts=None):
    """Build a family member; returns ``(window, trace)`` (trace is None for closed forms).

    With ``overlap < L/2`` the half-sine and KBD are built at length ``2T``
    and flat-extended, and OLA-DPSS is designed with the low-overlap
    constraints.
    """
    T = check_params(family, L, overlap, alpha)
    if family != "half-sine" and alpha is None:
        alpha = DEFAULT_ALPHA[family]
    low = 2 * T < L
    if family == "half-sine":
        w = half_sine(2 * T)
        return (flat_extend(w, L, f"half-sine-low(L={L}, T={T})") if low else w), None
    if family == "kbd":
        w = kbd(2 * T, alpha)
        return (flat_extend(w, L, f"kbd-low(L={L}, T={T}, alpha={alpha:g})") if low else w), None
    return design_low_overlap(L, T, alpha, opts or SolveOptions())


def parse_spec(text):
    """Parse ``family[:alpha]``, e.g. ``kbd:4.25`` or ``half-sine``."""
    family, _, rest = text.partition(":")
    family = family.strip()
    if family not in FAMILIES:
        raise InvalidArgumentError(f"unknown family {family!r} in window spec {text!r}")
    if not rest:
        return family, None
    try:
        return family, float(rest)
    except ValueError:
        raise InvalidArgumentError(f"bad alpha {rest!r} in window spec {text!r}") from None
