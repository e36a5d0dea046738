"""Energy-concentration kernel, Rayleigh quotient and the unconstrained DPSS."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve, toeplitz

from .exceptions import InvalidArgumentError, SolverError
from .windows import Window

__all__ = [
    "ConcentrationKernel",
    "ConcentrationReport",
    "build_toeplitz",
    "concentration_ratio",
    "dpss_unconstrained",
    "power_iteration",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConcentrationKernel:
    """Symmetric Toeplitz sinc kernel ``T[k - h] = L sin(pi alpha (k - h) / L) / (k - h)``.

    Only the first row (``entries``) is stored; ``matrix()`` expands it.
    """

    length: int
    alpha: float
    entries: np.ndarray

    def matrix(self):
        return toeplitz(self.entries)

    @property
    def zero_lag(self):
        """Gain of the kernel at lag zero, ``pi * alpha``."""
        return float(self.entries[0])


@dataclass(frozen=True)
class ConcentrationReport:
    """Concentration of a window under a kernel.

    ``tau_db`` is ``10 log10(tau_linear)``. ``tau_db_normalized`` divides
    ``tau_linear`` by the kernel's zero-lag gain ``pi * alpha`` first, which
    gives a ratio of at most one for a unit-gain sinc kernel and is the scale
    on which published concentration tables are usually quoted.
    """

    window_label: str
    kernel_alpha: float
    tau_linear: float
    tau_db: float
    tau_db_normalized: float

    def to_dict(self):
        return {
            "window_label": self.window_label,
            "kernel_alpha": self.kernel_alpha,
            "tau_linear": self.tau_linear,
            "tau_db": self.tau_db,
            "tau_db_normalized": self.tau_db_normalized,
        }


def build_toeplitz(L, alpha):
    """Build the concentration kernel for windows of length ``L``.

    ``alpha`` sets the pass-band width in DFT-bin-like units and must lie in
    ``(0, L)``. The lag-zero entry is the analytic limit ``pi * alpha``.
    """
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or L < 2:
        raise InvalidArgumentError(f"kernel length must be an integer >= 2, got {L!r}")
    alpha = float(alpha)
    if not 0.0 < alpha < L:
        raise InvalidArgumentError(f"kernel alpha must lie in (0, L) = (0, {L}), got {alpha}")
    n = np.arange(1, L, dtype=float)
    entries = np.empty(int(L))
    entries[0] = math.pi * alpha
    entries[1:] = L * np.sin(math.pi * alpha * n / L) / n
    entries.setflags(write=False)
    return ConcentrationKernel(int(L), alpha, entries)


def _rayleigh(K, w):
    return float(w @ K @ w) / float(w @ w)


def concentration_ratio(w, kernel):
    """Rayleigh quotient ``w^T T w / w^T w`` of ``w`` against ``kernel``."""
    if w.length != kernel.length:
        raise InvalidArgumentError(
            f"window length {w.length} does not match kernel length {kernel.length}"
        )
    s = w.samples
    if not np.any(s):
        raise InvalidArgumentError("concentration of an all-zero window is undefined")
    tau = _rayleigh(kernel.matrix(), s)
    return ConcentrationReport(
        window_label=w.label,
        kernel_alpha=kernel.alpha,
        tau_linear=tau,
        tau_db=10.0 * math.log10(tau),
        tau_db_normalized=10.0 * math.log10(tau / kernel.zero_lag),
    )


def power_iteration(A, x0=None, tol=1e-10, max_iters=100_000, residual_tol=None):
    """Dominant eigenpair of a symmetric positive semi-definite matrix.

    Iterates until the Rayleigh quotient changes by less than ``tol``
    (relative) and, when ``residual_tol`` is given, the eigen-residual
    ``||A v - lam v||`` has dropped below it.

    Returns
    -------
    lam : float
    v : ndarray
        Unit-norm eigenvector.
    iterations : int
    residual : float
    """
    n = A.shape[0]
    v = np.ones(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    v /= np.linalg.norm(v)
    lam = float(v @ A @ v)
    residual = np.inf
    for it in range(1, max_iters + 1):
        Av = A @ v
        v_new = Av / np.linalg.norm(Av)
        lam_new = float(v_new @ A @ v_new)
        residual = float(np.linalg.norm(A @ v_new - lam_new * v_new))
        done = abs(lam_new - lam) <= tol * abs(lam_new)
        v, lam = v_new, lam_new
        if done and (residual_tol is None or residual <= residual_tol):
            return lam, v, it, residual
    raise SolverError(
        f"power iteration did not converge in {max_iters} iterations (residual {residual:.3e})",
        residual=residual,
    )


def _rayleigh_polish(A, lam, v, steps=3):
    # shifted inverse iteration; the shift is nudged so the system stays solvable
    n = A.shape[0]
    for _ in range(steps):
        shift = lam * (1.0 + 1e-12)
        try:
            y = solve(A - shift * np.eye(n), v, assume_a="sym")
        except np.linalg.LinAlgError:
            break
        v = y / np.linalg.norm(y)
        lam = float(v @ A @ v)
    return lam, v


def dpss_unconstrained(L, alpha, tol=1e-10, max_iters=100_000):
    """Order-zero discrete prolate spheroidal sequence for the kernel.

    The dominant eigenvector of the kernel, unit norm and sign-normalised to
    be positive. Power iteration starts from the all-ones vector; since that
    vector is even, the odd eigenvectors never enter and convergence is set
    by the ratio of the two largest even eigenvalues.

    Raises
    ------
    SolverError
        If the eigen-residual stays above ``1e-8 * ||T||_F``.
    """
    kernel = build_toeplitz(L, alpha)
    K = kernel.matrix()
    fro = float(np.linalg.norm(K))
    target = 1e-8 * fro
    lam, v, iters, residual = power_iteration(K, tol=tol, max_iters=max_iters)
    # the eigenvalue settles long before the vector does
    lam, v = _rayleigh_polish(K, lam, v)
    residual = float(np.linalg.norm(K @ v - lam * v))
    if residual > target:
        raise SolverError(
            f"DPSS eigen-residual {residual:.3e} exceeds {target:.3e}", residual=residual
        )
    if v.sum() < 0:
        v = -v
    log.debug("dpss L=%d alpha=%g: lambda=%.12g after %d iterations", L, alpha, lam, iters)
    overlap = max(1, int(L) // 2)
    return Window(v, overlap, f"dpss(L={L}, alpha={alpha:g})", princen_bradley=False)
