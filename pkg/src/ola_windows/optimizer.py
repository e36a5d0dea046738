"""Maximum-concentration windows under overlap-add constraints.

The quadratic pair constraints ``w[k]**2 + w[k + L - T]**2 = 1`` are
eliminated by writing ``w[k] = sin(theta_k)`` and ``w[k + L - T] =
cos(theta_k)`` for ``k = 1..T``; flat-top samples of low-overlap windows are
pinned to one. The constrained quadratic program then becomes an
unconstrained maximisation over ``theta`` in the open box ``(0, pi/2)**T``,
which is solved by BFGS (or plain gradient ascent) with an Armijo
backtracking line search. Every iterate is feasible by construction.

With symmetry enforced, ``theta_{T+1-k} = pi/2 - theta_k`` and only the
first ``T // 2`` angles are free; for odd ``T`` the middle angle is fixed at
``pi/4``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidArgumentError
from .kernel import ConcentrationKernel, build_toeplitz
from .windows import Window, _check_even_length

__all__ = [
    "ConstraintSet",
    "SolveOptions",
    "SolveTrace",
    "objective_and_gradient",
    "angles_to_window",
    "initial_angles",
    "design_ola_dpss",
    "design_low_overlap",
]

log = logging.getLogger(__name__)

BOX_MARGIN = 1e-9


@dataclass(frozen=True)
class ConstraintSet:
    """Princen-Bradley pair constraints plus the flat top of low-overlap windows."""

    length: int
    overlap: int
    symmetric: bool = False

    def __post_init__(self):
        L = _check_even_length(self.length)
        T = int(self.overlap)
        if not 1 <= T <= L // 2:
            raise InvalidArgumentError(f"overlap must lie in [1, L/2] = [1, {L // 2}], got {T}")
        object.__setattr__(self, "length", L)
        object.__setattr__(self, "overlap", T)

    @property
    def kind(self):
        return "full-overlap" if 2 * self.overlap == self.length else "low-overlap"

    @property
    def n_free(self):
        return self.overlap // 2 if self.symmetric else self.overlap

    def pair_matrices(self):
        """Diagonal selector matrices, one per overlap pair, as index pairs.

        Pair ``k`` (1-based) picks samples ``k`` and ``k + L - T``; the
        matrices themselves are ``diag(e_k + e_{k+L-T})``.
        """
        L, T = self.length, self.overlap
        return [(k - 1, k - 1 + L - T) for k in range(1, T + 1)]

    def flat_indices(self):
        """0-based indices pinned to one (``k = T+1..L-T`` in 1-based terms)."""
        return np.arange(self.overlap, self.length - self.overlap)

    def residual(self, w):
        w = np.asarray(w, dtype=float)
        L, T = self.length, self.overlap
        pairs = np.abs(w[:T] ** 2 + w[L - T:] ** 2 - 1.0).max()
        flat = w[T : L - T]
        return max(float(pairs), float(np.abs(flat - 1.0).max()) if flat.size else 0.0)


@dataclass(frozen=True)
class SolveOptions:
    grad_tol: float = 1e-10
    obj_tol: float = 1e-12
    max_iters: int = 10_000
    enforce_symmetry: bool = True
    multistart: int = 1
    method: str = "bfgs"
    seed: int = 0
    perturbation: float = 0.05

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.obj_tol > 0):
            raise InvalidArgumentError("tolerances must be positive")
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be at least 1")
        if self.multistart < 1:
            raise InvalidArgumentError("multistart must be at least 1")
        if self.method not in ("bfgs", "gradient"):
            raise InvalidArgumentError(f"unknown ascent method {self.method!r}")


@dataclass
class SolveTrace:
    iterations: int
    final_objective: float
    final_grad_norm: float
    converged: bool
    objective_history: list = field(default_factory=list, repr=False)
    starts: int = 1

    def to_dict(self):
        return {
            "iterations": self.iterations,
            "final_objective": self.final_objective,
            "final_grad_norm": self.final_grad_norm,
            "converged": self.converged,
            "starts": self.starts,
        }


def _expand(theta, constraints):
    """Free angles -> all ``T`` pair angles."""
    T = constraints.overlap
    if not constraints.symmetric:
        return theta
    full = np.empty(T)
    h = T // 2
    full[:h] = theta
    full[T - h:] = (0.5 * math.pi - theta)[::-1]
    if T % 2:
        full[h] = 0.25 * math.pi
    return full


def _fold(grad_full, constraints):
    """Chain rule through ``_expand``: gradient on the free angles."""
    if not constraints.symmetric:
        return grad_full
    T = constraints.overlap
    h = T // 2
    return grad_full[:h] - grad_full[T - h:][::-1]


def angles_to_window(theta, constraints):
    """Window samples for the free angles ``theta``."""
    th = _expand(np.asarray(theta, dtype=float), constraints)
    L, T = constraints.length, constraints.overlap
    w = np.ones(L)
    w[:T] = np.sin(th)
    w[L - T:] = np.cos(th)
    if constraints.symmetric:
        # sin(theta_k) and cos(pi/2 - theta_k) round differently
        w[L - T:] = w[:T][::-1]
    return w


def initial_angles(constraints):
    """Angles reproducing the (flat-extended) half-sine of overlap ``T``."""
    T = constraints.overlap
    k = np.arange(1, T + 1)
    th = math.pi * (k - 0.5) / (2 * T)
    return th[: constraints.n_free].copy()


def objective_and_gradient(theta, kernel, constraints):
    """Concentration numerator ``w^T T w`` and its gradient in the angles.

    Parameters
    ----------
    theta : array_like
        Free angles, each strictly inside ``(0, pi/2)``; ``T`` of them, or
        ``T // 2`` when ``constraints.symmetric``.
    kernel : ConcentrationKernel
    constraints : ConstraintSet

    Returns
    -------
    objective : float
    gradient : ndarray
    """
    theta = np.asarray(theta, dtype=float)
    if kernel.length != constraints.length:
        raise InvalidArgumentError("kernel and constraint set disagree on the window length")
    if theta.shape != (constraints.n_free,):
        raise InvalidArgumentError(
            f"expected {constraints.n_free} free angles, got shape {theta.shape}"
        )
    if theta.size and not (np.all(theta > 0.0) and np.all(theta < 0.5 * math.pi)):
        raise InvalidArgumentError("angles must lie strictly inside (0, pi/2)")
    return _objective_and_gradient(theta, kernel.matrix(), constraints)


def _objective_and_gradient(theta, K, constraints):
    L, T = constraints.length, constraints.overlap
    th = _expand(theta, constraints)
    w = angles_to_window(theta, constraints)
    Kw = K @ w
    obj = float(w @ Kw)
    gw = 2.0 * Kw
    g_full = gw[:T] * np.cos(th) - gw[L - T:] * np.sin(th)
    return obj, _fold(g_full, constraints)


def _ascend(theta0, K, constraints, opts, callback=None):
    lo, hi = BOX_MARGIN, 0.5 * math.pi - BOX_MARGIN
    theta = np.clip(theta0, lo, hi)
    f, g = _objective_and_gradient(theta, K, constraints)
    history = [f]
    n = theta.size
    if n == 0:
        return theta, SolveTrace(0, f, 0.0, True, history)
    bfgs = opts.method == "bfgs"
    H = np.eye(n)
    fresh = True
    gnorm = float(np.abs(g).max())
    converged = gnorm <= opts.grad_tol
    it = 0
    while not converged and it < opts.max_iters:
        it += 1
        d = H @ g if bfgs else g
        if float(g @ d) <= 0.0:
            H, d, fresh = np.eye(n), g, True
        # a fresh BFGS model has no curvature scale: cap the first move at ~0.1 rad
        step = step0 = min(1.0, 0.1 / gnorm) if bfgs and fresh else 1.0
        while True:
            trial = np.clip(theta + step * d, lo, hi)
            f_new, g_new = _objective_and_gradient(trial, K, constraints)
            if f_new >= f and f_new >= f + 1e-4 * float(g @ (trial - theta)):
                break
            step *= 0.5
            if step < 1e-20:
                trial, f_new, g_new = theta, f, g
                break
        s = trial - theta
        y = g_new - g
        rel_change = abs(f_new - f) / max(abs(f_new), 1e-300)
        theta, f, g = trial, f_new, g_new
        history.append(f)
        if callback is not None:
            callback(it, angles_to_window(theta, constraints), f)
        gnorm = float(np.abs(g).max())
        if bfgs:
            # ascent on f is descent on -f, whose curvature pair is (s, -y)
            sy = float(s @ y)
            if sy < -1e-14 * np.linalg.norm(s) * np.linalg.norm(y):
                rho = -1.0 / sy
                V = np.eye(n) + rho * np.outer(s, y)
                H = V @ H @ V.T + rho * np.outer(s, s)
                fresh = False
        # a backtracked step says nothing about closeness to the optimum
        if gnorm <= opts.grad_tol or (step == step0 and rel_change <= opts.obj_tol):
            converged = True
        elif not np.any(s) and bfgs and not fresh:
            H, fresh = np.eye(n), True
        elif not np.any(s):
            # no representable increase along an ascent direction: the
            # objective change is zero, which meets obj_tol
            converged = True
    return theta, SolveTrace(it, f, gnorm, converged, history)


def _solve(constraints, kernel, opts, label, callback=None):
    K = kernel.matrix()
    theta0 = initial_angles(constraints)
    rng = np.random.default_rng(opts.seed)
    best = None
    for start in range(opts.multistart):
        init = theta0.copy()
        if start:
            init = init + opts.perturbation * rng.standard_normal(init.size)
        theta, trace = _ascend(init, K, constraints, opts, callback)
        log.debug("start %d: objective %.15g in %d iterations", start, trace.final_objective, trace.iterations)
        if best is None or trace.final_objective > best[1].final_objective:
            best = (theta, trace)
    theta, trace = best
    trace.starts = opts.multistart
    w = angles_to_window(theta, constraints)
    return Window(w, constraints.overlap, label), trace


def design_ola_dpss(L, alpha, opts=None, callback=None):
    """Maximum-concentration window satisfying the Princen-Bradley condition.

    Starts from the half-sine and ascends ``w^T T w`` over the pair angles,
    so the result is at least as concentrated as the half-sine.

    Parameters
    ----------
    L : int
        Even window length.
    alpha : float
        Kernel bandwidth, ``0 < alpha < L``.
    opts : SolveOptions, optional
    callback : callable, optional
        Called as ``callback(iteration, samples, objective)`` after each step.

    Returns
    -------
    window : Window
    trace : SolveTrace
        ``converged`` is False when ``max_iters`` ran out; the best iterate
        is still returned.
    """
    L = _check_even_length(L)
    return design_low_overlap(L, L // 2, alpha, opts, callback,
                              label=f"ola-dpss(L={L}, alpha={alpha:g})")


def design_low_overlap(L, T, alpha, opts=None, callback=None, label=None):
    """Maximum-concentration low-overlap window with overlap ``T``.

    Samples ``T+1..L-T`` are fixed to one and the overlap pairs satisfy the
    Princen-Bradley condition at offset ``L - T``. The start point is the
    half-sine of length ``2T`` extended by ones.
    """
    L = _check_even_length(L)
    if isinstance(T, bool) or not isinstance(T, (int, np.integer)) or not 1 <= T <= L // 2:
        raise InvalidArgumentError(f"overlap must be an integer in [1, L/2] = [1, {L // 2}], got {T!r}")
    opts = opts or SolveOptions()
    kernel = build_toeplitz(L, alpha)
    constraints = ConstraintSet(L, int(T), symmetric=opts.enforce_symmetry)
    if label is None:
        label = (f"ola-dpss(L={L}, alpha={alpha:g})" if 2 * T == L
                 else f"ola-dpss-low(L={L}, T={T}, alpha={alpha:g})")
    return _solve(constraints, kernel, opts, label, callback)

