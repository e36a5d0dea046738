import math

import numpy as np
import pytest

from ola_windows import (
    ConstraintSet,
    InvalidArgumentError,
    SolveOptions,
    build_toeplitz,
    concentration_ratio,
    design_low_overlap,
    design_ola_dpss,
    flat_extend,
    half_sine,
    kbd,
    objective_and_gradient,
    validate_princen_bradley,
)
from ola_windows.optimizer import angles_to_window, initial_angles
from oracles import central_difference, grid_maximise

NO_SYM = SolveOptions(enforce_symmetry=False)


def test_l2_closed_form():
    for opts in (SolveOptions(), NO_SYM):
        w, trace = design_ola_dpss(2, 0.5, opts)
        np.testing.assert_allclose(w.samples, [math.sqrt(2) / 2] * 2, atol=1e-12)
        assert trace.converged


def test_l2_gradient_vanishes_at_optimum():
    k = build_toeplitz(2, 0.5)
    _, g = objective_and_gradient([math.pi / 4], k, ConstraintSet(2, 1))
    assert abs(g[0]) <= 1e-12


@pytest.mark.parametrize("L,T,alpha,sym", [
    (4, 2, 0.9, True),
    (4, 2, 0.9, False),
    (8, 4, 1.5, True),
    (8, 2, 1.5, True),
    (8, 2, 1.5, False),
])
def test_matches_grid_oracle(L, T, alpha, sym):
    obj_ref, w_ref = grid_maximise(L, T, alpha, sym)
    w, trace = design_low_overlap(L, T, alpha, SolveOptions(enforce_symmetry=sym))
    K = build_toeplitz(L, alpha).matrix()
    assert abs(w.samples @ K @ w.samples - obj_ref) <= 1e-6
    np.testing.assert_allclose(w.samples, w_ref, atol=1e-6)
    assert trace.converged


@pytest.mark.parametrize("L", [8, 32])
def test_gradient_against_central_differences(L):
    rng = np.random.default_rng(L)
    k = build_toeplitz(L, 2.0)
    for sym in (False, True):
        cs = ConstraintSet(L, L // 2, symmetric=sym)
        for _ in range(5):
            th = rng.uniform(0.1, math.pi / 2 - 0.1, cs.n_free)
            _, g = objective_and_gradient(th, k, cs)
            fd = central_difference(lambda t: objective_and_gradient(t, k, cs)[0], th)
            assert np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(fd)


def test_gradient_low_overlap():
    rng = np.random.default_rng(3)
    k = build_toeplitz(24, 3.0)
    cs = ConstraintSet(24, 5, symmetric=False)
    th = rng.uniform(0.1, 1.4, 5)
    _, g = objective_and_gradient(th, k, cs)
    fd = central_difference(lambda t: objective_and_gradient(t, k, cs)[0], th)
    assert np.linalg.norm(g - fd) <= 1e-5 * np.linalg.norm(fd)


@pytest.mark.parametrize("L,T", [(16, 8), (64, 32), (64, 16), (24, 5)])
def test_initial_angles_reproduce_half_sine(L, T):
    cs = ConstraintSet(L, T, symmetric=True)
    ref = half_sine(2 * T) if 2 * T == L else flat_extend(half_sine(2 * T), L)
    np.testing.assert_allclose(angles_to_window(initial_angles(cs), cs), ref.samples, atol=1e-15)
    k = build_toeplitz(L, 2.0)
    obj, _ = objective_and_gradient(initial_angles(cs), k, cs)
    K = k.matrix()
    assert obj == pytest.approx(ref.samples @ K @ ref.samples, rel=1e-12)


def test_objective_rejects_outside_box():
    k = build_toeplitz(4, 1.0)
    cs = ConstraintSet(4, 2)
    with pytest.raises(InvalidArgumentError):
        objective_and_gradient([0.0, 0.3], k, cs)
    with pytest.raises(InvalidArgumentError):
        objective_and_gradient([0.3], k, cs)


def test_constraint_set():
    cs = ConstraintSet(16, 4)
    assert cs.kind == "low-overlap"
    assert cs.pair_matrices()[0] == (0, 12)
    np.testing.assert_array_equal(cs.flat_indices(), np.arange(4, 12))
    assert ConstraintSet(16, 8).kind == "full-overlap"
    with pytest.raises(InvalidArgumentError):
        ConstraintSet(16, 9)


def test_low_overlap_rejects_large_T():
    with pytest.raises(InvalidArgumentError):
        design_low_overlap(16, 9, 1.0)


def test_full_overlap_special_case():
    a, _ = design_ola_dpss(64, 2.75)
    b, _ = design_low_overlap(64, 32, 2.75)
    np.testing.assert_allclose(a.samples, b.samples, atol=1e-10)


@pytest.mark.parametrize("L,alpha", [(32, 1.5), (128, 2.75), (256, 5.0)])
def test_design_properties(L, alpha):
    w, trace = design_ola_dpss(L, alpha)
    k = build_toeplitz(L, alpha)
    assert trace.converged
    assert validate_princen_bradley(w).max_abs <= 1e-12
    assert np.all(w.samples > 0) and np.all(w.samples <= 1)
    assert np.array_equal(w.samples, w.samples[::-1])
    assert concentration_ratio(w, k).tau_linear >= concentration_ratio(half_sine(L), k).tau_linear
    assert np.all(np.diff(trace.objective_history) >= 0)


def test_low_overlap_properties():
    w, trace = design_low_overlap(256, 64, 5.0)
    assert np.all(w.samples[64:192] == 1.0)
    assert validate_princen_bradley(w).max_abs <= 1e-12
    k = build_toeplitz(256, 5.0)
    start = flat_extend(half_sine(128), 256)
    assert concentration_ratio(w, k).tau_linear >= concentration_ratio(start, k).tau_linear


def test_every_iterate_feasible():
    seen = []

    def cb(it, samples, obj):
        seen.append(validate_princen_bradley_samples(samples, 64))

    design_ola_dpss(128, 2.75, SolveOptions(enforce_symmetry=False), callback=cb)
    assert seen and max(seen) <= 1e-12


def validate_princen_bradley_samples(s, T):
    return float(np.max(np.abs(s[:T] ** 2 + s[len(s) - T:] ** 2 - 1)))


def test_gradient_method_also_ascends():
    w_g, tr_g = design_ola_dpss(32, 1.5, SolveOptions(method="gradient"))
    w_b, _ = design_ola_dpss(32, 1.5)
    assert np.all(np.diff(tr_g.objective_history) >= 0)
    np.testing.assert_allclose(w_g.samples, w_b.samples, atol=1e-5)


def test_multistart_deterministic():
    opts = SolveOptions(multistart=4, seed=11)
    a, ta = design_ola_dpss(32, 2.75, opts)
    b, tb = design_ola_dpss(32, 2.75, opts)
    assert np.array_equal(a.samples, b.samples)
    assert ta.starts == 4


def test_max_iters_reports_nonconvergence():
    w, trace = design_ola_dpss(128, 2.75, SolveOptions(max_iters=2))
    assert not trace.converged and trace.iterations == 2
    assert validate_princen_bradley(w).max_abs <= 1e-12


def test_ola_dpss_beats_kbd_at_reference_config():
    k = build_toeplitz(128, 2.75)
    w, _ = design_ola_dpss(128, 2.75)
    assert concentration_ratio(w, k).tau_linear > concentration_ratio(kbd(128, 4.25), k).tau_linear


def test_solve_options_validation():
    with pytest.raises(InvalidArgumentError):
        SolveOptions(grad_tol=0)
    with pytest.raises(InvalidArgumentError):
        SolveOptions(max_iters=0)
    with pytest.raises(InvalidArgumentError):
        SolveOptions(method="newton")
