import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ola_windows import InvalidArgumentError, Window, design_low_overlap, design_ola_dpss, half_sine, rectangular
from ola_windows.ola import FrameSet, overlap_add, segment, square_sum, verify_reconstruction
from ola_windows.windows import validate_princen_bradley


def test_impulse_frames():
    w = half_sine(8)
    x = np.zeros(40)
    p = 13
    x[p] = 1.0
    fs = segment(x, w)
    for h, frame in enumerate(fs.frames):
        off = p - fs.hop * h
        if 0 <= off < 8:
            assert frame[off] == w.samples[off]
            assert np.count_nonzero(frame) == 1
        else:
            assert not np.any(frame)


def test_ones_signal_frames_equal_window():
    fs = segment(np.ones(20), half_sine(4))
    assert fs.hop == 2
    assert fs.n_frames == (20 - 4) // 2 + 1
    for frame in fs.frames:
        np.testing.assert_array_equal(frame, half_sine(4).samples)


def test_frame_energy_bounded():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(640)
    w = half_sine(64)
    fs = segment(x, w)
    for h, frame in enumerate(fs.frames):
        seg = x[fs.hop * h: fs.hop * h + 64]
        assert np.sum(frame ** 2) <= np.sum(seg ** 2) * np.max(w.samples ** 2) + 1e-12


def test_short_signal_rejected():
    with pytest.raises(InvalidArgumentError):
        segment(np.ones(15), half_sine(8))


def test_zero_frames_zero_output():
    w = half_sine(16)
    out = overlap_add(FrameSet(np.zeros((5, 16)), 8), w)
    assert out.size == 8 * 4 + 16 and not np.any(out)


def test_inconsistent_frames():
    with pytest.raises(InvalidArgumentError):
        overlap_add(FrameSet(np.zeros((3, 12)), 8), half_sine(16))
    with pytest.raises(InvalidArgumentError):
        overlap_add(FrameSet(np.zeros((3, 16)), 4), half_sine(16))


@pytest.mark.parametrize("L", [2, 8, 64, 130])
def test_half_sine_round_trip(L):
    x = np.random.default_rng(L).standard_normal(10 * L)
    r = verify_reconstruction(x, half_sine(L))
    assert r.max_abs_error <= 1e-12
    assert r.square_sum_deviation <= 1e-12


def test_rectangular_square_sum():
    r = verify_reconstruction(np.ones(64), rectangular(8, 4))
    assert r.square_sum_deviation == 1.0


def test_designed_windows_round_trip():
    x = np.random.default_rng(2).standard_normal(2560)
    r = verify_reconstruction(x, design_ola_dpss(128, 2.75)[0])
    assert r.max_abs_error <= 1e-10 and r.square_sum_deviation <= 1e-10
    w, _ = design_low_overlap(256, 64, 5.0)
    r = verify_reconstruction(x, w)
    assert r.max_abs_error <= 1e-12 and r.square_sum_deviation <= 1e-12


def test_interior_range_low_overlap():
    w, _ = design_low_overlap(32, 8, 2.0)
    x = np.ones(320)
    r = verify_reconstruction(x, w)
    n_frames = (320 - 32) // 24 + 1
    assert r.interior_range == (8, 24 * (n_frames - 1) + 32 - 8)


def test_error_bounded_by_pb_residual():
    rng = np.random.default_rng(9)
    for delta in (1e-3, 1e-6, 1e-9):
        s = half_sine(32).samples * (1 + delta * rng.uniform(-1, 1, 32))
        w = Window(s)
        x = rng.standard_normal(320)
        res = validate_princen_bradley(w).max_abs
        err = verify_reconstruction(x, w).max_abs_error
        assert err <= 32 * res * np.max(np.abs(x))


def test_error_energy_follows_squared_window():
    # unit-variance noise added to one frame before the second windowing
    w = design_ola_dpss(32, 2.75)[0]
    rng = np.random.default_rng(2024)
    h = 3
    acc = np.zeros(32)
    trials = 1000
    x = rng.standard_normal(320)
    clean = overlap_add(segment(x, w), w)
    for _ in range(trials):
        fs = segment(x, w)
        F = fs.frames.copy()
        F[h] += rng.standard_normal(32)
        err = overlap_add(fs.modified(F), w) - clean
        acc += err[fs.hop * h: fs.hop * h + 32] ** 2
    acc /= trials
    expected = w.samples ** 2
    assert np.sum(acc) == pytest.approx(np.sum(expected), rel=0.05)
    assert np.mean(np.abs(acc - expected) / expected) <= 0.05


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_overlap_add_linear(a, b, seed):
    rng = np.random.default_rng(seed)
    w = half_sine(16)
    F = FrameSet(rng.standard_normal((6, 16)), 8)
    G = FrameSet(rng.standard_normal((6, 16)), 8)
    lhs = overlap_add(FrameSet(a * F.frames + b * G.frames, 8), w)
    rhs = a * overlap_add(F, w) + b * overlap_add(G, w)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_square_sum_half_sine():
    ss = square_sum(6, half_sine(16))
    np.testing.assert_allclose(ss[8:-8], 1.0, atol=1e-15)
