"""Baseline windows and the overlap condition they satisfy.

The half-sine and the Kaiser-Bessel-derived window both make the squared
window sum to one across the overlap, which is what lets overlap-add
resynthesis return the input untouched. A plain rectangle does not.
"""
import numpy as np

from ola_windows import half_sine, kbd, rectangular, validate_princen_bradley

L = 128
for w in (half_sine(L), kbd(L, 4.25), rectangular(L)):
    r = validate_princen_bradley(w)
    print(f"{w.label:28s} max |w[k]^2 + w[k+L/2]^2 - 1| = {r.max_abs:.2e}")

# Small alpha gives a square-root ramp, large alpha thin tails; the half-sine sits near alpha = 4.
for alpha in (0.5, 2.0, 4.25, 8.0):
    s = kbd(L, alpha).samples
    print(f"kbd alpha={alpha:<5} first sample {s[0]:.4f}, distance to half-sine {np.max(np.abs(s - half_sine(L).samples)):.4f}")
