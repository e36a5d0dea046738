"""Overlap-add round trip and the shape of the resynthesis error.

Without modification the frames add back to the input to rounding error.
When noise is injected into one frame (as a quantiser would), the error
that reaches the output is shaped by the squared window.
"""
import numpy as np

from ola_windows import design_ola_dpss
from ola_windows.ola import overlap_add, segment, verify_reconstruction

L = 64
w, _ = design_ola_dpss(L, 2.75)
rng = np.random.Generator(np.random.PCG64(0))
x = rng.standard_normal(10 * L)
r = verify_reconstruction(x, w)
print(f"interior error {r.max_abs_error:.1e}, square-sum deviation {r.square_sum_deviation:.1e}")

clean = overlap_add(segment(x, w), w)
acc = np.zeros(L)
h = 4
for _ in range(2000):
    fs = segment(x, w)
    frames = fs.frames.copy()
    frames[h] += rng.standard_normal(L)
    acc += (overlap_add(fs.modified(frames), w) - clean)[h * fs.hop: h * fs.hop + L] ** 2
acc /= 2000
print("error energy / w^2 at a few positions:", np.round(acc[::8] / w.samples[::8] ** 2, 2))
