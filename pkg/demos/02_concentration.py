"""Energy concentration and the unconstrained Slepian window.

Concentration is the share of a window's spectral energy inside a band set
by alpha. It is a Rayleigh quotient against a Toeplitz sinc kernel, so its
maximiser is the kernel's dominant eigenvector (the order-zero DPSS). That
vector does not satisfy the overlap condition, which is the gap the
constrained design fills.
"""
import numpy as np

from ola_windows import build_toeplitz, concentration_ratio, dpss_unconstrained, half_sine, validate_princen_bradley

L, alpha = 128, 2.75
kernel = build_toeplitz(L, alpha)
dpss = dpss_unconstrained(L, alpha)
scaled = dpss.scaled(1 / dpss.samples.max())

for w in (half_sine(L), scaled):
    c = concentration_ratio(w, kernel)
    print(f"{w.label:32s} tau = {c.tau_linear:.6f}  ({c.tau_db_normalized:.4f} dB relative to pi*alpha)")

print("largest eigenvalue (numpy):", np.linalg.eigvalsh(kernel.matrix())[-1])
print("overlap residual of the DPSS:", validate_princen_bradley(scaled).max_abs)
