"""Low-overlap windows for low-delay coding.

Limiting the overlap to T < L/2 samples forces a flat top of ones between
the two tapers. The conventional choice is a length-2T window with ones
spliced in; the design instead optimises the two tapers for concentration
over the full length.
"""
from ola_windows import build_toeplitz, concentration_ratio, design_low_overlap, flat_extend, half_sine, kbd

L, T, alpha = 256, 64, 5.0
kernel = build_toeplitz(L, alpha)
w, trace = design_low_overlap(L, T, alpha)
candidates = [flat_extend(half_sine(2 * T), L), flat_extend(kbd(2 * T, 4.25), L), w]
for v in candidates:
    print(f"{v.label:34s} {concentration_ratio(v, kernel).tau_db_normalized:.4f} dB")
print("flat top untouched:", bool((w.samples[T:L - T] == 1).all()), "| hop =", w.hop)
