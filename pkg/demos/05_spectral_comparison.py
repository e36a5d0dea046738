"""Spectral comparison and figure data.

Writes window shapes and magnitude responses as CSV files under
``figure_data/`` (run ``plot_figures.py`` afterwards to draw them) and
prints the side-lobe levels relative to the half-sine. The alphas of KBD and
OLA-DPSS are also recovered automatically by matching main-lobe widths.
"""
from pathlib import Path

from ola_windows import half_sine
from ola_windows.cli import compare_windows
from ola_windows.io import write_report
from ola_windows.spectrum import match_main_lobe_alpha

out = Path(__file__).with_name("figure_data")
out.mkdir(exist_ok=True)

setups = {
    "full": (["half-sine", "kbd:4.25", "ola-dpss:2.75"], 128, 2.75, None),
    "low": (["half-sine", "kbd:4.25", "ola-dpss-low:5"], 256, 5.0, 64),
}
for name, (specs, L, kernel_alpha, T) in setups.items():
    table, windows, spectra = compare_windows(specs, L, kernel_alpha, overlap=T)
    write_report(table, out / f"{name}_table.json")
    print(f"\n{name} overlap, L={L}")
    ref = table["windows"][0]["side_lobes_db"]
    for row, w, s in zip(table["windows"], windows, spectra):
        write_report(w, out / f"{name}_{row['family']}_window.csv", "csv")
        write_report(s, out / f"{name}_{row['family']}_spectrum.csv", "csv")
        rel = ", ".join(f"{a - b:+.2f}" for a, b in zip(row["side_lobes_db"], ref))
        print(f"  {row['label']:36s} null {row['main_lobe_width']:.5f}  side lobes vs half-sine: {rel}")

print("\nmain-lobe matched alpha against half_sine(128):")
for family in ("kbd", "ola-dpss"):
    print(f"  {family}: {match_main_lobe_alpha(half_sine(128), family):.3f}")
