"""Draw the window and spectrum figures from ``figure_data/`` (needs matplotlib)."""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

data = Path(__file__).with_name("figure_data")
for name in ("full", "low"):
    fig, (ax_w, ax_s) = plt.subplots(1, 2, figsize=(10, 3.5))
    for path in sorted(data.glob(f"{name}_*_window.csv")):
        family = path.stem[len(name) + 1:-len("_window")]
        _, v = np.loadtxt(path, delimiter=",", skiprows=1, unpack=True)
        ax_w.plot(v, label=family)
        f, m = np.loadtxt(data / f"{name}_{family}_spectrum.csv", delimiter=",", skiprows=1, unpack=True)
        ax_s.plot(f, m, label=family)
    ax_w.set_xlabel("sample")
    ax_s.set(xlabel="cycles / sample", ylabel="dB", xlim=(0, 0.1), ylim=(-120, 3))
    ax_s.legend()
    fig.tight_layout()
    fig.savefig(data / f"{name}.png", dpi=120)
    print("wrote", data / f"{name}.png")
