#!/usr/bin/env python3
"""Compare the schemes' transform budgets, from the static per-window
accounting down to counts observed during an actual sweep.

The receiver side is the interesting one: Flip-OFDM recombines its two
subframes before the transform and hence runs one FFT per window, while
ACO-OFDM must transform each of its two symbols — a fixed 2:1 ratio, i.e. the
Flip receiver saves half the transform work at equal payload reliability.
"""

import os

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from optofdm import modem, sim
from optofdm.modem import OfdmConfig

HERE = os.path.dirname(os.path.abspath(__file__))

print(modem.complexity_report(OfdmConfig(n=256, cp_len=65), frames=1000).as_text())

# the observed counters of a real (small) sweep tell the same story
result = sim.run_ber_sweep(
    sim.SweepConfig(
        ofdm=OfdmConfig(n=64, cp_len=0),
        snr_grid_db=(4.0,),
        channel_mode=sim.CHANNEL_LOS,
        min_bit_errors=100,
        max_bits=500_000,
        master_seed=4,
        batch_windows=256,
    )
)
aco, flip = result.counters["aco"], result.counters["flip"]
print("observed during a sweep over", aco.rx_windows, "windows:")
print(f"  aco : {aco.rx_transforms} RX transforms, {aco.tx_transforms} TX (all half-loaded)")
print(f"  flip: {flip.rx_transforms} RX transforms, {flip.tx_transforms} TX (full)")
print(f"  RX ratio = {aco.rx_transforms / flip.rx_transforms:g}:1")

sizes = np.array([64, 128, 256, 512, 1024, 2048])
unit = sizes * np.log2(sizes)

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))

width = 0.35
x = np.arange(len(sizes))
axes[0].bar(x - width / 2, 2 * unit / 1e3, width, label="ACO-OFDM RX (2 FFTs)")
axes[0].bar(x + width / 2, unit / 1e3, width, label="Flip-OFDM RX (1 FFT)")
axes[0].set_xticks(x, [str(s) for s in sizes])
axes[0].set_xlabel("transform size N")
axes[0].set_ylabel("butterfly ops per window (x1000)")
axes[0].set_title("Receiver transform cost per window")
axes[0].legend(fontsize=8)

reports = [modem.complexity_report(OfdmConfig(n=int(n), cp_len=0), frames=0) for n in sizes]
axes[1].plot(sizes, [r.rx_ratio for r in reports], marker="o", label="RX cost ratio ACO:Flip")
axes[1].plot(
    sizes,
    [r.tx_cost("aco", credit_half_zero=True) / r.tx_cost("flip") for r in reports],
    marker="s",
    label="TX ratio with half-zero credit",
)
axes[1].set_xscale("log", base=2)
axes[1].set_xlabel("transform size N")
axes[1].set_ylim(0.0, 2.5)
axes[1].set_title("Cost ratios are size-independent")
axes[1].legend(fontsize=8)

fig.tight_layout()
out = os.path.join(HERE, "04_complexity.png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
