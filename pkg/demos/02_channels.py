#!/usr/bin/env python3
"""Draw a few random diffuse-room channel realizations and their statistics.

Each realization assigns half the tap positions (chosen at random) an
amplitude bound from the single ceiling-bounce envelope and the other half
from the multiple-reflection exponential-decay envelope, draws each tap
uniformly under its bound, and normalizes to unit energy.  The per-bin
frequency response of such a channel is what the zero-forcing equalizer
divides by.
"""

import os

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from optofdm import channel

HERE = os.path.dirname(os.path.abspath(__file__))
SEED = 7

D = 8e-9          # RMS delay spread, 8 ns
DTAU = 0.75e-9    # tap spacing == sample time
TAPS = 64
N = 256

rng = np.random.default_rng(SEED)
t = np.linspace(0.0, TAPS * DTAU, 600)

fig, axes = plt.subplots(2, 2, figsize=(11, 7))

axes[0, 0].plot(t * 1e9, channel.exp_decay_envelope(t, D), label="exponential decay")
axes[0, 0].plot(t * 1e9, channel.ceiling_bounce_envelope(t, D), label="ceiling bounce")
axes[0, 0].set_xlabel("delay (ns)")
axes[0, 0].set_title(f"Amplitude envelopes for D = {D * 1e9:.0f} ns")
axes[0, 0].legend(fontsize=8)

realizations = [channel.random_diffuse_ir(D, DTAU, TAPS, rng) for _ in range(3)]
for i, h in enumerate(realizations):
    markerline, stemlines, _ = axes[0, 1].stem(
        h.delays * 1e9 + i * 0.08, h.taps, linefmt=f"C{i}-", markerfmt=f"C{i}.", basefmt=" "
    )
    plt.setp(stemlines, linewidth=0.7)
    print(
        f"realization {i}: sum h^2 = {h.energy():.12f}, "
        f"realized RMS delay = {h.rms_delay_spread() * 1e9:.2f} ns, "
        f"{int(h.ceiling_mask.sum())}/{h.tap_count} ceiling-bounce taps"
    )
axes[0, 1].set_xlabel("delay (ns)")
axes[0, 1].set_title("Three unit-energy realizations (64 taps at 0.75 ns)")

for i, h in enumerate(realizations):
    resp = channel.channel_frequency_response(h, N)
    axes[1, 0].plot(20 * np.log10(np.abs(resp[: N // 2])), lw=0.9, label=f"realization {i}")
axes[1, 0].set_xlabel("bin")
axes[1, 0].set_ylabel("|H| (dB)")
axes[1, 0].set_title(f"Per-bin magnitude response ({N}-point)")
axes[1, 0].legend(fontsize=8)

# distribution of realized RMS delay spreads: random taps under the envelopes
# scatter around (not exactly at) the envelope parameter D
spreads = [
    channel.random_diffuse_ir(D, DTAU, TAPS, rng).rms_delay_spread() * 1e9 for _ in range(400)
]
axes[1, 1].hist(spreads, bins=30, color="tab:gray")
axes[1, 1].axvline(D * 1e9, color="tab:red", label="envelope parameter D")
axes[1, 1].set_xlabel("realized RMS delay spread (ns)")
axes[1, 1].set_title("Spread of 400 realizations")
axes[1, 1].legend(fontsize=8)

fig.tight_layout()
out = os.path.join(HERE, "02_channels.png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
