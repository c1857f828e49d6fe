#!/usr/bin/env python3
"""Build one frame-pair window of each unipolar scheme from random bits and
show how both arrive at a nonnegative drive signal.

Flip-OFDM splits the bipolar frame into its positive part and its negated
negative part and sends them back to back; ACO-OFDM loads only odd bins, which
makes the frame antisymmetric, and simply clips at zero.  The plot also shows
the spectral fingerprint of ACO clipping: every data (odd) bin keeps exactly
half its amplitude while the distortion lands on the unused even bins.
"""

import os

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from optofdm import dsp, modem

HERE = os.path.dirname(os.path.abspath(__file__))
SEED = 20240815

N, CP = 64, 16
rng = np.random.default_rng(SEED)

flip_cfg = modem.OfdmConfig(n=N, cp_len=CP, scheme="flip")
aco_cfg = modem.OfdmConfig(n=N, cp_len=CP, scheme="aco")

flip_bits = rng.integers(0, 2, size=flip_cfg.bits_per_window, dtype=np.int8)
aco_bits = rng.integers(0, 2, size=aco_cfg.bits_per_window, dtype=np.int8)

flip_window = modem.flip_tx(flip_bits, flip_cfg)
aco_window = modem.aco_tx(aco_bits, aco_cfg)

print(f"window length         : {flip_cfg.window_len} samples for both schemes")
print(f"payload per window    : flip {flip_cfg.bits_per_window} bits, aco {aco_cfg.bits_per_window} bits")
print(f"min transmitted sample: flip {flip_window.min():.3g}, aco {aco_window.min():.3g}")

# the bipolar frame the flip window was cut from
bipolar = dsp.real_ifft(dsp.hermitian_frame(dsp.qam_modulate(flip_bits, 4), N))

# ACO clipping in the frequency domain: odd bins halve, even bins pick up the rest
sym = dsp.qam_modulate(aco_bits[: aco_cfg.bits_per_window // 2], 4)
x_aco = dsp.real_ifft(modem.aco_spectrum(sym, N))
spec_clipped = dsp.fft(np.maximum(x_aco, 0.0))
odd = np.arange(1, N // 2, 2)
halving_err = np.max(np.abs(spec_clipped[odd] - 0.5 * sym))
print(f"odd-bin halving error : {halving_err:.3g} (clipping is transparent to the data)")

fig, axes = plt.subplots(3, 1, figsize=(9, 9))

t = np.arange(flip_cfg.window_len)
axes[0].plot(t, flip_window, drawstyle="steps-mid", lw=0.9, label="flip window")
axes[0].plot(np.arange(CP, CP + N), bipolar, drawstyle="steps-mid", lw=0.9, alpha=0.6,
             label="underlying bipolar frame")
for edge, name in ((0, "CP+"), (CP, "x+"), (N + CP, "CP-"), (N + 2 * CP, "-x-")):
    axes[0].axvline(edge, color="k", lw=0.5, ls=":")
    axes[0].text(edge + 1, axes[0].get_ylim()[1] * 0.85, name, fontsize=8)
axes[0].set_title("Flip-OFDM: positive and negated-negative subframes, each with its own CP")
axes[0].legend(loc="lower right", fontsize=8)

axes[1].plot(t, aco_window, drawstyle="steps-mid", lw=0.9, color="tab:orange",
             label="aco window (clipped)")
axes[1].plot(np.arange(CP, CP + N), x_aco, drawstyle="steps-mid", lw=0.9, alpha=0.6,
             color="tab:green", label="antisymmetric frame before clipping")
axes[1].axhline(0.0, color="k", lw=0.5)
axes[1].set_title("ACO-OFDM: odd-bin loading makes the frame antisymmetric; clip at zero")
axes[1].legend(loc="lower right", fontsize=8)

bins = np.arange(N // 2)
axes[2].stem(bins, np.abs(dsp.fft(x_aco)[: N // 2]), linefmt="C2-", markerfmt="C2o",
             basefmt="k-", label="|spectrum| before clipping")
axes[2].stem(bins + 0.25, np.abs(spec_clipped[: N // 2]), linefmt="C1-", markerfmt="C1s",
             basefmt="k-", label="|spectrum| after clipping")
axes[2].set_xlabel("bin")
axes[2].set_title("Clipping halves the odd bins and dumps distortion onto unused even bins")
axes[2].legend(fontsize=8)

fig.tight_layout()
out = os.path.join(HERE, "01_waveforms.png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
