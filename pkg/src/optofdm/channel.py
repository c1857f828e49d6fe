"""Diffuse optical wireless channel models, convolution, and noise injection.

Channels are real nonnegative tapped delay lines h(t) = sum_n h_n d(t - n*dt).
Random diffuse realizations mix two classical room-reflection envelopes
(single ceiling bounce and multiple-reflection exponential decay) and are
scaled to unit energy so sweeps compare schemes at fixed received power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dsp
from .errors import ConfigError


def exp_decay_envelope(t, d: float):
    """Multiple-reflection power envelope (1/D) exp(-t/D) for t >= 0, else 0."""
    if d <= 0:
        raise ConfigError(f"rms delay spread must be positive, got {d}")
    t = np.asarray(t, dtype=float)
    out = np.where(t < 0.0, 0.0, np.exp(-np.maximum(t, 0.0) / d) / d)
    return float(out) if out.ndim == 0 else out


def ceiling_bounce_envelope(t, d: float):
    """Single ceiling-bounce envelope 6*a^6 / (t + a)^7 for t >= 0, else 0.

    The shape parameter a = 12 * sqrt(11/13) * D pins the RMS delay spread
    of the envelope to D.
    """
    if d <= 0:
        raise ConfigError(f"rms delay spread must be positive, got {d}")
    a = 12.0 * math.sqrt(11.0 / 13.0) * d
    t = np.asarray(t, dtype=float)
    out = np.where(t < 0.0, 0.0, 6.0 * a**6 / (np.maximum(t, 0.0) + a) ** 7)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ImpulseResponse:
    """Tapped delay line with uniform tap spacing (seconds).

    taps[n] is the real, nonnegative gain at delay n * tap_spacing.  For
    generated diffuse channels, ceiling_mask records which tap indices were
    drawn from the ceiling-bounce envelope (True) versus exponential decay.
    """

    taps: np.ndarray
    tap_spacing: float
    ceiling_mask: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float)
        if taps.ndim != 1 or taps.size == 0:
            raise ConfigError("taps must be a nonempty 1-D vector")
        if not np.all(np.isfinite(taps)) or np.any(taps < 0):
            raise ConfigError("taps must be finite and nonnegative")
        if not (self.tap_spacing > 0):
            raise ConfigError(f"tap spacing must be positive, got {self.tap_spacing}")
        object.__setattr__(self, "taps", taps)

    @property
    def tap_count(self) -> int:
        return self.taps.size

    @property
    def delays(self) -> np.ndarray:
        return np.arange(self.tap_count) * self.tap_spacing

    def energy(self) -> float:
        return float(np.sum(self.taps**2))

    def rms_delay_spread(self) -> float:
        """Energy-weighted RMS spread of the realized tap delays."""
        weights = self.taps**2
        total = weights.sum()
        if total == 0.0:
            return 0.0
        mean = float((weights * self.delays).sum() / total)
        return math.sqrt(float(((self.delays - mean) ** 2 * weights).sum() / total))


def identity_ir(tap_spacing: float) -> ImpulseResponse:
    """Single unit tap: the line-of-sight (distortionless) channel."""
    return ImpulseResponse(np.ones(1), tap_spacing)


def random_diffuse_ir(d: float, dtau: float, taps: int, rng: np.random.Generator) -> ImpulseResponse:
    """Draw one unit-energy diffuse channel realization.

    A uniformly random half of the tap positions takes its amplitude bound
    from the ceiling-bounce envelope and the other half from the exponential
    decay envelope; each gain is then uniform on [0, envelope(delay)] and the
    whole vector is scaled so sum(h^2) == 1.
    """
    if taps < 1:
        raise ConfigError(f"tap count must be >= 1, got {taps}")
    if dtau <= 0:
        raise ConfigError(f"tap spacing must be positive, got {dtau}")
    delays = np.arange(taps) * dtau
    while True:
        ceiling = np.zeros(taps, dtype=bool)
        ceiling[rng.permutation(taps)[: taps // 2]] = True
        bound = np.where(ceiling, ceiling_bounce_envelope(delays, d), exp_decay_envelope(delays, d))
        gains = rng.uniform(0.0, bound)
        norm = math.sqrt(float(np.sum(gains**2)))
        if norm > 0.0:  # an all-zero draw has probability zero; redraw if seen
            return ImpulseResponse(gains / norm, dtau, ceiling_mask=ceiling)


@dataclass
class NoiseSpec:
    """Additive white Gaussian electrical noise with per-sample variance.

    seed may be an integer, a SeedSequence, or an explicit Generator stream;
    it is wrapped by numpy.random.default_rng.
    """

    variance: float
    seed: object = None

    def __post_init__(self):
        if not (self.variance >= 0):
            raise ConfigError(f"noise variance must be >= 0, got {self.variance}")
        self.rng = np.random.default_rng(self.seed)


def apply_channel(x, h: ImpulseResponse, noise: NoiseSpec, sample_time: float | None = None) -> np.ndarray:
    """Convolve one sample stream with the tapped delay line and add noise.

    The linear convolution is truncated to len(x); in streaming use the tail
    lands in the next frame's cyclic-prefix region.  When sample_time is
    given it must match the tap spacing of h.
    """
    if sample_time is not None and not math.isclose(sample_time, h.tap_spacing, rel_tol=1e-9):
        raise ConfigError(f"sample spacing {sample_time} does not match tap spacing {h.tap_spacing}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ConfigError("input stream must be a nonempty 1-D vector")
    y = np.convolve(x, h.taps)[: x.size]
    if noise.variance > 0:
        y = y + noise.rng.normal(0.0, math.sqrt(noise.variance), size=y.shape)
    return y


def convolve_streams(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Row-wise linear convolution truncated to the stream length.

    x has shape (batch, length) and taps (batch, m): each stream is convolved
    with its own kernel, matching apply_channel row by row.
    """
    x = np.asarray(x, dtype=float)
    taps = np.asarray(taps, dtype=float)
    if x.ndim != 2 or taps.ndim != 2 or x.shape[0] != taps.shape[0]:
        raise ConfigError("expected matching (batch, length) and (batch, taps) arrays")
    length = x.shape[1]
    if taps.shape[1] > length:
        raise ConfigError("kernel is longer than the stream")
    out = np.zeros_like(x)
    for j in range(taps.shape[1]):
        out[:, j:] += taps[:, j : j + 1] * x[:, : length - j]
    return out


def channel_frequency_response(h: ImpulseResponse, n: int) -> np.ndarray:
    """N-point response H of the tapped delay line (zero-padded transform).

    With cp_len >= tap_count - 1 the per-subcarrier model Y_n = H_n X_n + Z_n
    is exact for CP-stripped frames.
    """
    if h.tap_count > n:
        raise ConfigError(f"channel with {h.tap_count} taps does not fit an N={n} response")
    padded = np.zeros(n, dtype=np.complex128)
    padded[: h.tap_count] = h.taps
    return dsp.fft(padded)


def format_channel_dump(h: ImpulseResponse, d: float, seed) -> str:
    """Plain-text tap table: one `index delay_ns amplitude` row per tap.

    The header records the generator parameters and the realized partition of
    tap indices between the two envelope models.
    """
    if h.ceiling_mask is not None:
        ceil_idx = ",".join(str(i) for i in np.flatnonzero(h.ceiling_mask)) or "-"
        exp_idx = ",".join(str(i) for i in np.flatnonzero(~h.ceiling_mask)) or "-"
    else:
        ceil_idx = exp_idx = "-"
    lines = [
        "# diffuse optical wireless channel realization",
        f"# rms_delay_spread_ns = {d * 1e9:.6g}",
        f"# tap_spacing_ns = {h.tap_spacing * 1e9:.6g}",
        f"# taps = {h.tap_count}",
        f"# seed = {seed}",
        f"# sum_h_squared = {h.energy():.12g}",
        f"# realized_rms_delay_ns = {h.rms_delay_spread() * 1e9:.6g}",
        f"# ceiling_bounce_taps = {ceil_idx}",
        f"# exp_decay_taps = {exp_idx}",
        "# index delay_ns amplitude",
    ]
    for i, (delay, amp) in enumerate(zip(h.delays, h.taps)):
        lines.append(f"{i} {delay * 1e9:.6g} {float(amp)!r}")
    return "\n".join(lines) + "\n"
