"""Monte Carlo BER sweeps and comparison metrics for the unipolar schemes.

Sweeps are parameterized by the electrical SNR E[x_t^2]/sigma^2, with the
noise variance derived from the measured transmitted-signal power of each
scheme.  Randomness is addressed by (point index, batch index) substreams of
a single master seed, so results are reproducible and independent of how
batches would be scheduled across workers; both schemes reuse the same
channel realizations and unit-variance noise draws within a batch, which
sharpens the equivalence comparison without biasing either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from . import dsp
from .channel import convolve_streams, random_diffuse_ir
from .errors import ConfigError
from .modem import (
    SCHEME_ACO,
    SCHEME_FLIP,
    SCHEMES,
    FftOpCounter,
    OfdmConfig,
    receive,
    transmit,
)

CHANNEL_LOS = "los_awgn"
CHANNEL_DIFFUSED = "diffused"
CHANNEL_MODES = (CHANNEL_LOS, CHANNEL_DIFFUSED)

# spawn_key namespaces under the master seed
_KEY_CALIBRATION = 0
_KEY_BATCH = 1

_CALIBRATION_WINDOWS = 256


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Deterministic child stream addressed by a tuple of integers."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=tuple(key)))


def electrical_snr(signal, sigma2: float) -> float:
    """Mean-square signal power over noise variance; inf when sigma2 == 0."""
    signal = np.asarray(signal, dtype=float)
    if signal.size == 0:
        raise ConfigError("cannot measure the power of an empty signal")
    if sigma2 < 0:
        raise ConfigError(f"noise variance must be >= 0, got {sigma2}")
    power = float(np.mean(signal**2))
    return math.inf if sigma2 == 0 else power / sigma2


def noise_variance_for_snr(snr_db: float, signal_power: float) -> float:
    """Per-sample noise variance that realizes the requested electrical SNR."""
    if not (signal_power > 0):
        raise ConfigError(f"signal power must be positive, got {signal_power}")
    return signal_power / 10 ** (snr_db / 10.0)


def spectral_efficiency(scheme: str, m: int) -> float:
    """Net bits/s/Hz: both unipolar schemes land on log2(M)/4."""
    if scheme not in SCHEMES:
        raise ConfigError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if m < 4:
        raise ConfigError(f"constellation order must be >= 4, got {m}")
    return math.log2(m) / 4.0


def analytic_qpsk_ber(ebn0_linear):
    """Closed-form Gray-coded QPSK bit error rate Q(sqrt(2*Eb/N0))."""
    ebn0 = np.asarray(ebn0_linear, dtype=float)
    if np.any(ebn0 < 0):
        raise ConfigError("Eb/N0 must be >= 0")
    out = 0.5 * special.erfc(np.sqrt(ebn0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BerPoint:
    """One measured point of a BER curve."""

    snr_db: float
    bits: int
    bit_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else math.nan

    @property
    def stderr(self) -> float:
        """Binomial standard error sqrt(p*(1-p)/bits) of the BER estimate."""
        if not self.bits:
            return math.nan
        p = self.ber
        return math.sqrt(p * (1.0 - p) / self.bits)


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one BER sweep (modem, channel, stopping rule)."""

    ofdm: OfdmConfig
    snr_grid_db: tuple[float, ...]
    schemes: tuple[str, ...] = (SCHEME_ACO, SCHEME_FLIP)
    channel_mode: str = CHANNEL_DIFFUSED
    min_bit_errors: int = 300
    max_bits: int = 20_000_000
    master_seed: int = 0
    rms_delay_spread: float = 8e-9
    tap_spacing: float = 0.75e-9
    tap_count: int = 64
    batch_windows: int = 512

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if not self.snr_grid_db:
            raise ConfigError("the SNR grid must contain at least one point")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ConfigError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("schemes must not repeat")
        if self.channel_mode not in CHANNEL_MODES:
            raise ConfigError(f"channel mode must be one of {CHANNEL_MODES}, got {self.channel_mode!r}")
        if self.min_bit_errors < 1:
            raise ConfigError(f"min_bit_errors must be >= 1, got {self.min_bit_errors}")
        if self.batch_windows < 1:
            raise ConfigError(f"batch_windows must be >= 1, got {self.batch_windows}")
        if self.master_seed < 0:
            raise ConfigError(f"master seed must be >= 0, got {self.master_seed}")
        widest = max(replace(self.ofdm, scheme=s).bits_per_window for s in self.schemes)
        if self.max_bits < widest:
            raise ConfigError(f"max_bits must cover at least one window ({widest} bits)")
        if self.channel_mode == CHANNEL_DIFFUSED:
            if self.tap_count < 1:
                raise ConfigError(f"tap count must be >= 1, got {self.tap_count}")
            if self.ofdm.cp_len < self.tap_count - 1:
                raise ConfigError(
                    f"cyclic prefix {self.ofdm.cp_len} is shorter than the channel "
                    f"memory ({self.tap_count} taps need cp >= {self.tap_count - 1})"
                )
            if not math.isclose(self.tap_spacing, self.ofdm.sample_time, rel_tol=1e-9):
                raise ConfigError(
                    f"tap spacing {self.tap_spacing} must equal the sample time {self.ofdm.sample_time}"
                )
            if not (self.rms_delay_spread > 0):
                raise ConfigError(f"rms delay spread must be positive, got {self.rms_delay_spread}")


@dataclass(frozen=True)
class SweepResult:
    """Measured curves plus the transform counters accumulated on the way."""

    config: SweepConfig
    seed: int
    points: dict[str, tuple[BerPoint, ...]]
    counters: dict[str, FftOpCounter]


def _scheme_cfgs(cfg: SweepConfig) -> dict[str, OfdmConfig]:
    return {s: replace(cfg.ofdm, scheme=s) for s in cfg.schemes}


def calibrated_power(cfg: SweepConfig, scheme: str) -> float:
    """Measured mean-square transmitted sample power for one scheme.

    Uses a dedicated calibration substream so the estimate is independent of
    the sweep traffic and identical for every SNR point.
    """
    ofdm = replace(cfg.ofdm, scheme=scheme)
    rng = substream(cfg.master_seed, _KEY_CALIBRATION, cfg.schemes.index(scheme))
    bits = rng.integers(0, 2, size=(_CALIBRATION_WINDOWS, ofdm.bits_per_window), dtype=np.int8)
    tx = transmit(bits, ofdm)
    return float(np.mean(tx**2))


def run_ber_sweep(cfg: SweepConfig) -> SweepResult:
    """Measure BER for every (scheme, SNR point) of the sweep.

    Each point accumulates whole batches of frame-pair windows until every
    scheme has min_bit_errors or the per-scheme bit budget max_bits is
    exhausted, whichever comes first.
    """
    ofdm = _scheme_cfgs(cfg)
    counters = {s: FftOpCounter(cfg.ofdm.n) for s in cfg.schemes}
    nbits = {s: ofdm[s].bits_per_window for s in cfg.schemes}
    power = {s: calibrated_power(cfg, s) for s in cfg.schemes}
    window = cfg.ofdm.window_len
    n = cfg.ofdm.n
    diffused = cfg.channel_mode == CHANNEL_DIFFUSED
    flat_response = np.ones(n, dtype=np.complex128)
    points: dict[str, list[BerPoint]] = {s: [] for s in cfg.schemes}

    for pi, snr_db in enumerate(cfg.snr_grid_db):
        noise_std = {
            s: math.sqrt(noise_variance_for_snr(snr_db, power[s])) for s in cfg.schemes
        }
        errors = {s: 0 for s in cfg.schemes}
        bits_done = {s: 0 for s in cfg.schemes}
        batch = 0
        while True:
            if all(errors[s] >= cfg.min_bit_errors for s in cfg.schemes):
                break
            budget = min((cfg.max_bits - bits_done[s]) // nbits[s] for s in cfg.schemes)
            if budget < 1:
                break
            b = min(cfg.batch_windows, budget)

            seq = np.random.SeedSequence(cfg.master_seed, spawn_key=(_KEY_BATCH, pi, batch))
            children = seq.spawn(2 + len(cfg.schemes))
            rng_channel = np.random.default_rng(children[0])
            rng_noise = np.random.default_rng(children[1])
            rng_bits = {s: np.random.default_rng(children[2 + i]) for i, s in enumerate(cfg.schemes)}

            base_noise = rng_noise.standard_normal((b, window))
            if diffused:
                taps = np.stack(
                    [
                        random_diffuse_ir(cfg.rms_delay_spread, cfg.tap_spacing, cfg.tap_count, rng_channel).taps
                        for _ in range(b)
                    ]
                )
                padded = np.zeros((b, n), dtype=np.complex128)
                padded[:, : cfg.tap_count] = taps
                response = dsp.fft(padded)
            else:
                response = flat_response

            for s in cfg.schemes:
                bits = rng_bits[s].integers(0, 2, size=(b, nbits[s]), dtype=np.int8)
                tx = transmit(bits, ofdm[s], counters[s])
                y = convolve_streams(tx, taps) if diffused else tx
                if noise_std[s] > 0:
                    y = y + noise_std[s] * base_noise
                decided = receive(y, response, ofdm[s], counters[s])
                errors[s] += int(np.count_nonzero(decided != bits))
                bits_done[s] += bits.size
            batch += 1
        for s in cfg.schemes:
            points[s].append(BerPoint(snr_db=snr_db, bits=bits_done[s], bit_errors=errors[s]))

    return SweepResult(
        config=cfg,
        seed=cfg.master_seed,
        points={s: tuple(points[s]) for s in cfg.schemes},
        counters=counters,
    )


def bipolar_reference_ber(
    ebn0_db_grid,
    n: int = 256,
    m: int = 4,
    min_bit_errors: int = 300,
    max_bits: int = 5_000_000,
    seed: int = 0,
    batch_frames: int = 512,
) -> tuple[BerPoint, ...]:
    """Plain bipolar OFDM over AWGN, for calibrating against the QPSK curve.

    No clipping, no flipping, no cyclic prefix: data rides bins 1..N/2-1 of a
    Hermitian frame and the per-sample noise variance is chosen so each bin
    sees the requested Eb/N0.  Validation harness only.
    """
    cfg = OfdmConfig(n=n, cp_len=0, m=m)
    bits_per_frame = (n // 2 - 1) * dsp.bits_per_symbol(m)
    out = []
    for pi, ebn0_db in enumerate(ebn0_db_grid):
        ebn0 = 10 ** (ebn0_db / 10.0)
        # Unit-energy bins through an unscaled forward transform see complex
        # noise of variance sigma2*N, and Eb/N0 = 1 / (2*sigma2*N).
        std = math.sqrt(1.0 / (2.0 * ebn0 * n))
        errors = 0
        bits_done = 0
        batch = 0
        while errors < min_bit_errors and bits_done + bits_per_frame <= max_bits:
            b = min(batch_frames, (max_bits - bits_done) // bits_per_frame)
            rng = substream(seed, pi, batch)
            bits = rng.integers(0, 2, size=(b, bits_per_frame), dtype=np.int8)
            x = dsp.real_ifft(dsp.hermitian_frame(dsp.qam_modulate(bits, m), n))
            y = x + std * rng.standard_normal(x.shape)
            decided = dsp.qam_demodulate(dsp.fft(y)[..., 1 : n // 2], m)
            errors += int(np.count_nonzero(decided != bits))
            bits_done += bits.size
            batch += 1
        out.append(BerPoint(snr_db=float(ebn0_db), bits=bits_done, bit_errors=errors))
    return tuple(out)
