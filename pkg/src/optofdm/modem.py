"""ACO-OFDM and Flip-OFDM transmitter/receiver chains (uncompressed framing).

Both schemes emit nonnegative intensity samples in frame-pair windows of
2*(N + cp_len) samples, which makes their data rate and transform budgets
directly comparable:

* Flip-OFDM fills bins 1..N/2-1 Hermitian-symmetrically, then sends the
  positive part of the real frame in subframe 1 and the negated negative
  part in subframe 2.  Each subframe carries its own cyclic prefix.
* ACO-OFDM loads QAM symbols on the odd bins only, clips negative samples
  (which exactly halves the odd-bin amplitudes), and sends two independent
  symbols per window so both schemes deliver one payload per window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dsp
from .errors import ConfigError, EqualizationError, FramingError

SCHEME_ACO = "aco"
SCHEME_FLIP = "flip"
SCHEMES = (SCHEME_ACO, SCHEME_FLIP)


@dataclass(frozen=True)
class OfdmConfig:
    """Static modem parameters shared by TX and RX."""

    n: int
    cp_len: int
    m: int = 4
    scheme: str = SCHEME_FLIP
    sample_time: float = 0.75e-9

    def __post_init__(self):
        if self.n < 8 or (self.n & (self.n - 1)):
            raise ConfigError(f"N must be a power of two >= 8, got {self.n}")
        if not 0 <= self.cp_len < self.n:
            raise ConfigError(f"cp_len must satisfy 0 <= cp < N, got {self.cp_len}")
        dsp.constellation(self.m)
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not (self.sample_time > 0):
            raise ConfigError(f"sample time must be positive, got {self.sample_time}")

    @property
    def window_len(self) -> int:
        """Samples per frame-pair window."""
        return 2 * (self.n + self.cp_len)

    @property
    def data_symbols_per_window(self) -> int:
        if self.scheme == SCHEME_FLIP:
            return self.n // 2 - 1
        return 2 * (self.n // 4)

    @property
    def bits_per_window(self) -> int:
        return self.data_symbols_per_window * dsp.bits_per_symbol(self.m)


def bits_per_window(cfg: OfdmConfig) -> int:
    return cfg.bits_per_window


@dataclass
class FftOpCounter:
    """Transform counts on the common per-window accounting basis.

    A window is 2*(N + cp_len) samples for either scheme; half_loaded_tx
    tracks how many of the TX transforms had half their inputs pinned to
    zero (the ACO case) so the report can credit that optimization.
    """

    size: int
    tx_transforms: int = 0
    rx_transforms: int = 0
    half_loaded_tx: int = 0
    tx_windows: int = 0
    rx_windows: int = 0

    def merge(self, other: "FftOpCounter") -> "FftOpCounter":
        if other.size != self.size:
            raise ConfigError(f"cannot merge counters for N={self.size} and N={other.size}")
        self.tx_transforms += other.tx_transforms
        self.rx_transforms += other.rx_transforms
        self.half_loaded_tx += other.half_loaded_tx
        self.tx_windows += other.tx_windows
        self.rx_windows += other.rx_windows
        return self

    def _unit(self) -> float:
        return self.size * math.log2(self.size)

    def tx_cost(self, credit_half_zero: bool = False) -> float:
        """Weighted TX cost in N*log2(N) butterfly units."""
        full = self.tx_transforms - self.half_loaded_tx
        per_half = 0.5 * self._unit() if credit_half_zero else self._unit()
        return full * self._unit() + self.half_loaded_tx * per_half

    def rx_cost(self) -> float:
        return self.rx_transforms * self._unit()


def _windows(bits: np.ndarray) -> int:
    return int(np.prod(bits.shape[:-1], dtype=np.int64)) if bits.ndim > 1 else 1


def _with_cp(frame: np.ndarray, cp_len: int) -> np.ndarray:
    n = frame.shape[-1]
    return np.concatenate((frame[..., n - cp_len :], frame), axis=-1)


def split_polarity(x) -> tuple[np.ndarray, np.ndarray]:
    """Split a real signal into (positive part, negative part); x == pos + neg."""
    x = np.asarray(x, dtype=float)
    pos = np.where(x >= 0.0, x, 0.0)
    neg = np.where(x < 0.0, x, 0.0)
    return pos, neg


def flip_tx(bits, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    """Flip-OFDM window: [CP+ | x+ | CP- | -x-], one IFFT per window.

    Each cyclic prefix copies the last cp_len samples of its own subframe.
    """
    bits = np.asarray(bits)
    expected = (cfg.n // 2 - 1) * dsp.bits_per_symbol(cfg.m)
    if bits.shape[-1] != expected:
        raise FramingError(f"flip window needs {expected} bits, got {bits.shape[-1]}")
    x = dsp.real_ifft(dsp.hermitian_frame(dsp.qam_modulate(bits, cfg.m), cfg.n))
    pos, neg = split_polarity(x)
    # -neg turns the zero-filled samples into IEEE -0.0; + 0.0 normalizes them
    out = np.concatenate((_with_cp(pos, cfg.cp_len), _with_cp(-neg + 0.0, cfg.cp_len)), axis=-1)
    if counter is not None:
        w = _windows(bits)
        counter.tx_transforms += w
        counter.tx_windows += w
    return out


def flip_rx(y, channel_response, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    """Recombine the two subframes (y+ - y-), transform once, equalize, demap."""
    y = np.asarray(y, dtype=float)
    n, cp = cfg.n, cfg.cp_len
    if y.shape[-1] != cfg.window_len:
        raise FramingError(f"flip window must be {cfg.window_len} samples, got {y.shape[-1]}")
    sub_pos = y[..., cp : cp + n]
    sub_neg = y[..., 2 * cp + n :]
    spectrum = dsp.fft(sub_pos - sub_neg)
    data = spectrum[..., 1 : n // 2]
    resp = np.asarray(channel_response, dtype=np.complex128)[..., 1 : n // 2]
    if np.any(resp == 0):
        raise EqualizationError("channel response is exactly zero on a data bin")
    bits = dsp.qam_demodulate(data / resp, cfg.m)
    if counter is not None:
        w = _windows(bits)
        counter.rx_transforms += w
        counter.rx_windows += w
    return bits


def aco_spectrum(symbols, n: int) -> np.ndarray:
    """Hermitian spectrum with QAM symbols on the odd bins 1, 3, ..., N/2-1."""
    if n < 8 or (n & (n - 1)):
        raise ConfigError(f"N must be a power of two >= 8, got {n}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    odd = np.arange(1, n // 2, 2)
    if symbols.shape[-1] != odd.size:
        raise FramingError(f"expected {odd.size} symbols for N={n}, got {symbols.shape[-1]}")
    spectrum = np.zeros(symbols.shape[:-1] + (n,), dtype=np.complex128)
    spectrum[..., odd] = symbols
    spectrum[..., n - odd] = np.conj(symbols)
    return spectrum


def aco_tx(bits, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    """ACO-OFDM window: two independently loaded, clipped symbols with CPs.

    Clipping the antisymmetric time signal at zero halves the odd-bin
    amplitudes exactly; the receiver undoes the factor 2.
    """
    bits = np.asarray(bits)
    per_symbol = (cfg.n // 4) * dsp.bits_per_symbol(cfg.m)
    if bits.shape[-1] != 2 * per_symbol:
        raise FramingError(f"aco window needs {2 * per_symbol} bits, got {bits.shape[-1]}")
    pair = bits.reshape(bits.shape[:-1] + (2, per_symbol))
    x = dsp.real_ifft(aco_spectrum(dsp.qam_modulate(pair, cfg.m), cfg.n))
    framed = _with_cp(np.maximum(x, 0.0), cfg.cp_len)
    out = framed.reshape(bits.shape[:-1] + (cfg.window_len,))
    if counter is not None:
        w = _windows(bits)
        counter.tx_transforms += 2 * w
        counter.half_loaded_tx += 2 * w
        counter.tx_windows += w
    return out


def aco_rx(y, channel_response, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    """Per symbol: strip CP, transform, double the odd bins, equalize, demap."""
    y = np.asarray(y, dtype=float)
    n, cp = cfg.n, cfg.cp_len
    if y.shape[-1] != cfg.window_len:
        raise FramingError(f"aco window must be {cfg.window_len} samples, got {y.shape[-1]}")
    symbols = y.reshape(y.shape[:-1] + (2, n + cp))[..., cp:]
    spectrum = dsp.fft(symbols)
    odd = np.arange(1, n // 2, 2)
    data = 2.0 * spectrum[..., odd]
    resp = np.asarray(channel_response, dtype=np.complex128)[..., odd]
    if np.any(resp == 0):
        raise EqualizationError("channel response is exactly zero on a data bin")
    if resp.ndim > 1:
        resp = resp[..., None, :]
    bits = dsp.qam_demodulate(data / resp, cfg.m)
    out = bits.reshape(y.shape[:-1] + (-1,))
    if counter is not None:
        w = _windows(out)
        counter.rx_transforms += 2 * w
        counter.rx_windows += w
    return out


def transmit(bits, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    tx = aco_tx if cfg.scheme == SCHEME_ACO else flip_tx
    return tx(bits, cfg, counter)


def receive(y, channel_response, cfg: OfdmConfig, counter: FftOpCounter | None = None) -> np.ndarray:
    rx = aco_rx if cfg.scheme == SCHEME_ACO else flip_rx
    return rx(y, channel_response, cfg, counter)


@dataclass(frozen=True)
class ComplexityReport:
    """Per-window transform budgets for both schemes at a common N."""

    n: int
    frames: int

    @property
    def unit(self) -> float:
        """One full transform in butterfly units, N*log2(N)."""
        return self.n * math.log2(self.n)

    # per frame-pair window
    flip_tx_transforms: int = 1
    flip_rx_transforms: int = 1
    aco_tx_transforms: int = 2
    aco_rx_transforms: int = 2

    def tx_cost(self, scheme: str, credit_half_zero: bool = False) -> float:
        if scheme == SCHEME_FLIP:
            return self.unit
        return self.unit if credit_half_zero else 2 * self.unit

    def rx_cost(self, scheme: str) -> float:
        return self.unit if scheme == SCHEME_FLIP else 2 * self.unit

    @property
    def rx_ratio(self) -> float:
        """ACO : Flip receiver transform ratio."""
        return self.aco_rx_transforms / self.flip_rx_transforms

    @property
    def rx_savings_percent(self) -> float:
        return 100.0 * (1.0 - self.rx_cost(SCHEME_FLIP) / self.rx_cost(SCHEME_ACO))

    def as_text(self) -> str:
        unit = self.unit
        lines = [
            f"FFT/IFFT budget per frame-pair window, N={self.n} "
            f"(1 unit = N*log2(N) = {unit:g} butterfly ops)",
            f"{'':28s}{'ACO-OFDM':>14s}{'Flip-OFDM':>14s}",
            f"{'TX transforms/window':28s}{'2 half-loaded':>14s}{'1 full':>14s}",
            f"{'TX cost, unoptimized':28s}{self.tx_cost(SCHEME_ACO) / unit:>13.2f}u"
            f"{self.tx_cost(SCHEME_FLIP) / unit:>13.2f}u",
            f"{'TX cost, half-zero credit':28s}{self.tx_cost(SCHEME_ACO, True) / unit:>13.2f}u"
            f"{self.tx_cost(SCHEME_FLIP, True) / unit:>13.2f}u",
            f"{'RX transforms/window':28s}{self.aco_rx_transforms:>14d}{self.flip_rx_transforms:>14d}",
            f"{'RX cost':28s}{self.rx_cost(SCHEME_ACO) / unit:>13.2f}u"
            f"{self.rx_cost(SCHEME_FLIP) / unit:>13.2f}u",
            f"RX transform ratio ACO:Flip = {self.rx_ratio:g}:1",
            f"Flip-OFDM receiver saves {self.rx_savings_percent:.0f}% of the ACO-OFDM RX transforms",
        ]
        if self.frames > 0:
            lines.append(
                f"Totals over {self.frames} windows: "
                f"ACO RX {self.aco_rx_transforms * self.frames} transforms "
                f"({self.rx_cost(SCHEME_ACO) * self.frames / unit:g}u), "
                f"Flip RX {self.flip_rx_transforms * self.frames} transforms "
                f"({self.rx_cost(SCHEME_FLIP) * self.frames / unit:g}u)"
            )
        else:
            lines.append("Totals: no windows processed")
        return "\n".join(lines) + "\n"


def complexity_report(cfg: OfdmConfig, frames: int) -> ComplexityReport:
    """Transform-count comparison for both schemes over `frames` windows."""
    if frames < 0:
        raise ConfigError(f"frame count must be >= 0, got {frames}")
    return ComplexityReport(n=cfg.n, frames=frames)
