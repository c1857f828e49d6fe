"""Complex DSP substrate: radix-2 FFT/IFFT, Gray-coded QAM, Hermitian framing.

Scaling convention: the forward transform is unscaled and the inverse carries
the 1/N factor, so sum|x[k]|^2 == sum|X[n]|^2 / N (Parseval).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, FramingError

# Largest imaginary residue tolerated (relative to frame RMS) when the inverse
# transform of a Hermitian spectrum is collapsed to a real time frame.
IMAG_RESIDUE_TOL = 1e-9

# Per-size cache of (bit-reversal permutation, per-stage twiddle factors).
_TABLES: dict[int, tuple[np.ndarray, list[np.ndarray]]] = {}

_CONSTELLATIONS: dict[int, np.ndarray] = {}


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _tables(n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    cached = _TABLES.get(n)
    if cached is not None:
        return cached
    stages = n.bit_length() - 1
    idx = np.arange(n, dtype=np.intp)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(stages):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    twiddles = [np.exp(-2j * np.pi * np.arange(1 << s) / (2 << s)) for s in range(stages)]
    _TABLES[n] = (rev, twiddles)
    return _TABLES[n]


def fft(x) -> np.ndarray:
    """DFT along the last axis: X[n] = sum_k x[k] exp(-2j pi n k / N), unscaled.

    Iterative radix-2 decimation in time with precomputed twiddles, so the
    length must be a power of two.  Leading axes are treated as a batch.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    if not _is_pow2(n):
        raise ConfigError(f"transform length must be a power of two, got {n}")
    rev, twiddles = _tables(n)
    out = x[..., rev]
    lead = out.shape[:-1]
    for w in twiddles:
        half = w.shape[0]
        out = out.reshape(lead + (n // (2 * half), 2 * half))
        even = out[..., :half]
        odd = out[..., half:] * w
        out = np.concatenate((even + odd, even - odd), axis=-1)
    return out.reshape(lead + (n,))


def ifft(x) -> np.ndarray:
    """Inverse DFT along the last axis: x[k] = (1/N) sum_n X[n] exp(2j pi n k / N)."""
    x = np.asarray(x, dtype=np.complex128)
    return np.conj(fft(np.conj(x))) / x.shape[-1]


def _gray_to_binary(gray: np.ndarray) -> np.ndarray:
    out = gray.copy()
    shift = gray >> 1
    while np.any(shift):
        out ^= shift
        shift >>= 1
    return out


def constellation(m: int = 4) -> np.ndarray:
    """Gray-coded square-QAM table with unit average energy.

    The table is indexed by the bit word read MSB-first; the first half of the
    bits selects the in-phase level and the second half the quadrature level.
    For QPSK, bits (b1, b0) map to ((1 - 2*b1) + 1j*(1 - 2*b0)) / sqrt(2).
    """
    cached = _CONSTELLATIONS.get(m)
    if cached is not None:
        return cached
    k = int(round(math.log2(m))) if m >= 2 else 0
    if m < 4 or 2**k != m or k % 2:
        raise ConfigError(f"constellation order must be a square power of two >= 4, got {m}")
    levels = 1 << (k // 2)
    words = np.arange(m)
    # Each axis word is a Gray codeword; decoding it and descending from
    # +(levels-1) keeps neighbouring amplitudes one bit flip apart.
    amp_i = (levels - 1) - 2 * _gray_to_binary(words >> (k // 2))
    amp_q = (levels - 1) - 2 * _gray_to_binary(words & (levels - 1))
    scale = math.sqrt(2.0 * (levels**2 - 1) / 3.0)
    table = (amp_i + 1j * amp_q) / scale
    table.setflags(write=False)
    _CONSTELLATIONS[m] = table
    return table


def bits_per_symbol(m: int = 4) -> int:
    constellation(m)
    return int(round(math.log2(m)))


def qam_modulate(bits, m: int = 4) -> np.ndarray:
    """Map bits (last axis, MSB-first groups of log2(M)) onto QAM symbols."""
    table = constellation(m)
    k = bits_per_symbol(m)
    bits = np.asarray(bits)
    if bits.shape[-1] % k:
        raise FramingError(f"bit count {bits.shape[-1]} is not a multiple of {k}")
    grouped = bits.reshape(bits.shape[:-1] + (-1, k)).astype(np.int64)
    weights = 1 << np.arange(k - 1, -1, -1)
    return table[grouped @ weights]


def qam_demodulate(symbols, m: int = 4) -> np.ndarray:
    """Hard minimum-distance decisions back to bits (always decides)."""
    table = constellation(m)
    k = bits_per_symbol(m)
    symbols = np.asarray(symbols, dtype=np.complex128)
    d2 = (symbols.real[..., None] - table.real) ** 2 + (symbols.imag[..., None] - table.imag) ** 2
    words = d2.argmin(axis=-1)
    shifts = np.arange(k - 1, -1, -1)
    bits = (words[..., None] >> shifts) & 1
    return bits.reshape(symbols.shape[:-1] + (-1,)).astype(np.int8)


def hermitian_frame(data, n: int) -> np.ndarray:
    """Place data on bins 1..N/2-1 with the conjugate mirror on bins N/2+1..N-1.

    Bins 0 and N/2 stay zero so the inverse transform is real-valued.
    """
    if not _is_pow2(n) or n < 4:
        raise ConfigError(f"frame length must be a power of two >= 4, got {n}")
    data = np.asarray(data, dtype=np.complex128)
    if data.shape[-1] != n // 2 - 1:
        raise FramingError(f"expected {n // 2 - 1} data symbols for N={n}, got {data.shape[-1]}")
    frame = np.zeros(data.shape[:-1] + (n,), dtype=np.complex128)
    frame[..., 1 : n // 2] = data
    frame[..., n // 2 + 1 :] = np.conj(data[..., ::-1])
    return frame


def extract_data(spectrum) -> np.ndarray:
    """Return the independent data bins 1..N/2-1 of a Hermitian spectrum."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    n = spectrum.shape[-1]
    if not _is_pow2(n) or n < 4:
        raise ConfigError(f"frame length must be a power of two >= 4, got {n}")
    return np.array(spectrum[..., 1 : n // 2])


def real_ifft(spectrum) -> np.ndarray:
    """Inverse transform of a Hermitian spectrum, collapsed to real samples.

    The imaginary residue is checked against IMAG_RESIDUE_TOL * frame RMS
    (per frame) before it is discarded.
    """
    x = ifft(spectrum)
    rms = np.sqrt(np.mean(x.real**2 + x.imag**2, axis=-1))
    residue = np.max(np.abs(x.imag), axis=-1)
    if np.any(residue > IMAG_RESIDUE_TOL * rms):
        raise FramingError("spectrum is not Hermitian: imaginary residue above tolerance")
    return x.real
