"""Physical-layer simulator for unipolar optical OFDM over diffuse IM/DD links.

The package models the two classical unipolar schemes -- asymmetrically
clipped (ACO) OFDM and Flip-OFDM -- end to end: Gray-coded QAM onto Hermitian
subcarrier frames, nonnegative time-domain framing, tapped-delay-line optical
channels with AWGN, one-tap zero-forcing recovery, and Monte Carlo BER sweeps
that expose the rate/complexity trade between the schemes.
"""

from .channel import (
    ImpulseResponse,
    NoiseSpec,
    apply_channel,
    ceiling_bounce_envelope,
    channel_frequency_response,
    convolve_streams,
    exp_decay_envelope,
    format_channel_dump,
    identity_ir,
    random_diffuse_ir,
)
from .dsp import (
    constellation,
    extract_data,
    fft,
    hermitian_frame,
    ifft,
    qam_demodulate,
    qam_modulate,
    real_ifft,
)
from .errors import ConfigError, EqualizationError, FramingError
from .modem import (
    SCHEME_ACO,
    SCHEME_FLIP,
    SCHEMES,
    ComplexityReport,
    FftOpCounter,
    OfdmConfig,
    aco_rx,
    aco_spectrum,
    aco_tx,
    complexity_report,
    flip_rx,
    flip_tx,
    split_polarity,
)
from .sim import (
    CHANNEL_DIFFUSED,
    CHANNEL_LOS,
    CHANNEL_MODES,
    BerPoint,
    SweepConfig,
    SweepResult,
    analytic_qpsk_ber,
    bipolar_reference_ber,
    electrical_snr,
    noise_variance_for_snr,
    run_ber_sweep,
    spectral_efficiency,
    substream,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # dsp
    "fft", "ifft", "real_ifft", "constellation", "qam_modulate", "qam_demodulate",
    "hermitian_frame", "extract_data",
    # channel
    "ImpulseResponse", "NoiseSpec", "identity_ir", "random_diffuse_ir",
    "exp_decay_envelope", "ceiling_bounce_envelope", "apply_channel",
    "convolve_streams", "channel_frequency_response", "format_channel_dump",
    # modem
    "OfdmConfig", "FftOpCounter", "ComplexityReport", "complexity_report",
    "split_polarity", "flip_tx", "flip_rx", "aco_tx", "aco_rx", "aco_spectrum",
    "SCHEME_ACO", "SCHEME_FLIP", "SCHEMES",
    # sim
    "SweepConfig", "SweepResult", "BerPoint", "run_ber_sweep",
    "bipolar_reference_ber", "electrical_snr", "noise_variance_for_snr",
    "spectral_efficiency", "analytic_qpsk_ber", "substream",
    "CHANNEL_LOS", "CHANNEL_DIFFUSED", "CHANNEL_MODES",
    # errors
    "ConfigError", "FramingError", "EqualizationError",
]
