"""Channel estimation for one-bit quantized multi-antenna receivers.

The package splits into a signal model (Rician channels, pilots, the
one-bit quantizer), a concave log-likelihood core with gradient descent
maximization, three estimators (two-stage search, exhaustive pseudo-ML,
trained linear baseline), and a Monte-Carlo harness with CSV output.
"""

from .counting import CountingRules, MultCounter
from .estimators import (
    ChannelEstimate,
    DoaGrid,
    EstimateDiagnostics,
    LmmseStatistics,
    arcsine_map,
    lmmse_estimate,
    mips_doa,
    mips_estimate,
    mips_fading,
    pml_estimate,
    sine_map,
    train_lmmse,
)
from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentResult,
    ResultRow,
    mse_channel,
    mse_doa,
    mse_fading,
    read_csv,
    run_experiment,
    write_csv,
)
from .likelihood import (
    GdmConfig,
    GdmDiagnostics,
    LikelihoodContext,
    NumericalError,
    build_context,
    log_likelihood,
    log_likelihood_gradient,
    log_norm_cdf,
    maximize_g,
    norm_pdf_over_cdf,
    zf_init,
)
from .signal_model import (
    ChannelRealization,
    PilotSequence,
    QuantizedObservation,
    SystemParams,
    complex_normal,
    dft_pilot,
    draw_channel,
    quantize,
    rician_weights,
    steering_vector,
    synthesize_observation,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelEstimate",
    "ChannelRealization",
    "CountingRules",
    "CSV_HEADER",
    "DoaGrid",
    "EstimateDiagnostics",
    "ExperimentConfig",
    "ExperimentResult",
    "GdmConfig",
    "GdmDiagnostics",
    "LikelihoodContext",
    "LmmseStatistics",
    "MultCounter",
    "NumericalError",
    "PilotSequence",
    "QuantizedObservation",
    "ResultRow",
    "SystemParams",
    "arcsine_map",
    "build_context",
    "complex_normal",
    "dft_pilot",
    "draw_channel",
    "lmmse_estimate",
    "log_likelihood",
    "log_likelihood_gradient",
    "log_norm_cdf",
    "maximize_g",
    "mips_doa",
    "mips_estimate",
    "mips_fading",
    "mse_channel",
    "mse_doa",
    "mse_fading",
    "norm_pdf_over_cdf",
    "pml_estimate",
    "quantize",
    "read_csv",
    "rician_weights",
    "run_experiment",
    "sine_map",
    "steering_vector",
    "synthesize_observation",
    "train_lmmse",
    "write_csv",
    "zf_init",
]
