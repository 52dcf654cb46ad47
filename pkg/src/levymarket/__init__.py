"""Model daily stock prices as 2D Levy flights and analyze the spectra
of the resulting return cross-correlation (Wishart) matrices.

The package covers the full chain: walk generation, trajectory geometry
and fractal-dimension fits, return normalization and epoch slicing,
Wishart spectra with their power-law tails, extreme-value statistics of
the largest eigenvalues, and a command-line pipeline that writes
plot-ready CSVs plus a machine-readable report.
"""

from .evt import (
    EvtFit,
    LambdaMaxCurve,
    LambdaMaxPoint,
    TwReference,
    frechet_cdf,
    gev_fit,
    gumbel_cdf,
    max_eigenvalue_samples,
    mean_lambda_max_curve,
    rescale_curve,
    rescale_to_tw,
    tracy_widom_goe_reference,
)
from .geometry import (
    ScalarFit,
    ScalingCurve,
    fit_fractal_dimension,
    gyration_radius,
    pair_stock_trajectory,
    pair_trajectories,
    rg_vs_length_curve,
)
from .ingest import CleaningPolicy, clean_panel, export, load_price_csv
from .panels import PricePanel
from .returns import (
    EpochMatrix,
    ReturnPanel,
    epoch_matrices,
    log_returns,
    normalize_cross_section,
)
from .rng import child_seed
from .spectra import (
    Spectrum,
    WishartMatrix,
    collect_element_samples,
    eigenvalues,
    mp_edge,
    nonzero_spectrum,
    shuffle_matrix,
    spectrum_of_epoch,
    wishart,
)
from .statfit import (
    Histogram,
    PsdEstimate,
    TailFit,
    TDistFit,
    fit_spectral_exponent,
    hill_tail_exponent,
    log_binned_histogram,
    periodogram,
    powerlaw_fit_ks,
    student_t_fit,
    tail_model_comparison,
)
from .walks import (
    SeriesKind,
    WalkConfig,
    WalkPath2D,
    derive_series,
    generate_ensemble,
    generate_gaussian_walk,
    generate_walk,
    sample_step,
)

__version__ = "0.1.0"
