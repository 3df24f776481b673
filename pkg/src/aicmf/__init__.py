"""Memory and multifractality of average instantaneous cross-correlations.

Price panels become normalized log-returns, then the pair-averaged
instantaneous cross-correlation (AIC) series, which is characterised with
DFA / MF-DFA, power-law and crossover fits, and the Legendre spectrum.
"""

__version__ = "0.1.0"

from .errors import AicmfError, ConfigError, DataError, NumericalError
from .ingest import PricePanel, load_panel, write_panel
from .returns import ReturnPanel, log_returns, normalize, return_panel
from .xcorr import CorrelationSeries, aic_series, aic_values, ic_series
from .fluctuation import (
    FluctuationFunction,
    dfa,
    dyadic_scales,
    mfdfa,
    profile,
    scale_grid,
    window_fluctuations,
)
from .scaling import (
    CrossoverFit,
    PowerLawFit,
    classify_regime,
    crossover_fit,
    fit_crossover,
    fit_power_law,
    power_law_fit,
)
from .spectrum import (
    MultifractalSpectrum,
    from_hq,
    hq_curve,
    legendre,
    multifractal_spectrum,
    q_grid,
    spectrum_width,
    tau_of_q,
)
from .synth import (
    GeneratorSpec,
    binomial_cascade,
    cascade_analytic,
    fgn,
    synthetic_price_panel,
    white_noise,
)
