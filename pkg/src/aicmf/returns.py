"""Log-returns over a trading-day interval and their standardization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericalError
from .ingest import PricePanel


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """Raw and normalized log-returns for one return interval.

    Attributes
    ----------
    interval : int
        Return horizon in trading days.
    stride : int
        Step in trading days between consecutive return start points.
    symbols : tuple of str
    returns : ndarray, shape (n_times, n_symbols)
        Raw log-returns.
    normalized : ndarray, shape (n_times, n_symbols)
        Per-column zero-mean, unit population standard deviation returns.
    """

    interval: int
    stride: int
    symbols: tuple
    returns: np.ndarray
    normalized: np.ndarray

    @property
    def n_times(self) -> int:
        return self.normalized.shape[0]

    def index_of(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise DataError(f"unknown symbol {symbol!r}") from None


def n_return_steps(n_dates: int, interval: int, stride: int) -> int:
    return (n_dates - interval - 1) // stride + 1


def log_returns(prices: np.ndarray, interval: int = 1, stride: int = 1) -> np.ndarray:
    """Log-returns ``ln y(t0 + k*stride + interval) - ln y(t0 + k*stride)``.

    ``prices`` may be 1-D (one series) or 2-D with time along axis 0.
    """
    prices = np.asarray(prices, dtype=float)
    n = prices.shape[0]
    if int(interval) != interval or interval < 1:
        raise ConfigError(f"interval must be a positive integer, got {interval!r}")
    if int(stride) != stride or stride < 1:
        raise ConfigError(f"stride must be a positive integer, got {stride!r}")
    if interval >= n:
        raise ConfigError(f"interval {interval} must be smaller than the number of dates ({n})")
    logp = np.log(prices)
    starts = np.arange(0, n - interval, stride)
    return logp[starts + interval] - logp[starts]


def normalize(raw: np.ndarray, symbols=None) -> np.ndarray:
    """Standardize each column to zero mean and unit population std.

    Raises
    ------
    NumericalError
        If any column has zero variance; the message names the column.
    """
    raw = np.asarray(raw, dtype=float)
    one_d = raw.ndim == 1
    x = raw[:, None] if one_d else raw
    mean = x.mean(axis=0)
    centered = x - mean
    sigma = np.sqrt(np.mean(centered**2, axis=0))
    # Relative test: a constant column can leave round-off of order eps * |mean|.
    scale = np.maximum(np.abs(mean), np.max(np.abs(x), axis=0, initial=0.0))
    bad = np.flatnonzero(sigma <= 1e-14 * np.maximum(scale, 1e-300))
    if bad.size:
        names = symbols if symbols is not None else [f"column {i}" for i in range(x.shape[1])]
        raise NumericalError(
            "zero variance in return series of " + ", ".join(str(names[i]) for i in bad)
        )
    out = centered / sigma
    return out[:, 0] if one_d else out


def return_panel(panel: PricePanel, interval: int = 1, stride: int = 1) -> ReturnPanel:
    """Build a :class:`ReturnPanel` from a price panel."""
    raw = log_returns(panel.prices, interval, stride)
    normed = normalize(raw, panel.symbols)
    raw.setflags(write=False)
    normed.setflags(write=False)
    return ReturnPanel(int(interval), int(stride), panel.symbols, raw, normed)
