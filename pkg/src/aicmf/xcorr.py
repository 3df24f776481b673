"""Instantaneous cross-correlation series between normalized returns."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .returns import ReturnPanel


@dataclass(frozen=True)
class CorrelationSeries:
    values: np.ndarray
    kind: str
    n_stocks: int
    symbols: tuple = ()

    def __len__(self):
        return len(self.values)


def ic_series(panel: ReturnPanel, i: str, j: str) -> CorrelationSeries:
    """Product of the normalized returns of two distinct stocks at each step."""
    if i == j:
        raise ConfigError("IC needs two distinct symbols")
    ri = panel.normalized[:, panel.index_of(i)]
    rj = panel.normalized[:, panel.index_of(j)]
    return CorrelationSeries(ri * rj, f"IC({i},{j})", 2, (i, j))


def aic_values(normalized: np.ndarray) -> np.ndarray:
    """Pair-averaged products over the columns of ``normalized``.

    Uses ``(S**2 - Q) / (N (N - 1))`` with ``S`` the row sum and ``Q`` the row
    sum of squares, which is the mean over ``i < j`` of ``R_i R_j``.
    """
    r = np.asarray(normalized, dtype=float)
    n = r.shape[1]
    if n < 2:
        raise ConfigError(f"AIC needs at least 2 stocks, got {n}")
    if n == 2:
        # Keeps the N = 2 case bitwise identical to the IC product.
        return r[:, 0] * r[:, 1]
    s = r.sum(axis=1)
    q = np.einsum("ij,ij->i", r, r)
    return (s * s - q) / (n * (n - 1))


def aic_series(panel: ReturnPanel, subset=None) -> CorrelationSeries:
    """Average instantaneous cross-correlation of ``subset`` (default: all symbols)."""
    symbols = tuple(panel.symbols) if subset is None else tuple(subset)
    if len(set(symbols)) != len(symbols):
        raise DataError("duplicate symbols in subset")
    if len(symbols) < 2:
        raise ConfigError(f"AIC needs at least 2 stocks, got {len(symbols)}")
    cols = [panel.index_of(s) for s in symbols]
    values = aic_values(panel.normalized[:, cols])
    return CorrelationSeries(values, f"AIC({len(symbols)})", len(symbols), symbols)
