"""Power-law fits to fluctuation functions in log-log space."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .fluctuation import FluctuationFunction

REGIMES = ("anti-correlated", "white-noise", "long-range-correlated", "one-over-f", "unstable")

# Mean squared log residual below this is treated as an exact fit when
# comparing models, so that round-off does not decide between them.
_MSE_FLOOR = 1e-20
_TIE = 1e-12


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    intercept: float
    fit_range: tuple
    residual_sse: float
    stderr: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "fit_range": list(self.fit_range),
            "residual_sse": self.residual_sse,
            "stderr": self.stderr,
            "n_points": self.n_points,
        }


@dataclass(frozen=True)
class CrossoverFit:
    t_c: int
    left: PowerLawFit
    right: PowerLawFit
    single: PowerLawFit
    preferred: str
    delta_bic: float

    def to_dict(self) -> dict:
        return {
            "t_c": self.t_c,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "single": self.single.to_dict(),
            "preferred": self.preferred,
            "delta_bic": self.delta_bic,
        }


def _line_fit(x: np.ndarray, y: np.ndarray):
    n = x.size
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = dx @ dx
    slope = (dx @ (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    sse = float(resid @ resid)
    stderr = math.sqrt(sse / (n - 2) / sxx) if n > 2 else 0.0
    return float(slope), float(intercept), sse, stderr


def power_law_fit(scales, values, fit_range=None) -> PowerLawFit:
    """OLS fit of ``log10 values`` against ``log10 scales``.

    ``fit_range`` is an inclusive ``(t_min, t_max)`` pair; scales outside it
    are ignored.
    """
    t = np.asarray(scales, dtype=float)
    F = np.asarray(values, dtype=float)
    mask = np.ones(t.size, dtype=bool)
    if fit_range is not None:
        lo, hi = fit_range
        if lo > hi:
            raise ConfigError(f"empty fit range {fit_range}")
        mask = (t >= lo) & (t <= hi)
    t, F = t[mask], F[mask]
    if t.size < 3:
        raise ConfigError(f"power-law fit needs at least 3 scales in range, got {t.size}")
    if not np.all(np.isfinite(F)) or np.any(F <= 0):
        raise NumericalError("non-positive or non-finite fluctuation value in fit range")
    slope, intercept, sse, stderr = _line_fit(np.log10(t), np.log10(F))
    return PowerLawFit(slope, intercept, (float(t[0]), float(t[-1])), sse, stderr, int(t.size))


def fit_power_law(fluct: FluctuationFunction, q: float = 2.0, fit_range=None) -> PowerLawFit:
    """Power-law exponent of ``F_q(t)`` (the Hurst exponent when ``q = 2``)."""
    return power_law_fit(fluct.scales, fluct.at(q), fit_range)


def _bic(sse: float, n: int, k: int) -> float:
    return n * math.log(max(sse / n, _MSE_FLOOR)) + k * math.log(n)


def crossover_fit(scales, values) -> CrossoverFit:
    """Two-segment power-law fit with an exhaustively searched break scale.

    Every scale with at least three points strictly on each side is tried as
    the break; both segments include the break point.  The break with the
    smallest total squared log residual wins, the smaller scale on ties.
    ``preferred`` is ``"two-stage"`` when the two-line BIC (4 parameters)
    beats the single-line BIC (2 parameters).
    """
    t = np.asarray(scales, dtype=float)
    F = np.asarray(values, dtype=float)
    n = t.size
    if n < 7:
        raise ConfigError(f"too few scales for a crossover fit: {n} (need at least 7)")
    if not np.all(np.isfinite(F)) or np.any(F <= 0):
        raise NumericalError("non-positive or non-finite fluctuation value")
    best = None
    for b in range(3, n - 3):
        left = power_law_fit(t[: b + 1], F[: b + 1])
        right = power_law_fit(t[b:], F[b:])
        total = left.residual_sse + right.residual_sse
        if best is None or total < best[0] - _TIE:
            best = (total, b, left, right)
    total, b, left, right = best
    single = power_law_fit(t, F)
    delta = _bic(total, n, 4) - _bic(single.residual_sse, n, 2)
    preferred = "two-stage" if delta < 0 else "single"
    return CrossoverFit(int(t[b]), left, right, single, preferred, float(delta))


def fit_crossover(fluct: FluctuationFunction, q: float = 2.0) -> CrossoverFit:
    return crossover_fit(fluct.scales, fluct.at(q))


def classify_regime(exponent: float, tol: float = 0.02) -> str:
    """Label a DFA exponent by the memory regime it indicates.

    The bands ``|H - 0.5| <= tol`` (white noise) and ``|H - 1| <= tol``
    (1/f noise) take precedence over the open intervals around them.
    """
    if not math.isfinite(exponent):
        raise NumericalError(f"exponent must be finite, got {exponent!r}")
    tol = tol + 1e-12
    if abs(exponent - 0.5) <= tol:
        return "white-noise"
    if abs(exponent - 1.0) <= tol:
        return "one-over-f"
    if exponent < 0.5:
        return "anti-correlated"
    if exponent < 1.0:
        return "long-range-correlated"
    return "unstable"
