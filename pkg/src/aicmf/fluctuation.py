"""Detrended fluctuation analysis and its multifractal generalization.

The engine works on the cumulative-sum profile of a series.  For each window
size ``t`` the profile is cut into non-overlapping windows, a least-squares
polynomial is removed from every window, and the root-mean-square residual
``f_k(t)`` is kept.  :func:`mfdfa` then takes generalized means of ``f_k``
over the windows, one per moment order ``q``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericalError

log = logging.getLogger(__name__)

DIRECTIONS = ("forward", "bidirectional")
ZERO_POLICIES = ("error", "floor")
ZERO_FLOOR = 1e-12


@dataclass(frozen=True)
class FluctuationFunction:
    """Fluctuation magnitudes ``F[q, scale]``.

    Attributes
    ----------
    scales : ndarray of int
    q_values : ndarray of float
    F : ndarray, shape (len(q_values), len(scales))
    n_windows : ndarray of int
        Windows averaged at each scale (doubled for bidirectional).
    direction : str
    detrend_order : int
    floored : int
        Number of zero window fluctuations replaced by ``ZERO_FLOOR``.
    """

    scales: np.ndarray
    q_values: np.ndarray
    F: np.ndarray
    n_windows: np.ndarray
    direction: str = "forward"
    detrend_order: int = 1
    floored: int = 0

    def q_index(self, q: float) -> int:
        hits = np.flatnonzero(np.isclose(self.q_values, q, rtol=0, atol=1e-12))
        if hits.size == 0:
            raise ConfigError(f"q = {q} not in the evaluated q grid")
        return int(hits[0])

    def at(self, q: float) -> np.ndarray:
        """Fluctuation function for a single ``q``."""
        return self.F[self.q_index(q)]


def profile(series, subtract_mean: bool = True) -> np.ndarray:
    """Cumulative sum of ``series``, optionally after removing its mean."""
    a = np.asarray(series, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise DataError("profile needs a non-empty 1-D series")
    if a.size < 2:
        raise DataError("profile needs at least 2 points")
    if not np.all(np.isfinite(a)):
        raise DataError("series contains non-finite values")
    if subtract_mean:
        a = a - a.mean()
    return np.cumsum(a)


def scale_grid(length: int, n_scales: int = 20, min_scale: int = 4,
               max_scale: int | None = None, detrend_order: int = 1) -> np.ndarray:
    """Log-spaced integer window sizes between ``min_scale`` and ``max_scale``.

    ``max_scale`` defaults to ``length // 4``.  Rounding can merge neighbours,
    so the result may hold fewer than ``n_scales`` entries.
    """
    if max_scale is None:
        max_scale = length // 4
    if n_scales < 1:
        raise ConfigError("need at least one scale")
    if min_scale > max_scale:
        raise ConfigError(
            f"empty scale range [{min_scale}, {max_scale}] for series length {length}"
        )
    raw = np.geomspace(min_scale, max_scale, n_scales)
    scales = np.unique(np.rint(raw).astype(int))
    validate_grid(scales, length, detrend_order)
    return scales


def dyadic_scales(length: int, min_scale: int = 4, max_scale: int | None = None) -> np.ndarray:
    """Powers of two from ``min_scale`` up to ``max_scale`` (default ``length // 4``).

    Windows then line up with dyadic structure in the data, which removes the
    log-periodic ripple a binomial cascade shows on a log-spaced grid.
    """
    if max_scale is None:
        max_scale = length // 4
    lo = 1 << max(int(min_scale) - 1, 0).bit_length()
    scales = []
    while lo <= max_scale:
        scales.append(lo)
        lo *= 2
    if not scales:
        raise ConfigError(f"no power-of-two scale in [{min_scale}, {max_scale}]")
    return np.array(scales)


def validate_grid(scales, length: int, detrend_order: int = 1) -> np.ndarray:
    scales = np.asarray(scales)
    if scales.ndim != 1 or scales.size == 0:
        raise ConfigError("scale grid must be a non-empty 1-D list")
    if not np.all(scales == np.rint(scales)):
        raise ConfigError("scales must be integers")
    scales = scales.astype(int)
    if np.any(np.diff(scales) <= 0):
        raise ConfigError("scales must be strictly increasing")
    if scales[0] < detrend_order + 2:
        raise ConfigError(
            f"scale {scales[0]} too small for detrend order {detrend_order} "
            f"(minimum {detrend_order + 2})"
        )
    if 4 * scales[-1] > length:
        raise ConfigError(f"scale {scales[-1]} exceeds series length / 4 ({length / 4:g})")
    return scales


def _residual_ss(windows: np.ndarray, order: int) -> np.ndarray:
    # windows: (n_windows, t); returns the residual sum of squares per row.
    t = windows.shape[1]
    x = np.arange(t) - (t - 1) / 2.0
    centered = windows - windows.mean(axis=1, keepdims=True)
    if order == 0:
        resid = centered
    elif order == 1:
        slope = centered @ x / (x @ x)
        resid = centered - slope[:, None] * x
    else:
        basis, _ = np.linalg.qr(np.vander(x / max(x[-1], 1.0), order + 1, increasing=True))
        resid = windows - (windows @ basis) @ basis.T
    return np.einsum("ij,ij->i", resid, resid)


def window_fluctuations(prof, t: int, detrend_order: int = 1,
                        direction: str = "forward") -> np.ndarray:
    """Detrended RMS fluctuation ``f_k(t)`` of every window of size ``t``.

    Windows are cut from the start of the profile, dropping the incomplete
    tail.  With ``direction="bidirectional"`` a second set is cut from the
    end and appended, so the tail is used too.
    """
    prof = np.asarray(prof, dtype=float)
    n = prof.size
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if int(detrend_order) != detrend_order or detrend_order < 0:
        raise ConfigError(f"detrend order must be a non-negative integer, got {detrend_order!r}")
    if t < detrend_order + 2 or 4 * t > n:
        raise ConfigError(
            f"scale {t} out of range [{detrend_order + 2}, {n // 4}] for length {n}"
        )
    n_w = n // t
    parts = [prof[: n_w * t].reshape(n_w, t)]
    if direction == "bidirectional":
        parts.append(prof[n - n_w * t:].reshape(n_w, t))
    windows = np.concatenate(parts) if len(parts) > 1 else parts[0]
    ss = _residual_ss(windows, int(detrend_order))
    return np.sqrt(np.maximum(ss, 0.0) / t)


def generalized_mean(f: np.ndarray, q: float) -> float:
    """``(mean f**q)**(1/q)``, or the geometric mean when ``q == 0``."""
    if q == 0:
        return float(np.exp(np.mean(np.log(f))))
    if q == 2:
        return float(np.sqrt(np.mean(f * f)))
    return float(np.mean(f**q) ** (1.0 / q))


def mfdfa(series, scales=None, q_values=(2.0,), detrend_order: int = 1,
          direction: str = "forward", subtract_mean: bool = True,
          zero_policy: str = "error") -> FluctuationFunction:
    """Multifractal detrended fluctuation function ``F_q(t)``.

    Parameters
    ----------
    series : array_like
        The series to analyse (not its profile).
    scales : array_like of int, optional
        Window sizes.  Defaults to :func:`scale_grid` for the series length.
    q_values : sequence of float
        Moment orders.  ``q = 0`` uses the logarithmic average.
    detrend_order : int
        Degree of the polynomial removed from each window.
    direction : {"forward", "bidirectional"}
    subtract_mean : bool
        Remove the series mean before integrating.
    zero_policy : {"error", "floor"}
        What to do when a window has ``f_k = 0`` and some ``q <= 0`` needs
        it.  ``floor`` substitutes ``ZERO_FLOOR`` and counts the substitutions.

    Returns
    -------
    FluctuationFunction
    """
    if zero_policy not in ZERO_POLICIES:
        raise ConfigError(f"zero policy must be one of {ZERO_POLICIES}, got {zero_policy!r}")
    qs = np.atleast_1d(np.asarray(q_values, dtype=float))
    if qs.size == 0 or not np.all(np.isfinite(qs)):
        raise ConfigError("q values must be a non-empty list of finite numbers")
    prof = profile(series, subtract_mean)
    n = prof.size
    if scales is None:
        scales = scale_grid(n, detrend_order=detrend_order)
    scales = validate_grid(scales, n, detrend_order)

    F = np.empty((qs.size, scales.size))
    n_windows = np.empty(scales.size, dtype=int)
    floored = 0
    needs_positive = bool(np.any(qs <= 0))
    for j, t in enumerate(scales):
        f = window_fluctuations(prof, int(t), detrend_order, direction)
        n_windows[j] = f.size
        f_safe = f
        if needs_positive and np.any(f == 0):
            zeros = int(np.count_nonzero(f == 0))
            if zero_policy == "error":
                raise NumericalError(
                    f"{zeros} window(s) with zero fluctuation at scale {t}; "
                    "q <= 0 is undefined (use zero_policy='floor')"
                )
            floored += zeros
            f_safe = np.where(f == 0, ZERO_FLOOR, f)
        for i, q in enumerate(qs):
            F[i, j] = generalized_mean(f_safe if q <= 0 else f, float(q))
    if floored:
        log.warning("replaced %d zero window fluctuations with %g", floored, ZERO_FLOOR)
    return FluctuationFunction(scales, qs, F, n_windows, direction, int(detrend_order), floored)


def dfa(series, scales=None, detrend_order: int = 1, direction: str = "forward",
        subtract_mean: bool = True) -> FluctuationFunction:
    """Second-order detrended fluctuation function ``F_2(t)``."""
    return mfdfa(series, scales, (2.0,), detrend_order, direction, subtract_mean)
