"""Multifractal spectrum from MF-DFA exponents.

``h(q)`` comes from power-law fits of ``F_q(t)``; ``tau(q) = q h(q) - D_f``;
the Legendre transform gives ``alpha = dtau/dq`` and ``f = q alpha - tau``.
The width ``alpha_max - alpha_min`` is taken over the evaluated q grid, so
it depends on the grid bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .fluctuation import FluctuationFunction
from .scaling import power_law_fit


def q_grid(q_min: float = -2.0, q_max: float = 4.0, step: float = 0.25) -> np.ndarray:
    """Evenly spaced q values from ``q_min`` to ``q_max`` inclusive."""
    if not step > 0:
        raise ConfigError(f"q step must be positive, got {step}")
    if q_max < q_min:
        raise ConfigError(f"q max {q_max} below q min {q_min}")
    n = int(round((q_max - q_min) / step))
    if not np.isclose(q_min + n * step, q_max, rtol=0, atol=1e-9 * max(1.0, abs(q_max))):
        raise ConfigError(f"q range [{q_min}, {q_max}] is not a multiple of step {step}")
    qs = q_min + step * np.arange(n + 1)
    # Snap so that e.g. 0 and 2 are exact grid members.
    return np.round(qs, 12) + 0.0


@dataclass(frozen=True)
class MultifractalSpectrum:
    q_values: np.ndarray
    h: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    delta_alpha: float
    fractal_dim: float = 1.0
    h_stderr: np.ndarray | None = None

    def to_dict(self) -> dict:
        out = {
            "q": self.q_values.tolist(),
            "h": self.h.tolist(),
            "tau": self.tau.tolist(),
            "alpha": self.alpha.tolist(),
            "f_alpha": self.f_alpha.tolist(),
            "delta_alpha": self.delta_alpha,
            "delta_alpha_grid": [float(self.q_values[0]), float(self.q_values[-1])],
            "fractal_dim": self.fractal_dim,
        }
        if self.h_stderr is not None:
            out["h_stderr"] = self.h_stderr.tolist()
        return out


def hq_curve(fluct: FluctuationFunction, fit_range=None):
    """Generalized Hurst exponents ``h(q)`` for every q of ``fluct``.

    Returns
    -------
    q_values, h, h_stderr : ndarray
    """
    fits = [power_law_fit(fluct.scales, row, fit_range) for row in fluct.F]
    h = np.array([f.exponent for f in fits])
    err = np.array([f.stderr for f in fits])
    return fluct.q_values.copy(), h, err


def tau_of_q(q_values, h, fractal_dim: float = 1.0) -> np.ndarray:
    q = np.asarray(q_values, dtype=float)
    h = np.asarray(h, dtype=float)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(h))):
        raise NumericalError("q and h must be finite")
    return q * h - fractal_dim


def legendre(q_values, tau):
    """Numerical Legendre transform ``(alpha, f(alpha))`` of ``tau(q)``.

    The derivative uses central differences inside the grid and one-sided
    differences at its two ends.
    """
    q = np.asarray(q_values, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if q.size < 3:
        raise ConfigError(f"Legendre transform needs at least 3 q points, got {q.size}")
    if q.shape != tau.shape:
        raise ConfigError("q and tau must have the same length")
    if np.any(np.diff(q) <= 0):
        raise ConfigError("q grid must be strictly increasing")
    alpha = np.gradient(tau, q, edge_order=1)
    return alpha, q * alpha - tau


def spectrum_width(alpha) -> float:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.size == 0:
        raise ConfigError("spectrum width of an empty alpha list")
    return float(alpha.max() - alpha.min())


def from_hq(q_values, h, fractal_dim: float = 1.0, h_stderr=None) -> MultifractalSpectrum:
    q = np.asarray(q_values, dtype=float)
    h = np.asarray(h, dtype=float)
    tau = tau_of_q(q, h, fractal_dim)
    alpha, f = legendre(q, tau)
    return MultifractalSpectrum(q, h, tau, alpha, f, spectrum_width(alpha), float(fractal_dim),
                                None if h_stderr is None else np.asarray(h_stderr, dtype=float))


def multifractal_spectrum(fluct: FluctuationFunction, fit_range=None,
                          fractal_dim: float = 1.0) -> MultifractalSpectrum:
    """Full chain ``F_q(t) -> h(q) -> tau(q) -> (alpha, f(alpha))``."""
    q, h, err = hq_curve(fluct, fit_range)
    return from_hq(q, h, fractal_dim, err)
