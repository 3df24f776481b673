"""Seeded synthetic series with known scaling, used as validation oracles.

All random draws come from NumPy's ``Generator`` backed by the PCG64 bit
generator (``numpy.random.default_rng(seed)``); normal variates use its
ziggurat sampler.  A fixed seed therefore reproduces a series exactly on
any platform running the same NumPy major version.
"""
from __future__ import annotations

import datetime as dt
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, NumericalError

KINDS = ("white", "fgn", "cascade")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int
    hurst: float = 0.5
    multiplier: float = 0.6
    seed: int = 0
    randomized: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if int(self.length) != self.length or self.length < 16:
            raise ConfigError(f"length must be an integer >= 16, got {self.length!r}")
        if self.kind in ("fgn", "cascade") and not _is_pow2(self.length):
            raise ConfigError(f"{self.kind} length must be a power of 2, got {self.length}")
        if not 0 < self.hurst < 1:
            raise ConfigError(f"hurst must lie in (0, 1), got {self.hurst}")
        if not 0 < self.multiplier < 1:
            raise ConfigError(f"multiplier must lie in (0, 1), got {self.multiplier}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def generate(spec: GeneratorSpec) -> np.ndarray:
    """Dispatch on ``spec.kind``."""
    return {"white": white_noise, "fgn": fgn, "cascade": binomial_cascade}[spec.kind](spec)


def white_noise(spec: GeneratorSpec) -> np.ndarray:
    """I.i.d. standard normal draws."""
    return np.random.default_rng(spec.seed).standard_normal(spec.length)


def fgn_autocovariance(k, hurst: float) -> np.ndarray:
    """Autocovariance of unit-variance fractional Gaussian noise at lag ``k``."""
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * k**h2 + np.abs(k - 1) ** h2)


def fgn(spec: GeneratorSpec, tol: float = 1e-8) -> np.ndarray:
    """Fractional Gaussian noise by circulant embedding (Davies-Harte).

    The ``n x n`` Toeplitz covariance is embedded in a ``2n`` circulant whose
    eigenvalues come from one FFT.  Eigenvalues below ``-tol`` mean the
    embedding is not a valid covariance and raise :class:`NumericalError`.
    """
    n = spec.length
    if not _is_pow2(n):
        raise ConfigError(f"fgn length must be a power of 2, got {n}")
    gamma = fgn_autocovariance(np.arange(n + 1), spec.hurst)
    row = np.concatenate([gamma, gamma[n - 1:0:-1]])
    m = row.size
    eig = np.fft.fft(row).real
    if eig.min() < -tol:
        raise NumericalError(
            f"circulant embedding failed: eigenvalue {eig.min():.3g} < -{tol:g}"
        )
    eig = np.clip(eig, 0.0, None)
    rng = np.random.default_rng(spec.seed)
    w = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    z = np.fft.fft(np.sqrt(eig / m) * w)
    return z.real[:n].copy()


def binomial_cascade(spec: GeneratorSpec) -> np.ndarray:
    """Binomial multiplicative cascade of ``log2(length)`` levels.

    Every cell ``x`` splits into ``(2 a x, 2 (1 - a) x)``, so the series
    sums to ``length``.  With ``spec.randomized`` each pair's orientation
    is swapped by a seeded coin flip.
    """
    n = spec.length
    if not _is_pow2(n):
        raise ConfigError(f"cascade length must be a power of 2, got {n}")
    a = spec.multiplier
    rng = np.random.default_rng(spec.seed) if spec.randomized else None
    x = np.ones(1)
    for _ in range(int(math.log2(n))):
        left, right = 2.0 * a * x, 2.0 * (1.0 - a) * x
        if rng is not None:
            flip = rng.random(x.size) < 0.5
            left, right = np.where(flip, right, left), np.where(flip, left, right)
        x = np.column_stack([left, right]).ravel()
    return x


def cascade_analytic(q, a: float):
    """Closed-form ``(h(q), tau(q), alpha(q))`` for the binomial cascade.

    ``tau(q) = -log2(a**q + (1-a)**q)`` and ``alpha = dtau/dq``.
    ``h(q) = (tau(q) + 1) / q``; since ``tau(0) = -1`` the value at ``q = 0``
    is the derivative ``tau'(0) = alpha(0) = -(ln a + ln(1-a)) / (2 ln 2)``.
    """
    if not 0 < a < 1:
        raise ConfigError(f"multiplier must lie in (0, 1), got {a}")
    q = np.asarray(q, dtype=float)
    b = 1.0 - a
    aq, bq = a**q, b**q
    tau = -np.log2(aq + bq)
    alpha = -(aq * math.log(a) + bq * math.log(b)) / ((aq + bq) * math.log(2.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(q == 0, alpha, (tau + 1.0) / np.where(q == 0, 1.0, q))
    if h.ndim == 0:
        return float(h), float(tau), float(alpha)
    return h, tau, alpha


def synthetic_price_panel(n_symbols: int = 50, n_days: int = 1000, seed: int = 0,
                          hurst: float = 0.7, multiplier: float = 0.6,
                          beta: float = 0.5, daily_vol: float = 0.01):
    """Price panel whose stocks share a long-memory, multifractal market factor.

    Daily log-returns are ``v(t) * (beta * m(t) + e_i(t)) * daily_vol`` with
    ``m`` an fGn market factor, ``e_i`` independent noise and ``v`` the square
    root of a randomized binomial cascade (intermittent volatility).  Dates
    are consecutive weekdays from 2000-01-03.

    Returns
    -------
    PricePanel
    """
    from .ingest import PricePanel

    if n_symbols < 1 or n_days < 2:
        raise ConfigError("need at least 1 symbol and 2 days")
    size = max(16, 1 << (n_days - 1).bit_length())
    seq = np.random.SeedSequence(seed)
    s_market, s_vol, s_idio = (int(s.generate_state(1, np.uint64)[0]) for s in seq.spawn(3))
    market = fgn(GeneratorSpec("fgn", size, hurst=hurst, seed=s_market))
    vol = np.sqrt(binomial_cascade(
        GeneratorSpec("cascade", size, multiplier=multiplier, seed=s_vol, randomized=True)))
    idio = np.random.default_rng(s_idio).standard_normal((n_days - 1, n_symbols))
    common = (vol * market)[: n_days - 1, None]
    rets = daily_vol * (beta * common + vol[: n_days - 1, None] * idio)
    logp = np.vstack([np.zeros(n_symbols), np.cumsum(rets, axis=0)])
    prices = 100.0 * np.exp(logp)
    start = np.datetime64("2000-01-03")
    days = np.busday_offset(start, np.arange(n_days), roll="forward")
    dates = [dt.date.fromisoformat(str(d)) for d in days]
    width = len(str(n_symbols - 1))
    symbols = [f"S{i:0{width}d}" for i in range(n_symbols)]
    return PricePanel(dates, symbols, prices)
