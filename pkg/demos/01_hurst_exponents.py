"""
DFA Hurst exponents of synthetic series
=======================================

White noise should give H close to 0.5 and fractional Gaussian noise
should give back its Hurst parameter.  The fitted exponent is then mapped
to a memory regime.
"""
import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from aicmf import GeneratorSpec, classify_regime, dfa, fgn, fit_power_law, white_noise

N = 2**14

series = {"white noise": white_noise(GeneratorSpec("white", N, seed=1))}
for h in (0.6, 0.7, 0.8):
    series[f"fGn H={h}"] = fgn(GeneratorSpec("fgn", N, hurst=h, seed=1))

fig, ax = plt.subplots()
for name, x in series.items():
    F = dfa(x)
    fit = fit_power_law(F)
    print(f"{name:12s}  H = {fit.exponent:.3f} +/- {fit.stderr:.3f}  -> {classify_regime(fit.exponent)}")
    ax.loglog(F.scales, F.F[0], "o", ms=3, label=f"{name} (H={fit.exponent:.2f})")
    ax.loglog(F.scales, 10**fit.intercept * F.scales**fit.exponent, "k--", lw=0.7)

ax.set_xlabel("window size t")
ax.set_ylabel("F_2(t)")
ax.legend()
fig.savefig("hurst_exponents.png", dpi=120)
