"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""
import json
import time

import numpy as np
import pytest

import conftest
from aicmf import (GeneratorSpec, aic_series, binomial_cascade, cascade_analytic, crossover_fit,
                   dfa, dyadic_scales, fgn, fit_power_law, ic_series, mfdfa, multifractal_spectrum,
                   q_grid, return_panel, synthetic_price_panel, white_noise, write_panel)
from aicmf.cli import main
from naive import naive_Fq, naive_profile, naive_window_f

N = 2**14
QS = q_grid(-2.0, 4.0, 0.25)


def record(number, title, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def test_1_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    qs = [-2.0, 0.0, 2.0, 4.0]
    for seed in range(50):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(16, 513))
        x = rng.normal(size=n) + 0.3 * rng.normal(size=n).cumsum() / np.sqrt(n)
        scales = np.arange(3, n // 4 + 1)
        F = mfdfa(x, scales, qs)
        prof = naive_profile(list(x))
        for j, t in enumerate(scales):
            fs = naive_window_f(prof, int(t))
            for i, q in enumerate(qs):
                ref = naive_Fq(fs, q)
                worst = max(worst, abs(F.F[i, j] - ref) / max(abs(ref), 1.0))
    elapsed = time.perf_counter() - start
    record(1, "oracle equivalence", worst <= 1e-10 and elapsed < 10,
           f"max deviation {worst:.2e} (tol 1e-10), {elapsed:.2f}s (limit 10s)")


def test_2_white_noise_hurst():
    start = time.perf_counter()
    x = white_noise(GeneratorSpec("white", N, seed=2024))
    h = fit_power_law(dfa(x)).exponent
    elapsed = time.perf_counter() - start
    record(2, "white-noise Hurst", abs(h - 0.5) <= 0.03 and elapsed < 2,
           f"H = {h:.4f} (0.50 +/- 0.03), {elapsed:.2f}s (limit 2s)")


def test_3_fgn_hurst_recovery():
    start = time.perf_counter()
    found = {}
    for target in (0.6, 0.7, 0.8):
        x = fgn(GeneratorSpec("fgn", N, hurst=target, seed=7))
        found[target] = fit_power_law(dfa(x)).exponent
    elapsed = time.perf_counter() - start
    ok = all(abs(h - t) <= 0.05 for t, h in found.items()) and elapsed < 5
    detail = ", ".join(f"H={t}: {h:.4f}" for t, h in found.items())
    record(3, "fGn Hurst recovery", ok, f"{detail} (+/- 0.05), {elapsed:.2f}s (limit 5s)")


def test_4_cascade_multifractality():
    start = time.perf_counter()
    x = binomial_cascade(GeneratorSpec("cascade", N, multiplier=0.6))
    spec = multifractal_spectrum(mfdfa(x, dyadic_scales(N), QS))
    h, _, alpha = cascade_analytic(QS, 0.6)
    h_err = float(np.max(np.abs(spec.h - h)))
    a_err = float(np.max(np.abs(spec.alpha - alpha)[1:-1]))
    width_err = abs(spec.delta_alpha - (alpha[0] - alpha[-1]))
    elapsed = time.perf_counter() - start
    ok = h_err <= 0.1 and a_err <= 0.05 and width_err <= 0.1 and elapsed < 10
    record(4, "cascade multifractality", ok,
           f"max|dh| {h_err:.4f} (0.1), interior max|dalpha| {a_err:.4f} (0.05), "
           f"|d Delta-alpha| {width_err:.4f} (0.1), {elapsed:.2f}s (limit 10s)")


def test_5_exact_reductions():
    rng = np.random.default_rng(5)
    panel = synthetic_price_panel(2, 600, seed=5)
    rp = return_panel(panel)
    aic = aic_series(rp).values
    ic = ic_series(rp, *rp.symbols).values
    bitwise = np.array_equal(aic, ic)
    x = rng.normal(size=4096)
    q2_gap = float(np.max(np.abs(mfdfa(x, q_values=QS).at(2.0) - dfa(x).F[0])))
    const = max(float(np.max(dfa(np.full(4096, c)).F[0])) for c in (0.0, 1.0, -2.5, 0.1))
    ok = bitwise and q2_gap <= 1e-12 and const <= 1e-12
    record(5, "exact reductions", ok,
           f"AIC(N=2)==IC bitwise: {bitwise}; |F_2 mfdfa - dfa| {q2_gap:.1e} (1e-12); "
           f"constant-series max F_2 {const:.1e}")


def test_6_monofractal_vs_multifractal():
    g = fgn(GeneratorSpec("fgn", N, hurst=0.7, seed=0))
    mono = multifractal_spectrum(mfdfa(g, q_values=QS)).delta_alpha
    c = binomial_cascade(GeneratorSpec("cascade", N, multiplier=0.6))
    multi = multifractal_spectrum(mfdfa(c, dyadic_scales(N), QS)).delta_alpha
    multi_log = multifractal_spectrum(mfdfa(c, q_values=QS)).delta_alpha
    _, _, alpha = cascade_analytic(QS, 0.6)
    record(6, "monofractal vs multifractal separation", mono < 0.25 and multi > 0.5,
           f"fGn Delta-alpha {mono:.3f} (< 0.25); cascade Delta-alpha {multi:.3f} dyadic grid, "
           f"{multi_log:.3f} log grid (> 0.5); analytic grid-bounded width "
           f"{alpha[0] - alpha[-1]:.3f} on q in [-2, 4]")


def _two_slope(t, t_c=35.0, s1=1.1, s2=0.65):
    lt, lc = np.log10(t), np.log10(t_c)
    return np.where(lt <= lc, s1 * lt, s1 * lc + s2 * (lt - lc))


def test_7_crossover_recovery():
    start = time.perf_counter()
    t = np.unique(np.rint(np.geomspace(4, 1024, 25)))
    assert t.size == 25
    worst_step, worst_slope, all_two = 0, 0.0, True
    for seed in range(20):
        noise = np.random.default_rng(seed).normal(0, 0.01, t.size)
        cross = crossover_fit(t, 10 ** (_two_slope(t) + noise))
        true_idx = np.argmin(np.abs(np.log(t / 35.0)))
        worst_step = max(worst_step, abs(int(np.searchsorted(t, cross.t_c)) - int(true_idx)))
        worst_slope = max(worst_slope, abs(cross.left.exponent - 1.1), abs(cross.right.exponent - 0.65))
        all_two &= cross.preferred == "two-stage"
    single = crossover_fit(t, 3.0 * t**0.74).preferred
    elapsed = time.perf_counter() - start
    ok = worst_step <= 1 and worst_slope <= 0.05 and all_two and single == "single" and elapsed < 1
    record(7, "crossover recovery", ok,
           f"20 noise seeds: worst t_c offset {worst_step} grid step(s) (1), worst slope error "
           f"{worst_slope:.4f} (0.05), two-stage preferred: {all_two}; exact single slope -> "
           f"{single}; {elapsed:.3f}s (limit 1s)")


def test_8_pipeline_determinism(tmp_path):
    prices = tmp_path / "prices.csv"
    write_panel(synthetic_price_panel(250, 2900, seed=8), prices)
    start = time.perf_counter()
    texts = {}
    for run in ("a", "b"):
        rc = main(["pipeline", "--input", str(prices), "--output-dir", str(tmp_path / run),
                   "--interval", "1,5,10,22,44", "--seed", "8"])
        assert rc == 0
        for i in (1, 5, 10, 22, 44):
            report = json.loads((tmp_path / run / f"report_interval{i}.json").read_text())
            report.pop("generated_at")
            texts[run, i] = json.dumps(report, sort_keys=True)
    elapsed = time.perf_counter() - start
    same = all(texts["a", i] == texts["b", i] for i in (1, 5, 10, 22, 44))
    bytes_same = all(
        _strip_ts((tmp_path / "a" / f"report_interval{i}.json").read_bytes())
        == _strip_ts((tmp_path / "b" / f"report_interval{i}.json").read_bytes())
        for i in (1, 5, 10, 22, 44))
    record(8, "pipeline determinism", same and bytes_same and elapsed < 30,
           f"5 reports identical: {same and bytes_same}; two runs of 250 x 2900 panel "
           f"in {elapsed:.2f}s (limit 30s)")


def _strip_ts(data: bytes) -> bytes:
    return b"\n".join(l for l in data.split(b"\n") if b'"generated_at"' not in l)


def test_9_generalized_mean_monotonicity():
    qs = np.array([-3, -2, -1, -0.5, -0.1, 0, 0.1, 0.5, 1, 2, 3, 4])
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(900 + seed)
        x = rng.standard_t(2.5, size=int(rng.integers(256, 4096)))
        F = mfdfa(x, q_values=qs).F
        worst = max(worst, float(np.max(F[:-1] - F[1:])))
    record(9, "generalized-mean monotonicity", worst <= 1e-12,
           f"largest decrease in q {max(worst, 0.0):.1e} (tol 1e-12), q=0 between -0.1 and 0.1")
