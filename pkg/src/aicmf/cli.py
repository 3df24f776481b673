"""Command-line entry point: ``aicmf <command> [options]``.

Commands
--------
validate   load a price CSV and summarise it
aic        price CSV -> AIC series CSV (one file per interval)
dfa        series CSV -> F_2(t) CSV
mfdfa      series CSV -> F_q(t) CSV
fit        fluctuation CSV -> power-law / crossover fit JSON
spectrum   series CSV -> multifractal spectrum JSON
synth      write a synthetic series CSV plus a JSON sidecar
pipeline   price CSV -> one JSON report per interval

Exit status is 0 on success, 1 for configuration errors, 2 for data errors
and 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AicmfError, ConfigError, DataError
from .fluctuation import DIRECTIONS, ZERO_POLICIES, FluctuationFunction, dfa, mfdfa, scale_grid
from .ingest import POLICIES, load_panel
from .returns import return_panel
from .scaling import classify_regime, crossover_fit, power_law_fit
from .spectrum import multifractal_spectrum, q_grid
from .synth import KINDS, GeneratorSpec, generate
from .xcorr import aic_series

log = logging.getLogger("aicmf")

COMMANDS = ("validate", "aic", "dfa", "mfdfa", "fit", "spectrum", "synth", "pipeline")
SCHEMA_VERSION = "1.0"
TIMESTAMP_FIELD = "generated_at"


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output_dir: str = "."
    intervals: tuple = (1,)
    stride: int = 1
    symbols: tuple | None = None
    scales: tuple | None = None  # (min, max, count)
    q: tuple | None = None  # (min, max, step)
    detrend_order: int = 1
    direction: str = "forward"
    zero_policy: str = "error"
    fit_range: tuple | None = None
    seed: int = 0
    plot_data: bool = False
    missing: str = "strict"
    moment: float = 2.0
    regime_tol: float = 0.02
    subtract_mean: bool = True
    kind: str = "white"
    length: int = 16384
    hurst: float = 0.5
    multiplier: float = 0.6
    randomized: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command not in ("synth",) and not self.input:
            raise ConfigError(f"{self.command} needs --input")
        if self.q is not None:
            if self.command not in ("mfdfa", "spectrum", "pipeline"):
                raise ConfigError("--q only applies to mfdfa, spectrum and pipeline")
            q_grid(*self.q)
        if not self.intervals or any(i < 1 for i in self.intervals):
            raise ConfigError("intervals must be positive integers")
        if self.stride < 1:
            raise ConfigError("stride must be a positive integer")
        if self.detrend_order < 0:
            raise ConfigError("detrend order must be non-negative")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {DIRECTIONS}")
        if self.zero_policy not in ZERO_POLICIES:
            raise ConfigError(f"zero policy must be one of {ZERO_POLICIES}")
        if self.missing not in POLICIES:
            raise ConfigError(f"missing-data policy must be one of {POLICIES}")
        if self.scales is not None:
            lo, hi, count = self.scales
            if lo < self.detrend_order + 2 or hi < lo or count < 1:
                raise ConfigError(f"invalid scale grid {lo}:{hi}:{count}")
        if self.fit_range is not None and self.fit_range[0] > self.fit_range[1]:
            raise ConfigError(f"invalid fit range {self.fit_range}")
        if self.regime_tol < 0:
            raise ConfigError("regime tolerance must be non-negative")

    def resolved(self) -> dict:
        """Parameters that affect results; excludes the output location."""
        d = asdict(self)
        d.pop("output_dir")
        if self.command != "synth":
            for key in ("kind", "length", "hurst", "multiplier", "randomized"):
                d.pop(key)
        if self.command in ("pipeline", "mfdfa", "spectrum") and self.q is None:
            d["q"] = [-2.0, 4.0, 0.25]
        return json.loads(json.dumps(d))


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _triple(text: str, kinds, name: str):
    parts = text.split(":")
    if len(parts) != len(kinds):
        raise argparse.ArgumentTypeError(f"{name} expects {':'.join(['X'] * len(kinds))}, got {text!r}")
    try:
        return tuple(k(p) for k, p in zip(kinds, parts))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in {name} {text!r}") from None


def _intervals(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad interval list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aicmf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"aicmf {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, prices=False, analysis=False, qgrid=False):
        p.add_argument("--input", help="input CSV")
        p.add_argument("--output-dir", default=".", help="directory for output files")
        if prices:
            p.add_argument("--missing", choices=POLICIES, default="strict")
            p.add_argument("--interval", type=_intervals, default=(1,),
                           help="return interval(s) in trading days, comma separated")
            p.add_argument("--stride", type=int, default=1)
            p.add_argument("--symbols", type=lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
                           help="comma-separated symbol subset")
        if analysis:
            p.add_argument("--scales", type=lambda s: _triple(s, (int, int, int), "--scales"),
                           metavar="MIN:MAX:COUNT")
            p.add_argument("--detrend-order", type=int, default=1)
            p.add_argument("--direction", choices=DIRECTIONS, default="forward")
            p.add_argument("--zero-policy", choices=ZERO_POLICIES, default="error")
            p.add_argument("--no-subtract-mean", action="store_true")
            p.add_argument("--plot-data", action="store_true",
                           help="also write two-column .dat files for plotting")
        if qgrid:
            p.add_argument("--q", type=lambda s: _triple(s, (float, float, float), "--q"),
                           metavar="MIN:MAX:STEP")
        p.add_argument("--seed", type=int, default=0)

    def fitting(p):
        p.add_argument("--fit-range", type=lambda s: _triple(s, (float, float), "--fit-range"),
                       metavar="MIN:MAX")
        p.add_argument("--regime-tol", type=float, default=0.02)

    common(sub.add_parser("validate", help="load and check a price CSV"), prices=True)
    common(sub.add_parser("aic", help="compute AIC series"), prices=True)
    common(sub.add_parser("dfa", help="DFA fluctuation function"), analysis=True)
    common(sub.add_parser("mfdfa", help="MF-DFA fluctuation functions"), analysis=True, qgrid=True)
    p = sub.add_parser("fit", help="fit power laws to a fluctuation CSV")
    common(p)
    fitting(p)
    p.add_argument("--moment", type=float, default=2.0, help="q column to fit")
    p = sub.add_parser("spectrum", help="multifractal spectrum of a series")
    common(p, analysis=True, qgrid=True)
    p.add_argument("--fit-range", type=lambda s: _triple(s, (float, float), "--fit-range"),
                   metavar="MIN:MAX")
    p = sub.add_parser("synth", help="generate a synthetic series")
    p.add_argument("--output-dir", default=".")
    p.add_argument("--kind", choices=KINDS, default="white")
    p.add_argument("--length", type=int, default=16384)
    p.add_argument("--hurst", type=float, default=0.5)
    p.add_argument("--multiplier", type=float, default=0.6)
    p.add_argument("--randomized", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("pipeline", help="prices -> AIC -> MF-DFA -> fits -> spectrum")
    common(p, prices=True, analysis=True, qgrid=True)
    fitting(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(ns, name, default)  # noqa: E731
    cfg = RunConfig(
        command=ns.command,
        input=get("input"),
        output_dir=get("output_dir", "."),
        intervals=tuple(get("interval", (1,))),
        stride=get("stride", 1),
        symbols=get("symbols"),
        scales=get("scales"),
        q=get("q"),
        detrend_order=get("detrend_order", 1),
        direction=get("direction", "forward"),
        zero_policy=get("zero_policy", "error"),
        fit_range=get("fit_range"),
        seed=get("seed", 0),
        plot_data=get("plot_data", False),
        missing=get("missing", "strict"),
        moment=get("moment", 2.0),
        regime_tol=get("regime_tol", 0.02),
        subtract_mean=not get("no_subtract_mean", False),
        kind=get("kind", "white"),
        length=get("length", 16384),
        hurst=get("hurst", 0.5),
        multiplier=get("multiplier", 0.6),
        randomized=get("randomized", False),
    )
    cfg.validate()
    return cfg


# -- file helpers ---------------------------------------------------------------

def read_series(path) -> np.ndarray:
    """Read a series CSV: the last column of a file with a header row."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise DataError(f"{path}: no data rows")
    try:
        values = np.array([float(r[-1]) for r in rows[1:]])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: non-finite values")
    return values


def write_series(path, values, header=("index", "value")) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        if len(header) == 1:
            w.writerows([repr(float(v))] for v in values)
        else:
            w.writerows([i, repr(float(v))] for i, v in enumerate(values))


def _qlabel(q: float) -> str:
    return f"{float(q):g}"


def write_fluctuation(path, fluct: FluctuationFunction) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scale", "n_windows", *(f"q={_qlabel(q)}" for q in fluct.q_values)])
        for j, t in enumerate(fluct.scales):
            w.writerow([int(t), int(fluct.n_windows[j]), *(repr(float(v)) for v in fluct.F[:, j])])


def read_fluctuation(path) -> FluctuationFunction:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or rows[0][:2] != ["scale", "n_windows"] or len(rows[0]) < 3:
        raise DataError(f"{path}: malformed header, expected scale,n_windows,q=...")
    try:
        qs = np.array([float(h.split("=", 1)[1]) for h in rows[0][2:]])
        body = np.array([[float(c) for c in r] for r in rows[1:]])
    except (IndexError, ValueError):
        raise DataError(f"{path}: malformed fluctuation CSV") from None
    if body.ndim != 2 or body.shape[0] == 0 or body.shape[1] != len(rows[0]):
        raise DataError(f"{path}: malformed fluctuation CSV")
    return FluctuationFunction(body[:, 0].astype(int), qs, body[:, 2:].T.copy(),
                               body[:, 1].astype(int))


def write_dat(path, x, y) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for a, b in zip(x, y):
            fh.write(f"{float(a)!r} {float(b)!r}\n")


def write_fluct_dat(outdir: Path, stem: str, fluct: FluctuationFunction) -> list:
    paths = []
    for q, row in zip(fluct.q_values, fluct.F):
        p = outdir / f"{stem}_q{_qlabel(q)}.dat"
        write_dat(p, fluct.scales, row)
        paths.append(p.name)
    return paths


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def envelope(kind: str, cfg: RunConfig, result: dict) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "tool": {"name": "aicmf", "version": __version__},
        "config": cfg.resolved(),
        TIMESTAMP_FIELD: dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "result": result,
    }
    if cfg.input:
        report["input_sha256"] = _sha256(cfg.input)
    return report


def write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


# -- stages -----------------------------------------------------------------------

class StageError(Exception):
    def __init__(self, stage: str, error: AicmfError):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


class _Stage:
    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, AicmfError) and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def _scales_for(cfg: RunConfig, length: int):
    if cfg.scales is None:
        return scale_grid(length, detrend_order=cfg.detrend_order)
    lo, hi, count = cfg.scales
    return scale_grid(length, count, lo, hi, cfg.detrend_order)


def _qs(cfg: RunConfig) -> np.ndarray:
    return q_grid(*(cfg.q or (-2.0, 4.0, 0.25)))


def _analyse_series(cfg: RunConfig, values: np.ndarray, qs) -> FluctuationFunction:
    return mfdfa(values, _scales_for(cfg, values.size), qs, cfg.detrend_order,
                 cfg.direction, cfg.subtract_mean, cfg.zero_policy)


def _fit_summary(cfg: RunConfig, fluct: FluctuationFunction, q: float) -> dict:
    row = fluct.at(q)
    single = power_law_fit(fluct.scales, row, cfg.fit_range)
    out = {
        "q": q,
        "exponent": single.exponent,
        "stderr": single.stderr,
        "fit": single.to_dict(),
        "regime": classify_regime(single.exponent, cfg.regime_tol),
        "regime_tol": cfg.regime_tol,
        "crossover": None,
        "t_c": None,
        "preferred": "single",
    }
    if fluct.scales.size >= 7:
        cross = crossover_fit(fluct.scales, row)
        out["crossover"] = cross.to_dict()
        out["crossover"]["left_regime"] = classify_regime(cross.left.exponent, cfg.regime_tol)
        out["crossover"]["right_regime"] = classify_regime(cross.right.exponent, cfg.regime_tol)
        out["t_c"] = cross.t_c
        out["preferred"] = cross.preferred
    return out


def _fluct_dict(fluct: FluctuationFunction) -> dict:
    return {
        "scales": fluct.scales.tolist(),
        "n_windows": fluct.n_windows.tolist(),
        "q": fluct.q_values.tolist(),
        "F": fluct.F.tolist(),
        "direction": fluct.direction,
        "detrend_order": fluct.detrend_order,
        "floored": fluct.floored,
    }


def cmd_validate(cfg: RunConfig, out: Path) -> dict:
    with _Stage("ingest"):
        panel = load_panel(cfg.input, cfg.missing)
    result = {
        "n_dates": panel.n_dates,
        "n_symbols": panel.n_symbols,
        "first_date": panel.dates[0].isoformat(),
        "last_date": panel.dates[-1].isoformat(),
        "dropped_rows": panel.dropped_rows,
    }
    report = envelope("validate", cfg, result)
    write_json(out / "validate.json", report)
    print(json.dumps(result, sort_keys=True))
    return report


def _aic_for(cfg: RunConfig, panel, interval: int):
    with _Stage("returns"):
        rp = return_panel(panel, interval, cfg.stride)
    with _Stage("xcorr"):
        return aic_series(rp, cfg.symbols)


def cmd_aic(cfg: RunConfig, out: Path) -> None:
    with _Stage("ingest"):
        panel = load_panel(cfg.input, cfg.missing)
    for interval in cfg.intervals:
        series = _aic_for(cfg, panel, interval)
        path = out / f"aic_interval{interval}.csv"
        write_series(path, series.values)
        log.info("wrote %s (%d points, N=%d)", path, len(series), series.n_stocks)


def cmd_dfa(cfg: RunConfig, out: Path, multifractal: bool) -> None:
    with _Stage("ingest"):
        values = read_series(cfg.input)
    with _Stage("fluctuation"):
        if multifractal:
            fluct = _analyse_series(cfg, values, _qs(cfg))
        else:
            fluct = dfa(values, _scales_for(cfg, values.size), cfg.detrend_order,
                        cfg.direction, cfg.subtract_mean)
    stem = "mfdfa" if multifractal else "dfa"
    write_fluctuation(out / f"{stem}.csv", fluct)
    if cfg.plot_data:
        write_fluct_dat(out, stem, fluct)


def cmd_fit(cfg: RunConfig, out: Path) -> dict:
    with _Stage("ingest"):
        fluct = read_fluctuation(cfg.input)
    with _Stage("scaling"):
        result = _fit_summary(cfg, fluct, cfg.moment)
    report = envelope("fit", cfg, result)
    write_json(out / "fit.json", report)
    print(json.dumps({k: result[k] for k in ("exponent", "stderr", "regime", "t_c", "preferred")},
                     sort_keys=True))
    return report


def _write_spectrum_dat(out: Path, prefix: str, spec) -> None:
    write_dat(out / f"{prefix}hq.dat", spec.q_values, spec.h)
    write_dat(out / f"{prefix}tau.dat", spec.q_values, spec.tau)
    write_dat(out / f"{prefix}falpha.dat", spec.alpha, spec.f_alpha)


def cmd_spectrum(cfg: RunConfig, out: Path) -> dict:
    with _Stage("ingest"):
        values = read_series(cfg.input)
    with _Stage("fluctuation"):
        fluct = _analyse_series(cfg, values, _qs(cfg))
    with _Stage("spectrum"):
        spec = multifractal_spectrum(fluct, cfg.fit_range)
    report = envelope("spectrum", cfg, {"spectrum": spec.to_dict(), "fluctuation": _fluct_dict(fluct)})
    write_json(out / "spectrum.json", report)
    if cfg.plot_data:
        _write_spectrum_dat(out, "", spec)
    return report


def cmd_synth(cfg: RunConfig, out: Path) -> dict:
    spec = GeneratorSpec(cfg.kind, cfg.length, cfg.hurst, cfg.multiplier, cfg.seed, cfg.randomized)
    with _Stage("synth"):
        values = generate(spec)
    write_series(out / "synth.csv", values, header=("value",))
    report = envelope("synth", cfg, {"spec": spec.to_dict(), "prng": "numpy PCG64",
                                     "file": "synth.csv", "length": int(values.size)})
    write_json(out / "synth.json", report)
    return report


def pipeline_report(cfg: RunConfig, panel, interval: int, out: Path | None = None) -> dict:
    """Run one interval of the full analysis and return its report."""
    series = _aic_for(cfg, panel, interval)
    qs = _qs(cfg)
    with _Stage("fluctuation"):
        fluct = _analyse_series(cfg, series.values, qs)
        f2 = dfa(series.values, fluct.scales, cfg.detrend_order, cfg.direction, cfg.subtract_mean)
    with _Stage("scaling"):
        fit = _fit_summary(cfg, f2, 2.0)
    with _Stage("spectrum"):
        spec = multifractal_spectrum(fluct, cfg.fit_range)
    aic = series.values
    result = {
        "interval": interval,
        "stride": cfg.stride,
        "n_stocks": series.n_stocks,
        "n_times": int(aic.size),
        "aic": {"mean": float(aic.mean()), "std": float(aic.std())},
        "dfa": {"scales": f2.scales.tolist(), "F2": f2.F[0].tolist(), **fit},
        "mfdfa": _fluct_dict(fluct),
        "spectrum": spec.to_dict(),
    }
    report = envelope("pipeline", cfg, result)
    report["config"]["intervals"] = [interval]
    if out is not None:
        write_json(out / f"report_interval{interval}.json", report)
        if cfg.plot_data:
            stem = f"interval{interval}_"
            write_series(out / f"aic_interval{interval}.csv", aic)
            write_dat(out / f"{stem}dfa.dat", f2.scales, f2.F[0])
            write_fluct_dat(out, f"{stem}mfdfa", fluct)
            _write_spectrum_dat(out, stem, spec)
    return report


def cmd_pipeline(cfg: RunConfig, out: Path) -> list:
    with _Stage("ingest"):
        panel = load_panel(cfg.input, cfg.missing)
    reports = []
    for interval in cfg.intervals:
        reports.append(pipeline_report(cfg, panel, interval, out))
        log.info("interval %d done", interval)
    return reports


def run(cfg: RunConfig) -> int:
    """Execute ``cfg``; return the process exit status."""
    try:
        cfg.validate()
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        if cfg.command == "validate":
            cmd_validate(cfg, out)
        elif cfg.command == "aic":
            cmd_aic(cfg, out)
        elif cfg.command in ("dfa", "mfdfa"):
            cmd_dfa(cfg, out, cfg.command == "mfdfa")
        elif cfg.command == "fit":
            cmd_fit(cfg, out)
        elif cfg.command == "spectrum":
            cmd_spectrum(cfg, out)
        elif cfg.command == "synth":
            cmd_synth(cfg, out)
        else:
            cmd_pipeline(cfg, out)
    except StageError as exc:
        print(f"aicmf: error in {exc.stage}: {exc.error}", file=sys.stderr)
        return exc.error.exit_code
    except AicmfError as exc:
        print(f"aicmf: error in config: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


_RANGE_FLAGS = ("--q", "--scales", "--fit-range")


def _join_range_flags(argv):
    # "--q -2:4:0.25" would otherwise be read as an unknown option.
    out, it = [], iter(argv)
    for arg in it:
        if arg in _RANGE_FLAGS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = build_parser().parse_args(_join_range_flags(argv))
        logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                            format="%(name)s: %(message)s")
        cfg = config_from_args(ns)
    except AicmfError as exc:
        print(f"aicmf: error in config: {exc}", file=sys.stderr)
        return exc.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
