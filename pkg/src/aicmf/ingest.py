"""Loading wide CSV price panels.

The expected layout is one row per trading day and one column per symbol::

    date,AAA,BBB
    2001-01-02,10.5,33.1
    2001-01-03,10.7,32.9

Blank cells are missing values.  Dates are kept for reporting only; every
downstream computation treats rows as evenly spaced trading days.
"""
from __future__ import annotations

import csv
import datetime as dt
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError

log = logging.getLogger(__name__)

POLICIES = ("strict", "drop-rows")


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Rectangular, gap-free matrix of strictly positive daily prices.

    Attributes
    ----------
    dates : tuple of datetime.date
        Strictly increasing trading days.
    symbols : tuple of str
        Unique stock identifiers, one per column.
    prices : ndarray, shape (n_dates, n_symbols)
        Read-only price matrix.
    dropped_rows : int
        Number of dates removed by the ``drop-rows`` policy.
    """

    dates: tuple
    symbols: tuple
    prices: np.ndarray
    dropped_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        prices = np.array(self.prices, dtype=float)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "symbols", tuple(str(s) for s in self.symbols))
        if prices.ndim != 2 or prices.shape != (len(self.dates), len(self.symbols)):
            raise DataError(
                f"price matrix shape {prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.symbols)} symbols"
            )
        if len(set(self.symbols)) != len(self.symbols):
            raise DataError("duplicate symbols in panel")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise DataError("dates must be strictly increasing without duplicates")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise DataError("non-positive price: all prices must be finite and > 0")
        if len(self.dates) < 2 or len(self.symbols) < 1:
            raise DataError("panel needs at least 2 dates and 1 symbol")
        prices.setflags(write=False)
        object.__setattr__(self, "prices", prices)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    def column(self, symbol: str) -> np.ndarray:
        try:
            return self.prices[:, self.symbols.index(symbol)]
        except ValueError:
            raise DataError(f"unknown symbol {symbol!r}") from None

    def __eq__(self, other):
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.symbols == other.symbols
            and np.array_equal(self.prices, other.prices)
        )

    __hash__ = None


def _parse_date(text: str, lineno: int) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise DataError(f"line {lineno}: invalid ISO date {text!r}") from None


def load_panel(path, policy: str = "strict") -> PricePanel:
    """Read a wide price CSV into a :class:`PricePanel`.

    Parameters
    ----------
    path : str or Path
        CSV file whose first header cell is ``date``.
    policy : {"strict", "drop-rows"}
        ``strict`` rejects any blank or invalid cell.  ``drop-rows`` removes
        every date that has a blank or invalid cell and records the count in
        ``PricePanel.dropped_rows``.

    Raises
    ------
    DataError
        Missing file, malformed header, bad cells under ``strict``, or too
        little data left after cleaning.
    """
    if policy not in POLICIES:
        raise DataError(f"unknown missing-data policy {policy!r}; expected one of {POLICIES}")
    path = Path(path)
    if not path.is_file():
        raise DataError(f"file not found: {path}")

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if not header or header[0] != "date":
            raise DataError(f"{path}: malformed header, first cell must be 'date'")
        symbols = header[1:]
        if not symbols or any(not s for s in symbols):
            raise DataError(f"{path}: malformed header, empty symbol name")
        if len(set(symbols)) != len(symbols):
            raise DataError(f"{path}: malformed header, duplicate symbols")

        dates, rows, dropped = [], [], 0
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(header)} cells, got {len(record)}"
                )
            day = _parse_date(record[0], lineno)
            values, problem = [], None
            for sym, cell in zip(symbols, record[1:]):
                cell = cell.strip()
                if not cell:
                    problem = f"missing price for {sym}"
                    break
                try:
                    value = float(cell)
                except ValueError:
                    problem = f"non-numeric price {cell!r} for {sym}"
                    break
                if not math.isfinite(value) or value <= 0:
                    problem = f"non-positive price {cell!r} for {sym}"
                    break
                values.append(value)
            if problem is not None:
                if policy == "strict":
                    raise DataError(f"{path}:{lineno}: {problem}")
                dropped += 1
                continue
            dates.append(day)
            rows.append(values)

    if dropped:
        log.info("dropped %d row%s with missing or invalid prices", dropped, "" if dropped == 1 else "s")
    if len(dates) < 2:
        raise DataError(f"{path}: fewer than 2 dates after cleaning")
    return PricePanel(dates, symbols, np.array(rows, dtype=float), dropped_rows=dropped)


def write_panel(panel: PricePanel, path) -> None:
    """Write ``panel`` in the same wide CSV layout that :func:`load_panel` reads.

    Prices use ``repr`` formatting so a reload reproduces them bit for bit.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", *panel.symbols])
        for day, row in zip(panel.dates, panel.prices):
            writer.writerow([day.isoformat(), *(repr(float(v)) for v in row)])
