"""
Trace CSV reading and writing.

One file holds all locations, one row per (timestamp, location):

    timestamp,location,price_usd_per_kwh,temperature_c
    2015-01-01T00:00:00,us-east,0.1,3.5
"""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import Union

import pandas as pd

from geosched.constants import TRACE_CSV_HEADER
from geosched.core.geotraces.models import GeoTrace, GeoTraces
from geosched.core.model.timeseries import TimeSeries
from geosched.exceptions import (
    TraceFormatError,
    TraceGapError,
    TraceOrderError,
)

logger = logging.getLogger(__name__)

# Header is line 1
_FIRST_DATA_LINE = 2


def _parse_float(path: str, value: str, column: str, line: int) -> float:
    try:
        number = float(value)
    except ValueError:
        raise TraceFormatError(path, f"{column} is not a number: {value!r}", line) from None
    if number != number:
        raise TraceFormatError(path, f"{column} is NaN", line)
    return number


def load_traces(path: Union[str, Path]) -> dict[str, GeoTrace]:
    """
    Load one GeoTrace per location from a trace CSV.

    Args:
        path: CSV file with header timestamp,location,price_usd_per_kwh,temperature_c.

    Returns:
        Mapping of location key to GeoTrace, in order of first appearance.

    Raises:
        TraceFormatError: Missing columns, unparsable or negative values.
        TraceOrderError: Timestamps of a location not strictly increasing.
        TraceGapError: Non-uniform spacing or locations with different indexes.
    """
    path = Path(path)
    source = str(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise TraceFormatError(source, str(e)) from e

    missing = [column for column in TRACE_CSV_HEADER if column not in frame.columns]
    if missing:
        raise TraceFormatError(source, f"missing column(s): {', '.join(missing)}")
    if frame.empty:
        raise TraceFormatError(source, "no data rows")

    rows: dict[str, tuple[list[datetime], list[float], list[float]]] = {}
    for offset, record in enumerate(frame[TRACE_CSV_HEADER].itertuples(index=False)):
        line = offset + _FIRST_DATA_LINE
        raw_ts, location, raw_price, raw_temp = record
        if not location:
            raise TraceFormatError(source, "empty location", line)
        try:
            timestamp = datetime.fromisoformat(raw_ts)
        except ValueError:
            raise TraceFormatError(source, f"bad timestamp: {raw_ts!r}", line) from None
        price = _parse_float(source, raw_price, "price_usd_per_kwh", line)
        temperature = _parse_float(source, raw_temp, "temperature_c", line)
        if price < 0:
            raise TraceFormatError(source, f"negative price {price}", line)

        stamps, prices, temps = rows.setdefault(location, ([], [], []))
        if stamps and timestamp <= stamps[-1]:
            raise TraceOrderError(location, timestamp.isoformat())
        stamps.append(timestamp)
        prices.append(price)
        temps.append(temperature)

    traces: dict[str, GeoTrace] = {}
    reference: tuple[datetime, ...] = ()
    for location, (stamps, prices, temps) in rows.items():
        try:
            trace = GeoTrace(
                location,
                TimeSeries(tuple(stamps), tuple(prices)),
                TimeSeries(tuple(stamps), tuple(temps)),
            )
        except ValueError as e:
            raise TraceGapError(location, str(e)) from e
        if reference and trace.index != reference:
            raise TraceGapError(location, "index differs from the other locations")
        reference = trace.index
        traces[location] = trace

    logger.info(f"Loaded {len(traces)} trace(s) of {len(reference)} steps from {path}")
    return traces


def write_traces(traces: GeoTraces, path: Union[str, Path]) -> Path:
    """
    Write traces in the format read by load_traces.

    Values are written with ``repr`` so that loading the file back gives
    identical floats.

    Returns:
        The written path.
    """
    path = Path(path)
    records = [
        {
            "timestamp": ts.isoformat(),
            "location": key,
            "price_usd_per_kwh": repr(float(price)),
            "temperature_c": repr(float(temp)),
        }
        for key, trace in traces.items()
        for ts, price, temp in zip(trace.index, trace.prices, trace.temperatures)
    ]
    frame = pd.DataFrame.from_records(records, columns=TRACE_CSV_HEADER)
    if not frame.empty:
        frame = frame.sort_values("timestamp", kind="stable")

    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8")
    logger.info(f"Wrote {len(traces)} trace(s) to {path}")
    return path
