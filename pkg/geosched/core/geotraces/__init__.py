"""Geotemporal inputs: electricity price and temperature traces, cooling overhead."""

from geosched.core.geotraces.cooling import DEFAULT_ANCHORS, PPueModel, ppue
from geosched.core.geotraces.io import load_traces, write_traces
from geosched.core.geotraces.models import GeoTrace, GeoTraces, location_inputs
from geosched.core.geotraces.synthetic import TraceParams, synthesize_traces

__all__ = [
    "DEFAULT_ANCHORS",
    "GeoTrace",
    "GeoTraces",
    "PPueModel",
    "TraceParams",
    "load_traces",
    "location_inputs",
    "ppue",
    "synthesize_traces",
    "write_traces",
]
