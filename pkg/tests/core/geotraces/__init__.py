"""Tests for geosched.core.geotraces."""
