"""geosched test suite."""
