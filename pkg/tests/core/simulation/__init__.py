"""Tests for geosched.core.simulation."""
