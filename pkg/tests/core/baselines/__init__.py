"""Tests for geosched.core.baselines."""
