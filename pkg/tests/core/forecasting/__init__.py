"""Tests for geosched.core.forecasting."""
