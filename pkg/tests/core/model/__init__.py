"""Tests for geosched.core.model."""
