"""Tests for geosched.core modules."""
