"""Tests for geosched.core.fitness."""
