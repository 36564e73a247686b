"""Tests for geosched.core.scheduler."""
