"""Tests for geosched.cli module."""
