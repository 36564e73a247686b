"""Scenario files bundled with geosched."""
