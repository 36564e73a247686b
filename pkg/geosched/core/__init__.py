"""
geosched core library modules.

This package contains the cloud model, geotemporal traces, forecasting,
the fitness function, the hybrid genetic scheduler, the baseline
controllers and the simulation engine.
"""
