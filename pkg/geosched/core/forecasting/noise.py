"""
Forecast error injection.

Used in "oracle + noise" mode: ground truth over the window is distorted
so that the effect of forecast quality on decisions can be studied while
realized costs stay on ground truth.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from geosched.core.forecasting.models import ErrorModel
from geosched.core.model.timeseries import TimeSeries
from geosched.core.rng import Seed, make_rng


def perturb(
    actual: TimeSeries[float],
    model: ErrorModel,
    seed: Optional[Seed] = None,
) -> TimeSeries[float]:
    """
    Apply multiplicative Gaussian error: ``actual_t * max(0, 1 + N(0, sigma))``.

    Args:
        actual: Ground-truth series.
        model: Error model; ``sigma`` 0 returns ``actual`` unchanged.
        seed: Stream to draw from; defaults to ``model.seed``.

    Returns:
        Perturbed series over the same index. Non-negative input stays
        non-negative.
    """
    if model.sigma == 0:
        return actual
    rng = make_rng(model.seed if seed is None else seed)
    factors = np.maximum(0.0, 1.0 + rng.normal(0.0, model.sigma, len(actual)))
    values = actual.to_numpy() * factors
    return actual.with_values(float(v) for v in values)


def perturb_temperatures(
    actual: TimeSeries[float],
    model: ErrorModel,
    seed: Optional[Seed] = None,
) -> TimeSeries[float]:
    """Apply additive Gaussian error of ``model.temperature_sigma`` °C."""
    if model.temperature_sigma == 0:
        return actual
    rng = make_rng(model.seed if seed is None else seed)
    values = actual.to_numpy() + rng.normal(0.0, model.temperature_sigma, len(actual))
    return actual.with_values(float(v) for v in values)
