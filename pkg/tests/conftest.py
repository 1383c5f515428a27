"""Shared test helpers."""

from __future__ import annotations

import numpy as np


def sample_coords(chart, n: int, seed: int, margin: float = 1e-3) -> np.ndarray:
    """Seeded uniform draws from the chart, padded away from the bounds.

    The relative margin keeps theta samples out of the pole band where the
    built-in gauge section is singular.
    """
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in chart.bounds])
    hi = np.array([b[1] for b in chart.bounds])
    pad = margin * (hi - lo)
    return lo + pad + (hi - lo - 2 * pad) * rng.random((n, chart.dim))
