"""Brownian sheet on a grid: the limit object the normalized fields are
compared against."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import GridSpec


@dataclass
class SheetSample:
    grid: GridSpec
    values: np.ndarray


def sheet_covariance(s: tuple[float, float], t: tuple[float, float]) -> float:
    """Covariance of the sheet at two points of the unit square:
    min(s1, t1) * min(s2, t2)."""
    for c in (*s, *t):
        if not (0.0 <= c <= 1.0):
            raise ValueError("points must lie in the unit square")
    return min(s[0], t[0]) * min(s[1], t[1])


def sample_sheet(grid: GridSpec, rng: np.random.Generator) -> SheetSample:
    """One sheet realization at the grid points.

    Cell increments are independent centred Gaussians with variance equal to
    the cell area; values are their two-dimensional cumulative sums, so the
    lower boundary is exactly zero and grid-point covariances equal
    sheet_covariance exactly.
    """
    t1g = np.asarray(grid.t1_values)
    t2g = np.asarray(grid.t2_values)
    sd = np.sqrt(np.outer(np.diff(t1g), np.diff(t2g)))
    cells = rng.standard_normal(sd.shape) * sd
    values = np.zeros((len(t1g), len(t2g)))
    values[1:, 1:] = cells.cumsum(axis=0).cumsum(axis=1)
    return SheetSample(grid, values)
