"""SINR distributions, their distances, map statistics and Shannon throughput."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .simulator import Scenario, SinrMap, fluid_sinr_at, sample_positions


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous step CDF over SINR values in dB."""

    sortedValues: np.ndarray

    def __post_init__(self):
        values = np.array(self.sortedValues, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("an empirical CDF needs at least one value")
        if np.any(np.diff(values) < 0):
            raise DomainError("sortedValues must be ascending")
        values.setflags(write=False)
        object.__setattr__(self, "sortedValues", values)

    @classmethod
    def from_db(cls, values_db) -> EmpiricalCdf:
        return cls(np.sort(np.asarray(values_db, dtype=float).ravel()))

    @property
    def n(self) -> int:
        return self.sortedValues.size

    def __call__(self, x):
        """F(x) = fraction of values <= x."""
        f = np.searchsorted(self.sortedValues, np.asarray(x, dtype=float), side="right") / self.n
        return float(f) if np.ndim(f) == 0 else f


def empirical_cdf(samples) -> EmpiricalCdf:
    """CDF in dB of linear SINR samples."""
    s = np.asarray(samples, dtype=float).ravel()
    if s.size == 0:
        raise DomainError("empirical_cdf needs at least one sample")
    if np.any(~(s > 0)):
        raise DomainError("SINR samples must be positive")
    return EmpiricalCdf.from_db(10.0 * np.log10(s))


def analytic_cdf(scenario: Scenario, nPoints: int | None = None,
                 seed: int | None = None) -> EmpiricalCdf:
    """Distribution of the fluid SINR over uniform drops in the central cell.

    Uses the simulator's sampler, so with the same seed the UE positions are
    exactly those of :func:`hexfluid.simulator.simulate`.
    """
    n = scenario.samples if nPoints is None else nPoints
    if n < 1:
        raise DomainError(f"nPoints must be >= 1, got {n}")
    xy = sample_positions(scenario, seed=seed, n=n)
    sinr, _ = fluid_sinr_at(xy, scenario)
    return empirical_cdf(sinr)


def map_cdf(m: SinrMap) -> EmpiricalCdf:
    """Area-weighted CDF of a raster (all pixels share one area)."""
    return EmpiricalCdf.from_db(m.values[m.mask])


def ks_distance(a: EmpiricalCdf, b: EmpiricalCdf) -> float:
    """Exact sup-norm distance between two step CDFs."""
    points = np.union1d(a.sortedValues, b.sortedValues)
    return float(np.max(np.abs(a(points) - b(points))))


def quantile(cdf: EmpiricalCdf, p: float) -> float:
    """Smallest value v with F(v) >= p."""
    if not 0 < p <= 1:
        raise DomainError(f"p must be in (0, 1], got {p}")
    # F(v_k) >= (k + 1) / n for the k-th sorted value; the guard absorbs p * n rounding.
    k = int(np.ceil(p * cdf.n - 1e-9)) - 1
    return float(cdf.sortedValues[min(max(k, 0), cdf.n - 1)])


def shannon_throughput(sinr, bandwidth: float):
    """Shannon bound W * log2(1 + SINR) in bit/s."""
    g = np.asarray(sinr, dtype=float)
    if np.any(g < 0):
        raise DomainError("SINR must be >= 0")
    d = bandwidth * np.log2(1.0 + g)
    return float(d) if d.ndim == 0 else d


class MapDiffStats(NamedTuple):
    meanAbs: float
    maxAbs: float
    rmse: float


def map_diff_stats(a: SinrMap, b: SinrMap) -> MapDiffStats:
    """Absolute dB differences over pixels present in both rasters."""
    same_grid = (a.width == b.width and a.height == b.height
                 and np.isclose(a.resolution, b.resolution, rtol=1e-12, atol=0)
                 and np.isclose(a.originX, b.originX, rtol=1e-12, atol=1e-9)
                 and np.isclose(a.originY, b.originY, rtol=1e-12, atol=1e-9))
    if not same_grid:
        raise DomainError("maps have different grid geometry")
    if not np.array_equal(a.mask, b.mask):
        raise DomainError("maps have different absent-cell masks")
    diff = np.abs(a.values[a.mask] - b.values[b.mask])
    if diff.size == 0:
        raise DomainError("maps have no present cells")
    return MapDiffStats(float(diff.mean()), float(diff.max()), float(np.sqrt(np.mean(diff ** 2))))
