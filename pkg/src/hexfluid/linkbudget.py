"""Path gain, per-antenna received power and the discrete-sum downlink SINR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import AntennaConfig, max_gain_g0, pattern_db
from .errors import DomainError
from .geometry import NetworkLayout, Position, wrap_angle

# Thermal noise of a 15 kHz sub-carrier: -174 dBm/Hz + 10 log10(15 kHz), in watts.
DEFAULT_BANDWIDTH_HZ = 15_000.0
DEFAULT_NOISE_W = 10.0 ** ((-174.0 + 10.0 * math.log10(DEFAULT_BANDWIDTH_HZ)) / 10.0) / 1000.0

CHUNK = 2048


@dataclass(frozen=True)
class RadioConfig:
    """Per sub-carrier radio parameters.

    ``g0`` is the maximum antenna gain; leave it ``None`` to derive it from
    the antenna pattern with :func:`hexfluid.antenna.max_gain_g0`.
    """

    txPower: float = 1.0
    pathConstant: float = 1e-4
    pathExponent: float = 3.5
    noise: float = DEFAULT_NOISE_W
    bandwidth: float = DEFAULT_BANDWIDTH_HZ
    g0: float | None = None

    def __post_init__(self):
        if not self.pathExponent > 2:
            raise DomainError(f"pathExponent must be > 2, got {self.pathExponent}")
        if not self.txPower > 0:
            raise DomainError(f"txPower must be > 0, got {self.txPower}")
        if not self.pathConstant > 0:
            raise DomainError(f"pathConstant must be > 0, got {self.pathConstant}")
        if not self.noise >= 0:
            raise DomainError(f"noise must be >= 0, got {self.noise}")
        if not self.bandwidth > 0:
            raise DomainError(f"bandwidth must be > 0, got {self.bandwidth}")
        if self.g0 is not None and not self.g0 >= 1:
            raise DomainError(f"g0 must be >= 1, got {self.g0}")
        values = (self.txPower, self.pathConstant, self.pathExponent, self.noise, self.bandwidth)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("radio parameters must be finite")


def resolve_g0(radio: RadioConfig, ant: AntennaConfig) -> float:
    return radio.g0 if radio.g0 is not None else max_gain_g0(ant)


def path_gain(distance3d, radio: RadioConfig):
    d = np.asarray(distance3d, dtype=float)
    if np.any(d <= 0):
        raise DomainError("distance must be > 0")
    g = radio.pathConstant * d ** (-radio.pathExponent)
    return float(g) if g.ndim == 0 else g


def _link_terms(ue_xy: np.ndarray, positions: np.ndarray, azimuths: np.ndarray,
                ant: AntennaConfig):
    """Ground distance, horizontal and vertical angle for every (UE, antenna) pair."""
    dx = ue_xy[:, None, 0] - positions[None, :, 0]
    dy = ue_xy[:, None, 1] - positions[None, :, 1]
    r = np.hypot(dx, dy)
    if np.any(r == 0.0):
        raise DomainError("UE coincides with an antenna site")
    theta = wrap_angle(np.arctan2(dy, dx) - azimuths[None, :])
    phi = np.arctan(ant.height / r)
    return r, theta, phi


def _powers(r, theta, phi, ant: AntennaConfig, radio: RadioConfig, g0: float):
    d2 = r * r + ant.height * ant.height
    return (g0 * radio.txPower * radio.pathConstant
            * d2 ** (-radio.pathExponent / 2.0)
            * 10.0 ** (np.asarray(pattern_db(theta, phi, ant)) / 10.0))


def received_power(ue: Position, antenna_index: int, layout: NetworkLayout,
                   ant: AntennaConfig, radio: RadioConfig) -> float:
    """Power received by ``ue`` from one antenna of the layout (watts)."""
    if not 0 <= antenna_index < layout.n_antennas:
        raise DomainError(f"antenna index {antenna_index} out of range")
    site = layout.sites[antenna_index // 3]
    azimuth = layout.sector_azimuths[antenna_index // 3, antenna_index % 3]
    xy = np.array([tuple(ue)], dtype=float)
    r, theta, phi = _link_terms(xy, site[None, :], np.array([azimuth]), ant)
    return float(_powers(r, theta, phi, ant, radio, resolve_g0(radio, ant))[0, 0])


def select_serving(powers3: np.ndarray, theta3: np.ndarray) -> np.ndarray:
    """Best-power sector among the central site's three antennas.

    Exact power ties, which are common once the pattern saturates at its
    floor, go to the sector whose boresight is angularly closest and then to
    the lowest index.
    """
    best = powers3.max(axis=1, keepdims=True)
    off = np.where(powers3 == best, np.abs(theta3), np.inf)
    return np.argmin(off, axis=1)


def _sinr_chunk(xy, layout, ant, radio, g0, noise):
    r, theta, phi = _link_terms(xy, layout.antenna_positions, layout.antenna_azimuths, ant)
    p = _powers(r, theta, phi, ant, radio, g0)
    serving = select_serving(p[:, :3], theta[:, :3])
    rows = np.arange(xy.shape[0])
    signal = p[rows, serving]
    p[rows, serving] = 0.0
    interference = p.sum(axis=1)
    return signal / (interference + noise), serving


def discrete_sinr_many(ue_xy, layout: NetworkLayout, ant: AntennaConfig,
                       radio: RadioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`discrete_sinr` for an (n, 2) array of UE positions."""
    xy = np.atleast_2d(np.asarray(ue_xy, dtype=float))
    g0 = resolve_g0(radio, ant)
    sinr = np.empty(xy.shape[0])
    serving = np.empty(xy.shape[0], dtype=np.int64)
    for start in range(0, xy.shape[0], CHUNK):
        sl = slice(start, start + CHUNK)
        sinr[sl], serving[sl] = _sinr_chunk(xy[sl], layout, ant, radio, g0, radio.noise)
    return sinr, serving


def discrete_sinr(ue: Position, layout: NetworkLayout, ant: AntennaConfig,
                  radio: RadioConfig) -> tuple[float, int]:
    """SINR of a UE served by the best central sector; every other antenna interferes."""
    sinr, serving = discrete_sinr_many(np.array([tuple(ue)]), layout, ant, radio)
    return float(sinr[0]), int(serving[0])


def central_serving(ue_xy, layout: NetworkLayout, ant: AntennaConfig, radio: RadioConfig):
    """Serving sector, ground distance and horizontal angle to its boresight.

    Uses the same selection rule as :func:`discrete_sinr_many`, restricted to
    the central site's antennas.
    """
    xy = np.atleast_2d(np.asarray(ue_xy, dtype=float))
    r, theta, phi = _link_terms(xy, layout.antenna_positions[:3], layout.antenna_azimuths[:3], ant)
    p = _powers(r, theta, phi, ant, radio, resolve_g0(radio, ant))
    serving = select_serving(p, theta)
    rows = np.arange(xy.shape[0])
    return serving, r[rows, serving], theta[rows, serving]
