"""Hexagonal tri-sector site layout and UE-to-antenna angles.

Conventions used throughout the package:

* the central site sits at the origin and every cell is a regular hexagon of
  apothem ``isd / 2`` with one edge facing +x (neighbour sites at multiples
  of 60 degrees);
* sector boresights default to 30, 150 and 270 degrees, i.e. each sector
  points at a vertex of its own cell, between two neighbour sites;
* antenna ``j`` is sector ``j % 3`` of site ``j // 3``, so antennas 0, 1, 2
  belong to the central site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

SECTOR_AZIMUTHS_DEG = (30.0, 150.0, 270.0)
SQRT3 = math.sqrt(3.0)


def wrap_angle(angle):
    """Wrap an angle (radians, scalar or array) to (-pi, pi]; -pi maps to +pi."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"position must be finite, got ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True, eq=False)
class NetworkLayout:
    """Site coordinates and per-site sector boresights of a hexagonal network.

    ``sites`` has shape (S, 2) in metres and ``sector_azimuths`` shape (S, 3)
    in radians. Arrays are made read-only so a layout can be shared between
    threads.
    """

    isd: float
    rings: int
    sites: np.ndarray
    sector_azimuths: np.ndarray
    rho_s: float = field(init=False)

    def __post_init__(self):
        sites = np.array(self.sites, dtype=float)
        azimuths = np.array(self.sector_azimuths, dtype=float)
        if sites.ndim != 2 or sites.shape[1] != 2:
            raise DomainError("sites must have shape (S, 2)")
        if azimuths.shape != (sites.shape[0], 3):
            raise DomainError("sector_azimuths must have shape (S, 3)")
        sites.setflags(write=False)
        azimuths.setflags(write=False)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "sector_azimuths", azimuths)
        object.__setattr__(self, "rho_s", site_density(self.isd))

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    @property
    def n_antennas(self) -> int:
        return 3 * self.n_sites

    @property
    def antenna_positions(self) -> np.ndarray:
        return np.repeat(self.sites, 3, axis=0)

    @property
    def antenna_azimuths(self) -> np.ndarray:
        return self.sector_azimuths.reshape(-1)


def hex_lattice(isd: float, rings: int, azimuth_offset: float = 0.0) -> NetworkLayout:
    """Build a hexagonal network of ``1 + 3 * rings * (rings + 1)`` sites.

    Sites are ordered by ring index, then by polar angle in [0, 2*pi)
    counterclockwise from +x. ``azimuth_offset`` (radians) rotates every
    sector boresight by the same amount.
    """
    if not isd > 0:
        raise DomainError(f"isd must be positive, got {isd}")
    if rings < 0:
        raise DomainError(f"rings must be >= 0, got {rings}")
    rings = int(rings)

    entries = []
    for q in range(-rings, rings + 1):
        for r in range(max(-rings, -q - rings), min(rings, -q + rings) + 1):
            ring = max(abs(q), abs(r), abs(q + r))
            x = isd * (q + 0.5 * r)
            y = isd * (SQRT3 / 2.0) * r
            angle = math.atan2(y, x) % (2.0 * math.pi) if ring else 0.0
            entries.append((ring, round(angle, 12), x, y))
    entries.sort(key=lambda e: (e[0], e[1]))

    sites = np.array([(e[2], e[3]) for e in entries], dtype=float)
    base = np.radians(SECTOR_AZIMUTHS_DEG) + azimuth_offset
    azimuths = np.tile(wrap_angle(base), (sites.shape[0], 1))
    return NetworkLayout(isd=float(isd), rings=rings, sites=sites, sector_azimuths=azimuths)


def horizontal_angle(ue, site, azimuth):
    """Angle between the site->UE bearing and the antenna boresight, in (-pi, pi].

    ``ue`` and ``site`` may be :class:`Position` objects or arrays whose last
    axis holds (x, y); broadcasting applies.
    """
    ue = np.asarray(tuple(ue) if isinstance(ue, Position) else ue, dtype=float)
    site = np.asarray(tuple(site) if isinstance(site, Position) else site, dtype=float)
    dx = ue[..., 0] - site[..., 0]
    dy = ue[..., 1] - site[..., 1]
    if np.any((dx == 0.0) & (dy == 0.0)):
        raise DomainError("UE coincides with the antenna site; horizontal angle undefined")
    return wrap_angle(np.arctan2(dy, dx) - azimuth)


def vertical_angle(r, h):
    """Depression angle arctan(h / r) from the antenna to a UE at ground distance r."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("ground distance must be > 0 (UE at the mast base)")
    if np.any(np.asarray(h) <= 0.0):
        raise DomainError("antenna height must be > 0")
    phi = np.arctan(h / r)
    return float(phi) if phi.ndim == 0 else phi


def site_density(isd: float) -> float:
    """Sites per square metre of a hexagonal lattice with spacing ``isd``."""
    if not isd > 0:
        raise DomainError(f"isd must be positive, got {isd}")
    return 2.0 / (SQRT3 * isd * isd)


def hex_cell_polygon(isd: float) -> list[Position]:
    """Vertices (counterclockwise from 30 degrees) of the central site's cell."""
    if not isd > 0:
        raise DomainError(f"isd must be positive, got {isd}")
    circumradius = isd / SQRT3
    return [
        Position(circumradius * math.cos(math.radians(30 + 60 * k)),
                 circumradius * math.sin(math.radians(30 + 60 * k)))
        for k in range(6)
    ]


def in_hex_cell(x, y, isd: float):
    """Strict point-in-cell test for the central hexagon (vectorised)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = isd / 2.0
    u = 0.5 * x
    v = (SQRT3 / 2.0) * y
    return (np.abs(x) < a) & (np.abs(u + v) < a) & (np.abs(v - u) < a)


def hex_cell_bounds(isd: float) -> tuple[float, float]:
    """Half-width and half-height of the cell's bounding box."""
    return isd / 2.0, isd / SQRT3
