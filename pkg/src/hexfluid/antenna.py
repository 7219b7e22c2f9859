"""3D sector antenna pattern with downtilt, its far-field reduction and G0.

All pattern values are signed dB, so attenuations are <= 0 and the linear
value is ``10 ** (dB / 10)``. Angles are radians: ``theta`` is the
horizontal angle from boresight and ``phi`` the depression angle below the
horizon (positive towards the ground).

Each function accepts scalars or numpy arrays and returns the same kind.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError

DEFAULT_AM_DB = 21.0


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def db_to_linear(db):
    return _out(np.power(10.0, np.asarray(db, dtype=float) / 10.0))


@dataclass(frozen=True)
class AntennaConfig:
    """Parameters of one sector antenna.

    theta3dB, phi3dB, phiTilt are radians; Am is the attenuation floor in
    positive dB; height in metres. ``math.inf`` beamwidths give a flat 0 dB
    pattern, which is how the isotropic reference case is expressed.
    """

    theta3dB: float
    phi3dB: float
    phiTilt: float
    Am: float = DEFAULT_AM_DB
    height: float = 30.0

    def __post_init__(self):
        for name in ("theta3dB", "phi3dB", "Am", "height"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be > 0, got {value}")
        if not math.isfinite(self.phiTilt):
            raise DomainError(f"phiTilt must be finite, got {self.phiTilt}")
        if not (math.isfinite(self.Am) and math.isfinite(self.height)):
            raise DomainError("Am and height must be finite")

    @property
    def valid3D(self) -> bool:
        # Beam confined to the own cell only when the tilt is at least the vertical aperture.
        return self.phiTilt >= self.phi3dB

    @classmethod
    def from_degrees(cls, theta3dB: float, phi3dB: float, phiTilt: float,
                     Am: float = DEFAULT_AM_DB, height: float = 30.0) -> AntennaConfig:
        return cls(math.radians(theta3dB), math.radians(phi3dB), math.radians(phiTilt), Am, height)

    @classmethod
    def isotropic(cls, height: float = 30.0, Am: float = DEFAULT_AM_DB) -> AntennaConfig:
        return cls(math.inf, math.inf, 0.0, Am, height)


def horizontal_attenuation_db(theta, cfg: AntennaConfig):
    theta = np.asarray(theta, dtype=float)
    return _out(-np.minimum(12.0 * (theta / cfg.theta3dB) ** 2, cfg.Am))


def vertical_attenuation_db(phi, cfg: AntennaConfig):
    phi = np.asarray(phi, dtype=float)
    return _out(-np.minimum(12.0 * ((phi - cfg.phiTilt) / cfg.phi3dB) ** 2, cfg.Am))


def pattern_db(theta, phi, cfg: AntennaConfig):
    """Combined pattern: the two planar attenuations summed and floored at -Am."""
    total = np.asarray(horizontal_attenuation_db(theta, cfg)) + vertical_attenuation_db(phi, cfg)
    return _out(-np.minimum(-total, cfg.Am))


def pattern_linear(theta, phi, cfg: AntennaConfig):
    return db_to_linear(pattern_db(theta, phi, cfg))


def gv_db(cfg: AntennaConfig) -> float:
    """Vertical attenuation seen at the horizon, shared by all distant interferers."""
    return float(-min(12.0 * (cfg.phiTilt / cfg.phi3dB) ** 2, cfg.Am))


def b_clip_db(cfg: AntennaConfig) -> float:
    """Floor level of the horizontal-only far-field pattern, ``Am + gv_db`` (>= 0)."""
    return cfg.Am + gv_db(cfg)


def b_db(theta, cfg: AntennaConfig):
    """Horizontal far-field pattern once the vertical part is factored out as gv_db."""
    theta = np.asarray(theta, dtype=float)
    return _out(-np.minimum(-np.asarray(horizontal_attenuation_db(theta, cfg)), b_clip_db(cfg)))


def _b_kink(cfg: AntennaConfig) -> float:
    # |theta| where 12 (theta / theta3dB)^2 reaches the B floor.
    return cfg.theta3dB * math.sqrt(b_clip_db(cfg) / 12.0)


def _quad(func, a, b, epsrel, required=1e-8):
    value, abserr = integrate.quad(func, a, b, epsabs=0.0, epsrel=epsrel, limit=200,
                                   full_output=True)[:2]
    if abserr > required * abs(value):
        raise NumericalError(f"quadrature on [{a}, {b}] did not converge (abserr={abserr:g})")
    return value


@functools.lru_cache(maxsize=256)
def b_integral_linear(cfg: AntennaConfig, epsrel: float = 1e-12) -> float:
    """Integral of 10**(B_dB/10) over a full turn of horizontal angle."""

    def integrand(t):
        return 10.0 ** (b_db(t, cfg) / 10.0)

    kink = min(_b_kink(cfg), math.pi)
    # Even integrand: integrate [0, pi] in the two smooth pieces and double.
    total = _quad(integrand, 0.0, kink, epsrel) if kink > 0 else 0.0
    if kink < math.pi:
        total += _quad(integrand, kink, math.pi, epsrel)
    return 2.0 * total


def solid_angle_integral(gain, azimuth_points=(), depression_points=None,
                         epsrel: float = 1e-10, required: float = 1e-7) -> float:
    """Integrate a linear pattern over the unit sphere.

    ``gain(theta, phi)`` takes azimuth theta in (-pi, pi] and depression phi in
    [-pi/2, pi/2]; the area element is ``cos(phi) dphi dtheta``. Breakpoints
    mark kinks or jumps; ``depression_points`` may be a callable of theta.
    """

    def inner(theta):
        pts = depression_points(theta) if callable(depression_points) else depression_points
        pts = sorted(p for p in (pts or ()) if -math.pi / 2 < p < math.pi / 2)
        return _split_quad(lambda p: gain(theta, p) * math.cos(p), -math.pi / 2, math.pi / 2,
                           pts, epsrel, required)

    az = sorted(p for p in azimuth_points if -math.pi < p < math.pi)
    return _split_quad(inner, -math.pi, math.pi, az, epsrel, required)


def _split_quad(func, a, b, points, epsrel, required):
    edges = [a, *points, b]
    return sum(_quad(func, lo, hi, epsrel, required)
               for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo)


@functools.lru_cache(maxsize=256)
def max_gain_g0(cfg: AntennaConfig) -> float:
    """Maximum gain: 4*pi over the solid-angle integral of the linear pattern."""
    am, t3, p3, tilt = cfg.Am, cfg.theta3dB, cfg.phi3dB, cfg.phiTilt
    theta_sat = t3 * math.sqrt(am / 12.0)

    def dep_points(theta):
        # Where the vertical part saturates, and where the summed pattern hits the floor.
        ah = horizontal_attenuation_db(theta, cfg)
        pts = []
        for level in (am, am + ah):
            if level > 0 and math.isfinite(p3):
                half = p3 * math.sqrt(level / 12.0)
                pts += [tilt - half, tilt + half]
        return pts

    gain = lambda theta, phi: 10.0 ** (pattern_db(theta, phi, cfg) / 10.0)
    total = solid_angle_integral(gain, azimuth_points=(-theta_sat, 0.0, theta_sat),
                                 depression_points=dep_points)
    if not total > 0:
        raise NumericalError("pattern solid-angle integral is not positive")
    return 4.0 * math.pi / total
