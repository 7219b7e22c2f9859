"""Closed-form fluid interference and SINR for a tri-sector hexagonal network.

Sites beyond the serving one are replaced by a continuum of density
``3 * rho_s`` antennas per square metre, each radiating towards the UE with
the far-field pattern ``G_v * B(theta)``. The continuum starts at distance
``isd - r`` from a UE at distance ``r`` from its serving site, which yields

    I_ring = 3 G_v P K rho_s (isd - r)^(2 - eta) / (eta - 2) * int B(theta) dtheta

The two antennas sharing the serving mast are kept as exact discrete terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .antenna import AntennaConfig, b_integral_linear, gv_db, pattern_db
from .errors import DomainError
from .geometry import site_density, wrap_angle
from .linkbudget import RadioConfig, resolve_g0

TWO_PI_3 = 2.0 * math.pi / 3.0


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class FluidContext:
    ant: AntennaConfig
    radio: RadioConfig
    isd: float
    rho_s: float = field(init=False)
    b_int: float = field(init=False)
    gv_lin: float = field(init=False)
    g0: float = field(init=False)

    def __post_init__(self):
        if not self.isd > 0:
            raise DomainError(f"isd must be > 0, got {self.isd}")
        object.__setattr__(self, "rho_s", site_density(self.isd))
        object.__setattr__(self, "b_int", b_integral_linear(self.ant))
        object.__setattr__(self, "gv_lin", 10.0 ** (gv_db(self.ant) / 10.0))
        object.__setattr__(self, "g0", resolve_g0(self.radio, self.ant))


def _check_r(r, ctx: FluidContext):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("r must be > 0")
    if np.any(ctx.isd - r <= 1e-9 * ctx.isd):
        raise DomainError("fluid model requires r < isd")
    return r


def fluid_ring_interference(r, ctx: FluidContext):
    """Interference from the continuum of non-serving sites (watts, without G0)."""
    r = _check_r(r, ctx)
    eta = ctx.radio.pathExponent
    radial = np.exp((2.0 - eta) * np.log(ctx.isd - r)) / (eta - 2.0)
    value = (3.0 * ctx.gv_lin * ctx.radio.txPower * ctx.radio.pathConstant
             * ctx.rho_s * radial * ctx.b_int)
    return _out(value)


def _path(r, ctx: FluidContext):
    h = ctx.ant.height
    return ctx.radio.pathConstant * (r * r + h * h) ** (-ctx.radio.pathExponent / 2.0)


def _cosite_patterns(theta, phi, ant):
    return (10.0 ** (np.asarray(pattern_db(wrap_angle(theta + TWO_PI_3), phi, ant)) / 10.0)
            + 10.0 ** (np.asarray(pattern_db(wrap_angle(theta - TWO_PI_3), phi, ant)) / 10.0))


def cosite_interference(r, theta, ctx: FluidContext):
    """Exact interference from the two other sectors of the serving mast (watts, without G0)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("r must be > 0")
    phi = np.arctan(ctx.ant.height / r)
    theta = wrap_angle(np.asarray(theta, dtype=float))
    return _out(ctx.radio.txPower * _path(r, ctx) * _cosite_patterns(theta, phi, ctx.ant))


def inverse_sinr_terms(r, theta, ctx: FluidContext):
    """The three additive parts of 1/SINR: continuum, co-site and noise."""
    r = _check_r(r, ctx)
    theta = wrap_angle(np.asarray(theta, dtype=float))
    ant, radio = ctx.ant, ctx.radio
    eta = radio.pathExponent
    h = ant.height
    phi = np.arctan(h / r)
    a_serv = 10.0 ** (np.asarray(pattern_db(theta, phi, ant)) / 10.0)
    d2 = r * r + h * h

    ring = (3.0 * ctx.gv_lin * ctx.rho_s * np.exp((2.0 - eta) * np.log(ctx.isd - r))
            / ((eta - 2.0) * d2 ** (-eta / 2.0)))
    t1 = ring * ctx.b_int / a_serv
    t2 = _cosite_patterns(theta, phi, ant) / a_serv
    t3 = radio.noise / (ctx.g0 * radio.txPower * radio.pathConstant * d2 ** (-eta / 2.0) * a_serv)
    return _out(t1), _out(t2), _out(t3)


def fluid_sinr(r, theta, ctx: FluidContext):
    """Linear SINR of a UE at ground distance r and horizontal angle theta from its server."""
    t1, t2, t3 = inverse_sinr_terms(r, theta, ctx)
    return _out(1.0 / (np.asarray(t1) + t2 + t3))
