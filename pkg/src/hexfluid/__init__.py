"""Closed-form 3D fluid SINR model for tri-sector hexagonal networks, with a
Monte Carlo discrete-sum simulator to validate it against."""

from .analysis import (
    EmpiricalCdf,
    MapDiffStats,
    analytic_cdf,
    empirical_cdf,
    ks_distance,
    map_cdf,
    map_diff_stats,
    quantile,
    shannon_throughput,
)
from .antenna import (
    AntennaConfig,
    b_db,
    b_integral_linear,
    gv_db,
    horizontal_attenuation_db,
    max_gain_g0,
    pattern_db,
    vertical_attenuation_db,
)
from .errors import ConfigError, DomainError, HexFluidError, NumericalError
from .fluid import FluidContext, cosite_interference, fluid_ring_interference, fluid_sinr
from .geometry import (
    NetworkLayout,
    Position,
    hex_cell_polygon,
    hex_lattice,
    horizontal_angle,
    site_density,
    vertical_angle,
)
from .linkbudget import RadioConfig, discrete_sinr, path_gain, received_power
from .simulator import Scenario, SinrMap, UESample, preset, sample_positions, simulate, sinr_map

__version__ = "0.1.0"
