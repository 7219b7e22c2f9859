"""Monte Carlo engine: UE drops, discrete-sum SINR and SINR rasters."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .antenna import AntennaConfig
from .errors import DomainError
from .fluid import FluidContext, fluid_sinr
from .geometry import NetworkLayout, Position, hex_cell_bounds, hex_lattice, in_hex_cell
from .linkbudget import RadioConfig, central_serving, discrete_sinr_many

THREADS_ENV = "HEXFLUID_THREADS"
SIM_CHUNK = 4096
_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53
_HALF_SQRT3 = math.sqrt(3.0) / 2.0
_CANDIDATES = 8  # candidate points drawn per refill; 1/4 of the bounding box is rejected


@dataclass(frozen=True)
class Scenario:
    name: str
    ant: AntennaConfig
    radio: RadioConfig = field(default_factory=RadioConfig)
    isd: float = 500.0
    rings: int = 4
    samples: int = 100_000
    seed: int = 0
    mapResolution: float | None = None

    def __post_init__(self):
        if not self.isd > 0:
            raise DomainError(f"isd must be > 0, got {self.isd}")
        if self.rings < 0:
            raise DomainError(f"rings must be >= 0, got {self.rings}")
        if self.samples < 1:
            raise DomainError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed <= _MASK64:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.mapResolution is None:
            object.__setattr__(self, "mapResolution", self.isd / 200.0)
        if not self.mapResolution > 0:
            raise DomainError(f"mapResolution must be > 0, got {self.mapResolution}")

    def layout(self) -> NetworkLayout:
        return hex_lattice(self.isd, self.rings)

    def fluid_context(self) -> FluidContext:
        return FluidContext(self.ant, self.radio, self.isd)

    def validity_warnings(self) -> list[str]:
        if self.ant.valid3D:
            return []
        return [f"phiTilt ({math.degrees(self.ant.phiTilt):g} deg) < phi3dB "
                f"({math.degrees(self.ant.phi3dB):g} deg): energy spills into other cells"]

    def with_(self, **changes) -> Scenario:
        return replace(self, **changes)


# Preset rows: (tilt deg, phi3dB deg, theta3dB deg, ISD m, h m)
PRESET_TABLE = {
    "scenario1": (30.0, 10.0, 10.0, 500.0, 50.0),
    "scenario2": (30.0, 10.0, 20.0, 750.0, 30.0),
    "scenario3": (20.0, 10.0, 10.0, 750.0, 30.0),
    "scenario4": (20.0, 10.0, 40.0, 750.0, 50.0),
    "scenario5": (40.0, 30.0, 20.0, 750.0, 30.0),
    "scenario6": (40.0, 10.0, 20.0, 200.0, 50.0),
}


def preset(name: str, **overrides) -> Scenario:
    try:
        tilt, phi3, theta3, isd, h = PRESET_TABLE[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESET_TABLE)}") from None
    ant = AntennaConfig.from_degrees(theta3dB=theta3, phi3dB=phi3, phiTilt=tilt, height=h)
    kwargs = {"name": name, "ant": ant, "isd": isd}
    kwargs.update(overrides)
    return Scenario(**kwargs)


def default_workers() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


@dataclass(frozen=True)
class UESample:
    position: Position
    servingAntennaId: int
    sinrLinear: float


@dataclass(frozen=True, eq=False)
class UESamples:
    """Column-oriented simulation output; indexing yields :class:`UESample`."""

    positions: np.ndarray
    serving: np.ndarray
    sinr: np.ndarray

    def __len__(self):
        return self.sinr.shape[0]

    def __getitem__(self, i) -> UESample:
        x, y = self.positions[i]
        return UESample(Position(float(x), float(y)), int(self.serving[i]), float(self.sinr[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


class _Substreams:
    """Philox substream ``i`` for a seed: counters (k, 0, 0, i), k = 0, 1, ...

    Resetting one bit generator's state reproduces ``Philox(key=seed,
    counter=[0, 0, 0, i])`` exactly and is several times cheaper than
    constructing a new one per sample.
    """

    def __init__(self, seed: int):
        self._bits = np.random.Philox(key=seed & _MASK64)
        self._state = self._bits.state
        self._key = np.array([seed & _MASK64, 0], dtype=np.uint64)

    def reset(self, index: int) -> None:
        st = self._state
        st["state"]["counter"] = np.array([0, 0, 0, index], dtype=np.uint64)
        st["state"]["key"] = self._key
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bits.state = st

    def uniforms(self, count: int) -> list[float]:
        # Same 53-bit conversion as Generator.random().
        return ((self._bits.random_raw(count) >> np.uint64(11)) * _TWO_M53).tolist()


def _draw_in_cell(streams: _Substreams, index: int, isd: float) -> tuple[float, float]:
    half_w, half_h = hex_cell_bounds(isd)
    a = isd / 2.0
    streams.reset(index)
    while True:
        u = streams.uniforms(2 * _CANDIDATES)
        for k in range(_CANDIDATES):
            x = (2.0 * u[2 * k] - 1.0) * half_w
            y = (2.0 * u[2 * k + 1] - 1.0) * half_h
            p, q = 0.5 * x, _HALF_SQRT3 * y
            if abs(x) < a and abs(p + q) < a and abs(q - p) < a and (x != 0.0 or y != 0.0):
                return x, y


def sample_positions(scenario: Scenario, seed: int | None = None,
                     n: int | None = None) -> np.ndarray:
    """Uniform UE drops in the central cell, as an (n, 2) array.

    Sample ``i`` depends only on ``(seed, i)``, so prefixes agree across
    sample counts and rejections never shift later samples.
    """
    seed = scenario.seed if seed is None else seed
    n = scenario.samples if n is None else n
    streams = _Substreams(seed)
    out = np.empty((n, 2))
    for i in range(n):
        out[i] = _draw_in_cell(streams, i, scenario.isd)
    return out


def _parallel_chunks(func, n: int, workers: int | None):
    chunks = [slice(s, min(s + SIM_CHUNK, n)) for s in range(0, n, SIM_CHUNK)]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(chunks) == 1:
        return [func(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks))


def discrete_sinr_at(xy: np.ndarray, scenario: Scenario, workers: int | None = None,
                     layout: NetworkLayout | None = None):
    layout = scenario.layout() if layout is None else layout
    parts = _parallel_chunks(lambda sl: discrete_sinr_many(xy[sl], layout, scenario.ant,
                                                           scenario.radio),
                             xy.shape[0], workers)
    if not parts:
        return np.empty(0), np.empty(0, dtype=np.int64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def fluid_sinr_at(xy: np.ndarray, scenario: Scenario, ctx: FluidContext | None = None):
    """Fluid SINR at each position, relative to the best central sector."""
    ctx = scenario.fluid_context() if ctx is None else ctx
    layout = hex_lattice(scenario.isd, 0)
    serving, r, theta = central_serving(xy, layout, scenario.ant, scenario.radio)
    return fluid_sinr(r, theta, ctx), serving


def simulate(scenario: Scenario, workers: int | None = None,
             positions: np.ndarray | None = None) -> UESamples:
    """Drop ``scenario.samples`` UEs and compute their discrete-sum SINR."""
    xy = sample_positions(scenario) if positions is None else np.asarray(positions, dtype=float)
    sinr, serving = discrete_sinr_at(xy, scenario, workers)
    return UESamples(positions=xy, serving=serving, sinr=sinr)


@dataclass(frozen=True, eq=False)
class SinrMap:
    """Row-major raster of SINR in dB; NaN marks pixels outside the cell.

    ``originX``/``originY`` are the coordinates of pixel (row 0, col 0)'s
    centre; rows advance in +y, columns in +x.
    """

    originX: float
    originY: float
    resolution: float
    width: int
    height: int
    values: np.ndarray

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = self.originX + self.resolution * np.arange(self.width)
        ys = self.originY + self.resolution * np.arange(self.height)
        return np.meshgrid(xs, ys)

    @property
    def mask(self) -> np.ndarray:
        return ~np.isnan(self.values)


def map_grid(isd: float, resolution: float):
    """Pixel-centre grid symmetric about the site; no centre falls on the mast."""
    half_w, half_h = hex_cell_bounds(isd)
    width = 2 * math.ceil(half_w / resolution)
    height = 2 * math.ceil(half_h / resolution)
    origin_x = -(width - 1) * resolution / 2.0
    origin_y = -(height - 1) * resolution / 2.0
    return origin_x, origin_y, width, height


def sinr_map(scenario: Scenario, method: str = "discrete", workers: int | None = None,
             resolution: float | None = None) -> SinrMap:
    if method not in ("discrete", "fluid"):
        raise DomainError(f"method must be 'discrete' or 'fluid', got {method!r}")
    res = scenario.mapResolution if resolution is None else resolution
    ox, oy, width, height = map_grid(scenario.isd, res)
    gx, gy = np.meshgrid(ox + res * np.arange(width), oy + res * np.arange(height))
    inside = in_hex_cell(gx, gy, scenario.isd)
    xy = np.column_stack([gx[inside], gy[inside]])

    if method == "discrete":
        sinr, _ = discrete_sinr_at(xy, scenario, workers)
    else:
        sinr, _ = fluid_sinr_at(xy, scenario)

    values = np.full((height, width), np.nan)
    values[inside] = 10.0 * np.log10(sinr)
    values.setflags(write=False)
    return SinrMap(ox, oy, res, width, height, values)
