"""Command-line front end: scenario files, built-in presets and run outputs.

Scenario files are flat ``key = value`` text, ``#`` starts a comment. Keys
mirror the config field names; the three angles are given in degrees::

    preset = scenario2        # optional starting point
    name = tilt-sweep-25
    phiTilt = 25
    pathExponent = 3.8
    rings = 6

Outputs written by ``run`` (schemas are fixed):

* ``cdf_simulated.csv``, ``cdf_analytic.csv``: ``sinr_db,cdf``; one row per
  sorted sample up to 10 000 samples, otherwise one row per 0.1 dB step
  with ``cdf`` = F(sinr_db).
* ``map_discrete.csv``, ``map_fluid.csv``: ``x_m,y_m,sinr_db`` for every
  in-cell pixel, row-major (y outer, x inner).
* ``summary.json``: statistics plus the fully resolved scenario.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    EmpiricalCdf,
    analytic_cdf,
    empirical_cdf,
    ks_distance,
    map_diff_stats,
    quantile,
)
from .antenna import DEFAULT_AM_DB, AntennaConfig
from .errors import ConfigError, HexFluidError
from .linkbudget import RadioConfig, resolve_g0
from .simulator import PRESET_TABLE, Scenario, SinrMap, preset, simulate, sinr_map

log = logging.getLogger(__name__)

QUANTILE_PS = (0.05, 0.1, 0.5, 0.9)
CDF_BIN_THRESHOLD = 10_000
CDF_BIN_DB = 0.1

ANGLE_KEYS = ("theta3dB", "phi3dB", "phiTilt")
ANTENNA_KEYS = ANGLE_KEYS + ("Am", "height")
RADIO_KEYS = ("txPower", "pathConstant", "pathExponent", "noise", "bandwidth", "g0")
SCENARIO_KEYS = ("name", "isd", "rings", "samples", "seed", "mapResolution")
INT_KEYS = ("rings", "samples", "seed")
KNOWN_KEYS = ("preset",) + ANTENNA_KEYS + RADIO_KEYS + SCENARIO_KEYS


class ScenarioWarning(UserWarning):
    pass


def parse_scenario_text(text: str, source: str = "<string>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key", field=key)
        if key in entries:
            raise ConfigError(f"{source}:{lineno}: duplicate key", field=key)
        entries[key] = value
    return entries


def _convert(key: str, value: str):
    if key in ("name", "preset"):
        return value
    try:
        if key in INT_KEYS:
            return int(value, 0)
        if key == "g0" and value.lower() in ("auto", "none"):
            return None
        number = float(value)
    except ValueError:
        raise ConfigError(f"cannot parse {value!r} as a number", field=key) from None
    return math.radians(number) if key in ANGLE_KEYS else number


def scenario_from_entries(entries: dict[str, str], default_name: str = "custom") -> Scenario:
    values = {k: _convert(k, v) for k, v in entries.items()}
    if "preset" in values and values["preset"] not in PRESET_TABLE:
        raise ConfigError(f"unknown preset {values['preset']!r}", field="preset")
    base = preset(values["preset"]) if "preset" in values else None

    def pick(obj, keys, required=()):
        out = {}
        for k in keys:
            if k in values:
                out[k] = values[k]
            elif obj is not None:
                out[k] = getattr(obj, k)
            elif k in required:
                raise ConfigError("missing required key", field=k)
        return out

    ant_kw = pick(base.ant if base else None, ANTENNA_KEYS, required=ANGLE_KEYS)
    ant_kw.setdefault("Am", DEFAULT_AM_DB)
    radio_kw = pick(base.radio if base else None, RADIO_KEYS)
    scen_kw = pick(base, SCENARIO_KEYS)
    scen_kw.setdefault("name", default_name)
    if base is not None and "isd" in values and "mapResolution" not in values:
        scen_kw["mapResolution"] = None  # re-derive from the new isd

    try:
        ant = _build(AntennaConfig, ant_kw)
        radio = _build(RadioConfig, radio_kw)
        return _build(Scenario, dict(scen_kw, ant=ant, radio=radio))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _build(cls, kwargs):
    try:
        return cls(**kwargs)
    except ValueError as exc:
        message = str(exc)
        field_name = next((f.name for f in dataclasses.fields(cls) if message.startswith(f.name)),
                          None)
        raise ConfigError(message, field=field_name) from None


def load_scenario(spec: str) -> Scenario:
    """Resolve a preset name or a scenario file path into a validated Scenario."""
    if spec in PRESET_TABLE:
        scenario = preset(spec)
    else:
        path = Path(spec)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario {spec!r}: {exc.strerror or exc}") from None
        scenario = scenario_from_entries(parse_scenario_text(text, str(path)),
                                         default_name=path.stem)
    for message in scenario.validity_warnings():
        warnings.warn(message, ScenarioWarning, stacklevel=2)
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    ant, radio = scenario.ant, scenario.radio
    return {
        "name": scenario.name,
        "theta3dB": round(math.degrees(ant.theta3dB), 10),
        "phi3dB": round(math.degrees(ant.phi3dB), 10),
        "phiTilt": round(math.degrees(ant.phiTilt), 10),
        "Am": ant.Am,
        "height": ant.height,
        "txPower": radio.txPower,
        "pathConstant": radio.pathConstant,
        "pathExponent": radio.pathExponent,
        "noise": radio.noise,
        "bandwidth": radio.bandwidth,
        "g0": resolve_g0(radio, ant),
        "g0Source": "override" if radio.g0 is not None else "computed",
        "isd": scenario.isd,
        "rings": scenario.rings,
        "samples": scenario.samples,
        "seed": scenario.seed,
        "mapResolution": scenario.mapResolution,
        "valid3D": ant.valid3D,
    }


@dataclass
class RunSummary:
    scenario: str
    samplesSimulated: int
    samplesAnalytic: int
    ksDistance: float
    quantilesAnalytic: dict[str, float]
    quantilesSimulated: dict[str, float]
    mapDiff: dict[str, float]
    wallClockSeconds: float
    seed: int
    resolvedScenario: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _quantiles(cdf: EmpiricalCdf) -> dict[str, float]:
    return {f"{p:g}": quantile(cdf, p) for p in QUANTILE_PS}


def cdf_rows(cdf: EmpiricalCdf) -> list[str]:
    if cdf.n <= CDF_BIN_THRESHOLD:
        values = cdf.sortedValues
        return [f"{v:.6f},{p:.6f}" for v, p in zip(values, cdf(values))]
    steps = 1.0 / CDF_BIN_DB
    lo = math.floor(cdf.sortedValues[0] * steps)
    hi = math.ceil(cdf.sortedValues[-1] * steps)
    grid = np.arange(lo, hi + 1) / steps
    return [f"{x:.1f},{p:.6f}" for x, p in zip(grid, cdf(grid))]


def map_rows(m: SinrMap) -> list[str]:
    gx, gy = m.centers()
    mask = m.mask
    return [f"{x:.3f},{y:.3f},{v:.4f}" for x, y, v in zip(gx[mask], gy[mask], m.values[mask])]


def _write(path: Path, header: str, rows: list[str]):
    try:
        path.write_text("\n".join([header, *rows]) + "\n")
    except OSError as exc:
        raise HexFluidError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _stage(label, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except HexFluidError as exc:
        raise HexFluidError(f"{label}: {exc}") from exc


def run(scenario: Scenario, out_dir, workers: int | None = None) -> RunSummary:
    """Simulate, evaluate the fluid model, compare, and write every artifact."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise HexFluidError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc

    start = time.perf_counter()
    sim = _stage("simulator.simulate", simulate, scenario, workers=workers)
    cdf_sim = _stage("analysis.empirical_cdf", empirical_cdf, sim.sinr)
    cdf_ana = _stage("analysis.analytic_cdf", analytic_cdf, scenario)
    map_d = _stage("simulator.sinr_map[discrete]", sinr_map, scenario, "discrete", workers=workers)
    map_f = _stage("simulator.sinr_map[fluid]", sinr_map, scenario, "fluid")
    stats = _stage("analysis.map_diff_stats", map_diff_stats, map_d, map_f)
    ks = ks_distance(cdf_ana, cdf_sim)

    _write(out / "cdf_simulated.csv", "sinr_db,cdf", cdf_rows(cdf_sim))
    _write(out / "cdf_analytic.csv", "sinr_db,cdf", cdf_rows(cdf_ana))
    _write(out / "map_discrete.csv", "x_m,y_m,sinr_db", map_rows(map_d))
    _write(out / "map_fluid.csv", "x_m,y_m,sinr_db", map_rows(map_f))

    summary = RunSummary(
        scenario=scenario.name,
        samplesSimulated=len(sim),
        samplesAnalytic=cdf_ana.n,
        ksDistance=ks,
        quantilesAnalytic=_quantiles(cdf_ana),
        quantilesSimulated=_quantiles(cdf_sim),
        mapDiff=stats._asdict(),
        wallClockSeconds=round(time.perf_counter() - start, 3),
        seed=scenario.seed,
        resolvedScenario=scenario_to_dict(scenario),
        warnings=scenario.validity_warnings(),
    )
    try:
        (out / "summary.json").write_text(json.dumps(summary.to_dict(), indent=2, sort_keys=True)
                                          + "\n")
    except OSError as exc:
        raise HexFluidError(f"cannot write {out / 'summary.json'}: {exc.strerror or exc}") from exc
    return summary


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    changes = {k: v for k, v in (("samples", args.samples), ("seed", args.seed),
                                 ("rings", args.rings), ("mapResolution", args.map_res))
               if v is not None}
    if not changes:
        return scenario
    try:
        return scenario.with_(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc), field=str(exc).split(" ", 1)[0]) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexfluid",
                                     description="3D fluid SINR model vs Monte Carlo simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and write CDF/map/summary files")
    p_run.add_argument("--scenario", required=True, help="preset name or scenario file")
    p_run.add_argument("--out", required=True, type=Path, help="output directory")
    p_run.add_argument("--samples", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--rings", type=int)
    p_run.add_argument("--map-res", type=float, help="map resolution in metres per pixel")

    sub.add_parser("list-presets", help="print the built-in presets")

    p_val = sub.add_parser("validate", help="parse and validate a scenario")
    p_val.add_argument("--scenario", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    if args.command == "list-presets":
        print("name       tilt_deg  phi3dB_deg  theta3dB_deg  isd_m  height_m")
        for name, (tilt, phi3, theta3, isd, h) in PRESET_TABLE.items():
            print(f"{name:<10} {tilt:8g}  {phi3:10g}  {theta3:12g}  {isd:5g}  {h:8g}")
        return 0

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ScenarioWarning)
            scenario = load_scenario(args.scenario)
        for w in caught:
            log.warning("warning: %s", w.message)
        if args.command == "validate":
            print(json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True))
            return 0
        scenario = _apply_overrides(scenario, args)
    except ConfigError as exc:
        log.error("invalid scenario: %s", exc)
        return 2

    try:
        summary = run(scenario, args.out)
    except HexFluidError as exc:
        log.error("run failed: %s", exc)
        return 1
    log.info("%s: KS=%.4f, meanAbs map diff=%.3f dB, %.1f s -> %s", summary.scenario,
             summary.ksDistance, summary.mapDiff["meanAbs"], summary.wallClockSeconds, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
