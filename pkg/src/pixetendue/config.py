"""Scenario configuration files (YAML, SI units only).

See ``schema/config.yaml`` for the annotated layout.  Every error carries
the dotted key path and, when known, the line it was found on.
"""
from __future__ import annotations

import copy
import enum
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

import yaml

from .core import RadiometricScenario, SensorGeometry
from .errors import ValidationError
from .etendue import (
    FootprintPatch,
    GaussLegendreTensor,
    MidpointGrid,
    PupilDisc,
    QuadratureSpec,
)
from .mc import Coherent, Fock, Thermal
from .photon import CoherencePolicy
from .units import DimensionError


class ConfigError(ValueError):
    def __init__(self, key_path: str, message: str, line: Optional[int] = None):
        self.key_path = key_path
        self.line = line
        where = f"{key_path} (line {line})" if line is not None else key_path
        super().__init__(f"{where}: {message}")


class EtendueSource(str, enum.Enum):
    SENSOR = "sensor"
    SCENE = "scene"
    PARAXIAL = "paraxial"
    QUADRATURE = "quadrature"


_SENSOR_KEYS = {"pixel_pitch", "f_number", "focal_length", "pupil_diameter", "ifov"}
_SCENARIO_KEYS = {
    "lambda_meas", "temperature", "bandwidth", "integration_time", "eta_sys", "n_pol", "radiance",
}
_TOP_KEYS = {"sensor", "scenario", "coherence_policy", "etendue", "mc", "sweep"}
_SCENE_KEYS = {"pupil_diameter", "ifov"}
_PARAXIAL_KEYS = {"projected_area", "solid_angle"}
_QUAD_KEYS = {"patch", "pupil", "rule", "order", "n_area", "n_angle", "target_rel_tol"}
_PATCH_KEYS = {"shape", "width", "height", "radius", "distance", "tilt"}
_PUPIL_KEYS = {"diameter", "offset_x", "offset_y"}
_MC_KEYS = {"distribution", "mean", "n", "n_modes", "trials", "seed", "workers"}
_SWEEP_KEYS = {"variable", "start", "stop", "count", "spacing", "values"}

SWEEPABLE = frozenset(
    [f"sensor.{k}" for k in sorted(_SENSOR_KEYS)]
    + [f"scenario.{k}" for k in sorted(_SCENARIO_KEYS - {"n_pol"})]
    + [f"etendue.scene.{k}" for k in sorted(_SCENE_KEYS)]
    + [f"etendue.paraxial.{k}" for k in sorted(_PARAXIAL_KEYS)]
    + ["etendue.quadrature.patch.distance", "etendue.quadrature.patch.tilt",
       "etendue.quadrature.pupil.diameter"]
)


@dataclass(frozen=True)
class McConfig:
    distribution: Union[Thermal, Coherent, Fock, None]
    kind: str
    n_modes: Optional[int]
    trials: int
    seed: int
    workers: int


@dataclass(frozen=True)
class SweepAxis:
    variable: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    sensor: SensorGeometry
    scenario: RadiometricScenario
    etendue_source: EtendueSource
    etendue_params: Any
    coherence_policy: CoherencePolicy
    mc: Optional[McConfig]
    sweep: Optional[SweepAxis]
    raw: dict
    lines: dict


# --- loading -----------------------------------------------------------------


def _key_lines(node, prefix: str, out: dict) -> None:
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            path = f"{prefix}.{key.value}" if prefix else str(key.value)
            out[path] = key.start_mark.line + 1
            _key_lines(value, path, out)


def load_raw(text: Union[str, bytes]) -> tuple[dict, dict]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError("<file>", f"not valid UTF-8 ({exc})") from None
    try:
        data = yaml.safe_load(text)
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError("<file>", f"malformed YAML: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("<file>", "top level must be a mapping")
    lines: dict = {}
    _key_lines(node, "", lines)
    return data, lines


# --- typed accessors -----------------------------------------------------------


class _Reader:
    def __init__(self, lines: dict):
        self.lines = lines

    def fail(self, path: str, message: str):
        # report the nearest enclosing key that has a known line
        probe = path
        while probe and probe not in self.lines:
            probe = probe.rpartition(".")[0]
        raise ConfigError(path, message, self.lines.get(probe))

    def table(self, data: dict, key: str, path: str, allowed: set, required: bool = False) -> Optional[dict]:
        full = f"{path}.{key}" if path else key
        if key not in data or data[key] is None:
            if required:
                self.fail(full, "missing required section")
            return None if key not in data else {}
        value = data[key]
        if not isinstance(value, dict):
            self.fail(full, "must be a mapping")
        for k in value:
            if k not in allowed:
                self.fail(f"{full}.{k}", f"unknown key (allowed: {', '.join(sorted(allowed))})")
        return value

    def number(self, data: dict, key: str, path: str, required: bool = False, default=None):
        full = f"{path}.{key}"
        if key not in data or data[key] is None:
            if required:
                self.fail(full, "missing required key")
            return default
        value = data[key]
        if isinstance(value, bool):
            self.fail(full, "expected a number, got a boolean")
        if isinstance(value, str):
            # YAML 1.1 reads 17e-6 (no dot) as a string
            try:
                value = float(value)
            except ValueError:
                self.fail(full, f"expected a number, got {value!r}")
        if not isinstance(value, (int, float)):
            self.fail(full, f"expected a number, got {type(value).__name__}")
        if isinstance(value, float) and not math.isfinite(value):
            self.fail(full, "must be finite")
        return value

    def integer(self, data: dict, key: str, path: str, required: bool = False, default=None):
        value = self.number(data, key, path, required, default)
        if value is not None and (isinstance(value, float) and not value.is_integer()):
            self.fail(f"{path}.{key}", f"expected an integer, got {value!r}")
        return None if value is None else int(value)

    def string(self, data: dict, key: str, path: str, choices, default=None):
        full = f"{path}.{key}" if path else key
        if key not in data or data[key] is None:
            return default
        value = data[key]
        if not isinstance(value, str) or value not in choices:
            self.fail(full, f"must be one of {', '.join(choices)}, got {value!r}")
        return value

    def construct(self, path: str, factory, *args, rename=None, **kwargs):
        try:
            return factory(*args, **kwargs)
        except ValidationError as exc:
            key = (rename or {}).get(exc.field, exc.field)
            self.fail(f"{path}.{key}", str(exc).split(": ", 1)[-1])
        except DimensionError as exc:
            self.fail(path, str(exc))


# --- building ------------------------------------------------------------------


def _build_etendue(r: _Reader, data: dict, sensor: SensorGeometry):
    block = r.table(data, "etendue", "", {s.value for s in EtendueSource})
    if not block:
        return EtendueSource.SENSOR, None
    present = [k for k in block]
    if len(present) > 1:
        r.fail(f"etendue.{present[1]}", f"conflicts with etendue.{present[0]}; give exactly one source")
    source = EtendueSource(present[0])
    path = f"etendue.{source.value}"

    if source is EtendueSource.SENSOR:
        r.table(block, "sensor", "etendue", set())
        return source, None
    if source is EtendueSource.SCENE:
        sub = r.table(block, "scene", "etendue", _SCENE_KEYS) or {}
        D = r.number(sub, "pupil_diameter", path, default=sensor.entrance_pupil)
        phi = r.number(sub, "ifov", path, default=sensor.pixel_ifov)
        if D is None:
            r.fail(f"{path}.pupil_diameter", "missing; give it here or sensor.pupil_diameter/focal_length")
        if phi is None:
            r.fail(f"{path}.ifov", "missing; give it here or sensor.ifov/focal_length")
        for name, value in (("pupil_diameter", D), ("ifov", phi)):
            if not value > 0:
                r.fail(f"{path}.{name}", f"must be positive, got {value!r}")
        return source, (float(D), float(phi))
    if source is EtendueSource.PARAXIAL:
        sub = r.table(block, "paraxial", "etendue", _PARAXIAL_KEYS) or {}
        area = r.number(sub, "projected_area", path, required=True)
        omega = r.number(sub, "solid_angle", path, required=True)
        for name, value in (("projected_area", area), ("solid_angle", omega)):
            if not value > 0:
                r.fail(f"{path}.{name}", f"must be positive, got {value!r}")
        return source, (float(area), float(omega))

    sub = r.table(block, "quadrature", "etendue", _QUAD_KEYS) or {}
    patch_d = r.table(sub, "patch", path, _PATCH_KEYS, required=True)
    pupil_d = r.table(sub, "pupil", path, _PUPIL_KEYS, required=True)
    pp, qp = f"{path}.patch", f"{path}.pupil"
    shape = r.string(patch_d, "shape", pp, ("rectangle", "disc"), default="rectangle")
    distance = r.number(patch_d, "distance", pp, required=True)
    tilt = r.number(patch_d, "tilt", pp, default=0.0)
    if shape == "rectangle":
        width = r.number(patch_d, "width", pp, required=True)
        height = r.number(patch_d, "height", pp, required=True)
        patch = r.construct(pp, FootprintPatch.rectangle, width, height, distance, tilt)
    else:
        radius = r.number(patch_d, "radius", pp, required=True)
        patch = r.construct(pp, FootprintPatch.disc, radius, distance, tilt, rename={"width": "radius"})
    pupil = r.construct(
        qp, PupilDisc,
        r.number(pupil_d, "diameter", qp, required=True),
        r.number(pupil_d, "offset_x", qp, default=0.0),
        r.number(pupil_d, "offset_y", qp, default=0.0),
    )
    rule_name = r.string(sub, "rule", path, ("gauss-legendre", "midpoint"), default="gauss-legendre")
    if rule_name == "gauss-legendre":
        rule = GaussLegendreTensor(r.integer(sub, "order", path, default=8))
    else:
        rule = MidpointGrid(r.integer(sub, "n_area", path, default=8), r.integer(sub, "n_angle", path, default=16))
    spec = r.construct(path, QuadratureSpec, rule, r.number(sub, "target_rel_tol", path, default=1e-8))
    return source, (patch, pupil, spec)


def _build_mc(r: _Reader, data: dict) -> Optional[McConfig]:
    if "mc" not in data:
        return None
    sub = r.table(data, "mc", "", _MC_KEYS) or {}
    kind = r.string(sub, "distribution", "mc", ("thermal", "coherent", "fock"), default="thermal")
    dist = None
    if kind == "coherent" and sub.get("mean") is not None:
        dist = r.construct("mc", Coherent, float(r.number(sub, "mean", "mc")))
    elif kind == "fock":
        dist = r.construct("mc", Fock, r.integer(sub, "n", "mc", required=True))
    n_modes = r.integer(sub, "n_modes", "mc")
    if n_modes is not None and n_modes < 1:
        r.fail("mc.n_modes", f"must be >= 1, got {n_modes}")
    trials = r.integer(sub, "trials", "mc", default=100_000)
    if trials < 1:
        r.fail("mc.trials", f"must be >= 1, got {trials}")
    seed = r.integer(sub, "seed", "mc", default=0)
    if not 0 <= seed < 2**64:
        r.fail("mc.seed", f"must be an unsigned 64-bit integer, got {seed}")
    workers = r.integer(sub, "workers", "mc", default=1)
    if workers < 1:
        r.fail("mc.workers", f"must be >= 1, got {workers}")
    return McConfig(dist, kind, n_modes, trials, seed, workers)


def _build_sweep(r: _Reader, data: dict) -> Optional[SweepAxis]:
    if "sweep" not in data:
        return None
    sub = r.table(data, "sweep", "", _SWEEP_KEYS) or {}
    variable = sub.get("variable")
    if not isinstance(variable, str):
        r.fail("sweep.variable", "missing or not a string")
    if variable not in SWEEPABLE:
        r.fail("sweep.variable", f"{variable!r} is not a sweepable scalar field")
    if "values" in sub:
        if any(k in sub for k in ("start", "stop", "count", "spacing")):
            r.fail("sweep.values", "give either values or start/stop/count, not both")
        values = sub["values"]
        if not isinstance(values, list) or not values:
            r.fail("sweep.values", "must be a non-empty list")
        out = []
        for i, v in enumerate(values):
            out.append(float(r.number({"v": v}, "v", f"sweep.values[{i}]")))
        return SweepAxis(variable, tuple(out))
    start = float(r.number(sub, "start", "sweep", required=True))
    stop = float(r.number(sub, "stop", "sweep", required=True))
    count = r.integer(sub, "count", "sweep", required=True)
    if count < 1:
        r.fail("sweep.count", f"must be >= 1, got {count}")
    spacing = r.string(sub, "spacing", "sweep", ("linear", "log"), default="linear")
    if count == 1:
        return SweepAxis(variable, (start,))
    if spacing == "log":
        if start <= 0 or stop <= 0:
            r.fail("sweep.start", "log spacing needs positive start and stop")
        ratio = math.log(stop / start)
        values = [start * math.exp(ratio * i / (count - 1)) for i in range(count)]
        values[-1] = stop
    else:
        values = [start + (stop - start) * i / (count - 1) for i in range(count)]
    return SweepAxis(variable, tuple(values))


def build_config(data: dict, lines: dict) -> ScenarioConfig:
    r = _Reader(lines)
    for key in data:
        if key not in _TOP_KEYS:
            r.fail(str(key), f"unknown key (allowed: {', '.join(sorted(_TOP_KEYS))})")

    s = r.table(data, "sensor", "", _SENSOR_KEYS, required=True)
    sensor = r.construct(
        "sensor", SensorGeometry,
        pixel_pitch=r.number(s, "pixel_pitch", "sensor", required=True),
        f_number=r.number(s, "f_number", "sensor", required=True),
        focal_length=r.number(s, "focal_length", "sensor"),
        pupil_diameter=r.number(s, "pupil_diameter", "sensor"),
        ifov=r.number(s, "ifov", "sensor"),
    )
    sc = r.table(data, "scenario", "", _SCENARIO_KEYS, required=True)
    scenario = r.construct(
        "scenario", RadiometricScenario,
        lambda_meas=r.number(sc, "lambda_meas", "scenario", required=True),
        temperature=r.number(sc, "temperature", "scenario", required=True),
        bandwidth=r.number(sc, "bandwidth", "scenario", default=1.0),
        integration_time=r.number(sc, "integration_time", "scenario", default=1.0),
        eta_sys=r.number(sc, "eta_sys", "scenario", default=1.0),
        n_pol=r.integer(sc, "n_pol", "scenario", default=1),
        radiance=r.number(sc, "radiance", "scenario"),
    )
    policy = CoherencePolicy(
        r.string(data, "coherence_policy", "", [p.value for p in CoherencePolicy], default="max-rule")
    )
    source, params = _build_etendue(r, data, sensor)
    return ScenarioConfig(
        sensor=sensor,
        scenario=scenario,
        etendue_source=source,
        etendue_params=params,
        coherence_policy=policy,
        mc=_build_mc(r, data),
        sweep=_build_sweep(r, data),
        raw=data,
        lines=lines,
    )


def parse_config(text: Union[str, bytes]) -> ScenarioConfig:
    """Parse and validate a scenario file, applying defaults."""
    data, lines = load_raw(text)
    return build_config(data, lines)


def with_value(config: ScenarioConfig, key_path: str, value) -> ScenarioConfig:
    """Rebuild ``config`` with one dotted key replaced (used by sweeps and CLI overrides)."""
    data = copy.deepcopy(config.raw)
    node = data
    parts = key_path.split(".")
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value
    return build_config(data, config.lines)
