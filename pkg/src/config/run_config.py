"""Scenario configuration: YAML documents, builtin presets and ``--set`` overrides.

A document is a mapping of sections to keys.  Every key has a default
(the reference scenario of the simulation study), so a document only
needs the entries it changes.  Values may carry unit suffixes; see
:mod:`src.config.units`.

Loading resolves everything to SI and records where each value came
from, so diagnostics read ``presets/table2-ms10.yaml:12: ...``.  The
resolved configuration is a plain dictionary; loading it again as a
document reproduces the run.
"""
import copy
import os
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import structlog
import yaml
from scipy.constants import speed_of_light

from src.domain.errors import ConfigError, DomainError
from src.domain.models import (
    ExperimentConfig,
    FadingParams,
    HarvesterModel,
    NoiseModel,
    Placement,
    PolicyId,
    ProblemKind,
    ProblemSpec,
    RisGeometry,
    RisPowerModel,
    Scenario,
    TrackingScenario,
)
from src.energy.energy_model import ris_consumption
from src.link.link_metrics import noise_power

from .units import parse_quantity

logger = structlog.get_logger(__name__)

PRESETS_DIR = os.path.join(os.path.dirname(__file__), "presets")

DEFAULT_PRESETS = {
    "montecarlo": "table1",
    "tracking": "fig7-15x15",
    "policy-demo": "table1",
}

_MAX_SEED = 2 ** 64 - 1

# section -> key -> (kind, default); defaults are the reference scenario
SCHEMA: dict[str, dict[str, tuple[str, Any]]] = {
    "geometry": {
        "frequency": ("frequency", "28 GHz"),
        "m_x": ("count", 5),
        "m_y": ("count", 2),
        "d_x": ("length", "0.5 lambda"),
        "d_y": ("length", "0.5 lambda"),
    },
    "placement": {
        "d_t": ("length", "17 m"),
        "d_r": ("length", "20 m"),
        "theta_inc": ("angle", "45 deg"),
        "theta_dep": ("angle", "60 deg"),
        "g_t": ("gain", "40 dBi"),
        "g_r": ("gain", "22 dBi"),
        "phase_model": ("phase_model", "exact"),
    },
    "fading": {
        "sigma_t_sq": ("number", 0.1),
        "sigma_r_sq": ("number", 0.3),
    },
    "harvester": {
        "a": ("number", 120),
        "b": ("power", "1 mW"),
        "p_max": ("power", "20 mW"),
        "eta_rf": ("number", 0.5),
    },
    "power": {
        "p_static": ("power", "2 uW"),
        "p_dynamic": ("power", "10 mW"),
        "alpha": ("number", 0.8),
        "p_r": ("number", 0.001),
    },
    "noise": {
        "bandwidth": ("frequency", "1 GHz"),
        "noise_figure": ("decibel", "10 dB"),
        "temperature": ("temperature", "290 K"),
    },
    "link": {
        "p_t": ("power", "1 W"),
    },
    "problem": {
        "kind": ("problem_kind", "ProblemA"),
        "p_ris": ("power_or_auto", "auto"),
        "gamma_0": ("gain", "20 dB"),
    },
    "experiment": {
        "trials": ("count", 10000),
        "seed": ("seed", 0),
        "policies": ("policies", ["A1", "A2", "A3", "A4", "BruteForceA"]),
        "threads": ("count", 1),
        "brute_force_cap": ("count", 22),
        "dump_channels": ("flag", False),
    },
    "tracking": {
        "tx_height": ("length", "3 m"),
        "rx_height": ("length", "1.5 m"),
        "ris_height": ("length", "11 m"),
        "lateral_range": ("length_pair", ["-40 m", "40 m"]),
        "user_speed": ("speed", "1.4 m/s"),
        "ris_to_path_ground_distance": ("length", "17 m"),
        "tx_to_ris_ground_distance": ("length", "17 m"),
        "tx_ris_distance": ("length", "19 m"),
        "snr_drop_threshold": ("decibel", "3 dB"),
        "alpha": ("number", 1.0),
        "step": ("length", "1 cm"),
        "symmetric_tx": ("flag", False),
        "reconfig_durations": ("time_list", ["1 us", "10 us", "100 us"]),
        "p_dynamic_grid": ("power_list", ["0 W", "0.2 W", "0.4 W", "0.6 W", "0.8 W", "1 W"]),
    },
    "demo": {
        "policy": ("policy", "A1"),
    },
}


Origin = tuple[str, Optional[int]]


def preset_names() -> list[str]:
    """Names of the builtin presets."""
    return sorted(name[: -len(".yaml")] for name in os.listdir(PRESETS_DIR) if name.endswith(".yaml"))


def _preset_path(name: str) -> Optional[str]:
    if os.sep in name or "/" in name or name.endswith((".yaml", ".yml")):
        return None
    path = os.path.join(PRESETS_DIR, f"{name}.yaml")
    return path if os.path.isfile(path) else None


def _display_name(path: str) -> str:
    if os.path.dirname(os.path.abspath(path)) == PRESETS_DIR:
        return f"presets/{os.path.basename(path)}"
    return path


# ---------------------------------------------------------------------------
# Reading documents
# ---------------------------------------------------------------------------

def _key_lines(text: str, source: str) -> dict[tuple[str, Optional[str]], int]:
    """1-based line of every section and ``section.key`` entry in *text*."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"malformed YAML: {getattr(exc, 'problem', exc)}", source, line) from None

    lines: dict[tuple[str, Optional[str]], int] = {}
    if not isinstance(root, yaml.MappingNode):
        return lines
    for section_node, body in root.value:
        section = str(section_node.value)
        lines[(section, None)] = section_node.start_mark.line + 1
        if isinstance(body, yaml.MappingNode):
            for key_node, _ in body.value:
                lines[(section, str(key_node.value))] = key_node.start_mark.line + 1
    return lines


def _read_document(path: str) -> tuple[dict[str, Any], dict[tuple[str, Optional[str]], int], str]:
    source = _display_name(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None

    lines = _key_lines(text, source)
    document = yaml.safe_load(text) or {}
    if not isinstance(document, dict):
        raise ConfigError("top level must be a mapping of sections", source, 1)
    if "tool_version" in document and isinstance(document.get("config"), dict):
        # A run manifest: replay its resolved configuration.
        document, lines = document["config"], {}
    return document, lines, source


def _merge_document(
    values: dict[str, dict[str, Any]],
    origins: dict[tuple[str, str], Origin],
    document: dict[str, Any],
    lines: dict[tuple[str, Optional[str]], int],
    source: str,
) -> None:
    for section, body in document.items():
        section_line = lines.get((str(section), None))
        if section not in SCHEMA:
            valid = ", ".join(SCHEMA)
            raise ConfigError(f"unknown section {section!r}; valid sections: {valid}", source, section_line)
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"section {section!r} must be a mapping", source, section_line)
        for key, value in body.items():
            line = lines.get((section, str(key)), section_line)
            if key not in SCHEMA[section]:
                valid = ", ".join(SCHEMA[section])
                raise ConfigError(f"unknown key {section}.{key}; valid keys: {valid}", source, line)
            values[section][key] = value
            origins[(section, key)] = (source, line)


def _resolve_override_key(key: str) -> tuple[str, str]:
    if "." in key:
        section, name = key.split(".", 1)
        if section in SCHEMA and name in SCHEMA[section]:
            return section, name
        raise ConfigError(f"unknown key {key}", "--set")
    owners = [section for section, keys in SCHEMA.items() if key in keys]
    if not owners:
        raise ConfigError(f"unknown key {key}", "--set")
    if len(owners) > 1:
        choices = ", ".join(f"{s}.{key}" for s in owners)
        raise ConfigError(f"key {key} is ambiguous; use one of {choices}", "--set")
    return owners[0], key


def parse_override(text: str) -> tuple[str, str, Any]:
    """Split ``key=value`` into ``(section, key, value)``; the value is read as YAML."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} must look like key=value", "--set")
    key, raw = text.split("=", 1)
    section, name = _resolve_override_key(key.strip())
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError:
        value = raw.strip()
    if value is None:
        raise ConfigError(f"override {text!r} has no value", "--set")
    return section, name, value


# ---------------------------------------------------------------------------
# Resolving to SI
# ---------------------------------------------------------------------------

def _as_count(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, str) and value.strip().isdigit():
            return int(value)
        raise ConfigError(f"expected a whole number, got {value!r}")
    return value


def _as_list(value: Any, length: Optional[int] = None) -> list[Any]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"expected a list, got {value!r}")
    if length is not None and len(value) != length:
        raise ConfigError(f"expected {length} entries, got {len(value)}")
    return list(value)


def _resolve_value(kind: str, value: Any, wavelength: Optional[float]) -> Any:
    if kind == "count":
        count = _as_count(value)
        if count < 1:
            raise ConfigError(f"expected a positive whole number, got {value!r}")
        return count
    if kind == "seed":
        seed = _as_count(value)
        if not 0 <= seed <= _MAX_SEED:
            raise ConfigError(f"seed must lie in 0..2^64-1, got {value!r}")
        return seed
    if kind == "flag":
        if not isinstance(value, bool):
            raise ConfigError(f"expected true or false, got {value!r}")
        return value
    if kind == "phase_model":
        if value not in ("exact", "plane-wave"):
            raise ConfigError(f"phase_model must be 'exact' or 'plane-wave', got {value!r}")
        return value
    if kind == "problem_kind":
        return ProblemKind.parse(str(value)).value
    if kind == "policy":
        return PolicyId.parse(str(value)).value
    if kind == "policies":
        return [PolicyId.parse(str(p)).value for p in _as_list(value)]
    if kind == "power_or_auto":
        if isinstance(value, str) and value.strip().lower() == "auto":
            return "auto"
        return parse_quantity(value, "power")
    if kind == "length_pair":
        return [parse_quantity(v, "length", wavelength) for v in _as_list(value, 2)]
    if kind == "time_list":
        return [parse_quantity(v, "time") for v in _as_list(value)]
    if kind == "power_list":
        return [parse_quantity(v, "power") for v in _as_list(value)]
    return parse_quantity(value, kind, wavelength)


def _resolve(values: dict[str, dict[str, Any]], origins: dict[tuple[str, str], Origin]) -> dict[str, dict[str, Any]]:
    resolved: dict[str, dict[str, Any]] = {section: {} for section in SCHEMA}
    wavelength: Optional[float] = None
    for section, keys in SCHEMA.items():
        for key, (kind, _) in keys.items():
            try:
                resolved[section][key] = _resolve_value(kind, values[section][key], wavelength)
            except ConfigError as exc:
                source, line = origins.get((section, key), ("defaults", None))
                raise ConfigError(f"{section}.{key}: {exc.message}", source, line) from None
            if (section, key) == ("geometry", "frequency"):
                if resolved[section][key] <= 0:
                    source, line = origins.get((section, key), ("defaults", None))
                    raise ConfigError("geometry.frequency must be positive", source, line)
                wavelength = speed_of_light / resolved[section][key]
    return resolved


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """A fully resolved run configuration (SI units, all defaults expanded)."""

    values: dict[str, dict[str, Any]]
    source: str

    def section(self, name: str) -> dict[str, Any]:
        return self.values[name]

    def to_dict(self) -> dict[str, Any]:
        """Deep copy suitable for the run manifest."""
        return copy.deepcopy(self.values)

    @property
    def seed(self) -> int:
        return int(self.values["experiment"]["seed"])

    def _build(self, builder: Any) -> Any:
        try:
            return builder()
        except ConfigError as exc:
            if exc.source is None:
                raise ConfigError(exc.message, self.source) from None
            raise
        except DomainError as exc:
            raise ConfigError(str(exc), self.source) from None

    def geometry(self) -> RisGeometry:
        g = self.values["geometry"]
        return self._build(lambda: RisGeometry(g["m_x"], g["m_y"], g["d_x"], g["d_y"], g["frequency"]))

    def scenario(self) -> Scenario:
        """Scenario for channel draws and allocation."""
        def build() -> Scenario:
            p = self.values["placement"]
            placement = Placement.from_angles(p["d_t"], p["d_r"], p["theta_inc"], p["theta_dep"], p["g_t"], p["g_r"])
            if p["phase_model"] == "plane-wave":
                placement = placement.without_positions()
            f, h, w, n = (self.values[s] for s in ("fading", "harvester", "power", "noise"))
            return Scenario(
                geometry=self.geometry(),
                placement=placement,
                fading=FadingParams(f["sigma_t_sq"], f["sigma_r_sq"]),
                harvester=HarvesterModel(a=h["a"], b=h["b"], p_max=h["p_max"], eta_rf=h["eta_rf"]),
                power=RisPowerModel(p_static=w["p_static"], p_dynamic=w["p_dynamic"], alpha=w["alpha"], p_r=w["p_r"]),
                noise=NoiseModel(n["bandwidth"], n["noise_figure"], n["temperature"]),
                p_t=self.values["link"]["p_t"],
            )
        return self._build(build)

    def problem_spec(self, scenario: Optional[Scenario] = None) -> ProblemSpec:
        """Problem constraints; ``p_ris: auto`` means the surface's own consumption."""
        scenario = scenario or self.scenario()
        problem = self.values["problem"]

        def build() -> ProblemSpec:
            p_ris = problem["p_ris"]
            if p_ris == "auto":
                p_ris = ris_consumption(scenario.power, scenario.geometry.m_s)
            return ProblemSpec(
                kind=ProblemKind.parse(problem["kind"]),
                p_ris=p_ris,
                gamma_0=problem["gamma_0"],
                p_t=scenario.p_t,
                sigma_sq=noise_power(scenario.noise),
            )
        return self._build(build)

    def experiment_config(self) -> ExperimentConfig:
        scenario = self.scenario()
        e = self.values["experiment"]
        return self._build(lambda: ExperimentConfig(
            trials=e["trials"],
            master_seed=e["seed"],
            scenario=scenario,
            problem=self.problem_spec(scenario),
            policies=tuple(PolicyId.parse(p) for p in e["policies"]),
            threads=e["threads"],
            brute_force_cap=e["brute_force_cap"],
        ))

    def tracking_scenario(self) -> TrackingScenario:
        t = self.values["tracking"]
        p = self.values["placement"]
        n = self.values["noise"]
        return self._build(lambda: TrackingScenario(
            geometry=self.geometry(),
            noise=NoiseModel(n["bandwidth"], n["noise_figure"], n["temperature"]),
            tx_height=t["tx_height"],
            rx_height=t["rx_height"],
            ris_height=t["ris_height"],
            lateral_range=(t["lateral_range"][0], t["lateral_range"][1]),
            user_speed=t["user_speed"],
            ris_to_path_ground_distance=t["ris_to_path_ground_distance"],
            tx_to_ris_ground_distance=t["tx_to_ris_ground_distance"],
            tx_ris_distance=t["tx_ris_distance"],
            snr_drop_threshold_db=t["snr_drop_threshold"],
            alpha=t["alpha"],
            step=t["step"],
            p_t=self.values["link"]["p_t"],
            g_t=p["g_t"],
            g_r=p["g_r"],
            symmetric_tx=t["symmetric_tx"],
        ))

    def demo_policy(self) -> PolicyId:
        return PolicyId.parse(self.values["demo"]["policy"])

    def dump_channels(self) -> bool:
        """Whether the run also writes the drawn channels to ``channels.csv``."""
        return bool(self.values["experiment"]["dump_channels"])


def load_run_config(
    source: Optional[str] = None,
    overrides: Sequence[str] = (),
    command: str = "montecarlo",
) -> RunConfig:
    """Load a preset or YAML file, apply ``key=value`` overrides and resolve to SI.

    Args:
        source: Preset name, path to a YAML document, or ``None`` for the
            command's default preset.
        overrides: ``section.key=value`` or ``key=value`` strings, applied in order.
        command: Subcommand, used to pick the default preset.

    Returns:
        The resolved RunConfig

    Raises:
        ConfigError: On a missing file, malformed YAML, unknown sections or
            keys, or values that cannot be read; the message carries the
            file and line when known.
    """
    values = {section: {key: default for key, (_, default) in keys.items()} for section, keys in SCHEMA.items()}
    origins: dict[tuple[str, str], Origin] = {}

    name = source or DEFAULT_PRESETS.get(command, "table1")
    path = _preset_path(name)
    if path is None:
        if not os.path.isfile(name):
            presets = ", ".join(preset_names())
            raise ConfigError(f"no such config file or preset (presets: {presets})", name)
        path = name

    document, lines, display = _read_document(path)
    _merge_document(values, origins, document, lines, display)

    for text in overrides:
        section, key, value = parse_override(text)
        values[section][key] = value
        origins[(section, key)] = ("--set", None)

    resolved = _resolve(values, origins)
    logger.info("run_config_loaded", source=display, overrides=list(overrides))
    return RunConfig(values=resolved, source=display)
