"""Unit-suffixed quantities in configuration files.

Values are either plain numbers, taken to be SI already (watts, hertz,
meters, seconds, radians, linear gains), or strings such as ``28 GHz``,
``40 dBi``, ``20 mW``, ``30 dBm``, ``45 deg``, ``100 us`` or
``0.5 lambda``.  Everything is converted to SI on load.
"""
import math
import re
from collections.abc import Callable
from typing import Any, Optional

from src.domain.errors import ConfigError
from src.link.link_metrics import db_to_linear, dbm_to_watts

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zμµλ°/]*)\s*$")

Converter = Callable[[float], float]


def _scale(factor: float) -> Converter:
    return lambda value: value * factor


_IDENTITY = _scale(1.0)

UNITS: dict[str, dict[str, Converter]] = {
    "frequency": {"": _IDENTITY, "hz": _IDENTITY, "khz": _scale(1e3), "mhz": _scale(1e6), "ghz": _scale(1e9)},
    "power": {
        "": _IDENTITY,
        "w": _IDENTITY,
        "mw": _scale(1e-3),
        "uw": _scale(1e-6),
        "μw": _scale(1e-6),
        "µw": _scale(1e-6),
        "nw": _scale(1e-9),
        "dbm": dbm_to_watts,
        "dbw": db_to_linear,
    },
    "gain": {"": _IDENTITY, "db": db_to_linear, "dbi": db_to_linear},
    "decibel": {"": _IDENTITY, "db": _IDENTITY},
    "angle": {"": _IDENTITY, "rad": _IDENTITY, "deg": math.radians, "°": math.radians},
    "length": {"": _IDENTITY, "m": _IDENTITY, "cm": _scale(1e-2), "mm": _scale(1e-3), "km": _scale(1e3)},
    "time": {"": _IDENTITY, "s": _IDENTITY, "ms": _scale(1e-3), "us": _scale(1e-6), "μs": _scale(1e-6),
             "µs": _scale(1e-6), "ns": _scale(1e-9)},
    "speed": {"": _IDENTITY, "m/s": _IDENTITY, "km/h": _scale(1 / 3.6)},
    "temperature": {"": _IDENTITY, "k": _IDENTITY},
    "number": {"": _IDENTITY},
}


def parse_quantity(value: Any, kind: str, wavelength: Optional[float] = None) -> float:
    """Convert *value* of the given *kind* to SI.

    Lengths also accept ``lambda`` when *wavelength* is known.

    Raises:
        ConfigError: On an unparsable value or a unit that does not fit *kind*.
    """
    if kind not in UNITS:
        raise ConfigError(f"unknown quantity kind {kind!r}")
    if isinstance(value, bool):
        raise ConfigError(f"expected a {kind} value, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a {kind} value, got {value!r}")

    match = _QUANTITY.match(value)
    if match is None:
        raise ConfigError(f"cannot read {value!r} as a {kind} value")
    number = float(match.group(1))
    unit = match.group(2).lower()

    if kind == "length" and unit in ("lambda", "λ"):
        if wavelength is None:
            raise ConfigError(f"{value!r} needs the carrier frequency to resolve lambda")
        return number * wavelength

    converters = UNITS[kind]
    if unit not in converters:
        accepted = ", ".join(u for u in converters if u) or "none"
        raise ConfigError(f"unit {match.group(2)!r} does not fit a {kind} value (accepted: {accepted})")
    return float(converters[unit](number))
