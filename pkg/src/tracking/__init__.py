"""User-mobility tracking study."""
from .tracking import (
    TrackingGeometry,
    TrackingResult,
    continuous_snr_trace,
    dynamic_power_curve,
    event_spacings,
    reconfiguration_fraction,
    resolve_tracking_geometry,
    simulate_tracking,
)

__all__ = [
    "TrackingGeometry",
    "TrackingResult",
    "continuous_snr_trace",
    "dynamic_power_curve",
    "event_spacings",
    "reconfiguration_fraction",
    "resolve_tracking_geometry",
    "simulate_tracking",
]
