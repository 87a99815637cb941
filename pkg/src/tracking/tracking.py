"""User-mobility study: continuous vs. threshold-triggered RIS reconfiguration.

World frame: the RIS hangs on a wall (the plane ``y = 0``) with its center
at height ``ris_height`` above ``x = 0``; the user walks along ``x`` at
ground distance ``ris_to_path_ground_distance`` from the wall.  Channels
are built in the RIS frame (surface in its x-y plane, normal +z), which
maps world ``(x, y, z)`` to ``(x, z - ris_height, y)``.

All cells reflect; the links are free-space (no diffuse component).
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd
import structlog

from src.channel.channel_model import draw_channels
from src.domain.errors import DomainError, UndefinedCadenceError
from src.domain.models import (
    ChannelRealization,
    FadingParams,
    PhaseConfig,
    Placement,
    ReconfigEvent,
    TrackingScenario,
)
from src.link.link_metrics import linear_to_db, max_snr, noise_power, optimal_phases, snr_with_phases

logger = structlog.get_logger(__name__)

Point3 = tuple[float, float, float]

_FREE_SPACE = FadingParams(0.0, 0.0)
_UNUSED_SEED = 0

TRACE_COLUMNS = ["position_m", "time_s", "snr_db_continuous", "snr_db_stale"]
EVENT_COLUMNS = ["index", "position_m", "time_s"]
SPACING_COLUMNS = ["midpoint_m", "spacing_m", "spacing_s"]
PDAVG_COLUMNS = ["p_dynamic_w", "reconfig_duration_s", "p_r", "p_d_avg_w"]


@dataclass(frozen=True)
class TrackingGeometry:
    """TX placement resolved from the scenario distances."""

    ris_height: float
    tx_lateral_offset: float
    tx_position: Point3
    theta_inc: float


def resolve_tracking_geometry(scenario: TrackingScenario) -> TrackingGeometry:
    """Place the TX in the RIS frame.

    The TX sits ``tx_to_ris_ground_distance`` in front of the wall at
    ``tx_height``; its lateral offset makes the TX-RIS center distance
    equal ``tx_ris_distance``.  With ``symmetric_tx`` the offset is zero.

    Raises:
        DomainError: If the distances cannot be satisfied together.
    """
    vertical = scenario.tx_height - scenario.ris_height
    if scenario.symmetric_tx:
        offset = 0.0
    else:
        lateral_sq = (
            scenario.tx_ris_distance ** 2 - scenario.tx_to_ris_ground_distance ** 2 - vertical ** 2
        )
        if lateral_sq < 0:
            raise DomainError(
                f"tx_ris_distance={scenario.tx_ris_distance} m is shorter than the TX's distance to the "
                f"RIS plane and height difference allow (ris_height={scenario.ris_height} m)"
            )
        offset = -math.sqrt(lateral_sq)

    tx_position = (offset, vertical, scenario.tx_to_ris_ground_distance)
    theta_inc = math.acos(tx_position[2] / math.dist(tx_position, (0.0, 0.0, 0.0)))
    geometry = TrackingGeometry(
        ris_height=scenario.ris_height,
        tx_lateral_offset=offset,
        tx_position=tx_position,
        theta_inc=theta_inc,
    )
    logger.info(
        "tracking_geometry_resolved",
        ris_height_m=scenario.ris_height,
        tx_lateral_offset_m=offset,
        theta_inc_deg=math.degrees(theta_inc),
        symmetric_tx=scenario.symmetric_tx,
    )
    return geometry


def path_positions(scenario: TrackingScenario) -> np.ndarray:
    """Sampled user positions from the start of the path to its end."""
    start, end = scenario.lateral_range
    count = int(math.floor((end - start) / scenario.step + 1e-9)) + 1
    return start + scenario.step * np.arange(count)


def _channels_at(scenario: TrackingScenario, tracking: TrackingGeometry, position: float) -> ChannelRealization:
    rx_position = (
        float(position),
        scenario.rx_height - scenario.ris_height,
        scenario.ris_to_path_ground_distance,
    )
    placement = Placement.from_positions(tracking.tx_position, rx_position, scenario.g_t, scenario.g_r)
    return draw_channels(scenario.geometry, placement, _FREE_SPACE, _UNUSED_SEED)


def continuous_snr_trace(
    scenario: TrackingScenario,
    tracking: Optional[TrackingGeometry] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """SNR along the path when the phases are re-optimized at every sample.

    Returns:
        ``(positions, snr)`` arrays, SNR linear
    """
    tracking = tracking or resolve_tracking_geometry(scenario)
    sigma_sq = noise_power(scenario.noise)
    all_cells = range(scenario.geometry.m_s)
    positions = path_positions(scenario)
    snr = np.array([
        max_snr(_channels_at(scenario, tracking, x), all_cells, scenario.p_t, sigma_sq) for x in positions
    ])
    return positions, snr


@dataclass(frozen=True, eq=False)
class TrackingResult:
    """Continuous and stale SNR traces plus the triggered reconfigurations.

    At the start position and at every event the stale SNR is recorded
    as the continuous value, since the phases were just re-optimized.
    """

    scenario: TrackingScenario
    tracking: TrackingGeometry
    positions: np.ndarray
    continuous_snr: np.ndarray
    stale_snr: np.ndarray
    events: tuple[ReconfigEvent, ...]

    @property
    def start(self) -> float:
        return float(self.positions[0])

    def trace_frame(self) -> pd.DataFrame:
        """Rows of ``trace.csv``."""
        return pd.DataFrame({
            "position_m": self.positions,
            "time_s": (self.positions - self.start) / self.scenario.user_speed,
            "snr_db_continuous": 10.0 * np.log10(self.continuous_snr),
            "snr_db_stale": 10.0 * np.log10(self.stale_snr),
        }, columns=TRACE_COLUMNS)

    def events_frame(self) -> pd.DataFrame:
        """Rows of ``events.csv``."""
        return pd.DataFrame(
            [(e.index, e.position, e.time) for e in self.events],
            columns=EVENT_COLUMNS,
        )


def simulate_tracking(scenario: TrackingScenario) -> TrackingResult:
    """Walk the path with frozen phases, re-optimizing when the SNR gap exceeds the threshold.

    At each sample the frozen-phase SNR is compared with the SNR of
    continuous tracking at the same position.  The first sample where
    it falls more than ``snr_drop_threshold_db`` below triggers an event;
    the phases are re-optimized there and the walk continues.
    """
    tracking = resolve_tracking_geometry(scenario)
    sigma_sq = noise_power(scenario.noise)
    all_cells = range(scenario.geometry.m_s)
    positions = path_positions(scenario)
    start = float(positions[0])

    continuous = np.empty(positions.size)
    stale = np.empty(positions.size)
    events: list[ReconfigEvent] = []
    phases: Optional[PhaseConfig] = None

    for i, x in enumerate(positions):
        channels = _channels_at(scenario, tracking, x)
        continuous[i] = max_snr(channels, all_cells, scenario.p_t, sigma_sq)
        if phases is None:
            phases = optimal_phases(channels, all_cells)
            stale[i] = continuous[i]
            continue

        frozen = snr_with_phases(channels, all_cells, phases, scenario.p_t, sigma_sq)
        if linear_to_db(frozen) < linear_to_db(continuous[i]) - scenario.snr_drop_threshold_db:
            phases = optimal_phases(channels, all_cells)
            stale[i] = continuous[i]
            events.append(ReconfigEvent(
                position=float(x),
                time=(float(x) - start) / scenario.user_speed,
                index=len(events) + 1,
            ))
        else:
            stale[i] = frozen

    logger.info(
        "tracking_complete",
        m_s=scenario.geometry.m_s,
        samples=int(positions.size),
        events=len(events),
        threshold_db=scenario.snr_drop_threshold_db,
    )
    return TrackingResult(
        scenario=scenario,
        tracking=tracking,
        positions=positions,
        continuous_snr=continuous,
        stale_snr=stale,
        events=tuple(events),
    )


def event_spacings(events: Sequence[ReconfigEvent], start: float) -> pd.DataFrame:
    """Distance and time between consecutive reconfigurations.

    The first row covers the interval from the initial configuration at
    ``start`` (time zero) to the first event.
    """
    rows = []
    previous_position, previous_time = start, 0.0
    for event in events:
        rows.append((
            (previous_position + event.position) / 2.0,
            event.position - previous_position,
            event.time - previous_time,
        ))
        previous_position, previous_time = event.position, event.time
    return pd.DataFrame(rows, columns=SPACING_COLUMNS)


def reconfiguration_fraction(events: Sequence[ReconfigEvent], reconfig_duration: float) -> float:
    """Share of time spent reconfiguring at the fastest cadence, ``duration / min interval``.

    Raises:
        UndefinedCadenceError: With fewer than two events.
        DomainError: On a negative duration.
    """
    if len(events) < 2:
        raise UndefinedCadenceError(f"cadence needs at least two reconfiguration events, got {len(events)}")
    if reconfig_duration < 0:
        raise DomainError(f"reconfiguration duration must be non-negative, got {reconfig_duration}")
    shortest = min(b.time - a.time for a, b in zip(events, events[1:]))
    return reconfig_duration / shortest


def dynamic_power_curve(
    events: Sequence[ReconfigEvent],
    scenario: TrackingScenario,
    reconfig_duration: float,
    p_dynamic_grid: Sequence[float],
) -> pd.DataFrame:
    """Average dynamic consumption per cell, ``alpha * p_r * P_dynamic``, over a grid of P_dynamic.

    Raises:
        UndefinedCadenceError: With fewer than two events.
    """
    p_r = reconfiguration_fraction(events, reconfig_duration)
    rows = []
    for p_dynamic in p_dynamic_grid:
        if p_dynamic < 0:
            raise DomainError(f"P_dynamic must be non-negative, got {p_dynamic}")
        rows.append((float(p_dynamic), reconfig_duration, p_r, scenario.alpha * p_r * float(p_dynamic)))
    return pd.DataFrame(rows, columns=PDAVG_COLUMNS)
