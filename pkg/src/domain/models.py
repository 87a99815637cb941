"""Core domain models for RIS power-splitting simulations.

All powers are in watts, distances in meters, angles in radians and
SNRs linear.  dB conversions happen only at I/O boundaries.

Cell indices are 0-based: a surface with ``M_s`` cells uses indices
``0 .. M_s - 1``.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np
from scipy.constants import speed_of_light

from src.domain.errors import ConfigError, DomainError

Point3 = tuple[float, float, float]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _check_angle(name: str, theta: float) -> None:
    _require(0.0 <= theta < math.pi / 2, f"{name} must lie in [0, pi/2), got {theta!r}")


def cell_indices(indices: Any, m_s: int) -> np.ndarray:
    """Validate a set of cell indices and return them sorted ascending.

    Raises:
        DomainError: On out-of-range or repeated indices.
    """
    idx = np.sort(np.asarray(list(indices), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= m_s):
        raise DomainError(f"cell index out of range [0, {m_s}): {idx.tolist()}")
    if idx.size > 1 and np.any(np.diff(idx) == 0):
        raise DomainError(f"repeated cell index in {idx.tolist()}")
    return idx


# ---------------------------------------------------------------------------
# Channel model types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RisGeometry:
    """Rectangular uniform planar array of ``m_x * m_y`` unit cells.

    ``d_x`` and ``d_y`` are the cell pitch; the wavelength is derived
    from ``frequency``.
    """

    m_x: int
    m_y: int
    d_x: float
    d_y: float
    frequency: float

    def __post_init__(self) -> None:
        _require(self.m_x >= 1 and self.m_y >= 1, f"cell counts must be >= 1, got {self.m_x}x{self.m_y}")
        _require(self.d_x > 0 and self.d_y > 0, f"cell pitch must be positive, got {self.d_x}, {self.d_y}")
        _require(self.frequency > 0, f"frequency must be positive, got {self.frequency}")

    @classmethod
    def half_wavelength(cls, m_x: int, m_y: int, frequency: float) -> "RisGeometry":
        """Build a geometry with ``d_x = d_y = lambda / 2``."""
        pitch = speed_of_light / frequency / 2.0
        return cls(m_x=m_x, m_y=m_y, d_x=pitch, d_y=pitch, frequency=frequency)

    @property
    def wavelength(self) -> float:
        return speed_of_light / self.frequency

    @property
    def m_s(self) -> int:
        """Total number of unit cells."""
        return self.m_x * self.m_y


@dataclass(frozen=True)
class Placement:
    """Where the TX and RX sit relative to the RIS center.

    The RIS lies in the x-y plane with its normal along +z.  When
    ``tx_position`` / ``rx_position`` are given, per-cell distances are
    computed from them exactly; otherwise a plane-wave phase model built
    from the incidence and departure angles is used.
    """

    d_t: float
    d_r: float
    theta_inc: float
    theta_dep: float
    g_t: float
    g_r: float
    tx_position: Optional[Point3] = None
    rx_position: Optional[Point3] = None

    def __post_init__(self) -> None:
        _require(self.d_t > 0 and self.d_r > 0, f"link distances must be positive, got {self.d_t}, {self.d_r}")
        _check_angle("theta_inc", self.theta_inc)
        _check_angle("theta_dep", self.theta_dep)
        _require(self.g_t > 0 and self.g_r > 0, f"antenna gains must be positive, got {self.g_t}, {self.g_r}")

    @classmethod
    def from_angles(
        cls,
        d_t: float,
        d_r: float,
        theta_inc: float,
        theta_dep: float,
        g_t: float,
        g_r: float,
    ) -> "Placement":
        """Place the TX and RX in the x-z plane consistent with distances and angles.

        The TX sits on the +x side and the RX on the specular (-x) side.
        """
        tx = (d_t * math.sin(theta_inc), 0.0, d_t * math.cos(theta_inc))
        rx = (-d_r * math.sin(theta_dep), 0.0, d_r * math.cos(theta_dep))
        return cls(
            d_t=d_t, d_r=d_r, theta_inc=theta_inc, theta_dep=theta_dep,
            g_t=g_t, g_r=g_r, tx_position=tx, rx_position=rx,
        )

    @classmethod
    def from_positions(cls, tx_position: Point3, rx_position: Point3, g_t: float, g_r: float) -> "Placement":
        """Derive distances and angles (w.r.t. the +z normal) from 3-D positions."""
        d_t = math.dist(tx_position, (0.0, 0.0, 0.0))
        d_r = math.dist(rx_position, (0.0, 0.0, 0.0))
        _require(d_t > 0 and d_r > 0, "TX and RX must not coincide with the RIS center")
        return cls(
            d_t=d_t,
            d_r=d_r,
            theta_inc=math.acos(tx_position[2] / d_t),
            theta_dep=math.acos(rx_position[2] / d_r),
            g_t=g_t,
            g_r=g_r,
            tx_position=tx_position,
            rx_position=rx_position,
        )

    def without_positions(self) -> "Placement":
        """Same placement, forced onto the plane-wave phase model."""
        return Placement(
            d_t=self.d_t, d_r=self.d_r, theta_inc=self.theta_inc, theta_dep=self.theta_dep,
            g_t=self.g_t, g_r=self.g_r,
        )


@dataclass(frozen=True)
class FadingParams:
    """Diffuse-component variances of the TX-RIS and RIS-RX links."""

    sigma_t_sq: float
    sigma_r_sq: float

    def __post_init__(self) -> None:
        _require(self.sigma_t_sq >= 0 and self.sigma_r_sq >= 0, "fading variances must be non-negative")

    @property
    def k_factors(self) -> tuple[float, float]:
        """Rician K-factors ``(K_1, K_2) = (1/sigma_t^2, 1/sigma_r^2)``; infinite for pure LoS."""
        k_1 = math.inf if self.sigma_t_sq == 0 else 1.0 / self.sigma_t_sq
        k_2 = math.inf if self.sigma_r_sq == 0 else 1.0 / self.sigma_r_sq
        return k_1, k_2


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Per-cell TX->cell and cell->RX channels of one fading block.

    Magnitudes and phases are stored separately so that equal-gain links
    (zero diffuse power) stay bit-exactly equal across cells; ``h_t`` and
    ``h_r`` rebuild the complex envelopes on demand.
    """

    tx_gains: np.ndarray = field(repr=False)
    tx_phases: np.ndarray = field(repr=False)
    rx_gains: np.ndarray = field(repr=False)
    rx_phases: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        shapes = {a.shape for a in (self.tx_gains, self.tx_phases, self.rx_gains, self.rx_phases)}
        _require(len(shapes) == 1 and self.tx_gains.ndim == 1, "channel arrays must be 1-D and equally long")
        _require(self.tx_gains.size >= 1, "a realization needs at least one cell")
        for name in ("tx_gains", "rx_gains"):
            gains = getattr(self, name)
            _require(bool(np.all(np.isfinite(gains)) and np.all(gains >= 0)), f"{name} must be finite and non-negative")

    @classmethod
    def from_complex(cls, h_t: Any, h_r: Any) -> "ChannelRealization":
        """Build a realization from complex channel sequences."""
        h_t = np.asarray(h_t, dtype=np.complex128)
        h_r = np.asarray(h_r, dtype=np.complex128)
        return cls(
            tx_gains=np.abs(h_t), tx_phases=np.angle(h_t),
            rx_gains=np.abs(h_r), rx_phases=np.angle(h_r),
        )

    @property
    def m_s(self) -> int:
        return int(self.tx_gains.size)

    @property
    def h_t(self) -> np.ndarray:
        return self.tx_gains * np.exp(1j * self.tx_phases)

    @property
    def h_r(self) -> np.ndarray:
        return self.rx_gains * np.exp(1j * self.rx_phases)

    @property
    def tx_power_gains(self) -> np.ndarray:
        """``|h_t[k]|^2`` for every cell."""
        return self.tx_gains ** 2

    @property
    def cascaded_gains(self) -> np.ndarray:
        """``g_k = |h_t[k]| |h_r[k]|`` for every cell."""
        return self.tx_gains * self.rx_gains


# ---------------------------------------------------------------------------
# Energy and link types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarvesterModel:
    """Nonlinear rectifier (sigmoid) plus corporate-feed combining efficiency."""

    a: float
    b: float
    p_max: float
    eta_rf: float

    def __post_init__(self) -> None:
        _require(self.a > 0 and self.b > 0 and self.p_max > 0, "rectifier a, b, p_max must be positive")
        _require(0 < self.eta_rf <= 1, f"eta_rf must lie in (0, 1], got {self.eta_rf}")


@dataclass(frozen=True)
class RisPowerModel:
    """Static and dynamic RIS consumption per cell."""

    p_static: float
    p_dynamic: float
    alpha: float
    p_r: float

    def __post_init__(self) -> None:
        _require(self.p_static >= 0 and self.p_dynamic >= 0, "consumption powers must be non-negative")
        _require(0 < self.alpha <= 1, f"alpha must lie in (0, 1], got {self.alpha}")
        _require(0 <= self.p_r <= 1, f"p_r must lie in [0, 1], got {self.p_r}")

    @property
    def p_d_avg(self) -> float:
        """Equivalent continuous dynamic consumption per cell, ``alpha * p_r * P_dynamic``."""
        return self.alpha * self.p_r * self.p_dynamic


@dataclass(frozen=True)
class NoiseModel:
    """Receiver thermal noise: bandwidth, noise figure and reference temperature."""

    bandwidth: float
    noise_figure_db: float
    reference_temperature: float = 290.0

    def __post_init__(self) -> None:
        _require(self.bandwidth > 0, f"bandwidth must be positive, got {self.bandwidth}")
        _require(self.reference_temperature > 0, "reference temperature must be positive")


@dataclass(frozen=True, eq=False)
class PhaseConfig:
    """Per-cell reflection phases; entries of non-reflecting cells are ignored."""

    phi: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        _require(bool(np.all(np.isfinite(self.phi))), "phases must be finite")


@dataclass(frozen=True)
class Scenario:
    """Everything needed to draw channels and evaluate an allocation."""

    geometry: RisGeometry
    placement: Placement
    fading: FadingParams
    harvester: HarvesterModel
    power: RisPowerModel
    noise: NoiseModel
    p_t: float

    def __post_init__(self) -> None:
        _require(self.p_t > 0, f"transmit power must be positive, got {self.p_t}")


# ---------------------------------------------------------------------------
# Policy types
# ---------------------------------------------------------------------------

class ProblemKind(Enum):
    """Which constrained formulation is being solved."""
    PROBLEM_A = "ProblemA"  # max SNR s.t. P_DC >= P_RIS
    PROBLEM_B = "ProblemB"  # max P_DC s.t. SNR >= gamma_0

    @classmethod
    def parse(cls, value: str) -> "ProblemKind":
        """Accept ``ProblemA`` / ``A`` (any case) and friends."""
        key = value.strip().lower().removeprefix("problem")
        for kind in cls:
            if kind.value.lower().removeprefix("problem") == key:
                return kind
        raise ConfigError(f"unknown problem kind {value!r}; valid kinds: ProblemA, ProblemB")


class PolicyId(Enum):
    """Every allocation policy the engine knows."""
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"
    BRUTE_FORCE_A = "BruteForceA"
    BRUTE_FORCE_B = "BruteForceB"
    CLOSED_FORM_A = "ClosedFormA"

    @classmethod
    def parse(cls, value: str) -> "PolicyId":
        """Look a policy up by name, listing the valid names on failure."""
        try:
            return cls(value)
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ConfigError(f"unknown policy {value!r}; valid names: {valid}") from None

    @property
    def problem_kind(self) -> ProblemKind:
        if self.value.startswith("B") and self is not PolicyId.BRUTE_FORCE_A:
            return ProblemKind.PROBLEM_B
        return ProblemKind.PROBLEM_A

    @property
    def is_brute_force(self) -> bool:
        return self in (PolicyId.BRUTE_FORCE_A, PolicyId.BRUTE_FORCE_B)


@dataclass(frozen=True)
class Allocation:
    """Partition of the cells into harvesting (``a_h``) and reflecting (``a_r``) sets."""

    a_h: tuple[int, ...]
    a_r: tuple[int, ...]

    def __post_init__(self) -> None:
        _require(list(self.a_h) == sorted(self.a_h), "a_h must be sorted")
        _require(list(self.a_r) == sorted(self.a_r), "a_r must be sorted")
        union = set(self.a_h) | set(self.a_r)
        _require(not set(self.a_h) & set(self.a_r), "a_h and a_r must be disjoint")
        _require(union == set(range(self.m_s)), "a_h and a_r must cover every cell exactly once")

    @classmethod
    def from_reflecting(cls, a_r: Any, m_s: int) -> "Allocation":
        """Reflect the given cells and harvest the complement."""
        reflecting = sorted(int(i) for i in a_r)
        chosen = set(reflecting)
        return cls(a_h=tuple(i for i in range(m_s) if i not in chosen), a_r=tuple(reflecting))

    @classmethod
    def from_harvesting(cls, a_h: Any, m_s: int) -> "Allocation":
        """Harvest with the given cells and reflect with the complement."""
        harvesting = sorted(int(i) for i in a_h)
        chosen = set(harvesting)
        return cls(a_h=tuple(harvesting), a_r=tuple(i for i in range(m_s) if i not in chosen))

    @property
    def m_s(self) -> int:
        return len(self.a_h) + len(self.a_r)

    @property
    def m_h(self) -> int:
        return len(self.a_h)

    @property
    def m_r(self) -> int:
        return len(self.a_r)


@dataclass(frozen=True)
class ProblemSpec:
    """Constraint and link parameters of one optimization problem.

    Only the constraint matching ``kind`` is consulted: ``p_ris`` for
    Problem A, ``gamma_0`` for Problem B.
    """

    kind: ProblemKind
    p_ris: float
    gamma_0: float
    p_t: float
    sigma_sq: float

    def __post_init__(self) -> None:
        _require(self.p_ris >= 0 and self.gamma_0 >= 0, "constraints must be non-negative")
        _require(self.p_t > 0 and self.sigma_sq > 0, "p_t and sigma_sq must be positive")


@dataclass(frozen=True)
class PolicyOutcome:
    """Result of running one policy on one realization.

    ``snr`` and ``p_dc`` are always recomputed from ``allocation``.
    ``i_stop`` is the stopping index of the greedy loop (``None`` for
    exhaustive search); ``evaluated`` counts the allocations examined
    by exhaustive search.
    """

    policy_id: PolicyId
    allocation: Allocation
    snr: float
    p_dc: float
    feasible: bool
    i_stop: Optional[int] = None
    evaluated: Optional[int] = None

    @property
    def m_h(self) -> int:
        return self.allocation.m_h

    def objective(self, kind: ProblemKind) -> float:
        """SNR for Problem A, DC power for Problem B."""
        return self.snr if kind is ProblemKind.PROBLEM_A else self.p_dc

    def to_record(self) -> dict[str, Any]:
        """Return the JSON record for this outcome (``snr_db`` is null for zero SNR)."""
        return {
            "policy_id": self.policy_id.value,
            "a_h": list(self.allocation.a_h),
            "a_r": list(self.allocation.a_r),
            "m_h": self.m_h,
            "snr_db": 10.0 * math.log10(self.snr) if self.snr > 0 else None,
            "p_dc_watts": self.p_dc,
            "feasible": self.feasible,
            "i_stop": self.i_stop,
        }


# ---------------------------------------------------------------------------
# Experiment and tracking types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """A Monte-Carlo experiment: scenario, problem, policies and trial count."""

    trials: int
    master_seed: int
    scenario: Scenario
    problem: ProblemSpec
    policies: tuple[PolicyId, ...]
    threads: int = 1
    brute_force_cap: int = 22

    def __post_init__(self) -> None:
        _require(self.trials >= 1, f"trials must be >= 1, got {self.trials}")
        _require(self.threads >= 1, f"threads must be >= 1, got {self.threads}")
        _require(len(self.policies) >= 1, "at least one policy is required")
        if len(set(self.policies)) != len(self.policies):
            raise ConfigError("policies must not repeat")
        for policy in self.policies:
            if policy.problem_kind is not self.problem.kind:
                raise ConfigError(f"policy {policy.value} does not solve {self.problem.kind.value}")


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted samples of a scalar statistic."""

    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        _require(self.samples.ndim == 1, "samples must be 1-D")
        _require(bool(np.all(np.diff(self.samples) >= 0)), "samples must be sorted ascending")

    @classmethod
    def from_samples(cls, values: Any) -> "EmpiricalDistribution":
        return cls(samples=np.sort(np.asarray(values, dtype=float)))

    @property
    def n(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class TrackingScenario:
    """User walking parallel to the RIS while the link is tracked.

    Distances are ground distances unless stated otherwise.  The RIS
    center height is configurable; the TX lateral offset follows from
    ``tx_ris_distance``.  ``symmetric_tx`` puts the TX on the RIS normal
    (ignoring ``tx_ris_distance``) so the SNR trace is mirror-symmetric.
    """

    geometry: RisGeometry
    noise: NoiseModel
    tx_height: float = 3.0
    rx_height: float = 1.5
    ris_height: float = 11.0
    lateral_range: tuple[float, float] = (-40.0, 40.0)
    user_speed: float = 1.4
    ris_to_path_ground_distance: float = 17.0
    tx_to_ris_ground_distance: float = 17.0
    tx_ris_distance: float = 19.0
    snr_drop_threshold_db: float = 3.0
    alpha: float = 1.0
    step: float = 0.01
    p_t: float = 1.0
    g_t: float = 1e4
    g_r: float = 10 ** 2.2
    symmetric_tx: bool = False

    def __post_init__(self) -> None:
        distances = (
            self.tx_height, self.rx_height, self.ris_height, self.user_speed,
            self.ris_to_path_ground_distance, self.tx_to_ris_ground_distance, self.tx_ris_distance,
        )
        _require(all(d > 0 for d in distances), "tracking distances and speed must be positive")
        _require(self.snr_drop_threshold_db > 0, "snr_drop_threshold_db must be positive")
        _require(self.step > 0, f"step must be positive, got {self.step}")
        _require(self.lateral_range[0] < self.lateral_range[1], "lateral_range must be increasing")
        _require(0 < self.alpha <= 1, f"alpha must lie in (0, 1], got {self.alpha}")
        _require(self.p_t > 0 and self.g_t > 0 and self.g_r > 0, "p_t, g_t, g_r must be positive")


@dataclass(frozen=True)
class ReconfigEvent:
    """A threshold-triggered re-optimization of the RIS phases."""

    position: float
    time: float
    index: int


@dataclass(frozen=True)
class OutputFile:
    """One file written by a run, with its SHA-256 checksum."""

    name: str
    sha256: str


@dataclass
class RunManifest:
    """Everything needed to reproduce a run bit-for-bit."""

    tool_version: str
    command: str
    config: dict[str, Any]
    master_seed: int
    duration_s: float = 0.0
    outputs: list[OutputFile] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-serialisable dictionary of all fields."""
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "master_seed": self.master_seed,
            "duration_s": self.duration_s,
            "config": self.config,
            "outputs": [{"name": o.name, "sha256": o.sha256} for o in self.outputs],
        }
