"""Unit-cell geometry and Rician channel draws for the TX-RIS-RX links.

Amplitude prefactors use the center distance and center angle for every
cell (far-field convention); phases use per-cell distances.  Per-cell
distances are exact when the placement carries 3-D positions, otherwise
a plane-wave projection is used.
"""
import math
from typing import Union

import numpy as np
import pandas as pd

from src.domain.errors import DomainError
from src.domain.models import ChannelRealization, FadingParams, Placement, RisGeometry


SeedLike = Union[int, np.random.SeedSequence]

_TX_STREAM = 0
_RX_STREAM = 1


def cell_positions(geom: RisGeometry) -> np.ndarray:
    """Return the ``(M_s, 3)`` cell centers of a grid centered on the origin.

    Cells are ordered row by row: index ``k = row * m_x + column``.  All
    points lie in the ``z = 0`` plane.
    """
    xs = (np.arange(geom.m_x) - (geom.m_x - 1) / 2.0) * geom.d_x
    ys = (np.arange(geom.m_y) - (geom.m_y - 1) / 2.0) * geom.d_y
    grid_x, grid_y = np.meshgrid(xs, ys)
    return np.column_stack([grid_x.ravel(), grid_y.ravel(), np.zeros(geom.m_s)])


def element_gain(theta: float) -> float:
    """Cosine gain pattern of a unit cell, ``4 cos(theta)``.

    Raises:
        DomainError: If ``theta`` lies outside ``[0, pi/2)``.
    """
    if not 0.0 <= theta < math.pi / 2:
        raise DomainError(f"element gain is defined on [0, pi/2), got {theta!r}")
    return 4.0 * math.cos(theta)


def los_amplitude(distance: float, antenna_gain: float, cell_gain: float, wavelength: float) -> float:
    """Deterministic LoS amplitude ``sqrt((lambda/4pi)^2 G G_s / d^2)`` of one link.

    Raises:
        DomainError: If ``distance`` is not positive.
    """
    if distance <= 0:
        raise DomainError(f"link distance must be positive, got {distance!r}")
    if antenna_gain < 0 or cell_gain < 0:
        raise DomainError("gains must be non-negative")
    return wavelength / (4.0 * math.pi * distance) * math.sqrt(antenna_gain * cell_gain)


def los_power_gain(distance: float, antenna_gain: float, cell_gain: float, wavelength: float) -> float:
    """Per-cell LoS power gain, the square of :func:`los_amplitude`."""
    return los_amplitude(distance, antenna_gain, cell_gain, wavelength) ** 2


def tx_amplitude(geom: RisGeometry, placement: Placement) -> float:
    """LoS amplitude of the TX -> cell link."""
    return los_amplitude(placement.d_t, placement.g_t, element_gain(placement.theta_inc), geom.wavelength)


def rx_amplitude(geom: RisGeometry, placement: Placement) -> float:
    """LoS amplitude of the cell -> RX link."""
    return los_amplitude(placement.d_r, placement.g_r, element_gain(placement.theta_dep), geom.wavelength)


def per_cell_distances(geom: RisGeometry, placement: Placement) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(d_t_k, d_r_k)`` for every cell.

    With positions the distances are exact; without them they are
    ``d - p_k . u`` with ``u`` the unit vector towards the TX (RX).
    """
    cells = cell_positions(geom)
    if placement.tx_position is not None and placement.rx_position is not None:
        d_t = np.linalg.norm(np.asarray(placement.tx_position) - cells, axis=1)
        d_r = np.linalg.norm(np.asarray(placement.rx_position) - cells, axis=1)
        return d_t, d_r

    u_t = np.array([math.sin(placement.theta_inc), 0.0, math.cos(placement.theta_inc)])
    u_r = np.array([-math.sin(placement.theta_dep), 0.0, math.cos(placement.theta_dep)])
    return placement.d_t - cells @ u_t, placement.d_r - cells @ u_r


def _seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.SeedSequence(int(seed))


def sub_stream(seed: SeedLike, index: int) -> np.random.Generator:
    """Generator for the ``index``-th child stream of ``seed``.

    Children are built from the spawn key directly, so a parent sequence
    can be reused without its spawn counter changing the result.
    """
    parent = _seed_sequence(seed)
    child = np.random.SeedSequence(parent.entropy, spawn_key=(*parent.spawn_key, index))
    return np.random.default_rng(child)


def _rician_link(
    amplitude: float,
    distances: np.ndarray,
    wavelength: float,
    sigma_sq: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    los_phase = 2.0 * math.pi * distances / wavelength
    if sigma_sq == 0:
        return np.full(distances.size, amplitude), np.angle(np.exp(1j * los_phase))

    scale = math.sqrt(sigma_sq / 2.0)
    diffuse = (rng.standard_normal(distances.size) + 1j * rng.standard_normal(distances.size)) * scale
    envelope = np.exp(1j * los_phase) + diffuse
    return amplitude * np.abs(envelope), np.angle(envelope)


def draw_channels(
    geom: RisGeometry,
    placement: Placement,
    fading: FadingParams,
    seed: SeedLike,
) -> ChannelRealization:
    """Draw one Rician realization of ``h_t`` and ``h_r``.

    ``h_t[k] = A_t (exp(j 2 pi d_t_k / lambda) + m_k)`` with ``m_k`` drawn
    from CN(0, sigma_t^2), and analogously for ``h_r``.  The TX and RX
    diffuse terms come from disjoint sub-streams of ``seed``, so equal
    inputs give bitwise-equal realizations.

    Args:
        geom: Surface geometry.
        placement: TX / RX placement.
        fading: Diffuse-component variances.
        seed: Non-negative integer or a ``numpy.random.SeedSequence``.

    Returns:
        The drawn channel realization.
    """
    d_t, d_r = per_cell_distances(geom, placement)
    tx_gains, tx_phases = _rician_link(
        tx_amplitude(geom, placement), d_t, geom.wavelength, fading.sigma_t_sq, sub_stream(seed, _TX_STREAM),
    )
    rx_gains, rx_phases = _rician_link(
        rx_amplitude(geom, placement), d_r, geom.wavelength, fading.sigma_r_sq, sub_stream(seed, _RX_STREAM),
    )
    return ChannelRealization(tx_gains=tx_gains, tx_phases=tx_phases, rx_gains=rx_gains, rx_phases=rx_phases)


def k_factors(fading: FadingParams) -> tuple[float, float]:
    """Rician K-factors of both links (infinite for zero diffuse power)."""
    return fading.k_factors


def channel_dump_rows(channels: ChannelRealization) -> pd.DataFrame:
    """Tabulate a realization as ``cell_index, re_h_t, im_h_t, re_h_r, im_h_r``."""
    h_t = channels.h_t
    h_r = channels.h_r
    return pd.DataFrame({
        "cell_index": np.arange(channels.m_s),
        "re_h_t": h_t.real,
        "im_h_t": h_t.imag,
        "re_h_r": h_r.real,
        "im_h_r": h_r.imag,
    })
