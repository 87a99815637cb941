"""End-to-end SNR through the reflecting cells and receiver noise power."""
import math
from collections.abc import Iterable

import numpy as np
from scipy.constants import Boltzmann

from src.domain.errors import DomainError
from src.domain.models import ChannelRealization, NoiseModel, PhaseConfig, cell_indices


def noise_power(model: NoiseModel) -> float:
    """Thermal noise ``k_B * T_0 * W * 10^(F_dB/10)`` in watts."""
    return Boltzmann * model.reference_temperature * model.bandwidth * db_to_linear(model.noise_figure_db)


def _check_sigma(sigma_sq: float) -> None:
    if sigma_sq <= 0:
        raise DomainError(f"noise power must be positive, got {sigma_sq!r}")


def snr_with_phases(
    channels: ChannelRealization,
    a_r: Iterable[int],
    phases: PhaseConfig,
    p_t: float,
    sigma_sq: float,
) -> float:
    """SNR when the cells in ``a_r`` reflect with the given phases.

    Each reflecting cell contributes ``|h_t||h_r| e^{j(phi + angle h_t + angle h_r)}``.

    Raises:
        DomainError: On out-of-range indices, a phase vector of the wrong
            length or non-positive noise power.
    """
    _check_sigma(sigma_sq)
    idx = cell_indices(a_r, channels.m_s)
    if phases.phi.shape != (channels.m_s,):
        raise DomainError(f"expected {channels.m_s} phases, got shape {phases.phi.shape}")
    if idx.size == 0:
        return 0.0
    total_phase = phases.phi[idx] + channels.tx_phases[idx] + channels.rx_phases[idx]
    field = np.sum(channels.cascaded_gains[idx] * np.exp(1j * total_phase))
    return float(p_t / sigma_sq * abs(field) ** 2)


def optimal_phases(channels: ChannelRealization, a_r: Iterable[int]) -> PhaseConfig:
    """Co-phasing configuration ``phi_k = -angle(h_t[k]) - angle(h_r[k])``.

    Cells outside ``a_r`` get phase zero.

    Raises:
        DomainError: If ``a_r`` is empty.
    """
    idx = cell_indices(a_r, channels.m_s)
    if idx.size == 0:
        raise DomainError("optimal phases need at least one reflecting cell")
    phi = np.zeros(channels.m_s)
    phi[idx] = -channels.tx_phases[idx] - channels.rx_phases[idx]
    return PhaseConfig(phi=phi)


def max_snr(channels: ChannelRealization, a_r: Iterable[int], p_t: float, sigma_sq: float) -> float:
    """SNR at optimal phases, ``(P_t / sigma^2) (sum |h_t[k]||h_r[k]|)^2``.

    The sum runs in ascending index order so equal sets give bitwise-equal
    results.
    """
    _check_sigma(sigma_sq)
    idx = cell_indices(a_r, channels.m_s)
    if idx.size == 0:
        return 0.0
    amplitude = float(np.sum(channels.cascaded_gains[idx]))
    return p_t / sigma_sq * amplitude * amplitude


def linear_to_db(value: float) -> float:
    """``10 log10(value)``; zero maps to ``-inf``."""
    if value < 0:
        raise DomainError(f"cannot express negative value {value!r} in dB")
    if value == 0:
        return -math.inf
    return 10.0 * math.log10(value)


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def dbm_to_watts(value_dbm: float) -> float:
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def watts_to_dbm(value_w: float) -> float:
    return linear_to_db(value_w) + 30.0
