"""RF harvesting, the nonlinear rectifier and RIS power consumption.

The rectifier follows the normalized logistic model

    P_DC = [P_max / (1 + e^{-a(P-b)}) - P_max / (1 + e^{ab})] / [1 - 1 / (1 + e^{ab})]

evaluated in the algebraically identical form
``P_max * expit(a(P-b)) * (1 - e^{-aP})`` which cannot overflow and is
exactly zero at ``P = 0``.
"""
import math
from collections.abc import Iterable
from typing import Optional

import numpy as np
from scipy.special import expit

from src.domain.errors import DomainError, InfeasibleError
from src.domain.models import ChannelRealization, HarvesterModel, RisPowerModel, cell_indices

# Round-off below this magnitude is clamped to zero.
_NEGATIVE_TOLERANCE = 1e-18


def harvested_rf_power(
    channels: ChannelRealization,
    a_h: Iterable[int],
    p_t: float,
    model: HarvesterModel,
) -> float:
    """Combined RF power at the rectifier input, ``eta_RF * P_t * sum |h_t[i]|^2``.

    The sum runs over ``a_h`` in ascending index order, so equal sets
    always give bitwise-equal results.

    Raises:
        DomainError: If an index is out of range.
    """
    idx = cell_indices(a_h, channels.m_s)
    if idx.size == 0:
        return 0.0
    return float(model.eta_rf * p_t * np.sum(channels.tx_power_gains[idx]))


def rectifier_dc_power(p_harv: float, model: HarvesterModel) -> float:
    """DC output of the rectifier for RF input ``p_harv`` (watts).

    Raises:
        DomainError: If ``p_harv`` is negative.
    """
    if p_harv < 0:
        raise DomainError(f"rectifier input must be non-negative, got {p_harv!r}")
    value = model.p_max * float(expit(model.a * (p_harv - model.b))) * -math.expm1(-model.a * p_harv)
    if value < 0:
        if value < -_NEGATIVE_TOLERANCE:
            raise DomainError(f"rectifier produced negative output {value!r}")
        return 0.0
    return value


def required_rf_input(p_dc_target: float, model: HarvesterModel) -> float:
    """Invert :func:`rectifier_dc_power`.

    With ``r = target / P_max`` the inverse is
    ``[log(1 + r e^{ab}) - log(1 - r)] / a``, evaluated in log space.

    Raises:
        DomainError: If the target is negative.
        InfeasibleError: If the target is at or above ``P_max``.
    """
    if p_dc_target < 0:
        raise DomainError(f"DC target must be non-negative, got {p_dc_target!r}")
    if p_dc_target >= model.p_max:
        raise InfeasibleError(
            f"DC target {p_dc_target!r} W can never be reached: rectifier saturates at p_max={model.p_max!r} W"
        )
    if p_dc_target == 0:
        return 0.0
    ratio = p_dc_target / model.p_max
    numerator = np.logaddexp(0.0, math.log(ratio) + model.a * model.b) - math.log1p(-ratio)
    return float(numerator) / model.a


def dc_power_for_cells(
    channels: ChannelRealization,
    a_h: Iterable[int],
    p_t: float,
    model: HarvesterModel,
) -> float:
    """DC power delivered when the cells in ``a_h`` harvest."""
    return rectifier_dc_power(harvested_rf_power(channels, a_h, p_t, model), model)


def ris_consumption(model: RisPowerModel, m_s: int, p_d_avg: Optional[float] = None) -> float:
    """Total RIS consumption ``M_s * (P_static + P_d_avg)``.

    Args:
        model: Consumption parameters.
        m_s: Number of cells on the surface.
        p_d_avg: Overrides ``model.p_d_avg`` (e.g. with a cadence derived
            from a tracking run).

    Raises:
        DomainError: If ``m_s`` is below one or ``p_d_avg`` is negative.
    """
    if m_s < 1:
        raise DomainError(f"m_s must be >= 1, got {m_s}")
    dynamic = model.p_d_avg if p_d_avg is None else p_d_avg
    if dynamic < 0:
        raise DomainError(f"p_d_avg must be non-negative, got {dynamic!r}")
    return m_s * (model.p_static + dynamic)
