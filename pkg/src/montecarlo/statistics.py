"""Aggregation of Monte-Carlo samples into CDFs, means and M_h PMFs."""
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from src.domain.errors import DomainError
from src.domain.models import EmpiricalDistribution, PolicyId, ProblemKind
from src.link.link_metrics import linear_to_db

from .experiment import ExperimentResult

CDF_COLUMNS = ["policy_id", "x_db", "F"]


def empirical_cdf(dist: EmpiricalDistribution, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Fraction of samples ``<= x`` (right-continuous step function)."""
    if dist.n == 0:
        raise DomainError("empirical CDF of an empty sample")
    counts = np.searchsorted(dist.samples, x, side="right")
    if np.ndim(counts) == 0:
        return float(counts) / dist.n
    return counts / dist.n


def mean_db(dist: EmpiricalDistribution) -> float:
    """dB value of the arithmetic mean of the linear samples."""
    _require_positive(dist)
    return linear_to_db(float(np.mean(dist.samples)))


def mean_of_db(dist: EmpiricalDistribution) -> float:
    """Arithmetic mean of the per-sample dB values."""
    _require_positive(dist)
    return float(np.mean(10.0 * np.log10(dist.samples)))


def _require_positive(dist: EmpiricalDistribution) -> None:
    if dist.n == 0:
        raise DomainError("mean of an empty sample")
    if dist.samples[0] <= 0:
        raise DomainError(f"dB mean needs positive samples, got {dist.samples[0]}")


def pmf_of_mh(samples: Any, m_s: int) -> np.ndarray:
    """Empirical probability of each ``M_h`` in ``0..M_s``.

    Raises:
        DomainError: If the sample is empty or a value lies outside ``0..M_s``.
    """
    values = np.asarray(samples, dtype=int)
    if values.size == 0:
        raise DomainError("PMF of an empty sample")
    if values.min() < 0 or values.max() > m_s:
        raise DomainError(f"M_h samples must lie in 0..{m_s}")
    return np.bincount(values, minlength=m_s + 1) / values.size


def cdf_table(result: ExperimentResult) -> pd.DataFrame:
    """Rows of ``cdf.csv``: the CDF of each policy at every distinct feasible sample."""
    frames = []
    for policy_id in result.config.policies:
        dist = result.distribution(policy_id)
        if dist.n == 0:
            continue
        xs = np.unique(dist.samples[dist.samples > 0])
        frames.append(pd.DataFrame({
            "policy_id": policy_id.value,
            "x_db": 10.0 * np.log10(xs),
            "F": empirical_cdf(dist, xs),
        }))
    if not frames:
        return pd.DataFrame(columns=CDF_COLUMNS)
    return pd.concat(frames, ignore_index=True)[CDF_COLUMNS]


def _brute_force_of(result: ExperimentResult) -> Optional[PolicyId]:
    for policy_id in result.config.policies:
        if policy_id.is_brute_force:
            return policy_id
    return None


def summarize(result: ExperimentResult) -> dict[str, Any]:
    """Per-policy summary written to ``summary.json``.

    ``ratio_to_brute_force`` compares paired sums over all trials, with
    infeasible trials counting as zero objective; it is present only when
    an exhaustive policy ran.
    """
    kind = result.kind
    m_s = result.config.scenario.geometry.m_s
    oracle = _brute_force_of(result)
    oracle_total = float(np.sum(result.objectives(oracle, feasible_only=False))) if oracle else 0.0

    policies: dict[str, Any] = {}
    for policy_id in result.config.policies:
        dist = result.distribution(policy_id)
        m_h = result.m_h_samples(policy_id)
        entry: dict[str, Any] = {
            "trials": len(result.outcomes[policy_id]),
            "feasible_trials": dist.n,
            "feasibility_rate": result.feasibility_rate(policy_id),
            "mean_db": None,
            "mean_of_db": None,
            "pmf_m_h": None,
            "mode_m_h": None,
        }
        positive = dist.n > 0 and dist.samples[0] > 0
        if positive:
            entry["mean_db"] = mean_db(dist)
            entry["mean_of_db"] = mean_of_db(dist)
        if kind is ProblemKind.PROBLEM_B:
            entry["mean_watts"] = float(np.mean(dist.samples)) if dist.n else None
        if m_h.size:
            pmf = pmf_of_mh(m_h, m_s)
            entry["pmf_m_h"] = pmf.tolist()
            entry["mode_m_h"] = int(np.argmax(pmf))
        if oracle is not None:
            total = float(np.sum(result.objectives(policy_id, feasible_only=False)))
            entry["ratio_to_brute_force"] = total / oracle_total if oracle_total > 0 else None
        policies[policy_id.value] = entry

    return {
        "problem": kind.value,
        "m_s": m_s,
        "trials": result.config.trials,
        "master_seed": result.config.master_seed,
        "policies": policies,
    }
