"""Monte-Carlo driver: repeated channel draws, every policy on each draw."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np
import pandas as pd
import structlog

from src.channel.channel_model import channel_dump_rows, draw_channels, k_factors
from src.domain.models import (
    ChannelRealization,
    EmpiricalDistribution,
    ExperimentConfig,
    PolicyId,
    PolicyOutcome,
    ProblemKind,
)
from src.link.link_metrics import linear_to_db
from src.policies import create_policy

logger = structlog.get_logger(__name__)

SAMPLE_COLUMNS = ["trial", "policy_id", "objective_linear", "objective_db", "m_h", "feasible"]
CHANNEL_COLUMNS = ["trial", "cell_index", "re_h_t", "im_h_t", "re_h_r", "im_h_r"]


def trial_seed(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Sub-seed of trial ``trial``; depends only on ``(master_seed, trial)``."""
    return np.random.SeedSequence(master_seed, spawn_key=(trial,))


def _trial_channels(config: ExperimentConfig, trial: int) -> ChannelRealization:
    scenario = config.scenario
    return draw_channels(scenario.geometry, scenario.placement, scenario.fading, trial_seed(config.master_seed, trial))


def _run_trial(config: ExperimentConfig, trial: int) -> tuple[PolicyOutcome, ...]:
    scenario = config.scenario
    channels = _trial_channels(config, trial)
    return tuple(
        create_policy(policy_id, config.brute_force_cap).solve(channels, config.problem, scenario.harvester)
        for policy_id in config.policies
    )


@dataclass(frozen=True)
class ExperimentResult:
    """Per-policy outcomes in trial order.

    Objective statistics use feasible trials only; ``feasibility_rate``
    reports how many trials that is.
    """

    config: ExperimentConfig
    outcomes: dict[PolicyId, tuple[PolicyOutcome, ...]]

    @property
    def kind(self) -> ProblemKind:
        return self.config.problem.kind

    def objectives(self, policy_id: PolicyId, feasible_only: bool = True) -> np.ndarray:
        """Objective per trial: SNR for Problem A, DC power for Problem B.

        With ``feasible_only=False`` infeasible trials contribute zero.
        """
        return np.array([
            o.objective(self.kind) if o.feasible else 0.0
            for o in self.outcomes[policy_id]
            if o.feasible or not feasible_only
        ], dtype=float)

    def distribution(self, policy_id: PolicyId) -> EmpiricalDistribution:
        return EmpiricalDistribution.from_samples(self.objectives(policy_id))

    def m_h_samples(self, policy_id: PolicyId) -> np.ndarray:
        return np.array([o.m_h for o in self.outcomes[policy_id] if o.feasible], dtype=int)

    def feasibility_rate(self, policy_id: PolicyId) -> float:
        outcomes = self.outcomes[policy_id]
        return sum(o.feasible for o in outcomes) / len(outcomes)

    def samples_frame(self) -> pd.DataFrame:
        """Rows of ``samples.csv``, trial-major then in configured policy order."""
        rows = []
        for trial in range(self.config.trials):
            for policy_id in self.config.policies:
                outcome = self.outcomes[policy_id][trial]
                objective = outcome.objective(self.kind)
                rows.append({
                    "trial": trial,
                    "policy_id": policy_id.value,
                    "objective_linear": objective,
                    "objective_db": linear_to_db(objective) if objective > 0 else None,
                    "m_h": outcome.m_h,
                    "feasible": outcome.feasible,
                })
        return pd.DataFrame(rows, columns=SAMPLE_COLUMNS)


def run_experiment(config: ExperimentConfig, threads: Optional[int] = None) -> ExperimentResult:
    """Run every configured policy on ``config.trials`` shared channel draws.

    Trial ``t`` draws its channels from :func:`trial_seed` so the result
    does not depend on the worker count or scheduling order.

    Args:
        config: The experiment to run.
        threads: Worker count; defaults to ``config.threads``.

    Returns:
        ExperimentResult with one outcome per policy per trial

    Raises:
        BruteForceCapError: If an exhaustive policy meets a surface above the cap.
    """
    workers = threads or config.threads
    k_1, k_2 = k_factors(config.scenario.fading)
    logger.info(
        "experiment_started",
        trials=config.trials,
        policies=[p.value for p in config.policies],
        m_s=config.scenario.geometry.m_s,
        problem=config.problem.kind.value,
        k_factor_t=k_1,
        k_factor_r=k_2,
        threads=workers,
    )

    run = partial(_run_trial, config)
    if workers == 1:
        per_trial = [run(t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(run, range(config.trials)))

    outcomes = {
        policy_id: tuple(trial_outcomes[k] for trial_outcomes in per_trial)
        for k, policy_id in enumerate(config.policies)
    }
    result = ExperimentResult(config=config, outcomes=outcomes)

    for policy_id in config.policies:
        logger.info(
            "experiment_policy_complete",
            policy=policy_id.value,
            feasibility_rate=result.feasibility_rate(policy_id),
        )
    return result


def channel_dump(config: ExperimentConfig) -> pd.DataFrame:
    """Every trial's realization in the channel-dump layout, prefixed by the trial index.

    The draws are the ones :func:`run_experiment` sees for the same config.
    """
    frames = []
    for trial in range(config.trials):
        frame = channel_dump_rows(_trial_channels(config, trial))
        frame.insert(0, "trial", trial)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)[CHANNEL_COLUMNS]
