"""Monte-Carlo experiments and their statistics."""
from .experiment import ExperimentResult, channel_dump, run_experiment, trial_seed
from .statistics import cdf_table, empirical_cdf, mean_db, mean_of_db, pmf_of_mh, summarize

__all__ = [
    "ExperimentResult",
    "cdf_table",
    "channel_dump",
    "empirical_cdf",
    "mean_db",
    "mean_of_db",
    "pmf_of_mh",
    "run_experiment",
    "summarize",
    "trial_seed",
]
