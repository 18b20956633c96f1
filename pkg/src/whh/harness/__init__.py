"""Verification campaigns and the ``whh`` command line."""
from .report import InequalityReport, Tally
from .rng import SplitMix64
from .sweeps import SweepConfig, open_problem_search, run

__all__ = ["InequalityReport", "SplitMix64", "SweepConfig", "Tally", "open_problem_search", "run"]
