"""Run summaries: peak infection, quarantine days, utility and replicate spread."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# trajectory columns
S, I, R, QS, QI, QR, TESTED = range(7)
TRAJ_COLUMNS = ("S", "I", "R", "QS", "QI", "QR", "tested")

SUMMARY_HEADER = ("lambda1", "lambda2", "m", "mu", "delay", "rep", "Ip", "sumDQ", "f")
AGGREGATE_HEADER = ("lambda1", "mean_Ip", "Ip_lo", "Ip_hi", "mean_DQ", "DQ_lo", "DQ_hi", "mean_f")


@dataclass(frozen=True)
class UtilityParams:
    theta1: float = 3.0
    theta2: float = 1.0

    def __post_init__(self):
        if not self.theta1 > 1:
            raise ValueError(f"theta1 must be > 1, got {self.theta1}")
        if not (0 < self.theta2 <= 1):
            raise ValueError(f"theta2 must be in (0, 1], got {self.theta2}")


@dataclass
class RunOutcome:
    """One replicate. ``trajectory`` has one row per day (day 0 = initial state)."""

    trajectory: np.ndarray
    i_p: int
    sum_dq: int
    f: float
    confusion: list = field(default_factory=list)
    recoveries: np.ndarray | None = None  # infectious-days at recovery, one per recovered node
    gate_active: np.ndarray | None = None
    states: list | None = None


def _checked(trajectory) -> np.ndarray:
    traj = np.asarray(trajectory)
    if traj.ndim != 2 or traj.shape[0] == 0:
        raise ValueError("trajectory must be a non-empty 2-D array")
    return traj


def peak_infection(trajectory) -> int:
    traj = _checked(trajectory)
    return int((traj[:, I] + traj[:, QI]).max())


def total_quarantine_days(trajectory) -> int:
    traj = _checked(trajectory)
    return int((traj[:, QS] + traj[:, QI] + traj[:, QR]).sum())


def utility(i_p: float, sum_dq: float, up: UtilityParams = UtilityParams()) -> float:
    if i_p < 0 or sum_dq < 0:
        raise ValueError("utility arguments must be >= 0")
    return float(i_p) ** up.theta1 + float(sum_dq) ** up.theta2


def ci80(samples: Sequence[float]) -> tuple[float, float, float]:
    """Mean with the empirical 10th and 90th percentiles."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    lo, hi = np.percentile(x, [10, 90], method="linear")
    return float(x.mean()), float(lo), float(hi)


def argmin_utility(sweep: Sequence[tuple[float, float]]) -> float:
    """Grid point with the smallest mean utility; ties go to the smaller lambda1."""
    if not sweep:
        raise ValueError("empty sweep")
    return min(sweep, key=lambda p: (p[1], p[0]))[0]


def doubling_time(infectious: Sequence[float], days: int = 7) -> float:
    """Early doubling time from a log-linear fit over the first ``days`` days.

    Returns inf when the series does not grow.
    """
    y = np.asarray(infectious[:days], dtype=np.float64)
    if y.size < 2 or np.any(y <= 0):
        return float("inf")
    slope = np.polyfit(np.arange(y.size), np.log(y), 1)[0]
    return float(np.log(2) / slope) if slope > 0 else float("inf")
