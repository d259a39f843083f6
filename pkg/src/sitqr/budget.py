"""Splitting a fixed daily testing budget between an expensive and a cheap test.

Budget ``b`` is measured in units of test-1 cost per capita per day; test 2
is ``m`` times cheaper, so spending ``lambda1`` on test 1 leaves room for
``m * (b - lambda1)`` test-2 tests.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BudgetPolicy:
    b: float
    m: float
    lambda1: float

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"budget b must be >= 0, got {self.b}")
        if self.m <= 0:
            raise ValueError(f"cost ratio m must be > 0, got {self.m}")
        if not (0.0 <= self.lambda1 <= self.b):
            raise ValueError(f"lambda1={self.lambda1} outside [0, b={self.b}]")


def allocate(policy: BudgetPolicy) -> tuple[float, float]:
    return policy.lambda1, policy.m * (policy.b - policy.lambda1)


def mean_tp_rate(policy: BudgetPolicy, eta1_tp: float, eta2_tp: float) -> float:
    for eta in (eta1_tp, eta2_tp):
        if not (0.0 <= eta <= 1.0):
            raise ValueError(f"probability {eta} outside [0, 1]")
    lam1, lam2 = allocate(policy)
    return lam1 * eta1_tp + lam2 * eta2_tp


def prefer_test1(m: float, eta1_tp: float, eta2_tp: float) -> bool:
    """True when shifting budget toward test 1 strictly raises the true-positive rate.

    The slope of the mean true-positive rate in ``lambda1`` is
    ``eta1_tp - m * eta2_tp``; at the break-even ratio it is flat and the
    answer is False.
    """
    if eta2_tp <= 0:
        raise ValueError("eta2_tp must be > 0 for the cost threshold to exist")
    if m <= 0:
        raise ValueError("m must be > 0")
    return bool(m < eta1_tp / eta2_tp)
