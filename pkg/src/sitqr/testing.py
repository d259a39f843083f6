"""Randomised two-test screening with delayed quarantine and a hysteresis gate."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .dynamics import INFECTIOUS, World


@dataclass(frozen=True)
class TestSpec:
    eta_tp: float
    eta_tn: float
    delay_days: int = 0
    label: str = "test"

    # not a pytest test class
    __test__ = False

    def __post_init__(self):
        for name in ("eta_tp", "eta_tn"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.delay_days < 0:
            raise ValueError("delay_days must be >= 0")

    @property
    def eta_fp(self) -> float:
        return 1.0 - self.eta_tn

    @property
    def eta_fn(self) -> float:
        return 1.0 - self.eta_tp


RTPCR = TestSpec(0.98, 0.99, 1, "rtpcr")
RAPID = TestSpec(0.80, 0.90, 0, "rapid")
RAPID_DEGRADED = TestSpec(0.50, 0.90, 0, "rapid_degraded")


def quota(fraction: float, n_nodes: int) -> int:
    # round() is half-to-even
    return int(round(fraction * n_nodes))


@dataclass(frozen=True)
class TestingPolicy:
    specs: tuple[TestSpec, TestSpec]
    counts: tuple[int, int]
    i_t1: int = 10
    i_t2: int = 5
    q_d: int = 10

    __test__ = False

    def __post_init__(self):
        if not (self.i_t1 > self.i_t2 >= 0):
            raise ValueError("need i_t1 > i_t2 >= 0")
        if min(self.counts) < 0:
            raise ValueError("quotas must be >= 0")
        if self.q_d < 1:
            raise ValueError("q_d must be >= 1")

    @classmethod
    def from_fractions(cls, specs, lambda1: float, lambda2: float, n_nodes: int, **kw):
        return cls(tuple(specs), (quota(lambda1, n_nodes), quota(lambda2, n_nodes)), **kw)


def gate(total_infectious: int, active: bool, policy: TestingPolicy) -> bool:
    if not active and total_infectious >= policy.i_t1:
        return True
    if active and total_infectious <= policy.i_t2:
        return False
    return active


def select_testees(world: World, policy: TestingPolicy, rng: np.random.Generator):
    """Two disjoint random samples of currently unquarantined nodes.

    When the pool is smaller than the combined quota, test 1 is filled first
    and test 2 gets what is left.
    """
    pool = np.flatnonzero(world.quarantine_days_left == 0)
    c1 = min(policy.counts[0], pool.size)
    c2 = min(policy.counts[1], pool.size - c1)
    picked = rng.permutation(pool)[:c1 + c2]
    return picked[:c1], picked[c1:]


def apply_tests(truth: np.ndarray, spec: TestSpec, rng: np.random.Generator) -> np.ndarray:
    """Vectorised test outcomes for an array of stages."""
    truth = np.asarray(truth)
    u = rng.random(truth.shape)
    p_pos = np.where(truth == INFECTIOUS, spec.eta_tp, spec.eta_fp)
    return u < p_pos


def apply_test(truth: int, spec: TestSpec, rng: np.random.Generator) -> bool:
    return bool(apply_tests(np.array([truth]), spec, rng)[0])


def schedule(nodes, positives, spec: TestSpec, today: int, world: World) -> World:
    """Queue quarantine starts for positive results, ``delay_days`` after ``today``."""
    nodes = np.asarray(nodes)
    due = today + spec.delay_days
    hits = nodes[np.asarray(positives, dtype=bool)]
    if hits.size:
        world.pending[due].extend(int(x) for x in hits)
    return world


def deliver_due(world: World, today: int, q_d: int) -> int:
    """Start quarantines whose results land today; returns how many were applied.

    Quarantine starts whatever the node's stage is by then. A node already in
    quarantine keeps whichever expiry is later.
    """
    nodes = world.pending.pop(today, None)
    if not nodes:
        return 0
    idx = np.asarray(nodes, dtype=np.int64)
    np.maximum.at(world.quarantine_days_left, idx, q_d)
    return len(nodes)


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def tested(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def sensitivity(self) -> float | None:
        d = self.tp + self.fn
        return self.tp / d if d else None

    @property
    def specificity(self) -> float | None:
        d = self.tn + self.fp
        return self.tn / d if d else None

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(self.tp + other.tp, self.fp + other.fp,
                         self.tn + other.tn, self.fn + other.fn)


def confusion(positives, truths) -> Confusion:
    positives = np.asarray(positives, dtype=bool)
    infected = np.asarray(truths) == INFECTIOUS
    return Confusion(
        tp=int(np.count_nonzero(positives & infected)),
        fp=int(np.count_nonzero(positives & ~infected)),
        tn=int(np.count_nonzero(~positives & ~infected)),
        fn=int(np.count_nonzero(~positives & infected)),
    )


def confusion_log(day: int, results1, results2, truths1, truths2) -> tuple[Confusion, Confusion]:
    """Per-test confusion counts for one day (``day`` is kept for call-site symmetry)."""
    return confusion(results1, truths1), confusion(results2, truths2)


TEST_LOG_HEADER = ("day", "test_label", "tested", "TP", "FP", "TN", "FN",
                   "sensitivity", "specificity")


def _ratio(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def write_test_log(path, rows) -> None:
    """``rows``: iterable of (day, label, Confusion)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TEST_LOG_HEADER)
        for day, label, c in rows:
            w.writerow((day, label, c.tested, c.tp, c.fp, c.tn, c.fn,
                        _ratio(c.sensitivity), _ratio(c.specificity)))
