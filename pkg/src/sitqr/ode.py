"""Deterministic SITQR compartment model and a fixed-step RK4 integrator.

Compartments are fractions of the total population, so they sum to 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

FIELDS = ("s", "i", "r", "q_s", "q_i", "q_r")
CSV_HEADER = ("t", "S", "I", "R", "QS", "QI", "QR")

CONSERVATION_TOL = 1e-9
NEGATIVE_TOL = 1e-12


@dataclass(frozen=True)
class CompartmentState:
    s: float
    i: float
    r: float
    q_s: float
    q_i: float
    q_r: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.i, self.r, self.q_s, self.q_i, self.q_r], dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "CompartmentState":
        if len(values) != 6:
            raise ValueError(f"expected 6 compartments, got {len(values)}")
        return cls(*(float(v) for v in values))

    def total(self) -> float:
        return math.fsum(self.as_array())

    def validate(self) -> None:
        arr = self.as_array()
        if not np.all(np.isfinite(arr)):
            raise ValueError("compartments must be finite")
        if np.any(arr < 0):
            raise ValueError(f"negative compartment in {self}")
        if abs(self.total() - 1.0) > CONSERVATION_TOL:
            raise ValueError(f"compartments sum to {self.total()!r}, expected 1")


@dataclass(frozen=True)
class OdeTest:
    """One test arm: daily tested fraction plus true/false positive probabilities."""

    lambda_fraction: float
    eta_tp: float
    eta_fp: float


@dataclass(frozen=True)
class OdeParams:
    beta: float
    gamma: float
    tests: tuple[OdeTest, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(
            t if isinstance(t, OdeTest) else OdeTest(*t) for t in self.tests
        ))
        self.validate()

    def validate(self) -> None:
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError("beta must be finite and >= 0")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError("gamma must be finite and >= 0")
        for t in self.tests:
            for name in ("lambda_fraction", "eta_tp", "eta_fp"):
                v = getattr(t, name)
                if not (0.0 <= v <= 1.0):
                    raise ValueError(f"{name}={v} outside [0, 1]")
        if sum(t.lambda_fraction for t in self.tests) > 1.0 + 1e-12:
            raise ValueError("total tested fraction exceeds 1")


def effective_rates(params: OdeParams) -> tuple[float, float]:
    """Population-level (true positive, false positive) quarantining rates.

    Each test arm contributes its tested fraction times its true/false
    positive probability; arms test disjoint groups, so the rates add.
    """
    lam_tp = 0.0
    lam_fp = 0.0
    for t in params.tests:
        lam_tp += t.lambda_fraction * t.eta_tp
        lam_fp += t.lambda_fraction * t.eta_fp
    return lam_tp, lam_fp


def _rates(y: np.ndarray, beta: float, gamma: float, lam_tp: float, lam_fp: float) -> np.ndarray:
    s, i, r, qs, qi, qr = y
    infection = beta * s * i
    s_to_qs = lam_fp * s
    r_to_qr = lam_fp * r
    i_to_qi = lam_tp * i
    recover = gamma * i
    release_s = gamma * qs
    release_i = gamma * qi
    release_r = gamma * qr
    # Every flow appears once with each sign, so the components sum to zero.
    return np.array([
        -infection - s_to_qs + release_s,
        infection - i_to_qi - recover,
        recover + release_i + release_r - r_to_qr,
        s_to_qs - release_s,
        i_to_qi - release_i,
        r_to_qr - release_r,
    ])


def derivatives(state: CompartmentState, params: OdeParams) -> CompartmentState:
    lam_tp, lam_fp = effective_rates(params)
    return CompartmentState.from_array(
        _rates(state.as_array(), params.beta, params.gamma, lam_tp, lam_fp)
    )


def integrate(
    state0: CompartmentState,
    params: OdeParams,
    t_end: float,
    dt: float = 0.01,
) -> list[tuple[float, CompartmentState]]:
    """Classical RK4 with a fixed step; returns every step including t=0.

    The final step is shortened so the trajectory ends exactly at ``t_end``.
    Each state is checked for conservation and non-negativity before tiny
    negative roundoff is clamped to zero.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    if not (math.isfinite(t_end) and t_end >= 0):
        raise ValueError(f"t_end must be finite and >= 0, got {t_end}")
    state0.validate()

    beta, gamma = params.beta, params.gamma
    lam_tp, lam_fp = effective_rates(params)

    def f(y):
        return _rates(y, beta, gamma, lam_tp, lam_fp)

    n_steps = int(math.ceil(t_end / dt - 1e-9))
    y = state0.as_array()
    out = [(0.0, state0)]
    t = 0.0
    for k in range(n_steps):
        h = min(dt, t_end - k * dt)
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (k + 1) * dt if k + 1 < n_steps else t_end
        _check(y, t)
        y = np.where(y < 0, 0.0, y)
        out.append((t, CompartmentState.from_array(y)))
    return out


def _check(y: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(y)):
        raise FloatingPointError(f"non-finite state at t={t}")
    total = math.fsum(y)
    if abs(total - 1.0) > CONSERVATION_TOL:
        raise FloatingPointError(f"conservation violated at t={t}: sum={total!r}")
    if np.any(y < -NEGATIVE_TOL):
        raise FloatingPointError(f"negative compartment at t={t}: {y}")


def write_trajectory_csv(
    path,
    trajectory: Iterable[tuple[float, CompartmentState]],
    stride: int = 1,
) -> None:
    if stride < 1:
        raise ValueError("stride must be >= 1")
    rows = list(trajectory)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for k, (t, st) in enumerate(rows):
            if k % stride and k != len(rows) - 1:
                continue
            w.writerow([repr(round(t, 12))] + [repr(float(v)) for v in st.as_array()])
