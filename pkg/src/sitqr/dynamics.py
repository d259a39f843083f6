"""Daily stochastic disease progression on a contact graph.

Every node draws three uniforms per day. The infection factor, recovery
factor and the constant no-change factor are each scaled by one draw, and
the largest product picks the node's event for the day.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .netgen import ContactGraph

SUSCEPTIBLE, INFECTIOUS, RECOVERED = 0, 1, 2
STAGE_NAMES = {SUSCEPTIBLE: "S", INFECTIOUS: "I", RECOVERED: "R"}
NO_ONSET = -1


@dataclass(frozen=True)
class EpidemicParams:
    beta0: float = 0.015
    gamma1: float = 7.0
    gamma2: float = 10.0
    gamma3: float = 4.0
    alpha: float = 1.0
    i0: int = 11
    q_d: int = 10

    def __post_init__(self):
        if not self.beta0 > 0:
            raise ValueError("beta0 must be > 0")
        if not (self.gamma2 > self.gamma1 >= 0):
            raise ValueError("need gamma2 > gamma1 >= 0")
        if not self.gamma3 > 0:
            raise ValueError("gamma3 must be > 0")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.q_d < 1:
            raise ValueError("q_d must be >= 1")
        if self.i0 < 0:
            raise ValueError("i0 must be >= 0")


@dataclass
class World:
    """Mutable per-replicate state. Arrays are indexed by node."""

    graph: ContactGraph
    stage: np.ndarray
    onset_day: np.ndarray
    quarantine_days_left: np.ndarray
    pending: dict[int, list[int]] = field(default_factory=lambda: defaultdict(list))
    day: int = 0

    @classmethod
    def fresh(cls, graph: ContactGraph) -> "World":
        n = graph.n_nodes
        return cls(
            graph=graph,
            stage=np.full(n, SUSCEPTIBLE, dtype=np.int8),
            onset_day=np.full(n, NO_ONSET, dtype=np.int64),
            quarantine_days_left=np.zeros(n, dtype=np.int64),
        )

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def quarantined(self) -> np.ndarray:
        return self.quarantine_days_left > 0

    def total_infectious(self) -> int:
        return int(np.count_nonzero(self.stage == INFECTIOUS))

    def counts(self, quarantined: np.ndarray | None = None) -> tuple[int, int, int, int, int, int]:
        """(S, I, R, Q_S, Q_I, Q_R) head counts."""
        q = self.quarantined if quarantined is None else quarantined
        out = []
        for flag in (False, True):
            sel = q == flag
            out.extend(int(np.count_nonzero(self.stage[sel] == s))
                       for s in (SUSCEPTIBLE, INFECTIOUS, RECOVERED))
        return tuple(out)

    def t_n(self) -> np.ndarray:
        return np.where(self.onset_day >= 0, self.day - self.onset_day, -1)

    def copy(self) -> "World":
        pending = defaultdict(list, {k: list(v) for k, v in self.pending.items()})
        return World(self.graph, self.stage.copy(), self.onset_day.copy(),
                     self.quarantine_days_left.copy(), pending, self.day)


def seed_outbreak(world: World, params: EpidemicParams, rng: np.random.Generator) -> World:
    if params.i0 > world.n_nodes:
        raise ValueError(f"i0={params.i0} exceeds n_nodes={world.n_nodes}")
    if np.any(world.stage != SUSCEPTIBLE):
        raise ValueError("seed_outbreak needs an all-susceptible world")
    chosen = rng.choice(world.n_nodes, size=params.i0, replace=False)
    world.stage[chosen] = INFECTIOUS
    world.onset_day[chosen] = world.day
    return world


def infection_factors(world: World, params: EpidemicParams) -> np.ndarray:
    """Infection factor for every node.

    For an unquarantined susceptible node it is ``beta0`` times the share of
    infectious nodes in its local group (itself plus its unquarantined
    neighbours). Everyone else gets zero.
    """
    free = ~world.quarantined
    A = world.graph.matrix
    n_inf = A @ (free & (world.stage == INFECTIOUS)).astype(np.float64)
    n_group = A @ free.astype(np.float64) + 1.0
    susceptible = free & (world.stage == SUSCEPTIBLE)
    return np.where(susceptible, n_inf / n_group * params.beta0, 0.0)


def infection_factor(node: int, world: World, params: EpidemicParams) -> float:
    if world.quarantined[node] or world.stage[node] != SUSCEPTIBLE:
        return 0.0
    nbrs = [v for v in world.graph.adjacency[node] if not world.quarantined[v]]
    n_inf = sum(1 for v in nbrs if world.stage[v] == INFECTIOUS)
    return n_inf / (len(nbrs) + 1) * params.beta0


def recovery_factor(t_n, params: EpidemicParams):
    """Recovery hazard factor for days since onset ``t_n`` (scalar or array).

    Negative ``t_n`` marks a node with no onset and yields 0.
    """
    t = np.asarray(t_n, dtype=np.float64)
    out = np.where(
        t >= params.gamma1,
        params.gamma3 * (params.gamma2 - params.gamma1) ** np.maximum(t - params.gamma1, 0.0),
        0.0,
    )
    return float(out) if out.ndim == 0 else out


def step_day(world: World, params: EpidemicParams, rng: np.random.Generator) -> World:
    """Advance the world by one day in place and return it.

    All factors are computed from the start-of-day state, so the outcome does
    not depend on node order. Three uniforms are drawn per node every day
    regardless of state, which keeps the draw sequence independent of testing.
    Quarantine clocks tick down at the end of the day.
    """
    world.day += 1
    n = world.n_nodes
    r = rng.random((3, n))
    beta = infection_factors(world, params)
    infectious = world.stage == INFECTIOUS
    gamma = np.where(infectious, recovery_factor(world.t_n(), params), 0.0)
    b = beta * r[0]
    g = gamma * r[1]
    a = params.alpha * r[2]
    # strict dominance; ties fall through to "no change"
    infect = (b > g) & (b > a) & (world.stage == SUSCEPTIBLE)
    recover = (g > b) & (g > a) & infectious
    world.stage[infect] = INFECTIOUS
    world.onset_day[infect] = world.day
    world.stage[recover] = RECOVERED
    np.subtract(world.quarantine_days_left, 1, out=world.quarantine_days_left,
                where=world.quarantine_days_left > 0)
    return world


def write_state_dump(path, rows) -> None:
    """``rows`` is an iterable of (day, World-snapshot-arrays) from :func:`state_rows`."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("day", "node", "stage", "quarantined", "t_n"))
        for row in rows:
            w.writerow(row)


def state_rows(world: World, quarantined: np.ndarray | None = None):
    q = world.quarantined if quarantined is None else quarantined
    t_n = world.t_n()
    for node in range(world.n_nodes):
        tn = int(t_n[node])
        yield (world.day, node, STAGE_NAMES[int(world.stage[node])], int(q[node]),
               "" if tn < 0 else tn)
