"""Single runs, replicate sweeps and their CSV outputs.

Seeding: replicate ``r`` of an experiment with master seed ``M`` uses
``replicate_seed(M, r)``. That seed is split into four independent streams
(network, outbreak seeding, dynamics, testing), so changing the testing
policy never perturbs the epidemic draws. The same replicate seeds are
reused at every sweep point, giving paired comparisons across the grid.
"""

from __future__ import annotations

import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import metrics
from .budget import BudgetPolicy, allocate
from .config import ExperimentConfig
from .dynamics import INFECTIOUS, RECOVERED, World, seed_outbreak, step_day
from .netgen import NetGenConfig, generate
from .ode import CompartmentState, OdeParams, OdeTest, integrate, write_trajectory_csv
from .testing import (
    Confusion, TestingPolicy, apply_tests, confusion, deliver_due, gate,
    schedule, select_testees, write_test_log,
)


class InvariantError(RuntimeError):
    """A simulated day broke a bookkeeping invariant."""


STREAMS = ("network", "seeding", "dynamics", "testing")


def replicate_seed(master_seed: int, rep: int) -> int:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(rep,))
    return int(ss.generate_state(1, np.uint64)[0])


def streams(seed: int) -> dict[str, np.random.SeedSequence]:
    return dict(zip(STREAMS, np.random.SeedSequence(seed).spawn(len(STREAMS))))


@dataclass(frozen=True)
class RunSettings:
    """The knobs a sweep varies, resolved to concrete per-run values."""

    lambda1: float
    lambda2: float
    m: float
    mu: int
    delay: int


def settings_for(config: ExperimentConfig, lambda1: float | None = None) -> RunSettings:
    b = config.budget
    lam1 = b.lambda1 if lambda1 is None else lambda1
    lam1, lam2 = allocate(BudgetPolicy(b.b, b.m, min(lam1, b.b)))
    return RunSettings(lam1, lam2, b.m, config.network.mu, config.tests[0].delay_days)


def run_once(config: ExperimentConfig, seed: int, lambda1: float | None = None,
             lambda2: float | None = None, dump_states: bool = False) -> metrics.RunOutcome:
    """One replicate of the daily loop.

    Each day: update the testing gate on the true infectious count, test two
    disjoint random groups of unquarantined nodes, queue positive results,
    start quarantines that are due, advance the epidemic, record counts.
    Row 0 of the trajectory is the seeded initial state.

    ``lambda1``/``lambda2`` override the budget allocation; by default
    ``lambda1`` comes from the config and ``lambda2`` from the budget line.
    """
    if config.horizon < 1:
        raise ValueError("horizon must be >= 1")
    st = settings_for(config, lambda1)
    lam1 = st.lambda1
    lam2 = st.lambda2 if lambda2 is None else lambda2
    rng = {k: np.random.default_rng(s) for k, s in streams(seed).items()}
    net_seed = int(streams(seed)["network"].generate_state(1, np.uint64)[0])

    net = config.network
    graph = generate(NetGenConfig(n=net.n, mu=net.mu, k_exp=net.k_exp, seed=net_seed))
    n = graph.n_nodes
    ep = config.epidemic
    policy = TestingPolicy.from_fractions(
        config.tests, lam1, lam2, n,
        i_t1=config.thresholds.i_t1, i_t2=config.thresholds.i_t2, q_d=ep.q_d,
    )
    spec1, spec2 = policy.specs

    world = World.fresh(graph)
    seed_outbreak(world, ep, rng["seeding"])

    traj = np.zeros((config.horizon + 1, 7), dtype=np.int64)
    traj[0, :6] = world.counts()
    gate_log = np.zeros(config.horizon + 1, dtype=bool)
    conf_log: list[tuple[int, str, Confusion]] = []
    recovery_days: list[int] = []
    states = []
    if dump_states:
        from .dynamics import state_rows
        states.extend(state_rows(world))

    active = False
    for day in range(1, config.horizon + 1):
        active = gate(world.total_infectious(), active, policy)
        gate_log[day] = active
        c1 = c2 = Confusion()
        if active:
            set1, set2 = select_testees(world, policy, rng["testing"])
            truth1, truth2 = world.stage[set1], world.stage[set2]
            res1 = apply_tests(truth1, spec1, rng["testing"])
            res2 = apply_tests(truth2, spec2, rng["testing"])
            schedule(set1, res1, spec1, day, world)
            schedule(set2, res2, spec2, day, world)
            c1, c2 = confusion(res1, truth1), confusion(res2, truth2)
        conf_log.append((day, spec1.label, c1))
        conf_log.append((day, spec2.label, c2))

        deliver_due(world, day, ep.q_d)
        quarantined = world.quarantined.copy()
        was_infectious = world.stage == INFECTIOUS
        step_day(world, ep, rng["dynamics"])
        recovered_now = was_infectious & (world.stage == RECOVERED)
        recovery_days.extend((day - world.onset_day[recovered_now] + 1).tolist())

        row = world.counts(quarantined)
        if sum(row) != n:
            raise InvariantError(f"day {day}: compartments sum to {sum(row)}, expected {n}")
        traj[day, :6] = row
        traj[day, metrics.TESTED] = c1.tested + c2.tested
        if dump_states:
            states.extend(state_rows(world, quarantined))

    i_p = metrics.peak_infection(traj)
    sum_dq = metrics.total_quarantine_days(traj)
    out = metrics.RunOutcome(
        trajectory=traj,
        i_p=i_p,
        sum_dq=sum_dq,
        f=metrics.utility(i_p, sum_dq, config.utility),
        confusion=conf_log,
        recoveries=np.asarray(recovery_days, dtype=np.int64),
        gate_active=gate_log,
    )
    if dump_states:
        out.states = states
    return out


@dataclass
class SweepPoint:
    settings: RunSettings
    outcomes: list[metrics.RunOutcome]

    def values(self, name: str) -> np.ndarray:
        return np.array([getattr(o, name) for o in self.outcomes], dtype=np.float64)

    @property
    def ip(self):
        return metrics.ci80(self.values("i_p")) if len(self.outcomes) > 1 else _single(self.values("i_p"))

    @property
    def dq(self):
        return metrics.ci80(self.values("sum_dq")) if len(self.outcomes) > 1 else _single(self.values("sum_dq"))

    @property
    def mean_f(self) -> float:
        return float(self.values("f").mean())


def _single(x):
    v = float(x[0])
    return v, v, v


@dataclass
class SweepResult:
    points: list[SweepPoint]
    replicates: int
    extra: dict = field(default_factory=dict)

    def by(self, **match) -> list[SweepPoint]:
        return [p for p in self.points
                if all(getattr(p.settings, k) == v for k, v in match.items())]

    def argmin_lambda1(self, **match) -> float:
        pts = self.by(**match)
        return metrics.argmin_utility([(p.settings.lambda1, p.mean_f) for p in pts])

    def ip_slope(self, **match) -> float:
        """Least-squares slope of mean peak infection against lambda1."""
        pts = self.by(**match)
        x = [p.settings.lambda1 for p in pts]
        y = [p.ip[0] for p in pts]
        return float(np.polyfit(x, y, 1)[0])


def _task(args):
    config, seed, lam1, lam2 = args
    o = run_once(config, seed, lam1, lam2)
    # trim bulky per-day logs; sweeps only need summaries
    o.confusion = []
    return o


def _run_points(jobs: Sequence[tuple[ExperimentConfig, RunSettings]],
                workers: int = 1) -> list[SweepPoint]:
    tasks = []
    for config, st in jobs:
        for rep in range(config.replicates):
            tasks.append((config, replicate_seed(config.master_seed, rep), st.lambda1, st.lambda2))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_task, tasks, chunksize=4))
    else:
        results = [_task(t) for t in tasks]
    points, k = [], 0
    for config, st in jobs:
        points.append(SweepPoint(st, results[k:k + config.replicates]))
        k += config.replicates
    return points


def sweep_lambda1(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Every lambda1 grid point, with the rest of the budget spent on test 2."""
    grid = config.budget.lambda1_grid
    if not grid:
        raise ValueError("lambda1 grid is empty")
    jobs = [(config, settings_for(config, lam1)) for lam1 in grid]
    return SweepResult(_run_points(jobs, workers), config.replicates)


def sweep_delay(config: ExperimentConfig, delays: Iterable[int] = range(5),
                workers: int = 1) -> SweepResult:
    """Test-1-only runs (lambda1 = b) at each result delay.

    ``extra["reference"]`` holds the test-2-only point at the same number of
    daily tests (lambda2 = b) for comparison.
    """
    delays = list(delays)
    if any(d < 0 for d in delays):
        raise ValueError("delays must be >= 0")
    b = config.budget.b
    jobs = []
    for d in delays:
        tests = (dataclasses.replace(config.tests[0], delay_days=d), config.tests[1])
        cfg = dataclasses.replace(config, tests=tests)
        jobs.append((cfg, RunSettings(b, 0.0, config.budget.m, config.network.mu, d)))
    ref = RunSettings(0.0, b, config.budget.m, config.network.mu, config.tests[0].delay_days)
    points = _run_points(jobs + [(config, ref)], workers)
    return SweepResult(points[:-1], config.replicates, {"reference": points[-1]})


def sweep_mu(config: ExperimentConfig, mus: Iterable[int] = (2, 10, 20, 30),
             workers: int = 1) -> SweepResult:
    mus = list(mus)
    if any(m < 1 for m in mus):
        raise ValueError("mu values must be >= 1")
    jobs = []
    for mu in mus:
        cfg = config.replace(network={"mu": mu})
        jobs.extend((cfg, settings_for(cfg, lam1)) for lam1 in config.budget.lambda1_grid)
    res = SweepResult(_run_points(jobs, workers), config.replicates)
    res.extra["slopes"] = {mu: res.ip_slope(mu=mu) for mu in mus}
    res.extra["argmin"] = {mu: res.argmin_lambda1(mu=mu) for mu in mus}
    return res


def ode_params_from(config: ExperimentConfig, lambda1: float | None = None) -> OdeParams:
    st = settings_for(config, lambda1)
    t1, t2 = config.tests
    return OdeParams(config.ode.beta, config.ode.gamma, (
        OdeTest(st.lambda1, t1.eta_tp, t1.eta_fp),
        OdeTest(st.lambda2, t2.eta_tp, t2.eta_fp),
    ))


def ode_run(config: ExperimentConfig, path=None, params: OdeParams | None = None):
    oc = config.ode
    params = ode_params_from(config) if params is None else params
    state0 = CompartmentState(1.0 - oc.i_init, oc.i_init, 0.0, 0.0, 0.0, 0.0)
    traj = integrate(state0, params, oc.t_end, oc.dt)
    if path is not None:
        write_trajectory_csv(path, traj, oc.stride)
    return traj


# --- CSV output --------------------------------------------------------------

TRAJECTORY_HEADER = ("day",) + metrics.TRAJ_COLUMNS


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_trajectory(path, outcome: metrics.RunOutcome) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_HEADER)
        for day, row in enumerate(outcome.trajectory):
            w.writerow([day] + [int(v) for v in row])


def summary_rows(points: Iterable[SweepPoint]):
    for p in points:
        s = p.settings
        for rep, o in enumerate(p.outcomes):
            yield (s.lambda1, s.lambda2, s.m, s.mu, s.delay, rep, o.i_p, o.sum_dq, o.f)


def aggregate_row(p: SweepPoint):
    ip, dq = p.ip, p.dq
    return (p.settings.lambda1, ip[0], ip[1], ip[2], dq[0], dq[1], dq[2], p.mean_f)


def write_summary(path, points: Iterable[SweepPoint]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(metrics.SUMMARY_HEADER)
        for row in summary_rows(points):
            w.writerow([_fmt(v) for v in row])


def write_aggregate(path, points: Iterable[SweepPoint]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(metrics.AGGREGATE_HEADER)
        for p in points:
            w.writerow([_fmt(v) for v in aggregate_row(p)])


def write_run_outputs(out_dir, outcome: metrics.RunOutcome, settings: RunSettings) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectory(out / "trajectory.csv", outcome)
    write_test_log(out / "test_log.csv", outcome.confusion)
    write_summary(out / "summary.csv", [SweepPoint(settings, [outcome])])
