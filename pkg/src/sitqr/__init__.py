"""Network epidemic simulation with budget-constrained two-test screening."""

from .budget import BudgetPolicy, allocate, mean_tp_rate, prefer_test1
from .config import ExperimentConfig, load_config
from .dynamics import EpidemicParams, World
from .harness import run_once, sweep_delay, sweep_lambda1, sweep_mu
from .metrics import RunOutcome, UtilityParams, ci80, utility
from .netgen import ContactGraph, NetGenConfig, degree_stats, generate
from .ode import CompartmentState, OdeParams, derivatives, effective_rates, integrate
from .testing import RAPID, RAPID_DEGRADED, RTPCR, TestingPolicy, TestSpec

__version__ = "0.1.0"
