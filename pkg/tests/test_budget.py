import pytest
from hypothesis import given, strategies as st

from sitqr.budget import BudgetPolicy, allocate, mean_tp_rate, prefer_test1


def test_allocate_default_split():
    lam1, lam2 = allocate(BudgetPolicy(b=0.1, m=1, lambda1=0.067))
    assert lam1 == 0.067
    assert lam2 == pytest.approx(0.033, abs=1e-15)


@pytest.mark.parametrize("b,m,lam1,expected", [
    (0.1, 4, 0.1, 0.0),
    (0.05, 4, 0.0, 0.2),
])
def test_allocate_endpoints(b, m, lam1, expected):
    assert allocate(BudgetPolicy(b, m, lam1))[1] == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("b,m,lam1", [(0.1, 1, 0.2), (0.1, 1, -0.01), (0.1, 0, 0.05), (-0.1, 1, 0)])
def test_policy_rejects(b, m, lam1):
    with pytest.raises(ValueError):
        BudgetPolicy(b, m, lam1)


def test_mean_tp_rate_flat_at_threshold():
    a = mean_tp_rate(BudgetPolicy(0.1, 2, 0.05), 0.9, 0.45)
    assert a == pytest.approx(0.05 * 0.9 + 2 * 0.05 * 0.45)
    assert a == pytest.approx(0.09)
    assert mean_tp_rate(BudgetPolicy(0.1, 2, 0.0), 0.9, 0.45) == pytest.approx(0.09)
    assert mean_tp_rate(BudgetPolicy(0.1, 2, 0.1), 0.9, 0.45) == pytest.approx(0.09)


def test_mean_tp_rate_single_test_limits():
    assert mean_tp_rate(BudgetPolicy(0.1, 3, 0.1), 0.98, 0.8) == pytest.approx(0.1 * 0.98)
    assert mean_tp_rate(BudgetPolicy(0.1, 3, 0.0), 0.98, 0.8) == pytest.approx(3 * 0.1 * 0.8)


def test_prefer_test1_examples():
    assert prefer_test1(1.9, 0.9, 0.45)
    assert not prefer_test1(2.1, 0.9, 0.45)
    assert not prefer_test1(2.0, 0.9, 0.45)
    assert not prefer_test1(1.0, 0.7, 0.7)
    assert 0.98 / 0.80 == pytest.approx(1.225)
    assert prefer_test1(1.0, 0.98, 0.80)
    assert not prefer_test1(4.0, 0.98, 0.80)


def test_prefer_test1_rejects_zero_sensitivity():
    with pytest.raises(ValueError):
        prefer_test1(1.0, 0.9, 0.0)


budgets = st.floats(0.001, 1.0)
ratios = st.floats(0.05, 20.0)
probs = st.floats(0.01, 1.0)
unit = st.floats(0.0, 1.0)


@given(budgets, ratios, probs, probs)
def test_slope_sign_matches_preference(b, m, e1, e2):
    # finite-difference slope over a lambda1 grid
    grid = [min(b, b * k / 10) for k in range(11)]
    vals = [mean_tp_rate(BudgetPolicy(b, m, x), e1, e2) for x in grid]
    slopes = [(v2 - v1) / (x2 - x1) for (x1, v1), (x2, v2)
              in zip(zip(grid, vals), zip(grid[1:], vals[1:]))]
    for s in slopes:
        assert s == pytest.approx(e1 - m * e2, rel=1e-6, abs=1e-9)
    if abs(e1 - m * e2) > 1e-9:
        assert prefer_test1(m, e1, e2) == (slopes[0] > 0)


@given(budgets, ratios, unit, unit, unit)
def test_allocate_is_affine(b, m, u, v, w):
    p, q = BudgetPolicy(b, m, u * b), BudgetPolicy(b, m, v * b)
    mid = BudgetPolicy(b, m, (p.lambda1 + q.lambda1) / 2)
    a, c, d = allocate(p), allocate(q), allocate(mid)
    assert d[0] == pytest.approx((a[0] + c[0]) / 2, abs=1e-12)
    assert d[1] == pytest.approx((a[1] + c[1]) / 2, abs=1e-12)
    lam1, lam2 = allocate(BudgetPolicy(b, m, w * b))
    assert lam1 + lam2 / m == pytest.approx(b, rel=1e-12)


@given(budgets, ratios, ratios, probs, probs)
def test_full_test1_budget_independent_of_m(b, m1, m2, e1, e2):
    assert mean_tp_rate(BudgetPolicy(b, m1, b), e1, e2) == mean_tp_rate(BudgetPolicy(b, m2, b), e1, e2)
