import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from gbm_active import thresholds as th
from gbm_active.errors import ParameterError

FLIP = 1e-6


def assert_inf_root(cond, t):
    assert not cond(t - FLIP) and cond(t + FLIP)


def assert_sup_root(cond, t):
    assert cond(t - FLIP) and not cond(t + FLIP)


def test_t1_examples():
    t = th.solve_t1(1)
    assert t == pytest.approx(2.311, abs=1e-3)
    f = lambda x: th.t1_condition(x, 1) - 1
    assert abs(f(t)) < 1e-8
    assert t == pytest.approx(brentq(f, 1e-9, 10, xtol=1e-14), abs=1e-9)
    assert_inf_root(lambda x: th.t1_condition(x, 1) > 1, t)
    assert th.solve_t1(2) == pytest.approx(3.15, abs=5e-3)
    assert th.t1_condition(0, 3.7) == 0


def test_t1_domain():
    with pytest.raises(ParameterError):
        th.solve_t1(0)


def test_t2():
    t = th.solve_t2(1)
    assert t == pytest.approx(1.62, abs=1e-2)
    oracle = brentq(lambda x: (2 - x) * math.log((2 - x) / 2) + x - 1, 1e-9, 2 - 1e-12, xtol=1e-14)
    assert t == pytest.approx(oracle, abs=1e-9)
    assert_inf_root(lambda x: th.t2_condition(x, 1) > 1, t)
    assert th.solve_t2(0.5) is None


def test_t3_t4_feasibility():
    t1 = th.solve_t1(2)
    # 2*theta1 - 4*theta2 - 2*t1 < 0
    assert th.solve_t3(5, 2, t1) is None
    t3 = th.solve_t3(12.63, 2, t1)
    assert_sup_root(lambda t: th.t3_condition(t, 12.63, 2, t1) > 2, t3)
    # the t4 search interval is empty for every theta1 above 4*theta2 - 2*t2
    t2 = th.solve_t2(2)
    assert 12.63 > 4 * 2 - 2 * t2
    assert th.solve_t4(12.63, 2, t2) is None
    with pytest.raises(ParameterError):
        th.solve_t3(3, 2, t1)


def test_t4_search_logic():
    # t2 is an argument, so pick one that puts the root strictly inside the interval
    theta1, theta2, t2 = 12.0, 5.0, 0.0
    t4 = th.solve_t4(theta1, theta2, t2)
    assert 10.0 < t4 < theta1
    assert_inf_root(lambda t: th.t4_condition(t, theta1, theta2, t2) > 2, t4)
    oracle = brentq(lambda t: th.t4_condition(t, theta1, theta2, t2) - 2, 10.0, theta1, xtol=1e-14)
    assert t4 == pytest.approx(oracle, abs=1e-9)
    # condition already true at the lower end
    assert th.solve_t4(11.0, 5.0, 0.0) == 10.0
    # genuine t2: the condition never reaches 2 on the interval
    assert th.solve_t4(10.5, 5.0, th.solve_t2(5.0)) is None


def test_unsupervised_condition_tight_at_frontier():
    f = th.min_theta1_unsupervised(2)
    assert not th.unsupervised_condition(f - 1e-3, 2)
    assert th.unsupervised_condition(f + 1e-3, 2)


def test_eta_examples():
    eta = th.solve_eta(10, 1)
    assert eta == pytest.approx(3.9, abs=0.01)
    oracle = brentq(lambda t: (9 - t) * math.log((9 - t) / 9) + t - 1, 1e-9, 9 - 1e-12, xtol=1e-14)
    assert eta == pytest.approx(oracle, abs=1e-9)
    eta6 = th.solve_eta(10, 0.5)
    oracle6 = brentq(lambda t: (18 - t) * math.log((18 - t) / 18) + t - 2, 1e-9, 18 - 1e-12, xtol=1e-14)
    assert eta6 == pytest.approx(oracle6, abs=1e-9)
    assert th.eta_condition(0, 10, 1) == 0
    assert_inf_root(lambda t: th.eta_condition(t, 10, 1) > 1, eta)
    assert_inf_root(lambda t: th.eta_condition(t, 10, 0.5) > 2, eta6)


def test_eta_domain():
    with pytest.raises(ParameterError):
        th.solve_eta(1.5, 1)
    with pytest.raises(ParameterError):
        th.solve_eta(1.9, 0.5)


def test_E_T_and_epsilon():
    eta = th.solve_eta(10, 1)
    E_T = th.compute_E_T(10, 1, eta, 1000)
    assert E_T == pytest.approx((10 + 1 - 2 - eta) * math.log(1000) / 1000, rel=1e-12)
    assert E_T == pytest.approx(0.0353, abs=1e-4)
    # level equal to 2*theta2 collapses the log term
    theta1, theta2 = 10.0, 3.0
    eta_at = theta1 + theta2 - 2 - 2 * theta2
    assert th.compute_epsilon(theta1, theta2, eta_at) == pytest.approx(-(theta1 - theta2 - 2 - eta_at), abs=1e-12)


def test_epsilon_theorem6_duplicate_formula():
    theta1, theta2 = 4.0, 0.8
    eta = th.solve_eta(theta1, theta2)
    half = 0.5 * (2 * theta1 - 2 - eta)
    expected = half * math.log(half / (2 * theta2)) - (half - 2 * theta2)
    assert th.compute_epsilon(theta1, theta2, eta) == pytest.approx(expected, rel=1e-12)
    assert th.compute_E_T(theta1, theta2, eta, 500) == pytest.approx(half * math.log(500) / 500)


def test_R():
    t1 = th.solve_t1(1)
    R = th.solve_R(8, 1, t1)
    assert 0 < R < 2
    cond = lambda r: th.R_condition(r, 8, 1, t1) > 1
    assert_sup_root(cond, R)
    oracle = brentq(lambda r: th.R_condition(r, 8, 1, t1) - 1, 0, 2, xtol=1e-14)
    assert R == pytest.approx(oracle, abs=1e-9)
    # r = 0 is where the condition is largest
    rs = np.linspace(0, 2, 50)
    vals = [th.R_condition(r, 8, 1, t1) for r in rs]
    assert max(vals) == vals[0]
    assert th.solve_R(3, 1, t1) is None
    # condition still holds at r = 2: clamped to the domain edge
    assert th.solve_R(12, 1, t1) == 2.0
    assert th.theorem8_assumptions(12, 1)["cut_above_phase1_level"] is False


@pytest.mark.parametrize("theta2, expected", [(1, 8.96), (3, 15.9), (5, 21.93)])
def test_min_theta1_unsupervised_table(theta2, expected):
    assert th.min_theta1_unsupervised(theta2) == pytest.approx(expected, abs=0.05)


def test_unsupervised_gap_increasing():
    vals = [th.min_theta1_unsupervised(t) - t for t in range(1, 6)]
    assert np.all(np.diff(vals) > 0)


def test_min_gap_active():
    b2 = th.min_gap_active(2) + 2
    assert 11.6 <= b2 <= 11.7
    assert b2 < th.min_theta1_unsupervised(2)
    assert th.min_gap_active(4) + 4 < 18.98
    grid = np.linspace(1, 5, 17)
    bounds = [th.min_gap_active(t) + t for t in grid]
    assert np.all(np.diff(bounds) > 0)
    for t in (2, 3, 4, 5):
        assert th.min_gap_active(t) + t < th.min_theta1_unsupervised(t)


def test_sbm_min_a():
    assert th.sbm_min_a(2) == pytest.approx(8)
    # tabulated by b/2: b = 4 -> 5.83, b = 8 -> 9
    assert th.sbm_min_a(4) / 2 == pytest.approx(5.83, abs=0.01)
    assert th.sbm_min_a(8) / 2 == pytest.approx(9, abs=0.01)
    assert th.sbm_min_a(0) == pytest.approx(2)


def test_poisson_component_approx():
    p = th.poisson_component_approx(10, 0.2)
    assert p.lam == pytest.approx(10 * 0.8**10)
    assert p.lam == pytest.approx(1.0737, abs=1e-4)
    assert p.tv_bound == pytest.approx(10 * 0.8**10 - 9 * (1 - 0.25) ** 10)
    assert p.tv_bound == pytest.approx(0.5669, abs=1e-4)
    z = th.poisson_component_approx(7, 0.0)
    assert (z.lam, z.tv_bound) == (7, 1)
    with pytest.raises(ParameterError):
        th.poisson_component_approx(10, 0.5)


def test_poisson_tv_vanishes():
    R = 1.0
    tv = [th.poisson_component_approx(n, R * math.log(n) / n).tv_bound for n in (10**3, 10**4, 10**5)]
    assert tv[0] > tv[1] > tv[2] >= 0


def test_s2_budget():
    assert th.s2_budget(16, 1, 1, 0.5) == 6
    assert th.s2_budget(1024, 5, 7, 0.5) == 32
    # delta = 1: the confidence term is ceil(log2(2)) = 1
    assert th.s2_budget(16, 1, 1, 1.0) - 4 == 1
    with pytest.raises(ParameterError):
        th.s2_budget(16, 1, 1, 0)


def test_component_count_bound():
    assert th.component_count_bound(1000, 1) == pytest.approx(1.5 * math.sqrt(1000) + 2)
    assert th.component_count_bound(1000, 1) == pytest.approx(49.43, abs=0.01)
    assert th.component_count_bound(1000, 2) == pytest.approx(3.5)
    assert th.component_count_bound(1000, 0.5) == pytest.approx(268.7, abs=0.1)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 20), st.floats(0.01, 5))
def test_t1_increasing(theta2, step):
    assert th.solve_t1(theta2 + step) > th.solve_t1(theta2)


@settings(max_examples=30, deadline=None)
@given(st.floats(1, 10), st.floats(3.5, 30), st.floats(0.01, 5))
def test_eta_increasing_in_level(theta2, theta1, step):
    if theta1 < theta2:
        return
    assert th.solve_eta(theta1 + step, theta2) > th.solve_eta(theta1, theta2)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.6, 20))
def test_roots_flip(theta2):
    t1 = th.solve_t1(theta2)
    assert_inf_root(lambda t: th.t1_condition(t, theta2) > 1, t1)
    t2 = th.solve_t2(theta2)
    assert_inf_root(lambda t: th.t2_condition(t, theta2) > 1, t2)


def test_threshold_set_bundle():
    ts = th.compute_threshold_set(10, 1, 1000)
    assert ts.regime == th.THEOREM2
    assert ts.E_L <= ts.E_R
    assert ts.phase1_separates
    assert ts.t4 is None
    assert th.compute_threshold_set(4, 0.8, 1000).regime == th.THEOREM6
