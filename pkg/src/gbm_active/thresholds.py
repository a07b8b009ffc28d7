"""Numerical solvers for the recovery thresholds of the geometric block model.

Every threshold here is the boundary of a superlevel set of a continuous,
monotone function of a single variable. We locate the boundary by bisection
and report the equality root. Natural logarithms throughout, except inside
:func:`s2_budget`.

Quantities are in units of ``log(n)`` (a count threshold ``x`` means a
triangle count of ``x * log(n)``) unless a function takes ``n`` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from gbm_active.errors import ParameterError

TOL = 1e-9
BRACKET_CAP = 1e6

THEOREM2 = "theorem2"
THEOREM6 = "theorem6"


def bisect_boundary(pred, lo, hi, tol=TOL):
    """Boundary of a monotone predicate with ``pred(lo)`` false and ``pred(hi)`` true.

    Works in either direction (``lo > hi`` is fine). Returns the midpoint
    of the final bracket, which is within ``tol / 2`` of the boundary.
    """
    if pred(lo) or not pred(hi):
        raise ParameterError("bracket does not straddle the boundary")
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def expand_upper(pred, start=1.0, cap=BRACKET_CAP):
    """Double ``start`` until ``pred`` holds; None once ``cap`` is passed."""
    hi = start
    while not pred(hi):
        hi *= 2.0
        if hi > cap:
            return None
    return hi


def _kl_gap(c, m):
    # c*log(c/m) + m - c : Chernoff exponent of a Poisson-like count with
    # mean m crossing level c; zero at m == c, convex in m
    if m <= 0:
        return math.inf
    if c <= 0:
        return m
    return c * math.log(c / m) + m - c


# -- individual thresholds ---------------------------------------------------


def t1_condition(t, theta2):
    c = 2.0 * theta2
    return (c + t) * math.log((c + t) / c) - t


def solve_t1(theta2):
    """Smallest ``t >= 0`` where cross-edge counts above ``2*theta2 + t`` become rare."""
    if not theta2 > 0:
        raise ParameterError("theta2 must be positive")
    pred = lambda t: t1_condition(t, theta2) > 1.0
    hi = expand_upper(pred)
    if hi is None:
        raise ParameterError("no bracket found for t1")
    return bisect_boundary(pred, 0.0, hi)


def t2_condition(t, theta2):
    c = 2.0 * theta2
    if t >= c:
        return c
    return (c - t) * math.log((c - t) / c) + t


def solve_t2(theta2):
    """Lower-tail analogue of t1 on ``[0, 2*theta2)``; None when the set is empty."""
    if not theta2 > 0:
        raise ParameterError("theta2 must be positive")
    c = 2.0 * theta2
    if c <= 1.0:
        return None
    return bisect_boundary(lambda t: t2_condition(t, theta2) > 1.0, 0.0, c)


def t3_condition(t, theta1, theta2, t1):
    c = 4.0 * theta2 + 2.0 * t1
    return _kl_gap(c, 2.0 * theta1 - t)


def solve_t3(theta1, theta2, t1):
    """Largest distance below which intra-cluster counts stay above ``2*theta2 + t1``.

    None when the admissible interval ``[0, 2*theta1 - 4*theta2 - 2*t1]`` is
    empty or no point in it satisfies the condition.
    """
    if theta1 < 2 * theta2:
        raise ParameterError("t3 needs theta1 >= 2*theta2")
    upper = 2.0 * theta1 - 4.0 * theta2 - 2.0 * t1
    if upper < 0:
        return None
    holds = lambda t: t3_condition(t, theta1, theta2, t1) > 2.0
    if not holds(0.0):
        return None
    if holds(upper):
        return upper
    # condition decreases in t on this interval: the sup is the root
    return bisect_boundary(lambda t: not holds(t), 0.0, upper)


def t4_condition(t, theta1, theta2, t2):
    c = 4.0 * theta2 - 2.0 * t2
    return _kl_gap(c, 2.0 * theta1 - t)


def solve_t4(theta1, theta2, t2):
    """Smallest distance above which intra-cluster counts fall below ``2*theta2 - t2``.

    Searched on ``[max(2*theta2, 2*theta1 - 4*theta2 + 2*t2), theta1]``;
    None when that interval is empty or the condition never holds.
    """
    if theta1 < 2 * theta2:
        raise ParameterError("t4 needs theta1 >= 2*theta2")
    if t2 is None:
        return None
    lower = max(2.0 * theta2, 2.0 * theta1 - 4.0 * theta2 + 2.0 * t2)
    upper = theta1
    if lower > upper:
        return None
    holds = lambda t: t4_condition(t, theta1, theta2, t2) > 2.0
    if not holds(upper):
        return None
    if holds(lower):
        return lower
    return bisect_boundary(holds, lower, upper)


def regime_for(theta2):
    return THEOREM2 if 2 * theta2 >= 2 else THEOREM6


def _eta_level(theta1, theta2, regime):
    """(base mean M, right-hand side) of the eta condition for a regime."""
    if regime == THEOREM2:
        return theta1 + theta2 - 2.0, 1.0
    return 2.0 * theta1 - 2.0, 2.0


def eta_condition(t, theta1, theta2, regime=None):
    regime = regime or regime_for(theta2)
    m, _ = _eta_level(theta1, theta2, regime)
    if t >= m:
        return m
    return (m - t) * math.log((m - t) / m) + t


def solve_eta(theta1, theta2, regime=None):
    """Lower-deviation allowance for intra-cluster counts at distance ``2 log(n)/n``."""
    regime = regime or regime_for(theta2)
    if regime == THEOREM2:
        if theta1 + theta2 <= 2:
            raise ParameterError("eta undefined: needs theta1 + theta2 > 2")
    elif regime == THEOREM6:
        if theta1 < 2:
            raise ParameterError("eta undefined: theorem6 regime needs theta1 >= 2")
    else:
        raise ParameterError(f"unknown regime {regime!r}")
    m, rhs = _eta_level(theta1, theta2, regime)
    if m <= rhs:
        raise ParameterError(
            f"eta condition never satisfiable: base level {m:.4g} <= {rhs:g}"
        )
    return bisect_boundary(lambda t: eta_condition(t, theta1, theta2, regime) > rhs, 0.0, m)


def threshold_level(theta1, theta2, eta, regime=None):
    """``n * E_T / log(n)``: the Phase 1 count cut in units of ``log(n)``."""
    regime = regime or regime_for(theta2)
    if regime == THEOREM2:
        return theta1 + theta2 - 2.0 - eta
    return 0.5 * (2.0 * theta1 - 2.0 - eta)


def compute_E_T(theta1, theta2, eta, n, regime=None):
    return threshold_level(theta1, theta2, eta, regime) * math.log(n) / n


def compute_epsilon(theta1, theta2, eta, regime=None):
    level = threshold_level(theta1, theta2, eta, regime)
    c = 2.0 * theta2
    return level * math.log(level / c) - (level - c)


def R_condition(r, theta1, theta2, t1):
    return _kl_gap(2.0 * theta2 + t1, theta1 + theta2 - r)


def solve_R(theta1, theta2, t1):
    """Largest intra-cluster distance whose edges survive the aggressive cut.

    Searched on ``(0, min(theta1 - theta2 - t1, 2))``. The condition decreases
    in ``r``; if it still holds at the upper end the result is clamped there.
    None when the domain is empty or the condition fails as ``r -> 0``.
    """
    if not theta2 > 0 or t1 < 0:
        raise ParameterError("solve_R needs theta2 > 0 and t1 >= 0")
    upper = min(theta1 - theta2 - t1, 2.0)
    if upper <= 0:
        return None
    holds = lambda r: R_condition(r, theta1, theta2, t1) > 1.0
    if not holds(0.0):
        return None
    if holds(upper):
        return upper
    return bisect_boundary(lambda r: not holds(r), 0.0, upper)


def theorem8_assumptions(theta1, theta2):
    """Truth values of the standing assumptions behind the component bound."""
    t1 = solve_t1(theta2)
    try:
        level = threshold_level(theta1, theta2, solve_eta(theta1, theta2, THEOREM2), THEOREM2)
    except ParameterError:
        level = None
    return {
        "theta1_ge_2theta2": theta1 >= 2 * theta2,
        "theta2_ge_1": theta2 >= 1,
        "cut_above_phase1_level": level is not None and 2 * theta2 + t1 > level,
    }


# -- frontiers ---------------------------------------------------------------


def unsupervised_condition(theta1, theta2):
    """Interval-removal recovery condition ``theta1 - t4 + t3 > 2 or theta1 > max(1 + t4, 2)``.

    An empty t4 set means no intra-cluster edge is pushed below the lower
    count cut, so the surviving distance band reaches ``theta1``; we then take
    ``t4 = theta1``. An empty t3 set disables the first branch.
    """
    t1 = solve_t1(theta2)
    t2 = solve_t2(theta2)
    t3 = solve_t3(theta1, theta2, t1)
    t4 = solve_t4(theta1, theta2, t2)
    if t4 is None:
        t4 = theta1
    first = t3 is not None and theta1 - t4 + t3 > 2
    return first or theta1 > max(1 + t4, 2)


def min_theta1_unsupervised(theta2, tol=1e-4):
    if not theta2 > 0:
        raise ParameterError("theta2 must be positive")
    lo = 2.0 * theta2
    pred = lambda th1: unsupervised_condition(th1, theta2)
    if pred(lo):
        return lo
    hi = expand_upper(pred, start=lo + 1.0)
    if hi is None:
        raise ParameterError("unsupervised frontier not found")
    return bisect_boundary(pred, lo, hi, tol)


def phase1_separates(theta1, theta2, regime=None):
    """Whether the Phase 1 cut alone removes all cross-cluster edges (w.h.p.)."""
    regime = regime or regime_for(theta2)
    try:
        eta = solve_eta(theta1, theta2, regime)
    except ParameterError:
        return False
    return threshold_level(theta1, theta2, eta, regime) - 2 * theta2 >= solve_t1(theta2)


def min_gap_active(theta2, tol=1e-6):
    """Smallest ``theta1 - theta2`` at which the Phase 1 cut already separates."""
    if not theta2 > 0:
        raise ParameterError("theta2 must be positive")
    regime = regime_for(theta2)
    edge = 3.0 - theta2 if regime == THEOREM2 else 2.0
    lo = max(theta2, edge) + 1e-9
    pred = lambda th1: phase1_separates(th1, theta2, regime)
    if pred(lo):
        return lo - theta2
    hi = expand_upper(pred, start=lo + 1.0)
    if hi is None:
        raise ParameterError("active frontier not found")
    return bisect_boundary(pred, lo, hi, tol) - theta2


def sbm_min_a(b):
    """Smallest ``a`` with ``(sqrt(a) - sqrt(b))**2 >= 2``."""
    if b < 0:
        raise ParameterError("b must be non-negative")
    return (math.sqrt(b) + math.sqrt(2.0)) ** 2


# -- component counts and query budgets --------------------------------------


@dataclass(frozen=True)
class PoissonApprox:
    lam: float
    tv_bound: float


def poisson_component_approx(n, tau):
    """Poisson parameter and total-variation bound for ``#components - 1`` of RGG(n, tau)."""
    if not 0 <= 2 * tau < 1:
        raise ParameterError("need 0 <= 2*tau < 1")
    lam = n * (1 - tau) ** n
    tv = lam - (n - 1) * (1 - tau / (1 - tau)) ** n
    return PoissonApprox(lam, tv)


def s2_budget(n, cut_size, diameter, delta):
    if not 0 < delta <= 1:
        raise ParameterError("delta must lie in (0, 1]")
    if cut_size < 1 or diameter < 1 or n < 1:
        raise ParameterError("n, cut_size and diameter must be >= 1")
    first = math.ceil(math.log2(2.0 / delta) - 1e-12)
    log2n = (int(n) - 1).bit_length()
    log2d = (2 * int(diameter)).bit_length()
    return first + log2n + (cut_size - 1) * (log2d + 1)


def component_count_bound(n, R):
    if not 0 < R <= 2:
        raise ParameterError("R must lie in (0, 2]")
    return 1.5 * n ** (1 - R / 2) + 2


# -- bundle ------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdSet:
    theta1: float
    theta2: float
    n: int
    regime: str
    t1: float
    t2: float | None
    t3: float | None
    t4: float | None
    eta: float | None
    E_T: float | None
    epsilon: float | None
    R: float | None
    E_L: float | None
    E_R: float
    phase1_separates: bool
    theorem8_assumption: bool

    def as_dict(self):
        return asdict(self)


def compute_threshold_set(theta1, theta2, n):
    regime = regime_for(theta2)
    scale = math.log(n) / n
    t1 = solve_t1(theta2)
    t2 = solve_t2(theta2)
    wide = theta1 >= 2 * theta2
    t3 = solve_t3(theta1, theta2, t1) if wide else None
    t4 = solve_t4(theta1, theta2, t2) if wide else None
    try:
        eta = solve_eta(theta1, theta2, regime)
    except ParameterError:
        eta = None
    E_T = eps = None
    if eta is not None:
        E_T = compute_E_T(theta1, theta2, eta, n, regime)
        eps = compute_epsilon(theta1, theta2, eta, regime)
    R = solve_R(theta1, theta2, t1)
    return ThresholdSet(
        theta1=theta1,
        theta2=theta2,
        n=n,
        regime=regime,
        t1=t1,
        t2=t2,
        t3=t3,
        t4=t4,
        eta=eta,
        E_T=E_T,
        epsilon=eps,
        R=R,
        E_L=None if t2 is None else (2 * theta2 - t2) * scale,
        E_R=(2 * theta2 + t1) * scale,
        phase1_separates=phase1_separates(theta1, theta2, regime),
        theorem8_assumption=all(theorem8_assumptions(theta1, theta2).values()),
    )
