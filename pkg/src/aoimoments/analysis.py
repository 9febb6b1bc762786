"""
Average AoI of the discrete-time FCFS queue with geometric service.

The stationary system time is geometric with parameter ``lam = 1 - mu + mu*alpha``
where ``alpha`` is the root in (0, 1) of ``z = G_X(1 - mu + mu*z)``. The
average age is then::

    E(S) + E(X^2) / (2 E(X)) + lam * G'_X(lam) / (E(X) (1 - lam))

The only quantity needing the full inter-arrival law is ``G'_X(lam)``. This
module brackets it using finite moments: truncations of the series
``G'_X(z) = (1/z) sum_n ln(z)^(n-1) E(X^n) / (n-1)!`` alternate around the
true value (even truncations below, odd above), and convexity of the PGF
gives the chord bounds ``alpha/lam <= G'_X(lam) <= 1/mu``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import mean_service
from .distributions import DiscretePMF, MomentVector
from .errors import DomainError, InstabilityError, InvalidParameterError, NumericalError

JENSEN = "jensen"

_SOLVER_TOL = 1e-13


def traffic_intensity(mean_service: float, mean_interarrival: float) -> float:
    if mean_service <= 0 or mean_interarrival <= 0:
        raise InvalidParameterError("means must be positive")
    return mean_service / mean_interarrival


@dataclass(frozen=True)
class QueueSolution:
    alpha: float
    lam: float
    rho: float
    mu: float

    @property
    def mean_system_time(self) -> float:
        return 1.0 / (1.0 - self.lam)


def solve_alpha(dist: DiscretePMF, mu: float) -> QueueSolution:
    """Solve ``z = G_X(1 - mu + mu*z)`` on (0, 1) by bisection.

    ``f(z) = G_X(1-mu+mu*z) - z`` is positive at 0 and has a spurious root at
    1 where its slope is ``1/rho - 1 > 0``; the right end of the bracket is
    found by halving ``delta`` until ``f(1 - delta) < 0``.

    Raises
    ------
    InstabilityError
        If ``rho = 1 / (mu E(X)) >= 1``.
    """
    if not 0.0 < mu <= 1.0:
        raise InvalidParameterError(f"mu must lie in (0, 1], got {mu}")
    rho = traffic_intensity(1.0 / mu, dist.mean)
    if rho >= 1.0:
        raise InstabilityError(f"traffic intensity {rho:.6g} >= 1, queue is unstable")
    mu_bar = 1.0 - mu

    def f(z: float) -> float:
        return dist._pgf(mu_bar + mu * z) - z

    if f(0.0) <= 0.0:
        # only when mu == 1: the server never holds a packet past one block
        return QueueSolution(0.0, mu_bar, rho, mu)

    delta = 0.5
    while f(1.0 - delta) >= 0.0:
        delta *= 0.5
        if delta < 1e-15:
            raise NumericalError("could not bracket the queue-length root; rho too close to 1")
    lo, hi = 0.0, 1.0 - delta
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < _SOLVER_TOL and abs(f(mid)) < _SOLVER_TOL:
            break
    alpha = 0.5 * (lo + hi)
    return QueueSolution(alpha, mu_bar + mu * alpha, rho, mu)


def system_time_pmf(lam: float, n: int) -> float:
    """``Pr{T=n} = (1-lam) * lam**(n-1)``."""
    if n < 1:
        raise InvalidParameterError(f"system time must be >= 1, got {n}")
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lam must lie in [0, 1), got {lam}")
    return (1.0 - lam) * lam ** (n - 1)


def exact_average_aoi(dist: DiscretePMF, mu: float, solution: QueueSolution | None = None) -> float:
    """Average AoI in blocks using the exact PGF derivative."""
    sol = solution or solve_alpha(dist, mu)
    ex = dist.moment(1)
    base = mean_service(mu) + dist.moment(2) / (2.0 * ex)
    if sol.lam == 0.0:
        return base
    return base + sol.lam * dist._pgf_derivative(sol.lam) / (ex * (1.0 - sol.lam))


def lambda_from_departures(inter_departures: Sequence[int] | np.ndarray, mu: float) -> float:
    """Estimate ``lam = (1-mu) / (1 - Pr{Y=1})`` from observed inter-departure times.

    The result is clamped to ``[1-mu, 1-1e-12]``; a ``RuntimeWarning`` is
    issued when clamping happens.
    """
    y = np.asarray(inter_departures)
    if y.size == 0:
        raise InvalidParameterError("no inter-departure samples")
    p_one = float(np.count_nonzero(y == 1)) / y.size
    if p_one >= 1.0:
        raise InvalidParameterError("every inter-departure equals 1; lambda is not identifiable")
    lam = (1.0 - mu) / (1.0 - p_one)
    lo, hi = 1.0 - mu, 1.0 - 1e-12
    if not lo <= lam <= hi:
        warnings.warn(f"lambda estimate {lam:.6g} clamped to [{lo:.6g}, {hi:.6g}]", RuntimeWarning)
        lam = min(max(lam, lo), hi)
    return lam


def alpha_from_lambda(lam: float, mu: float) -> float:
    return (lam - (1.0 - mu)) / mu


class PartialSum(NamedTuple):
    value: float
    diverging: bool


def partial_sum_sequence(moments: MomentVector, K: int, z: float) -> tuple[np.ndarray, bool]:
    """All truncations ``G'^k(z)`` for ``k = 1..K`` and the divergence flag.

    Terms follow ``t_{n+1} = t_n * ln(z) * E(X^{n+1}) / (n E(X^n))`` so that
    neither ``ln(z)**n`` nor ``n!`` is formed. The flag is set when the last
    term is at least as large in magnitude as the one before it.
    """
    if K < 1 or K > moments.max_order:
        raise InvalidParameterError(f"K={K} outside 1..{moments.max_order} available moments")
    if not 0.0 < z <= 1.0:
        raise DomainError(f"z must lie in (0, 1], got {z}")
    log_z = math.log(z)
    term = moments.moment(1) / z
    terms = [term]
    for n in range(1, K):
        term = term * log_z * moments.moment(n + 1) / (n * moments.moment(n))
        terms.append(term)
    sums = np.cumsum(terms)
    diverging = K >= 2 and terms[-1] != 0.0 and abs(terms[-1]) >= abs(terms[-2])
    return sums, bool(diverging)


def pgf_derivative_partial_sum(moments: MomentVector, K: int, z: float) -> PartialSum:
    sums, diverging = partial_sum_sequence(moments, K, z)
    return PartialSum(float(sums[-1]), diverging)


def jensen_bounds(alpha: float, lam: float, mu: float) -> tuple[float, float]:
    """Chord bounds ``(alpha/lam, (1-alpha)/(1-lam))`` on ``G'_X(lam)``.

    With ``lam = 1 - mu + mu*alpha`` the upper bound is ``1/mu`` identically.
    """
    if not (0.0 < alpha < lam < 1.0 and 0.0 < mu <= 1.0):
        raise DomainError(f"need 0 < alpha < lam < 1, got alpha={alpha}, lam={lam}")
    lower = alpha / lam
    upper = (1.0 - alpha) / (1.0 - lam)
    assert math.isclose(upper, 1.0 / mu, rel_tol=1e-9), (upper, 1.0 / mu)
    return lower, upper


class DerivativeBounds(NamedTuple):
    lower: float
    upper: float
    lower_source: str
    upper_source: str
    partial_sums: tuple[float, ...]
    diverging: bool


def refined_derivative_bounds(
    moments: MomentVector, alpha: float, lam: float, mu: float, K: int
) -> DerivativeBounds:
    """Tightest bracket on ``G'_X(lam)`` from orders up to ``K``.

    Upper: min of ``1/mu`` and the odd truncations. Lower: max of
    ``alpha/lam`` and the even truncations. A truncation replaces the chord
    bound only when strictly tighter.
    """
    if K < 2:
        raise InvalidParameterError(f"K must be >= 2, got {K}")
    lower, _ = jensen_bounds(alpha, lam, mu)
    upper = 1.0 / mu  # exact form of the chord upper bound
    lower_source = upper_source = JENSEN
    sums, diverging = partial_sum_sequence(moments, K, lam)
    for k, s in enumerate(sums, start=1):
        if k % 2 == 1 and s < upper:
            upper, upper_source = float(s), f"partial_sum({k})"
        elif k % 2 == 0 and s > lower:
            lower, lower_source = float(s), f"partial_sum({k})"
    return DerivativeBounds(lower, upper, lower_source, upper_source, tuple(map(float, sums)), diverging)


@dataclass(frozen=True)
class AoIBounds:
    order_used: int
    lower: float
    upper: float
    lower_source: str
    upper_source: str
    per_order_partial_sums: tuple[float, ...]
    diverging: bool

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def aoi_bounds(moments: MomentVector, mu: float, lam: float, alpha: float, K: int) -> AoIBounds:
    """Lower/upper average AoI from the first ``K`` inter-arrival moments.

    ``lam`` and ``alpha`` come either from :func:`solve_alpha` or, when only
    measurements exist, from :func:`lambda_from_departures` and
    :func:`alpha_from_lambda`.
    """
    if K < 2:
        raise InvalidParameterError(f"K must be >= 2, got {K}")
    ex = moments.moment(1)
    if mu * ex <= 1.0:
        raise InstabilityError(f"traffic intensity {1.0 / (mu * ex):.6g} >= 1, queue is unstable")
    base = 1.0 / mu + moments.moment(2) / (2.0 * ex)
    if lam == 0.0:
        return AoIBounds(K, base, base, JENSEN, JENSEN, (), False)
    b = refined_derivative_bounds(moments, alpha, lam, mu, K)
    scale = lam / (ex * (1.0 - lam))
    return AoIBounds(
        order_used=K,
        lower=base + scale * b.lower,
        upper=base + scale * b.upper,
        lower_source=b.lower_source,
        upper_source=b.upper_source,
        per_order_partial_sums=b.partial_sums,
        diverging=b.diverging,
    )
