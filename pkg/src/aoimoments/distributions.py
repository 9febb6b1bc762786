"""
Inter-arrival distributions on the positive integers.

A :class:`DiscretePMF` is either a finite table of (support, probability)
pairs or a geometric law with implicit infinite support. Both expose the
probability generating function (PGF), its derivative, raw moments and a
sampler. :class:`MomentVector` carries the first ``K`` raw moments, exact or
estimated from data, and is what the moment-based AoI bounds consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, InvalidParameterError, MomentOverflowError

Kind = Literal["degenerate", "two_point", "geometric", "general"]

_NORM_TOL = 1e-12
MOMENT_LIMIT = 1e300


@dataclass(frozen=True)
class DiscretePMF:
    """Probability mass function on ``{1, 2, ...}``.

    For ``kind == "geometric"`` the tables are empty and ``p`` holds the
    success parameter: ``Pr{X=m} = (1-p)**(m-1) * p``.
    """

    support: tuple[int, ...] = ()
    probs: tuple[float, ...] = ()
    kind: Kind = "general"
    p: float | None = None
    _cdf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind == "geometric":
            if self.p is None or not 0.0 < self.p < 1.0:
                raise InvalidParameterError(f"geometric p must lie in (0,1), got {self.p}")
            object.__setattr__(self, "_cdf", np.empty(0))
            return
        if len(self.support) == 0 or len(self.support) != len(self.probs):
            raise InvalidParameterError("support and probs must be non-empty and of equal length")
        if self.support[0] < 1:
            raise InvalidParameterError("support points must be >= 1")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise InvalidParameterError("support must be strictly increasing")
        if any(q <= 0.0 for q in self.probs):
            raise InvalidParameterError("probabilities must be strictly positive")
        if abs(math.fsum(self.probs) - 1.0) > _NORM_TOL:
            raise InvalidParameterError(f"probabilities sum to {math.fsum(self.probs)!r}, not 1")
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        object.__setattr__(self, "_cdf", cdf)

    @property
    def is_finite(self) -> bool:
        return self.kind != "geometric"

    def pmf(self, m: int) -> float:
        if self.kind == "geometric":
            return (1.0 - self.p) ** (m - 1) * self.p if m >= 1 else 0.0
        try:
            return self.probs[self.support.index(m)]
        except ValueError:
            return 0.0

    # -- PGF ---------------------------------------------------------------

    def pgf(self, z: float) -> float:
        """``G_X(z) = sum_m Pr{X=m} z**m`` for ``z`` in ``(0, 1]``."""
        _check_unit(z)
        return self._pgf(z)

    def _pgf(self, z: float) -> float:
        # no domain check; [0, 1] is fine here and the queue solver needs z=0
        if self.kind == "geometric":
            p = self.p
            return p * z / (1.0 - (1.0 - p) * z)
        return math.fsum(q * z**m for m, q in zip(self.support, self.probs))

    def pgf_derivative(self, z: float) -> float:
        """Exact ``G'_X(z) = sum_m m Pr{X=m} z**(m-1)`` for ``z`` in ``(0, 1]``."""
        _check_unit(z)
        return self._pgf_derivative(z)

    def _pgf_derivative(self, z: float) -> float:
        if self.kind == "geometric":
            p = self.p
            return p / (1.0 - (1.0 - p) * z) ** 2
        return math.fsum(m * q * z ** (m - 1) for m, q in zip(self.support, self.probs))

    # -- moments -----------------------------------------------------------

    def moment(self, n: int) -> float:
        """Raw moment ``E(X**n)``.

        Raises
        ------
        MomentOverflowError
            If the moment exceeds ``1e300``.
        """
        if n < 1:
            raise InvalidParameterError(f"moment order must be >= 1, got {n}")
        if self.kind == "geometric":
            value = _geometric_moments(self.p, n)[n]
        else:
            try:
                value = math.fsum(q * float(m) ** n for m, q in zip(self.support, self.probs))
            except OverflowError:
                value = math.inf
        if not value <= MOMENT_LIMIT:
            raise MomentOverflowError(f"E(X^{n}) exceeds {MOMENT_LIMIT:g}; cap the moment order")
        return value

    def moments(self, max_order: int) -> MomentVector:
        """Exact moments of orders ``1..max_order``."""
        return MomentVector(
            tuple(self.moment(n) for n in range(1, max_order + 1)), origin="exact"
        )

    @property
    def mean(self) -> float:
        return self.moment(1)

    # -- sampling ----------------------------------------------------------

    def sample(self, rng: np.random.Generator) -> int:
        return int(self.sample_many(rng, 1)[0])

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` values as an ``int64`` array.

        Finite laws use inverse-CDF lookup; the geometric law uses the log
        transform ``1 + floor(log(U) / log(1-p))``.
        """
        u = rng.random(size)
        if self.kind == "geometric":
            # 1 - u lies in (0, 1], so the log is finite
            return 1 + np.floor(np.log1p(-u) / math.log1p(-self.p)).astype(np.int64)
        idx = np.searchsorted(self._cdf, u, side="right")
        return np.asarray(self.support, dtype=np.int64)[idx]

    def truncate(self, x_max: int) -> DiscretePMF:
        """Cap the support at ``x_max``; the tail mass is moved onto ``x_max``."""
        if self.kind == "geometric":
            lo = 1
        else:
            lo = self.support[0]
        if x_max < lo:
            raise InvalidParameterError(f"x_max={x_max} is below the smallest support point {lo}")
        if self.kind == "geometric":
            p = self.p
            support = list(range(1, x_max + 1))
            probs = [(1.0 - p) ** (m - 1) * p for m in support[:-1]]
            probs.append((1.0 - p) ** (x_max - 1))
        else:
            if x_max >= self.support[-1]:
                return self
            support = [m for m in self.support if m < x_max] + [x_max]
            head = [q for m, q in zip(self.support, self.probs) if m < x_max]
            probs = head + [math.fsum(q for m, q in zip(self.support, self.probs) if m >= x_max)]
        total = math.fsum(probs)
        probs = [q / total for q in probs]
        return _from_table(support, probs)


def _from_table(support: Sequence[int], probs: Sequence[float]) -> DiscretePMF:
    kind: Kind = {1: "degenerate", 2: "two_point"}.get(len(support), "general")
    return DiscretePMF(tuple(int(m) for m in support), tuple(float(q) for q in probs), kind)


def _check_unit(z: float) -> None:
    if not 0.0 < z <= 1.0:
        raise DomainError(f"z must lie in (0, 1], got {z}")


def _geometric_moments(p: float, n: int) -> list[float]:
    """Raw moments ``E(X**k)``, ``k=0..n``, of a geometric law on ``{1,2,...}``.

    Uses ``X = 1 + B X'`` with ``B ~ Bernoulli(1-p)``, which gives
    ``E(X**k) = 1 + (1-p)/p * sum_{j<k} C(k,j) E(X**j)``. Every term is
    positive, so there is no cancellation.
    """
    ratio = (1.0 - p) / p
    m = [1.0]
    for k in range(1, n + 1):
        m.append(1.0 + ratio * math.fsum(math.comb(k, j) * m[j] for j in range(k)))
        if m[-1] > MOMENT_LIMIT:
            raise MomentOverflowError(f"E(X^{k}) exceeds {MOMENT_LIMIT:g}; cap the moment order")
    return m


def make_degenerate(d: int) -> DiscretePMF:
    if d < 1 or int(d) != d:
        raise InvalidParameterError(f"degenerate point must be a positive integer, got {d}")
    return DiscretePMF((int(d),), (1.0,), "degenerate")


def make_two_point(a: int, b: int, q: float) -> DiscretePMF:
    """``Pr{X=a} = q``, ``Pr{X=b} = 1-q`` with ``1 <= a < b``."""
    if not (1 <= a < b):
        raise InvalidParameterError(f"two-point law needs 1 <= a < b, got a={a}, b={b}")
    if not 0.0 < q < 1.0:
        raise InvalidParameterError(f"q must lie in (0,1), got {q}")
    return DiscretePMF((int(a), int(b)), (float(q), 1.0 - float(q)), "two_point")


def make_geometric(p: float) -> DiscretePMF:
    return DiscretePMF(kind="geometric", p=float(p))


@dataclass(frozen=True)
class MomentVector:
    """Raw moments ``E(X), E(X**2), ..., E(X**K)``.

    ``values[n-1]`` holds ``E(X**n)``; use :meth:`moment` for 1-based access.
    """

    values: tuple[float, ...]
    origin: Literal["exact", "empirical"] = "exact"
    sample_count: int = 0

    def __post_init__(self) -> None:
        if len(self.values) < 1:
            raise InvalidParameterError("at least one moment is required")
        m1 = self.values[0]
        if m1 < 1.0 - 1e-12:
            raise InvalidParameterError(f"E(X) = {m1} < 1 is impossible for X >= 1")
        # power-mean chain E(X^n)^(1/n) non-decreasing, checked in log space
        roots = [math.log(v) / n for n, v in enumerate(self.values, start=1)]
        for n in range(1, len(roots)):
            if roots[n] < roots[n - 1] - 1e-12:
                raise InvalidParameterError(
                    f"moments violate the power-mean chain at order {n + 1}"
                )

    @property
    def max_order(self) -> int:
        return len(self.values)

    def moment(self, n: int) -> float:
        if not 1 <= n <= self.max_order:
            raise InvalidParameterError(f"order {n} not in 1..{self.max_order}")
        return self.values[n - 1]


def empirical_moments(samples: Sequence[int] | np.ndarray, K: int) -> MomentVector:
    """Sample raw moments ``mean(x**n)`` for ``n = 1..K``."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise InvalidParameterError("empirical_moments needs at least one sample")
    if K < 1:
        raise InvalidParameterError(f"K must be >= 1, got {K}")
    values = []
    power = np.ones_like(x)
    for _ in range(K):
        power = power * x
        values.append(float(power.mean()))
    return MomentVector(tuple(values), origin="empirical", sample_count=int(x.size))
