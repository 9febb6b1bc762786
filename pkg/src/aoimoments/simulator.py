"""
Slot-level simulation of the FCFS queue over a Bernoulli-success channel.

Timing within block ``n``:

1. If a packet that arrived before block ``n`` is at the head of the queue,
   it is transmitted; with probability ``mu`` it is delivered, stamped ``n``.
2. A scheduled arrival joins the queue, stamped ``n``. It is first
   transmitted in block ``n+1``.

The age at block ``n`` is ``n - U(n)`` where ``U(n)`` is the stamp of the
newest delivered packet. Within a block the age grows linearly, so block
``n`` contributes ``n - U(n) + 1/2`` to the time-integrated age. This makes
the per-block average coincide with the per-packet area formula
``(E(XT) + E(X^2)/2) / E(X)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numba
import numpy as np

from .analysis import QueueSolution, lambda_from_departures
from .distributions import DiscretePMF, MomentVector, empirical_moments
from .errors import InvalidParameterError

HIST_CAP = 100_000
MIN_HORIZON = 10_000
GENERATOR = "numpy.random.PCG64"


@dataclass(frozen=True)
class SimConfig:
    dist: DiscretePMF
    mu: float
    horizon: int
    seed: int
    warmup_fraction: float = 0.01

    def __post_init__(self) -> None:
        if self.horizon < MIN_HORIZON:
            raise InvalidParameterError(f"horizon must be >= {MIN_HORIZON}, got {self.horizon}")
        if not 0.0 <= self.warmup_fraction < 0.5:
            raise InvalidParameterError("warmup_fraction must lie in [0, 0.5)")
        if not 0.0 < self.mu <= 1.0:
            raise InvalidParameterError(f"mu must lie in (0, 1], got {self.mu}")

    @property
    def first_block(self) -> int:
        """First block counted in the averages."""
        return int(self.warmup_fraction * self.horizon) + 1


@dataclass(frozen=True, eq=False)
class SimResult:
    """Statistics of one run.

    Histograms are ``int64`` count arrays indexed by value. Values above
    ``HIST_CAP`` share the final overflow bin at index ``HIST_CAP + 1``.
    Packet-level statistics cover packets that arrived after warm-up and
    were delivered within the horizon.
    """

    config: SimConfig
    avg_aoi: float
    avg_aoi_by_area: float
    packets_delivered: int
    arrivals: int
    interarrival_moments: MomentVector
    inter_departure_histogram: np.ndarray
    system_time_histogram: np.ndarray
    queue_length_at_arrival_histogram: np.ndarray
    idle_time_total: int
    busy_blocks: int
    waiting_time_mean: float
    lambda_hat: float
    generator: str = GENERATOR
    # per-packet trace, all packets delivered within the horizon
    trace: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    # queue length seen by every arrival in the window, in arrival order
    queue_at_arrival: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64), repr=False)

    @property
    def window_blocks(self) -> int:
        return self.config.horizon - self.config.first_block + 1


@numba.njit(cache=True)
def _kernel(rng, support, cdf, geom_log_q, mu, horizon, first_block):
    # arrival stamps of every generated packet; the queue is the slice [head, tail)
    cap = 1024
    arr = np.empty(cap, np.int64)
    head = 0
    tail = 0
    n_dep = 0
    dep = np.empty(cap, np.int64)
    attempts = np.empty(cap, np.int64)
    qlen = np.empty(cap, np.int64)
    cur_attempts = 0
    last_stamp = 0  # U(n); a virtual packet stamped 0 is delivered at time 0
    age_sum = 0
    idle = 0

    # first arrival
    next_arrival = _draw(rng, support, cdf, geom_log_q)
    for n in range(1, horizon + 1):
        if tail > head and arr[head] < n:
            cur_attempts += 1
            if rng.random() < mu:
                if n_dep == dep.size:
                    dep = _grow(dep)
                    attempts = _grow(attempts)
                dep[n_dep] = n
                attempts[n_dep] = cur_attempts
                n_dep += 1
                last_stamp = arr[head]
                head += 1
                cur_attempts = 0
        elif n >= first_block:
            idle += 1
        if n >= first_block:
            age_sum += n - last_stamp
        if n == next_arrival:
            if tail == arr.size:
                arr = _grow(arr)
                qlen = _grow(qlen)
            qlen[tail] = tail - head
            arr[tail] = n
            tail += 1
            next_arrival = n + _draw(rng, support, cdf, geom_log_q)
    return arr[:tail], qlen[:tail], dep[:n_dep], attempts[:n_dep], age_sum, idle


@numba.njit(cache=True)
def _draw(rng, support, cdf, geom_log_q):
    u = rng.random()
    if geom_log_q < 0.0:
        return 1 + np.int64(np.floor(np.log1p(-u) / geom_log_q))
    return support[np.searchsorted(cdf, u, side="right")]


@numba.njit(cache=True)
def _grow(a):
    out = np.empty(a.size * 2, a.dtype)
    out[: a.size] = a
    return out


def _histogram(values: np.ndarray) -> np.ndarray:
    return np.bincount(np.minimum(values, HIST_CAP + 1))


def _area_decomposition(arrivals, departures, first_block, horizon) -> float:
    """Integrated age over blocks ``first_block..horizon`` from per-packet areas.

    Between consecutive deliveries of packets ``k-1`` and ``k`` the age rises
    from ``T_{k-1}`` to ``X_k + T_k``; summing the trapezoids telescopes to
    ``sum_k Q_k`` with ``Q_k = (X_k+T_k)^2/2 - T_k^2/2`` plus boundary pieces
    at both ends of the window.
    """
    a = arrivals[: departures.size].astype(np.float64)
    d = departures.astype(np.float64)
    lo = int(np.searchsorted(departures, first_block, side="left"))
    a_prev = a[lo - 1] if lo > 0 else 0.0
    end = float(horizon + 1)
    if lo == departures.size:
        return 0.5 * ((end - a_prev) ** 2 - (first_block - a_prev) ** 2)
    head = 0.5 * ((d[lo] - a_prev) ** 2 - (first_block - a_prev) ** 2)
    x = a[lo + 1 :] - a[lo:-1]
    t = d[lo + 1 :] - a[lo + 1 :]
    q = 0.5 * (x + t) ** 2 - 0.5 * t**2
    t_first = d[lo] - a[lo]
    t_last = d[-1] - a[-1]
    tail = 0.5 * (end - a[-1]) ** 2 - 0.5 * t_last**2
    return head + math.fsum(q) + 0.5 * t_last**2 - 0.5 * t_first**2 + tail


def run(config: SimConfig) -> SimResult:
    """Simulate ``config.horizon`` blocks; deterministic given ``config.seed``."""
    dist = config.dist
    rng = np.random.default_rng(config.seed)
    if dist.kind == "geometric":
        support = np.zeros(1, np.int64)
        cdf = np.ones(1)
        geom_log_q = math.log1p(-dist.p)
    else:
        support = np.asarray(dist.support, np.int64)
        cdf = dist._cdf
        geom_log_q = 0.0
    arrivals, qlen, departures, attempts, age_sum, idle = _kernel(
        rng, support, cdf, geom_log_q, float(config.mu), config.horizon, config.first_block
    )
    n0, horizon = config.first_block, config.horizon
    window = horizon - n0 + 1
    avg_aoi = (age_sum + 0.5 * window) / window
    avg_aoi_by_area = _area_decomposition(arrivals, departures, n0, horizon) / window

    trace = packet_trace(arrivals, departures, attempts)
    in_window = trace["arrival"] >= n0
    arrived = arrivals >= n0
    x_window = np.diff(arrivals, prepend=0)[arrived]
    system_times = trace["T"][in_window]
    inter_dep = trace["Y"][in_window]
    hist_t = _histogram(system_times)
    hist_y = _histogram(inter_dep)
    hist_l = _histogram(qlen[arrived])
    if any(h.size > HIST_CAP + 1 and h[HIST_CAP + 1] > 0 for h in (hist_t, hist_y, hist_l)):
        warnings.warn("histogram overflow bin is occupied; the queue is near instability", RuntimeWarning)
    lam_hat = lambda_from_departures(inter_dep, config.mu) if inter_dep.size else math.nan
    return SimResult(
        config=config,
        avg_aoi=float(avg_aoi),
        avg_aoi_by_area=float(avg_aoi_by_area),
        packets_delivered=int(in_window.sum()),
        arrivals=int(arrived.sum()),
        interarrival_moments=empirical_moments(x_window, 7) if x_window.size else None,
        inter_departure_histogram=hist_y,
        system_time_histogram=hist_t,
        queue_length_at_arrival_histogram=hist_l,
        idle_time_total=int(idle),
        busy_blocks=int(window - idle),
        waiting_time_mean=float(trace["W"][in_window].mean()) if in_window.any() else math.nan,
        lambda_hat=lam_hat,
        trace=trace,
        queue_at_arrival=qlen[arrived],
    )


def packet_trace(arrivals: np.ndarray, departures: np.ndarray, attempts: np.ndarray) -> dict[str, np.ndarray]:
    """Per-packet columns for delivered packets.

    ``S`` is the number of transmission attempts recorded by the simulator;
    the waiting and idle times are derived from arrival and departure
    stamps, so ``T == W + S`` and ``Y == I + S`` are genuine checks.
    """
    m = departures.size
    a = arrivals[:m]
    d_prev = np.concatenate(([0], departures[:-1]))
    x = np.diff(arrivals, prepend=0)[:m]
    return {
        "k": np.arange(1, m + 1),
        "arrival": a,
        "departure": departures,
        "X": x,
        "S": attempts,
        "W": np.maximum(d_prev - a, 0),
        "I": np.maximum(a - d_prev, 0),
        "T": departures - a,
        "Y": departures - d_prev,
    }


TRACE_COLUMNS = ("k", "arrival", "departure", "X", "S", "W", "T", "Y")


def write_trace(result: SimResult, path: str | Path, delimiter: str = ",") -> None:
    cols = [result.trace[c] for c in TRACE_COLUMNS]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(delimiter.join(TRACE_COLUMNS) + "\n")
        for row in zip(*cols):
            fh.write(delimiter.join(str(int(v)) for v in row) + "\n")


def aoi_from_area(x_samples, t_samples) -> float:
    """``(mean(X*T) + mean(X^2)/2) / mean(X)`` over paired packet samples."""
    x = np.asarray(x_samples, dtype=np.float64)
    t = np.asarray(t_samples, dtype=np.float64)
    if x.size == 0 or x.size != t.size:
        raise InvalidParameterError("need equally sized, non-empty X and T samples")
    return float((np.mean(x * t) + 0.5 * np.mean(x * x)) / np.mean(x))


def total_variation(counts: np.ndarray, pmf) -> float:
    """TV distance between an empirical histogram and ``pmf(n)``.

    ``counts[n]`` is the count at value ``n``; predicted mass beyond the
    observed range is added to the distance.
    """
    counts = np.asarray(counts, dtype=np.float64)
    emp = counts / counts.sum()
    pred = np.array([pmf(n) for n in range(counts.size)])
    return 0.5 * (np.abs(emp - pred).sum() + max(0.0, 1.0 - pred.sum()))


class FitReport(NamedTuple):
    tv_system_time: float
    tv_queue_length: float


def distribution_fit_report(result: SimResult, solution: QueueSolution) -> FitReport:
    """TV distances of the empirical system-time and queue-length laws to
    ``(1-lam) lam^(n-1)`` and ``(1-alpha) alpha^n``."""
    lam, alpha = solution.lam, solution.alpha

    def t_pmf(n: int) -> float:
        return 0.0 if n < 1 else (1.0 - lam) * lam ** (n - 1)

    def l_pmf(n: int) -> float:
        return (1.0 - alpha) * alpha**n

    return FitReport(
        total_variation(result.system_time_histogram, t_pmf),
        total_variation(result.queue_length_at_arrival_histogram, l_pmf),
    )
