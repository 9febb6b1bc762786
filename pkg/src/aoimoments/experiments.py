"""Traffic-intensity sweeps comparing exact AoI, moment bounds and simulation."""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from . import simulator
from .analysis import aoi_bounds, alpha_from_lambda, exact_average_aoi, solve_alpha
from .distributions import DiscretePMF, empirical_moments, make_degenerate, make_geometric, make_two_point
from .errors import InvalidParameterError

CSV_HEADER = (
    "dist", "p", "mu", "rho", "K", "aoi_exact", "aoi_lower", "aoi_upper",
    "err_lower", "err_upper", "lower_source", "upper_source", "diverging",
    "aoi_sim", "sim_blocks", "seed",
)
DIST_KINDS = ("degenerate", "two_point", "geometric")
INFEASIBLE = "infeasible"
EMPIRICAL_DRAWS = 1_000_000


def default_rho_grid() -> tuple[float, ...]:
    return tuple(round(0.1 + 0.05 * i, 2) for i in range(17))


@dataclass(frozen=True)
class SweepSpec:
    p: float = 0.125
    dists: tuple[str, ...] = DIST_KINDS
    two_point: tuple[int, int, float] = (1, 15, 0.5)
    rho_grid: tuple[float, ...] = field(default_factory=default_rho_grid)
    orders: tuple[int, ...] = (2, 7)
    sim_blocks: int = 1_000_000
    seed: int = 0
    mode: Literal["analytic", "simulate", "both"] = "analytic"
    moment_source: Literal["exact", "empirical"] = "exact"

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise InvalidParameterError(f"arrival rate p must lie in (0,1), got {self.p}")
        if any(not 0.0 < r < 1.0 for r in self.rho_grid):
            raise InvalidParameterError("every rho must lie in (0, 1)")
        if any(k < 2 for k in self.orders):
            raise InvalidParameterError("moment orders must be >= 2")
        unknown = set(self.dists) - set(DIST_KINDS)
        if unknown:
            raise InvalidParameterError(f"unknown distribution kinds: {sorted(unknown)}")
        if self.mode not in ("analytic", "simulate", "both"):
            raise InvalidParameterError(f"unknown mode {self.mode!r}")
        if self.moment_source not in ("exact", "empirical"):
            raise InvalidParameterError(f"unknown moment source {self.moment_source!r}")
        for kind in self.dists:
            mean = self.build(kind).mean
            if abs(self.p * mean - 1.0) > 1e-9:
                raise InvalidParameterError(f"{kind} arrivals have mean {mean}, expected 1/p = {1 / self.p}")

    def build(self, kind: str) -> DiscretePMF:
        """Arrival law of the given kind with mean ``1/p``."""
        if kind == "geometric":
            return make_geometric(self.p)
        if kind == "degenerate":
            d = round(1.0 / self.p)
            return make_degenerate(d)
        if kind == "two_point":
            return make_two_point(*self.two_point)
        raise InvalidParameterError(f"unknown distribution kind {kind!r}")


@dataclass(frozen=True)
class SweepRow:
    dist: str
    p: float
    mu: float
    rho: float
    K: int
    aoi_exact: float | None = None
    aoi_lower: float | None = None
    aoi_upper: float | None = None
    lower_source: str = INFEASIBLE
    upper_source: str = INFEASIBLE
    diverging: bool | None = None
    aoi_sim: float | None = None
    sim_blocks: int | None = None
    seed: int = 0

    @property
    def feasible(self) -> bool:
        return self.aoi_exact is not None

    @property
    def err_lower(self) -> float | None:
        return None if not self.feasible else self.aoi_exact - self.aoi_lower

    @property
    def err_upper(self) -> float | None:
        return None if not self.feasible else self.aoi_upper - self.aoi_exact


def row_seed(base_seed: int, dist: str, rho: float, K: int) -> int:
    """``base_seed`` XOR a stable 64-bit hash of the row key."""
    key = f"{dist}|{rho:.12g}|{K}".encode()
    h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
    return (base_seed ^ h) & 0xFFFF_FFFF_FFFF_FFFF


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every (dist, rho, K) point in the deterministic row order.

    ``mu = p / rho``. Points with ``rho < p`` would need ``mu > 1`` and are
    returned as infeasible rows.

    Modes: ``analytic`` gives exact AoI and bounds; ``both`` adds a
    simulation; ``simulate`` also simulates, but takes ``lam`` from the
    simulated inter-departure times and, for ``moment_source="empirical"``,
    moments from the simulated inter-arrivals, i.e. the measurement
    workflow.
    """
    rows = []
    for kind in spec.dists:
        dist = spec.build(kind)
        for rho in sorted(spec.rho_grid):
            mu = spec.p / rho
            for K in sorted(spec.orders):
                seed = row_seed(spec.seed, kind, rho, K)
                if mu > 1.0:
                    rows.append(SweepRow(kind, spec.p, mu, rho, K, seed=seed))
                    continue
                rows.append(_evaluate(spec, kind, dist, mu, rho, K, seed))
    return rows


def _evaluate(spec: SweepSpec, kind: str, dist: DiscretePMF, mu: float, rho: float, K: int, seed: int) -> SweepRow:
    sol = solve_alpha(dist, mu)
    exact = exact_average_aoi(dist, mu, sol)
    lam, alpha = sol.lam, sol.alpha
    sim = None
    rng = np.random.default_rng(seed)
    if spec.mode in ("simulate", "both"):
        sim_seed = int(rng.integers(2**63))
        sim = simulator.run(simulator.SimConfig(dist, mu, spec.sim_blocks, sim_seed))
    if spec.moment_source == "empirical":
        if spec.mode == "simulate":
            moments = sim.interarrival_moments
        else:
            moments = empirical_moments(dist.sample_many(rng, EMPIRICAL_DRAWS), max(spec.orders))
    else:
        moments = dist.moments(max(spec.orders))
    if spec.mode == "simulate" and sol.lam > 0.0:
        lam = sim.lambda_hat
        alpha = alpha_from_lambda(lam, mu)
    b = aoi_bounds(moments, mu, lam, alpha, K)
    return SweepRow(
        dist=kind, p=spec.p, mu=mu, rho=rho, K=K,
        aoi_exact=exact, aoi_lower=b.lower, aoi_upper=b.upper,
        lower_source=b.lower_source, upper_source=b.upper_source, diverging=b.diverging,
        aoi_sim=None if sim is None else sim.avg_aoi,
        sim_blocks=None if sim is None else spec.sim_blocks,
        seed=seed,
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return f"{v:.12g}"


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.dist, _fmt(r.p), _fmt(r.mu), _fmt(r.rho), _fmt(r.K),
            _fmt(r.aoi_exact), _fmt(r.aoi_lower), _fmt(r.aoi_upper),
            _fmt(r.err_lower), _fmt(r.err_upper), r.lower_source, r.upper_source,
            _fmt(r.diverging), _fmt(r.aoi_sim), _fmt(r.sim_blocks), _fmt(r.seed),
        ])
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    if not rows:
        raise InvalidParameterError("no rows to write")
    Path(path).write_bytes(rows_to_csv(rows).encode("utf-8"))
