"""Block Rayleigh fading channel reduced to a per-block success probability."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


def success_probability(mean_snr: float, threshold: float) -> float:
    """Probability that the instantaneous SNR exceeds ``threshold``.

    Under Rayleigh fading the instantaneous SNR is exponential with mean
    ``mean_snr`` (both on a linear scale), so the tail is
    ``exp(-threshold / mean_snr)``.
    """
    if mean_snr <= 0 or threshold <= 0:
        raise InvalidParameterError("mean_snr and threshold must both be positive")
    return math.exp(-threshold / mean_snr)


def service_pmf(mu: float, n: int) -> float:
    """``Pr{S=n} = (1-mu)**(n-1) * mu``."""
    if n < 1:
        raise InvalidParameterError(f"service time must be >= 1, got {n}")
    return (1.0 - mu) ** (n - 1) * mu


def mean_service(mu: float) -> float:
    if not 0.0 < mu <= 1.0:
        raise InvalidParameterError(f"mu must lie in (0, 1], got {mu}")
    return 1.0 / mu


def sample_service(mu: float, rng: np.random.Generator, size: int | None = None):
    """Geometric service time(s) in blocks.

    The simulator flips one coin per block instead; this is for tests and
    quick what-ifs.
    """
    draws = rng.geometric(mu, size=size)
    return int(draws) if size is None else draws


@dataclass(frozen=True)
class ChannelModel:
    """Success probability ``mu`` with the SNR pair it came from, if any."""

    mu: float
    mean_snr: float | None = None
    threshold: float | None = None

    def __post_init__(self) -> None:
        # mu == 1 is accepted for direct construction only (deterministic service)
        if not 0.0 < self.mu <= 1.0:
            raise InvalidParameterError(f"mu must lie in (0, 1], got {self.mu}")
        if (self.mean_snr is None) != (self.threshold is None):
            raise InvalidParameterError("give both mean_snr and threshold, or neither")
        if self.mean_snr is not None:
            expected = success_probability(self.mean_snr, self.threshold)
            if not math.isclose(self.mu, expected, rel_tol=1e-12):
                raise InvalidParameterError("mu is inconsistent with (mean_snr, threshold)")
            if self.mu >= 1.0:
                raise InvalidParameterError("an SNR-derived channel must have mu < 1")

    @classmethod
    def from_snr(cls, mean_snr: float, threshold: float) -> ChannelModel:
        return cls(success_probability(mean_snr, threshold), mean_snr, threshold)

    @classmethod
    def from_mu(cls, mu: float) -> ChannelModel:
        return cls(float(mu))

    @property
    def mean_service(self) -> float:
        return 1.0 / self.mu
