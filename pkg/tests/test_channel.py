import math

import numpy as np
import pytest

from aoimoments import ChannelModel, InvalidParameterError, mean_service, sample_service, service_pmf, success_probability


def test_success_probability_values():
    assert success_probability(3.0, 3.0) == pytest.approx(math.exp(-1))
    assert success_probability(10, 2) == pytest.approx(0.818730753078, rel=1e-11)
    assert success_probability(1.0, 1e-12) == pytest.approx(1.0)


def test_success_probability_monte_carlo():
    snr = np.random.default_rng(5).exponential(10.0, 1_000_000)
    assert np.mean(snr > 2.0) == pytest.approx(success_probability(10, 2), abs=0.002)


def test_success_probability_monotone():
    grid = np.linspace(0.5, 20, 25)
    for snr in grid:
        vals = [success_probability(snr, t) for t in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    for t in grid:
        vals = [success_probability(s, t) for s in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("args", [(0, 1), (1, 0), (-1, 1)])
def test_success_probability_rejects(args):
    with pytest.raises(InvalidParameterError):
        success_probability(*args)


def test_service_pmf():
    assert service_pmf(0.25, 1) == 0.25
    assert service_pmf(0.25, 2) == 0.1875
    assert math.fsum(service_pmf(0.25, n) for n in range(1, 400)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidParameterError):
        service_pmf(0.25, 0)


def test_mean_service():
    assert mean_service(0.25) == 4
    assert mean_service(1.0) == 1
    assert mean_service(0.125) == 8
    with pytest.raises(InvalidParameterError):
        mean_service(0.0)


def test_sample_service():
    assert sample_service(1 - 1e-15, np.random.default_rng(0)) == 1
    draws = sample_service(0.25, np.random.default_rng(8), 1_000_000)
    assert abs(draws.mean() - 4) < 0.02
    assert sample_service(0.25, np.random.default_rng(2024), 10).tolist() == [3, 1, 1, 5, 9, 1, 2, 2, 1, 4]


@pytest.mark.parametrize("mu", [0.125, 0.25, 0.5])
def test_bernoulli_episodes_match_geometric_law(mu):
    # one coin per block; service length = blocks up to and including a success
    flips = np.random.default_rng(int(mu * 1000)).random(int(1.2e6 / mu)) < mu
    lengths = np.diff(np.flatnonzero(flips), prepend=-1)[:1_000_000]
    assert lengths.size == 1_000_000
    counts = np.bincount(lengths)
    emp = counts / counts.sum()
    pred = np.array([service_pmf(mu, n) if n else 0.0 for n in range(counts.size)])
    tv = 0.5 * (np.abs(emp - pred).sum() + (1 - pred.sum()))
    assert tv < 0.005


def test_channel_model():
    ch = ChannelModel.from_snr(10, 2)
    assert ch.mu == pytest.approx(math.exp(-0.2))
    assert ch.mean_service == pytest.approx(1 / ch.mu)
    assert ChannelModel.from_mu(1.0).mu == 1.0
    with pytest.raises(InvalidParameterError):
        ChannelModel(0.5, 10, 2)
    with pytest.raises(InvalidParameterError):
        ChannelModel.from_mu(0.0)
