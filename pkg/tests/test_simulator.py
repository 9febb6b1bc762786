import numpy as np
import pytest
from scipy import stats

from aoimoments import InvalidParameterError, exact_average_aoi, make_degenerate, make_geometric, solve_alpha
from aoimoments import simulator
from aoimoments.simulator import SimConfig, aoi_from_area, distribution_fit_report, run


def test_config_validation():
    g = make_geometric(0.125)
    with pytest.raises(InvalidParameterError):
        SimConfig(g, 0.25, 9_999, 1)
    with pytest.raises(InvalidParameterError):
        SimConfig(g, 0.25, 10_000, 1, warmup_fraction=0.5)
    with pytest.raises(InvalidParameterError):
        SimConfig(g, 0.0, 10_000, 1)


def test_deterministic_cycle():
    res = run(SimConfig(make_degenerate(2), 1.0, 100_000, seed=3))
    assert (res.trace["T"] == 1).all()
    assert (res.trace["S"] == 1).all()
    assert res.avg_aoi == 2.0
    assert res.avg_aoi_by_area == 2.0
    assert aoi_from_area([2] * 5, [1] * 5) == 2.0


def test_aoi_from_area():
    assert aoi_from_area([4], [3]) == 5.0
    with pytest.raises(InvalidParameterError):
        aoi_from_area([], [])


def test_same_seed_same_result():
    cfg = SimConfig(make_geometric(0.125), 0.25, 200_000, seed=42)
    a, b = run(cfg), run(cfg)
    assert a.avg_aoi == b.avg_aoi and a.avg_aoi_by_area == b.avg_aoi_by_area
    for key in a.trace:
        assert np.array_equal(a.trace[key], b.trace[key])
    assert np.array_equal(a.system_time_histogram, b.system_time_histogram)
    assert np.array_equal(a.queue_at_arrival, b.queue_at_arrival)
    assert run(SimConfig(make_geometric(0.125), 0.25, 200_000, seed=43)).avg_aoi != a.avg_aoi


def test_sample_path_identities(geom_run):
    tr = geom_run.trace
    assert np.array_equal(tr["T"], tr["W"] + tr["S"])
    assert np.array_equal(tr["Y"], tr["I"] + tr["S"])
    assert (np.diff(tr["departure"]) > 0).all()
    assert (tr["departure"] > tr["arrival"]).all()
    assert (tr["S"] >= 1).all()


def test_result_invariants(geom_run):
    r = geom_run
    assert r.avg_aoi >= 1
    assert r.avg_aoi_by_area == pytest.approx(r.avg_aoi, rel=1e-9)
    assert r.packets_delivered <= r.arrivals
    assert r.system_time_histogram.sum() == r.packets_delivered
    assert r.inter_departure_histogram.sum() == r.packets_delivered
    assert r.queue_length_at_arrival_histogram.sum() == r.arrivals
    assert r.idle_time_total + r.busy_blocks == r.window_blocks
    assert r.generator == "numpy.random.PCG64"
    assert r.interarrival_moments.max_order == 7


def test_idle_blocks_match_packet_idle_times():
    # no warm-up, so every idle block precedes some arrival
    r = run(SimConfig(make_geometric(0.125), 0.25, 100_000, seed=5, warmup_fraction=0.0))
    tr = r.trace
    tail_idle = r.config.horizon - tr["departure"][-1] if r.arrivals == r.packets_delivered else None
    idle_from_packets = tr["I"].sum()
    assert r.idle_time_total >= idle_from_packets
    if tail_idle is not None:
        assert r.idle_time_total == idle_from_packets + tail_idle


def test_waiting_time_matches_theory(geom_run, geom_solution):
    # E(W) = E(T) - E(S) = 1/(1-lam) - 1/mu
    assert geom_run.waiting_time_mean == pytest.approx(1 / (1 - geom_solution.lam) - 4, rel=0.02)


def test_avg_aoi_matches_analysis(geom_run):
    assert geom_run.avg_aoi == pytest.approx(13.0, rel=0.01)
    tr = geom_run.trace
    assert aoi_from_area(tr["X"], tr["T"]) == pytest.approx(geom_run.avg_aoi, rel=0.005)


def test_fit_report(geom_run, geom_solution):
    fit = distribution_fit_report(geom_run, geom_solution)
    assert fit.tv_system_time < 0.01
    assert fit.tv_queue_length < 0.01


def test_fast_service_concentrates_system_time():
    r = run(SimConfig(make_geometric(0.125), 1.0, 100_000, seed=9))
    assert r.system_time_histogram[1] == r.packets_delivered


def test_queue_has_no_trend(geom_run):
    q = geom_run.queue_at_arrival
    tail = q[int(0.9 * q.size):]
    means = np.array([w.mean() for w in np.array_split(tail, 20)])
    fit = stats.linregress(np.arange(means.size), means)
    assert fit.pvalue > 0.001
    assert q.max() < 200


def test_error_shrinks_like_root_n():
    g = make_geometric(0.125)
    target = exact_average_aoi(g, 0.25)

    def spread(n):
        vals = [run(SimConfig(g, 0.25, n, seed=1000 + s)).avg_aoi for s in range(30)]
        return np.std(np.array(vals) - target)

    ratio = spread(100_000) / spread(400_000)
    # quadrupling N should halve the spread
    assert 1.3 < ratio < 3.0


def test_trace_dump(tmp_path):
    r = run(SimConfig(make_degenerate(4), 0.5, 10_000, seed=1))
    path = tmp_path / "trace.csv"
    simulator.write_trace(r, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,arrival,departure,X,S,W,T,Y"
    assert len(lines) == r.trace["k"].size + 1
    k, arrival, departure, x, s, w, t, y = map(int, lines[1].split(","))
    assert t == departure - arrival == w + s


@pytest.mark.filterwarnings("ignore:lambda estimate")
def test_histogram_overflow_warns():
    # rho = 2: one arrival per block, half of them served, queue passes HIST_CAP
    with pytest.warns(RuntimeWarning, match="overflow"):
        r = run(SimConfig(make_degenerate(1), 0.5, 250_000, seed=1))
    assert r.queue_length_at_arrival_histogram.size == simulator.HIST_CAP + 2
    assert r.queue_length_at_arrival_histogram[-1] > 0
