# %% [markdown]
# # Cross-checking the analysis with a slot-level simulation
#
# Each block: a delivery attempt for the head-of-line packet (success with
# probability mu), then a possible arrival. The simulator returns the
# time-average age and the empirical queue laws.

# %%
from aoimoments import exact_average_aoi, make_geometric, solve_alpha
from aoimoments.analysis import alpha_from_lambda, aoi_bounds
from aoimoments.simulator import SimConfig, aoi_from_area, distribution_fit_report, run

g, mu = make_geometric(0.125), 0.25
res = run(SimConfig(g, mu, horizon=10_000_000, seed=1))
print(f"simulated AoI {res.avg_aoi:.4f}  (area form {res.avg_aoi_by_area:.4f}, exact {exact_average_aoi(g, mu):.4f})")
print(f"per-packet formula: {aoi_from_area(res.trace['X'], res.trace['T']):.4f}")

# %% The system time and queue length at arrivals follow geometric laws.
fit = distribution_fit_report(res, solve_alpha(g, mu))
print(f"TV(system time) = {fit.tv_system_time:.4f}, TV(queue at arrival) = {fit.tv_queue_length:.4f}")

# %% Measurement mode: lambda from how often consecutive departures are one block apart.
lam = res.lambda_hat
b = aoi_bounds(res.interarrival_moments, mu, lam, alpha_from_lambda(lam, mu), 7)
print(f"lambda_hat = {lam:.5f} (6/7 = {6/7:.5f}); bounds from measurements [{b.lower:.3f}, {b.upper:.3f}]")
