# %% [markdown]
# # Exact average AoI of the discrete-time FCFS queue
#
# Packets arrive with i.i.d. inter-arrival times X on {1, 2, ...}; each block
# the head-of-line packet gets through with probability mu. The system time
# is geometric with parameter lam = 1 - mu + mu*alpha, where alpha solves
# z = G_X(1 - mu + mu z).

# %%
from aoimoments import ChannelModel, exact_average_aoi, make_degenerate, make_geometric, make_two_point, solve_alpha

arrivals = {
    "degenerate(8)": make_degenerate(8),
    "two_point(1,15,0.5)": make_two_point(1, 15, 0.5),
    "geometric(0.125)": make_geometric(0.125),
}

# %% The textbook case: geometric arrivals, mu = 0.25 gives alpha = 3/7 and AoI = 13.
sol = solve_alpha(arrivals["geometric(0.125)"], 0.25)
print(f"alpha={sol.alpha:.12f} (3/7={3/7:.12f})  lambda={sol.lam:.12f}  rho={sol.rho}")
print("average AoI:", exact_average_aoi(arrivals["geometric(0.125)"], 0.25))

# %% All three laws share E(X)=8, yet their ages differ.
for name, dist in arrivals.items():
    print(f"{name:22s} AoI = {exact_average_aoi(dist, 0.25):8.4f} blocks")

# %% mu from a Rayleigh channel: mean SNR 10, threshold 2 (linear).
ch = ChannelModel.from_snr(10, 2)
print(f"mu = {ch.mu:.6f}, AoI(geometric) = {exact_average_aoi(arrivals['geometric(0.125)'], ch.mu):.4f}")
