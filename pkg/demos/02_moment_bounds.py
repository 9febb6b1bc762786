# %% [markdown]
# # Bounding the age with finitely many moments
#
# The only term that needs the full arrival law is G'_X(lam). Truncating the
# series in ln(z) at an even order undershoots and at an odd order
# overshoots; the chord bounds alpha/lam and 1/mu always hold. The bounds
# combine the tightest of each.

# %%
import numpy as np

from aoimoments import aoi_bounds, empirical_moments, exact_average_aoi, make_degenerate, make_geometric, solve_alpha
from aoimoments.analysis import partial_sum_sequence

# %% Alternation around the exact derivative, degenerate(8) at z = 0.8
d = make_degenerate(8)
sums, _ = partial_sum_sequence(d.moments(9), 9, 0.8)
exact = d.pgf_derivative(0.8)
for k, s in enumerate(sums, start=1):
    side = "above" if s > exact else "below"
    print(f"K={k}: {s:12.6f}  ({side} exact {exact:.6f})")

# %% Bounds tighten with K; at low rho the series diverges and the chord bounds take over.
for rho in (0.3, 0.6, 0.9):
    mu = 0.125 / rho
    sol = solve_alpha(d, mu)
    print(f"rho={rho}: exact={exact_average_aoi(d, mu, sol):.5f}")
    for K in (2, 4, 7):
        b = aoi_bounds(d.moments(7), mu, sol.lam, sol.alpha, K)
        print(f"   K={K}: [{b.lower:.5f}, {b.upper:.5f}]  sources: {b.lower_source} / {b.upper_source}")

# %% Moments estimated from data (the distribution itself is never used).
g = make_geometric(0.125)
mv = empirical_moments(g.sample_many(np.random.default_rng(1), 1_000_000), 7)
sol = solve_alpha(g, 0.25)
b = aoi_bounds(mv, 0.25, sol.lam, sol.alpha, 7)
print(f"empirical moments: [{b.lower:.4f}, {b.upper:.4f}] vs exact {exact_average_aoi(g, 0.25):.4f}")
