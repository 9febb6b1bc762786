# %% [markdown]
# # Error of the bounds versus traffic intensity
#
# Arrival rate fixed at p = 0.125, mu = p / rho. Writes a CSV with one row
# per (distribution, rho, K) and prints the error profile. Same as
# `aoimoments sweep --out sweep.csv`.

# %%
from aoimoments.experiments import SweepSpec, emit_csv, run_sweep

rows = run_sweep(SweepSpec())
emit_csv(rows, "sweep.csv")

# %%
for dist in ("degenerate", "two_point", "geometric"):
    print(dist)
    for r in rows:
        if r.dist == dist and r.feasible:
            print(f"  rho={r.rho:4.2f} K={r.K}  AoI={r.aoi_exact:8.3f}  "
                  f"err_lower={r.err_lower:8.4f}  err_upper={r.err_upper:8.4f}")
