# %% [markdown]
# # Solving A x + B|x| = b
#
# Start with the two-variable AVE 2x - |x| = b, whose solution can be
# read off by hand: x_1 = 1 (positive branch) and x_2 = -1/3 (negative).

# %%
import numpy as np

from nsgave import GaveProblem, SolverConfig, solve
from nsgave.trace import write_trace_csv

p = GaveProblem(2 * np.eye(2), -np.eye(2), [1.0, -1.0])
report = solve(p)
print(report.status, report.iterations, report.x, report.res)

# %%
# the trace has one row per iterate; the last row carries no step
for r in report.trace:
    print(r.k, f"{r.mu:.3e}", f"{r.merit:.3e}", r.step_kind, r.alpha)

# %%
# a random 50 x 50 instance with sigma_min(A) > sigma_max(B)
rng = np.random.default_rng(1)
b_mat = rng.uniform(-1, 1, (50, 50))
a = rng.uniform(-0.3, 0.3, (50, 50)) + (np.linalg.norm(b_mat, 2) + 1) * np.eye(50)
p = GaveProblem(a, b_mat, rng.uniform(-5, 5, 50))
report = solve(p, SolverConfig(tol=1e-10))
print(report.status, report.iterations, f"{report.res:.2e}")

# %%
# the trace can be written as CSV for plotting elsewhere
import io

buf = io.StringIO()
write_trace_csv(report.trace, buf)
print(buf.getvalue()[:300])
