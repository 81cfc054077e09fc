# %% [markdown]
# # Cross-checking against brute force
#
# For small n every GAVE solution shows up as the solution of one of the
# 2^n linear systems (A + B diag(s)) x = b with s in {-1, 1}^n and
# s_i x_i >= 0. That gives an exact reference to compare against.

# %%
import numpy as np

from nsgave import random_solvable_gave, sign_enumeration_oracle, solve
from nsgave.bench import oracle_compare

p = random_solvable_gave(8, seed=3)
oracle = sign_enumeration_oracle(p)
report = solve(p)
print(oracle.count, oracle.sign_patterns[0])
print(np.linalg.norm(report.x - oracle.solutions[0]))

# %%
res = oracle_compare(2, 10, 200, seed=2024)
print(res.summary(), f"({res.elapsed:.1f}s)")

# %%
# iteration histogram
values, counts = np.unique(res.solver_iterations, return_counts=True)
dict(zip(values.tolist(), counts.tolist()))
