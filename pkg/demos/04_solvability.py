# %% [markdown]
# # When is A x + B|x| = b uniquely solvable?
#
# For every b exactly when A + B D is nonsingular for all diagonal D with
# entries in [-1, 1], which is the column W-property of {A + B, A - B}.
# sigma_min(A) > sigma_max(B) is a cheaper sufficient test.

# %%
import numpy as np

from nsgave.linalg import determinant_sign
from nsgave.verify import (
    bd_nonsingularity_sample,
    column_w_property,
    gave_w_property,
    sigma_sufficient_condition,
)

A = np.array([[1001.0, -496.0], [-994.0, 501.0]])
B = np.array([[999.0, -494.0], [-995.0, 499.0]])

# %%
# W-property holds: all four representative determinants are positive
print(gave_w_property(A, B))
for code in range(4):
    rep = np.column_stack([(A - B)[:, j] if code >> j & 1 else (A + B)[:, j] for j in range(2)])
    print(code, round(np.linalg.det(rep)))

# %%
# but the singular value test fails
print(sigma_sufficient_condition(A, B))

# %%
# the interval matrix [A - |B|, A + |B|] contains a singular member
member = np.array([[2.0, -2.0], [-2.0, 2.0]])
print(np.all(A - np.abs(B) <= member) and np.all(member <= A + np.abs(B)), determinant_sign(member))

# %%
# sampling the box agrees
print(bd_nonsingularity_sample(A, B, samples=5000))

# %%
# a pair that fails, with the vertex that breaks it
print(column_w_property(np.eye(2), np.diag([-1.0, 1.0])))
