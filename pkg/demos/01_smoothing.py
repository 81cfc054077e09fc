# %% [markdown]
# # Smoothing the absolute value
#
# phi(mu, x) = sqrt(mu^2 + x^2) - mu is a smooth stand-in for |x| that
# becomes exact at mu = 0. The gap to |x| is at most mu.

# %%
import numpy as np

from nsgave import phi, phi_partials

x = np.linspace(-2, 2, 9)
for mu in (1.0, 0.1, 0.0):
    print(f"mu={mu:<4}", np.round(phi(mu, x), 4))

# %%
# worst gap |x| - phi over a fine grid, always below mu
grid = np.linspace(-50, 50, 100_001)
for mu in (1.0, 0.1, 0.01):
    print(mu, np.max(np.abs(grid) - phi(mu, grid)))

# %%
# partial derivatives at (3, 4): (mu/r - 1, x/r) with r = 5
phi_partials(3.0, 4.0)

# %%
# tiny x relative to mu: the rationalized form keeps full precision
phi(1.0, 1e-9), 0.5e-18
