# %% [markdown]
# # Benchmark families
#
# Two HLCP families on an m x m grid, turned into a GAVE with
# A = M + N and B = M - N. The known solution is z* = (0, 1, 0, 1, ...),
# w* = (1, 0, 1, 0, ...). Set FULL = True to run every published size
# (n up to 4096, dense, about two minutes in total).

# %%
from nsgave.bench import run_bench, rows_to_markdown
from nsgave.problems import TABLE_BLOCK_DIMS, TABLE_CELLS, ExampleSpec

FULL = False
dims = TABLE_BLOCK_DIMS if FULL else [16, 32]

# %%
specs = [ExampleSpec(f, m, xi, zeta) for f, xi, zeta in TABLE_CELLS for m in dims]
rows = run_bench(specs, repeats=1)
print(rows_to_markdown(rows))

# %%
# iteration counts next to the published column
for r in rows:
    flag = "" if r.published_iter is None or abs(r.iterations - r.published_iter) <= 1 else "  <-- off"
    print(r.family, r.xi, r.zeta, r.n, r.iterations, r.published_iter, flag)

# %%
# the monotone variant (reference M(z) instead of the running average C)
rows = run_bench([ExampleSpec(2, 16, 0.0, 4.0)], repeats=1, with_monotone=True)
print(rows_to_markdown(rows, include_cpu=False))
