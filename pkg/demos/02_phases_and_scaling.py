# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Phases and running time
#
# Each phase makes the shortest augmenting path strictly longer, which keeps
# the phase count around `2 sqrt(n)`.  Each phase takes time close to linear
# in the number of edges.

# %%
import statistics
import time

import numpy as np

from sapmatch import maximum_matching, phase_bound
from sapmatch.generators import long_path_chain, random_gnm

# %% [markdown]
# ## Path lengths grow phase by phase
#
# A long path is the slow case for phase counts.  Each phase uses longer
# augmenting paths than the one before.

# %%
g = long_path_chain(2001, seed=0)
m, stats = maximum_matching(g)
print("matched", m.size, "in", stats.phases, "phases; bound", phase_bound(g.n))
print("sap lengths:", stats.path_lengths)
print("paths per phase:", [p.num_paths for p in stats.per_phase])

# %% [markdown]
# ## Phase counts on random graphs

# %%
for n in (1_000, 10_000, 100_000):
    g = random_gnm(n, 3 * n, seed=1)
    m, stats = maximum_matching(g)
    print(f"n={n:>7}  phases={stats.phases:>2}  bound={phase_bound(n):>4}  matched={m.size}")

# %% [markdown]
# ## Per-phase time
#
# Doubling `n` and `m` together should roughly double the median phase time.
# Cache misses on the larger graphs push the factor a little higher.

# %%
maximum_matching(random_gnm(100, 300, seed=0))  # compile first
prev = None
for n in (50_000, 100_000, 200_000):
    g = random_gnm(n, 5 * n, seed=7)
    t0 = time.perf_counter()
    m, stats = maximum_matching(g)
    total = time.perf_counter() - t0
    med = statistics.median(p.seconds for p in stats.per_phase)
    ratio = "" if prev is None else f"  x{med / prev:.2f}"
    print(f"n={n:>7} m={g.m:>8}  phases={stats.phases}  median phase {med:.3f}s  total {total:.2f}s{ratio}")
    prev = med
