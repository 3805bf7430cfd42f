# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # One phase, step by step
#
# A phase has two halves.  First a single weighted search finds how long the
# shortest augmenting paths are and which edges can lie on one.  Then a
# depth-first search over those edges picks a maximal set of vertex-disjoint
# shortest paths, and we flip them all at once.
#
# We use a triangle hung off a free vertex, with a tail leading to a second
# free vertex.  The only shortest augmenting path has to go around the
# triangle.

# %%
import numpy as np

from sapmatch import Matching, build_graph, build_H, run_search
from sapmatch.phase2 import apply_paths, expand_paths, find_ap_set

g = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])
m = Matching.from_pairs(6, [(1, 2), (3, 4)])
print(g.n, "vertices,", g.m, "edges; matched:", m.pairs())

# %% [markdown]
# ## The search
#
# Matched edges weigh 2 and the rest weigh 0.  Every dual starts at 1, and
# delta counts how far the free vertices have been lowered.  The trace lists
# every grow and blossom step, each with the delta at which it happened.

# %%
out = run_search(g, m, trace=True)
for rec in out.search.trace_records():
    print(rec)
print("delta at the augmenting edge:", out.delta_final)
print("shortest augmenting path length:", out.sap_length)
print("final duals:", out.y.tolist())

# %% [markdown]
# The triangle became a blossom before the last dual adjustment, so its dual
# `z` is positive and it gets contracted when we build `H`.

# %%
print("positive blossoms:", out.positive_blossoms, "z:", out.z)
h = build_H(g, m, out)
print("H-vertex of each vertex:", h.label.tolist())
print("H edges (h_u, h_v, edge id):", h.h_edges())

# %% [markdown]
# ## The path-preserving DFS
#
# In `H` the path has length 3.  Expanding the contracted vertex through the
# blossom brings it back to length 5 in `G`.

# %%
ps = find_ap_set(h, debug=True)
print("H paths:", [p.vertices for p in ps.h_paths()])
expand_paths(ps)
print("G paths:", [p.vertices for p in ps.g_paths()])
print("debug counters:", ps.debug_counts)

# %%
mate = m.mate.copy()
apply_paths(mate, ps)
print("after the phase:", Matching(mate).pairs())

# %% [markdown]
# ## Deeper nesting
#
# The gadget generator stacks odd cycles so that blossoms nest inside each
# other.  Expansion has to walk down through every level.

# %%
from sapmatch.generators import nested_blossom_gadget

g, m = nested_blossom_gadget(4, seed=1, with_matching=True)
out = run_search(g, m)
ps = expand_paths(find_ap_set(build_H(g, m, out), debug=True))
(p,) = ps.g_paths()
print("n =", g.n, " sap length", out.sap_length, " path:", p.vertices)
print("all counters zero:", not any(ps.debug_counts.values()))
