"""
Cross-checking the engine against brute force
=============================================

The oracle recomputes everything from the definitions with plain sets.
Here it replays the sequential paths of a seeded random network and
recounts its minimal controls.
"""

# %%
from bncontrol import ControlQuery, SequentialQuery, attractors, minimal_controls, sequential_paths
from bncontrol.oracle import Schedule, brute_force_minimal_controls, random_network, simulate, verify_path

g = random_network(6, seed=8)
atts = attractors(g)
print(len(atts), "attractors")

# %%
src, tgt = atts[0], atts[-1]
for mode in ("OI", "OT", "OP"):
    engine = [sorted(s.nodes) for s in minimal_controls(g, ControlQuery(src, tgt, mode, 3))]
    oracle = [sorted(x) for x in brute_force_minimal_controls(g, src, tgt, mode, 3)]
    print(mode, engine, engine == oracle)

# %%
for p in sequential_paths(g, SequentialQuery(src, tgt, "AST", 3)):
    verdict = verify_path(g, src.id, tgt.id, Schedule(p.controls, p.intermediates, "AST"))
    print(p.intermediates, p.total, verdict.ok)

# %% [markdown]
# A random asynchronous run from the source attractor's state stays put,
# since attractors are closed under the dynamics.

# %%
print(simulate(g, src.representative, max_steps=10, seed=0))
