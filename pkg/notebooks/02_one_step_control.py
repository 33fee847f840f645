"""
One-step control: instantaneous, temporary, permanent
=====================================================

Moving the network from A1 = 000 to A2 = 110 or A3 = 111 with a single
intervention.  An instantaneous flip has to land directly in the target's
strong basin; a temporary control may be held until the network commits;
a permanent one is never released.
"""

# %%
from bncontrol import ControlQuery, Mode, attractors, minimal_controls, parse_network

g = parse_network("x1 = x2\nx2 = x1\nx3 = x2 & x3\n")
a1, a2, a3 = attractors(g)

# %%
for target in (a2, a3):
    for mode in Mode:
        sols = minimal_controls(g, ControlQuery(a1, target, mode, budget=3))
        shown = [s.control.describe(g.names) for s in sols]
        print(f"{mode.value} A1 -> {target.label()}: {shown}")

# %% [markdown]
# Holding a control lets the dynamics do part of the work: one flip of x1
# or x2 is enough to reach 110 when it is held, while a bare flip needs
# both nodes.  Forbidding a node removes the solutions that use it.

# %%
q = ControlQuery(a1, a2, Mode.OT, budget=3, forbidden_nodes={g.index("x1")})
print([s.control.describe(g.names) for s in minimal_controls(g, q)])
