"""
Attractors and basins of a three-node network
=============================================

x1 and x2 copy each other and x3 needs both x2 and itself to stay on.
The asynchronous dynamics settle in three fixed points; the basins show
which states are committed to which of them.
"""

# %%
from bncontrol import (
    attractors,
    parse_network,
    reach,
    state_to_string,
    strong_basin,
    successors,
    weak_basin,
)

g = parse_network("""
x1 = x2
x2 = x1
x3 = x2 & x3
""")

# %% [markdown]
# States are written in node order, so ``"110"`` means x1=1, x2=1, x3=0.

# %%
for a in attractors(g):
    print(a.label(), [state_to_string(s, g.n) for s in a.states])

# %%
print("successors of 101:", successors(g, "101").to_strings())
print("reachable from 011:", reach(g, "011").to_strings())

# %% [markdown]
# The weak basin holds the states that *can* reach an attractor; the strong
# basin only those that cannot end up anywhere else.

# %%
for a in attractors(g):
    print(a.label(), "weak:", weak_basin(g, a).to_strings(), "strong:", strong_basin(g, a).to_strings())
