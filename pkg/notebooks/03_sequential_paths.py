"""
Sequential control through intermediate attractors
==================================================

Instead of one large intervention, the network can be pushed through
other attractors, one small control at a time.  The search budget k
defaults to the size of the smallest one-step control of the same kind.
"""

# %%
from bncontrol import (
    SequentialQuery,
    attractors,
    default_budget,
    parse_network,
    sequential_paths,
    shortest,
)

g = parse_network("x1 = x2\nx2 = x1\nx3 = x2 & x3\n")
a1, a2, a3 = attractors(g)


def show(path):
    steps = " -> ".join(f"{c.describe(g.names)} A{t}" for c, t in zip(path.controls, path.intermediates))
    return f"A{path.source} -> {steps}  (total {path.total})"


# %%
for mode in ("ASI", "AST", "ASP"):
    k = default_budget(g, a1, a3, mode)
    print(f"{mode}, k={k}")
    for p in shortest(sequential_paths(g, SequentialQuery(a1, a3, mode, k))):
        print("   ", show(p))

# %% [markdown]
# Direct one-step routes count as paths too.  Asking for at least two
# steps keeps only the routes through A2.

# %%
for mode in ("ASI", "AST"):
    paths = sequential_paths(g, SequentialQuery(a1, a3, mode, min_steps=2))
    print(mode, [show(p) for p in shortest(paths)])
