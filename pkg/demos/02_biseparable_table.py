# # Which partition does D^(i) see?
#
# The seesaw optimizer maximizes |<D^(i)>| over states that factorize as
# (pair) x (qubit j).  The answer depends only on whether j = i.

# %%
import numpy as np

from bisepbell import ALL, BISEPARABLE, FULLY_SEPARABLE, Objective, OptimizerConfig, maximize

cfg = OptimizerConfig(restarts=10, seed=0)

# %%
table = np.zeros((3, 3))
for i in (1, 2, 3):
    for j in (1, 2, 3):
        table[i - 1, j - 1] = maximize(Objective("single", i), BISEPARABLE(j), config=cfg).value
print(np.round(table, 6))

# %% [markdown]
# The diagonal reaches sqrt(2), the same as for arbitrary states, and the
# off-diagonal entries stay at the fully separable value 1.

# %%
print(maximize(Objective("single", 1), ALL, config=cfg).value)
print(maximize(Objective("single", 1), FULLY_SEPARABLE, config=cfg).value)

# %% [markdown]
# With orthogonal observables for every party (A' at theta + pi/2) all
# numbers shrink: sqrt(3/2) on the diagonal and sqrt(3/4) elsewhere.

# %%
for j in (1, 2):
    print(j, maximize(Objective("single", 1), BISEPARABLE(j), loo=True, config=cfg).value)
