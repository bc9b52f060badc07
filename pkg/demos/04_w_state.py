# # The W state outside every cuboid
#
# With suitable settings the W state gives |<D^(i)>| > 1 for all three i at
# once, so it lies outside every biseparable cuboid.

# %%
import numpy as np

from bisepbell import Scenario, classify, correlation_vector, w_state

w = w_state()
gen = correlation_vector(w, Scenario.uniform(-0.133, 0.460))
loo = correlation_vector(w, Scenario.orthogonal([0.54] * 3))
print("general   ", np.round(gen, 5), "sum of squares", round(gen.triple_sq(), 4))
print("orthogonal", np.round(loo, 5), "sum of squares", round(loo.triple_sq(), 4))

# %% [markdown]
# Both points are outside all cuboids.  The general point's sum of squares
# is about 3.13, so it also falls outside the sphere of radius sqrt(3)
# and `classify` reports it infeasible.

# %%
for name, d, mode in (("general", gen, "GENERAL"), ("orthogonal", loo, "LOO")):
    r = classify(d, mode)
    print(name, "outside cuboids:", not any(r.in_cuboid), "sphere:", r.in_sphere, "feasible:", r.feasible)
