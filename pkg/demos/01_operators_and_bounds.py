# # Composite Bell operators and their bounds
#
# Each of three qubits picks one of two spin observables in the x-z plane.
# Leaving party i out of a CHSH operator and attaching its observables as
# (A + A')/2 and (A - A')/2 gives the operator D^(i).  Here we look at its
# classical bound, its quantum maximum and a state that reaches the maximum
# with only two qubits entangled.

# %%
import numpy as np

from bisepbell import Scenario, d_operator, lhv_max, spectral_max, theorem1_construction
from bisepbell.oracles import CHSH_OPTIMAL
from bisepbell.observables import PartySettings
from bisepbell.states import schmidt_rank

# %% [markdown]
# Deterministic local strategies assign +-1 to every observable.  Exact
# enumeration over all of them never exceeds 1.

# %%
for n in (3, 4):
    print(n, [str(lhv_max(n, i).max_value) for i in range(1, n + 1)])

# %% [markdown]
# Quantum mechanically the largest eigenvalue is sqrt(2).  CHSH-optimal
# settings on parties 1 and 2 with A_3 = A_3' = sz get there.

# %%
sc = Scenario(CHSH_OPTIMAL + (PartySettings(0.0, 0.0),))
print(spectral_max(d_operator(sc, 3)), np.sqrt(2))

# %% [markdown]
# The maximizing state can be a Bell pair times |0>: no genuine three-qubit
# entanglement is needed.  For four qubits the same trick gives 2.

# %%
for n, i in ((3, 1), (3, 3), (4, 2)):
    state, scenario, value = theorem1_construction(n, i)
    print(n, i, round(value, 12), "Schmidt rank across qubit", i, "=", schmidt_rank(state, [i]))
