# %% [markdown]
# # Gate algebra in the Fock picture
#
# Two time-bin qubits enter the switch on ports A and B. During the early
# bin the switch passes photons straight through; during the late bin it
# acts as a beam splitter with amplitude reflectivity sin(theta/2). Keeping
# only events with one photon on each output turns this into a
# controlled-phase gate that succeeds one time in nine.

# %%
import numpy as np

from timebin_cphase.fock import MODES
from timebin_cphase.gate import (
    SwitchProfile,
    TimeBinQubitSpec,
    apply_switch,
    effective_conditional_gate,
    prepare_input_pair,
    run_gate,
)

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# ## The input pair
#
# Each qubit is prepared as |+> with its early amplitude attenuated by
# sqrt(1/3). That loss balances the late-bin splitting below.

# %%
a = b = TimeBinQubitSpec.plus()
pair = prepare_input_pair(a, b)
for occ, amp in pair.terms.items():
    label = " ".join(str(MODES[i]) for i, n in enumerate(occ) for _ in range(n))
    print(f"{label:>10}  {amp.real:+.4f}")
print("squared norm", pair.norm() ** 2)

# %% [markdown]
# ## Through the switch
#
# Both photons late gives a two-photon interference term. Its coincidence
# amplitude is the input weight 1/2 times cos(theta2) = -1/3, and that sign
# flip is what the gate relies on.

# %%
out = apply_switch(pair, SwitchProfile())
print("terms after the switch:", len(out.terms))
print("<C2 D2| out> =", out.amplitude([MODES[5], MODES[7]]))

# %% [markdown]
# ## Heralding
#
# Post-selecting one photon at C and one at D leaves (1, 1, 1, -1)/2.

# %%
res = run_gate(a, b)
print("heralded state", res.canonical_state().real)
print("success probability", res.probability, "vs 1/9 =", 1 / 9)

# %% [markdown]
# ## The conditional map
#
# With the early bin passed straight through, the heralded map is diagonal.
# At the operating point it is diag(1, 1, 1, -1)/3.

# %%
print(effective_conditional_gate().real)

# %% [markdown]
# Moving the late-bin setting away from the operating point spoils the
# balance between the four diagonal entries.

# %%
for theta2 in np.linspace(1.6, 2.2, 4):
    g = np.diag(effective_conditional_gate(SwitchProfile(0.0, theta2))).real
    print(f"theta2 = {theta2:.3f}  diag = {g}")
