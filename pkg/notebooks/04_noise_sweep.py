# %% [markdown]
# # How much switch drift can the gate take?
#
# The late-bin splitting ratio of the switch wanders slowly. Here that is a
# Gaussian offset on theta2, averaged incoherently. Accidental coincidences
# from double pairs and dark counts add white noise on top.
#
# None of this is a fit to a real experiment. The drift width is a free knob.

# %%
import numpy as np

from timebin_cphase.metrics import CPHASE_PLUS_PLUS, fidelity_pure, metrics_report
from timebin_cphase.noise import NoiseConfig, coincidence_rate_estimate, noise_sweep, noisy_gate_state

# %% [markdown]
# ## Drift alone

# %%
print("sigma   F       C       min PT   werner_p")
for row in noise_sweep(np.round(np.arange(0, 0.5001, 0.05), 12)):
    print("  ".join(f"{x:.4f}" for x in row))

# %% [markdown]
# ## Finding a demonstration point
#
# A coarse search for the drift width whose full-pipeline fidelity sits
# closest to 0.62. This is how the test fixture was chosen.

# %%
grid = np.round(np.arange(0.3, 0.9001, 0.05), 12)
fid = [fidelity_pure(noisy_gate_state(NoiseConfig(sigma_theta=s)).rho, CPHASE_PLUS_PLUS) for s in grid]
best = grid[int(np.argmin(np.abs(np.array(fid) - 0.62)))]
for s, f in zip(grid, fid):
    print(f"sigma = {s:.2f}  F = {f:.4f}" + ("  <-" if s == best else ""))

# %%
rep = noisy_gate_state(NoiseConfig(sigma_theta=best))
m = metrics_report(rep.rho)
print(f"F = {m.fidelity_to_target:.3f}  C = {m.concurrence:.3f}  S = {m.von_neumann_entropy_bits:.3f}")
print("PT eigenvalues", np.round(m.pt_eigenvalues, 3), "-> entangled:", m.entangled)

# %% [markdown]
# ## Rate budget
#
# The predicted rate lands far above what a lab would see. The caveat says why.

# %%
r = coincidence_rate_estimate(NoiseConfig())
print(f"{r['rate_hz']:.1f} Hz")
print(r["caveat"])
