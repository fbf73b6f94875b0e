# %% [markdown]
# # Reconstructing the gate output
#
# Sixteen product measurements {t1, t2, +, +i} on each qubit fix the
# two-qubit density matrix. Linear inversion is fast but can return negative
# eigenvalues. Maximum likelihood over a Cholesky factor cannot.

# %%
import numpy as np

from timebin_cphase.metrics import CPHASE_PLUS_PLUS, fidelity_pure, metrics_report
from timebin_cphase.tomography import linear_inversion, mle_reconstruct, simulate_counts

np.set_printoptions(precision=3, suppress=True)
rho_true = np.outer(CPHASE_PLUS_PLUS, CPHASE_PLUS_PLUS.conj())

# %%
counts = simulate_counts(rho_true, shots=100_000, seed=0)
lin = linear_inversion(counts)
mle = mle_reconstruct(counts)
print("linear eigenvalues", np.linalg.eigvalsh(lin.estimate))
print("mle eigenvalues   ", np.linalg.eigvalsh(mle.estimate))
print(f"mle: {mle.iterations} iterations, converged = {mle.converged}")

# %% [markdown]
# ## Fidelity against shot count

# %%
for shots in (1_000, 10_000, 100_000):
    f = [fidelity_pure(mle_reconstruct(simulate_counts(rho_true, shots=shots, seed=s)).estimate,
                       CPHASE_PLUS_PLUS) for s in range(5)]
    print(f"{shots:>7} shots  mean F = {np.mean(f):.5f}  min F = {np.min(f):.5f}")

# %% [markdown]
# ## Full report on the estimate

# %%
for k, v in metrics_report(mle.estimate).to_dict().items():
    print(f"{k:>30}: {v}")
