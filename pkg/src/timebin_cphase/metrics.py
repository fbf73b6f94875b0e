"""
State-quality and entanglement measures for two time-bin qubits.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .gate import CPHASE

EIG_CLAMP = 1e-10
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
CNOT = np.array([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
], dtype=complex)

# CP|++>: the maximally entangled target of the gate experiment
CPHASE_PLUS_PLUS = np.array([1, 1, 1, -1], dtype=complex) / 2
TARGETS = {"cphase_plus_plus": CPHASE_PLUS_PLUS}


def _herm(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return 0.5 * (rho + rho.conj().T)


def fidelity_pure(rho, target) -> float:
    """Overlap ``<psi|rho|psi>`` with a normalized pure target (no square root)."""
    psi = np.asarray(target, dtype=complex)
    if abs(np.vdot(psi, psi).real - 1) > 1e-10:
        raise ValueError("target state must be normalized")
    return float(np.vdot(psi, np.asarray(rho, dtype=complex) @ psi).real)


def _spectrum(rho) -> np.ndarray:
    lam = np.linalg.eigvalsh(_herm(rho))
    return np.where(np.abs(lam) < EIG_CLAMP, 0.0, lam)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, with eigenvalues within 1e-10 of zero dropped."""
    lam = _spectrum(rho)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def linear_entropy(rho, normalized: bool = True) -> float:
    """``1 - Tr rho^2``, rescaled by ``d/(d-1)`` unless ``normalized`` is False."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    s = 1.0 - float(np.trace(rho @ rho).real)
    return d / (d - 1) * s if normalized else s


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    With ``rho = W W^H`` the square roots of the eigenvalues of
    ``rho (Y(x)Y) rho* (Y(x)Y)`` are the singular values of ``W^T (Y(x)Y) W``.
    This form stays accurate for rank-deficient states, where square roots
    of round-off eigenvalues would otherwise leak into the result.
    """
    rho = _herm(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined here for two qubits only")
    lam, vec = np.linalg.eigh(rho)
    w = vec * np.sqrt(np.clip(lam, 0, None))
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    sv = np.linalg.svd(w.T @ yy @ w, compute_uv=False)
    return float(max(0.0, sv[0] - sv[1] - sv[2] - sv[3]))


def partial_transpose(rho, subsystem: str = "second") -> np.ndarray:
    rho = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if subsystem == "first":
        out = rho.transpose(2, 1, 0, 3)
    elif subsystem == "second":
        out = rho.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
    return out.reshape(4, 4)


def partial_transpose_spectrum(rho, subsystem: str = "second") -> np.ndarray:
    """Ascending eigenvalues of the partial transpose (Peres test)."""
    return np.linalg.eigvalsh(_herm(partial_transpose(rho, subsystem)))


def negativity(rho) -> float:
    lam = partial_transpose_spectrum(rho)
    return float(-lam[lam < 0].sum())


def reduced_state(rho, keep: str = "first") -> np.ndarray:
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "first":
        return np.einsum("ajbj->ab", r)
    if keep == "second":
        return np.einsum("iaib->ab", r)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def cnot_from_cphase() -> tuple[np.ndarray, float]:
    """Conjugate the target of CP by Hadamards; return the gate and its distance to CNOT."""
    ih = np.kron(np.eye(2), HADAMARD)
    g = ih @ CPHASE @ ih
    return g, float(np.max(np.abs(g - CNOT)))


@dataclass
class MetricsReport:
    fidelity_to_target: float
    target: str
    von_neumann_entropy_bits: float
    linear_entropy: float
    linear_entropy_unnormalized: float
    concurrence: float
    pt_eigenvalues: list
    negativity: float
    reduced_entropy_first_bits: float
    reduced_entropy_second_bits: float

    @property
    def entangled(self) -> bool:
        return self.pt_eigenvalues[0] < 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["entangled_by_ppt"] = self.entangled
        return d


def metrics_report(rho, target="cphase_plus_plus") -> MetricsReport:
    """All reported quantities for a two-qubit density matrix."""
    if isinstance(target, str):
        name, psi = target, TARGETS[target]
    else:
        name, psi = "custom", np.asarray(target, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    return MetricsReport(
        fidelity_to_target=fidelity_pure(rho, psi),
        target=name,
        von_neumann_entropy_bits=von_neumann_entropy(rho),
        linear_entropy=linear_entropy(rho),
        linear_entropy_unnormalized=linear_entropy(rho, normalized=False),
        concurrence=concurrence(rho),
        pt_eigenvalues=partial_transpose_spectrum(rho).tolist(),
        negativity=negativity(rho),
        reduced_entropy_first_bits=von_neumann_entropy(reduced_state(rho, "first")),
        reduced_entropy_second_bits=von_neumann_entropy(reduced_state(rho, "second")),
    )
