"""
Two-qubit state tomography: simulated counts, linear inversion and
maximum-likelihood reconstruction.

Each setting projects onto a product ket ``|a> (x) |b>`` with single-qubit
kets drawn from ``t1, t2, plus = (t1 + t2)/sqrt2, plusi = (t1 + i t2)/sqrt2``.
Counts are binomial: ``k`` detections out of ``n`` trials per setting.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from ._rng import child_rng
from .serialization import density_from_dict, density_to_dict

KETS = {
    "t1": np.array([1, 0], dtype=complex),
    "t2": np.array([0, 1], dtype=complex),
    "plus": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "plusi": np.array([1, 1j], dtype=complex) / np.sqrt(2),
}

_PAULI = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
_PAULI_NAMES = "IXYZ"
# rho = sum_k r_k P_k / 4 with real r_k over the 16 two-qubit Pauli products
PAULI_BASIS = np.array([np.kron(a, b) for a in _PAULI for b in _PAULI])
PAULI_LABELS = [a + b for a in _PAULI_NAMES for b in _PAULI_NAMES]


class RankDeficientError(ValueError):
    """The projector set cannot determine every density-matrix direction."""


@dataclass(frozen=True)
class ProjectorSet:
    settings: tuple[tuple[str, str], ...]

    @classmethod
    def standard(cls) -> "ProjectorSet":
        """The 16 product settings ``{t1, t2, plus, plusi}^2``, first label outer."""
        return cls(tuple(itertools.product(KETS, repeat=2)))

    @property
    def kets(self) -> np.ndarray:
        return np.array([np.kron(KETS[a], KETS[b]) for a, b in self.settings])

    @property
    def projectors(self) -> np.ndarray:
        k = self.kets
        return np.einsum("ni,nj->nij", k, k.conj())

    def design_matrix(self) -> np.ndarray:
        """Real matrix mapping Pauli coordinates ``r`` to probabilities ``Tr(Pi rho)``."""
        return np.einsum("nij,kji->nk", self.projectors, PAULI_BASIS).real / 4

    def probabilities(self, rho) -> np.ndarray:
        return np.einsum("nij,ji->n", self.projectors, np.asarray(rho, dtype=complex)).real

    def __len__(self) -> int:
        return len(self.settings)


@dataclass
class CountsRecord:
    settings: list
    k: np.ndarray
    n: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        self.settings = [tuple(s) for s in self.settings]
        self.k = np.asarray(self.k)
        self.n = np.asarray(self.n)
        if len(self.settings) != len(self.k) or len(self.k) != len(self.n):
            raise ValueError("settings, k and n must have equal length")
        if np.any(self.n <= 0):
            raise ValueError("every setting needs a positive number of trials")
        if np.any(self.k < 0) or np.any(self.k > self.n):
            raise ValueError("counts must satisfy 0 <= k <= n")
        for a, b in self.settings:
            if a not in KETS or b not in KETS:
                raise ValueError(f"unknown setting ({a}, {b})")

    @property
    def projector_set(self) -> ProjectorSet:
        return ProjectorSet(tuple(self.settings))

    @property
    def frequencies(self) -> np.ndarray:
        return self.k / self.n

    def to_dict(self) -> dict:
        return {
            "settings": [
                {"a": a, "b": b, "k": int(k), "n": int(n)}
                for (a, b), k, n in zip(self.settings, self.k, self.n)
            ],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CountsRecord":
        s = doc["settings"]
        return cls(
            [(e["a"], e["b"]) for e in s],
            np.array([e["k"] for e in s], dtype=np.int64),
            np.array([e["n"] for e in s], dtype=np.int64),
            doc.get("seed"),
        )

    @classmethod
    def from_probabilities(cls, probs, n: int = 1, pset: ProjectorSet | None = None):
        """Pseudo-counts ``k = p n`` (non-integer), the infinite-shot limit."""
        pset = pset or ProjectorSet.standard()
        probs = np.asarray(probs, dtype=float)
        return cls(list(pset.settings), probs * n, np.full(probs.shape, n, dtype=float))


@dataclass
class ReconstructionReport:
    estimate: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    method: str
    residual: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.estimate)[0])

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "density_matrix": density_to_dict(self.estimate),
            "loglik": self.loglik,
            "iters": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
            "eigenvalues": np.linalg.eigvalsh(self.estimate).tolist(),
            "negative_eigenvalues": bool(self.min_eigenvalue < 0),
            **self.extra,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ReconstructionReport":
        return cls(density_from_dict(doc["density_matrix"]), doc["loglik"], doc["iters"],
                   doc["converged"], doc["method"], doc.get("residual", 0.0))


def simulate_counts(rho, pset: ProjectorSet | None = None, shots: int = 100_000,
                    seed: int = 0) -> CountsRecord:
    """Binomial counts for each setting, one random stream per setting index."""
    pset = pset or ProjectorSet.standard()
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho).real
    if abs(tr - 1) > 1e-6:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    p = np.clip(pset.probabilities(rho), 0.0, 1.0)
    k = np.array([child_rng(seed, "qst", i).binomial(shots, pi) for i, pi in enumerate(p)],
                 dtype=np.int64)
    return CountsRecord(list(pset.settings), k, np.full(len(p), shots, dtype=np.int64), seed)


def log_likelihood(rho, counts: CountsRecord) -> float:
    """Binomial log-likelihood ``sum k ln p + (n - k) ln(1 - p)``."""
    p = np.clip(counts.projector_set.probabilities(rho), 0.0, 1.0)
    k, n = counts.k, counts.n
    with np.errstate(divide="ignore"):
        return float(np.sum(xlogy(k, p) + xlogy(n - k, 1 - p)))


def pauli_to_rho(r) -> np.ndarray:
    return np.einsum("k,kij->ij", np.asarray(r, dtype=float), PAULI_BASIS) / 4


def _deficient_directions(a: np.ndarray, tol: float) -> list[str]:
    _, s, vt = np.linalg.svd(a)
    s = np.concatenate([s, np.zeros(vt.shape[0] - s.size)])
    names = []
    for row in vt[s <= tol * max(s.max(), 1.0)]:
        terms = [f"{c:+.3f}*{PAULI_LABELS[i]}" for i, c in enumerate(row) if abs(c) > 1e-6]
        names.append(" ".join(terms))
    return names


def linear_inversion(counts: CountsRecord) -> ReconstructionReport:
    """Least-squares solution of ``Tr(Pi_i rho) = k_i / n_i`` with ``Tr rho = 1``.

    The unknowns are the 16 real Pauli coordinates, so the result is
    Hermitian by construction; it may have negative eigenvalues. The
    returned residual includes the trace row and is reported before the
    final trace rescaling.
    """
    pset = counts.projector_set
    a = pset.design_matrix()
    if np.linalg.matrix_rank(a, tol=1e-10) < 16:
        dirs = _deficient_directions(a, 1e-10)
        raise RankDeficientError(
            "projector set is not informationally complete; undetermined directions: "
            + "; ".join(dirs)
        )
    trace_row = np.zeros(16)
    trace_row[0] = 1.0
    a_full = np.vstack([a, trace_row])
    f = np.concatenate([counts.frequencies, [1.0]])
    r, *_ = np.linalg.lstsq(a_full, f, rcond=None)
    residual = float(np.linalg.norm(a_full @ r - f))
    rho = pauli_to_rho(r)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return ReconstructionReport(rho, log_likelihood(rho, counts), 0, True, "linear", residual)


def project_to_physical(rho, floor: float = 0.0) -> np.ndarray:
    """Clip eigenvalues at ``floor`` and renormalize the trace."""
    lam, vec = np.linalg.eigh(0.5 * (rho + np.conj(rho).T))
    lam = np.clip(lam, floor, None)
    out = (vec * lam) @ vec.conj().T
    return out / np.trace(out).real


_TRIL = np.tril_indices(4)
_DIAG = _TRIL[0] == _TRIL[1]
_J = np.eye(4)[::-1]


def _params_to_m(x) -> np.ndarray:
    """16 reals -> lower-triangular ``M`` (real diagonal, complex below)."""
    vals = np.zeros(10, dtype=complex)
    vals[_DIAG] = x[:4]
    vals[~_DIAG] = x[4:10] + 1j * x[10:16]
    m = np.zeros((4, 4), dtype=complex)
    m[_TRIL] = vals
    return m


def _m_to_params(m) -> np.ndarray:
    vals = m[_TRIL]
    return np.concatenate([vals[_DIAG].real, vals[~_DIAG].real, vals[~_DIAG].imag])


def params_to_rho(x) -> np.ndarray:
    """``rho = M^H M / Tr(M^H M)``: PSD and unit trace for any parameters."""
    m = _params_to_m(x)
    s = m.conj().T @ m
    return s / np.trace(s).real


def rho_to_params(rho) -> np.ndarray:
    """Inverse of :func:`params_to_rho` for a positive-definite ``rho``."""
    # J rho J = L L^H  =>  rho = M^H M with M = (J L J)^H lower-triangular
    L = np.linalg.cholesky(_J @ rho @ _J)
    m = (_J @ L @ _J).conj().T
    return _m_to_params(m)


def _objective(x, proj, k, n, scale):
    m = _params_to_m(x)
    s = m.conj().T @ m
    t = np.trace(s).real
    rho = s / t
    p = np.einsum("nij,ji->n", proj, rho).real
    p = np.clip(p, 1e-300, 1 - 1e-16)
    with np.errstate(divide="ignore"):
        ll = np.sum(xlogy(k, p) + xlogy(n - k, 1 - p))
    w = np.where(k > 0, k / p, 0.0) - np.where(n - k > 0, (n - k) / (1 - p), 0.0)
    g = np.einsum("n,nij->ij", w, proj)
    h = (g - np.trace(g @ rho).real * np.eye(4)) / t
    dm = 2 * (m @ h)
    grad_vals = dm[_TRIL]
    grad = np.concatenate([grad_vals[_DIAG].real, grad_vals[~_DIAG].real, grad_vals[~_DIAG].imag])
    return -ll / scale, -grad / scale


def mle_reconstruct(counts: CountsRecord, tol: float = 1e-10,
                    max_iter: int = 5000) -> ReconstructionReport:
    """Maximum-likelihood density matrix over the Cholesky parametrization.

    L-BFGS-B ascent on the log-likelihood per trial, started from the
    physical projection of the linear-inversion estimate. ``tol`` bounds the
    per-iteration improvement of the per-trial log-likelihood at convergence.
    """
    lin = linear_inversion(counts)
    start = project_to_physical(lin.estimate, floor=1e-4)
    x0 = rho_to_params(start)
    proj = counts.projector_set.projectors
    k = np.asarray(counts.k, dtype=float)
    n = np.asarray(counts.n, dtype=float)
    scale = float(n.sum())
    res = minimize(
        _objective, x0, args=(proj, k, n, scale), jac=True, method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": tol, "gtol": 1e-12, "maxcor": 30},
    )
    rho = params_to_rho(res.x)
    rho = 0.5 * (rho + rho.conj().T)
    converged = bool(res.success) or res.status == 0
    return ReconstructionReport(
        rho, log_likelihood(rho, counts), int(res.nit), converged and res.nit < max_iter,
        "mle", extra={"optimizer_message": str(res.message)},
    )


def counts_to_json(c: CountsRecord) -> str:
    return json.dumps(c.to_dict())
