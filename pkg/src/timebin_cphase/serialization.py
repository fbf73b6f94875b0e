"""JSON and CSV helpers shared by the modules and the command-line front end."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1
QUBIT_BASIS_4 = ["t1t1", "t1t2", "t2t1", "t2t2"]
QUBIT_BASIS_2 = ["t1", "t2"]


def check_density_matrix(rho, tol: float = 1e-10, psd_tol: float = 1e-8) -> np.ndarray:
    """Validate a 2x2 or 4x4 density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in (2, 4):
        raise ValueError(f"density matrix must be 2x2 or 4x4, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise ValueError(f"trace is {tr!r}, expected 1")
    lmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lmin < -psd_tol:
        raise ValueError(f"matrix has negative eigenvalue {lmin:.3e}")
    return rho


def density_to_dict(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    return {
        "dim": dim,
        "basis": QUBIT_BASIS_4 if dim == 4 else QUBIT_BASIS_2,
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }


def density_from_dict(doc: dict) -> np.ndarray:
    rho = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
    if rho.shape != (doc["dim"], doc["dim"]):
        raise ValueError(f"matrix shape {rho.shape} does not match dim {doc['dim']}")
    expected = QUBIT_BASIS_4 if doc["dim"] == 4 else QUBIT_BASIS_2
    if list(doc.get("basis", expected)) != expected:
        raise ValueError(f"unsupported basis order {doc['basis']}")
    return rho


def state_to_dict(vec) -> dict:
    vec = np.asarray(vec, dtype=complex)
    return {
        "dim": int(vec.size),
        "basis": QUBIT_BASIS_4 if vec.size == 4 else QUBIT_BASIS_2,
        "amp_re": vec.real.tolist(),
        "amp_im": vec.imag.tolist(),
    }


def state_from_dict(doc: dict) -> np.ndarray:
    return np.asarray(doc["amp_re"], dtype=float) + 1j * np.asarray(doc["amp_im"], dtype=float)


def _clean(obj):
    """Make numpy scalars and arrays JSON-friendly; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(doc: dict) -> str:
    """Deterministic JSON text; floats use Python's shortest round-trip repr."""
    return json.dumps(_clean(doc), indent=2) + "\n"


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(float(x), ".17g") if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()
