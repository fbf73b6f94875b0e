"""
Controlled-phase gate for time-bin qubits built from a time-dependent switch.

Pipeline: two single photons are prepared at ports A and B (with an amplitude
attenuator on the early bin), the switch mixes A/B into C/D independently in
each time bin, and the gate is heralded by a C-D coincidence. Qubit vectors
use the basis order ``|t1 t1>, |t1 t2>, |t2 t1>, |t2 t2>`` with the C-side
(control) label first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    FockState,
    ModeIndex,
    Port,
    TimeBin,
    apply_linear_map,
    product,
)

ATT1_DEFAULT = math.sqrt(1.0 / 3.0)
THETA2_DEFAULT = 2.0 * math.acos(1.0 / math.sqrt(3.0))
QUBIT_BASIS = ("t1t1", "t1t2", "t2t1", "t2t2")
CPHASE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


class EmptyPostselectionError(ValueError):
    """No amplitude survives the coincidence projection."""


@dataclass(frozen=True)
class TimeBinQubitSpec:
    """Input qubit ``c1|t1> + c2 e^{i phi}|t2>`` and its early-bin attenuator.

    ``att1`` is an amplitude factor applied to the ``t1`` component during
    preparation; the default makes the intensity transmission one third.
    """

    c1: float
    c2: float
    phi: float = 0.0
    att1: float = ATT1_DEFAULT

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("amplitudes c1, c2 must be nonnegative")
        if abs(self.c1 ** 2 + self.c2 ** 2 - 1.0) > 1e-12:
            raise ValueError(f"c1^2 + c2^2 = {self.c1 ** 2 + self.c2 ** 2!r}, expected 1")
        if not 0.0 <= self.att1 <= 1.0:
            raise ValueError(f"att1 = {self.att1} outside [0, 1]")

    @classmethod
    def from_c1(cls, c1: float, phi: float = 0.0, att1: float = ATT1_DEFAULT):
        if not 0.0 <= c1 <= 1.0:
            raise ValueError(f"c1 = {c1} outside [0, 1]")
        return cls(c1, math.sqrt(max(0.0, 1.0 - c1 * c1)), phi, att1)

    @classmethod
    def plus(cls, phi: float = 0.0, att1: float = ATT1_DEFAULT):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2), phi, att1)

    @classmethod
    def early(cls, att1: float = ATT1_DEFAULT):
        return cls(1.0, 0.0, 0.0, att1)

    @classmethod
    def late(cls, phi: float = 0.0, att1: float = ATT1_DEFAULT):
        return cls(0.0, 1.0, phi, att1)

    def vector(self) -> np.ndarray:
        """Unattenuated qubit amplitudes ``(c1, c2 e^{i phi})``."""
        return np.array([self.c1, self.c2 * np.exp(1j * self.phi)])


@dataclass(frozen=True)
class SwitchProfile:
    """Phase difference between the switch arms during each time bin (radians)."""

    theta_t1: float = 0.0
    theta_t2: float = THETA2_DEFAULT

    def theta(self, timebin: TimeBin) -> float:
        return self.theta_t1 if timebin is TimeBin.T1 else self.theta_t2

    def shifted(self, delta_t2: float) -> "SwitchProfile":
        return SwitchProfile(self.theta_t1, self.theta_t2 + delta_t2)


@dataclass(frozen=True)
class PostselectResult:
    """Heralded two-qubit state and the probability of the herald."""

    state: np.ndarray
    probability: float

    def canonical_state(self) -> np.ndarray:
        return fix_global_phase(self.state)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())


def fix_global_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    vec = np.asarray(vec, dtype=complex)
    nz = np.flatnonzero(np.abs(vec) > tol)
    if nz.size == 0:
        return vec.copy()
    a = vec[nz[0]]
    return vec * (abs(a) / a)


def prepare_qubit(spec: TimeBinQubitSpec, port: Port | str) -> FockState:
    """Single photon at ``port`` carrying the attenuated qubit amplitudes."""
    port = Port(port) if isinstance(port, str) else port
    if port not in (Port.A, Port.B):
        raise ValueError(f"qubits are prepared at ports A or B, not {port.value}")
    return FockState.from_modes({
        (ModeIndex(port, TimeBin.T1),): spec.att1 * spec.c1,
        (ModeIndex(port, TimeBin.T2),): spec.c2 * np.exp(1j * spec.phi),
    })


def prepare_input_pair(a: TimeBinQubitSpec, b: TimeBinQubitSpec) -> FockState:
    return product(prepare_qubit(a, Port.A), prepare_qubit(b, Port.B))


def switch_rows(p: SwitchProfile) -> dict:
    """Creation-operator substitution of the switch for both time bins.

    Port A transmits to C with ``cos(theta/2)`` and reflects to D with
    ``-sin(theta/2)``; port B goes to C with ``sin`` and to D with ``cos``.
    """
    rows = {}
    for tb in TimeBin:
        h = 0.5 * p.theta(tb)
        c, s = math.cos(h), math.sin(h)
        rows[ModeIndex(Port.A, tb)] = [(ModeIndex(Port.C, tb), c), (ModeIndex(Port.D, tb), -s)]
        rows[ModeIndex(Port.B, tb)] = [(ModeIndex(Port.C, tb), s), (ModeIndex(Port.D, tb), c)]
    return rows


def apply_switch(s: FockState, p: SwitchProfile) -> FockState:
    if s.side == "output":
        raise ValueError("switch input must be supported on ports A and B only")
    return apply_linear_map(s, switch_rows(p))


def postselect_coincidence(s: FockState) -> PostselectResult:
    """Keep the events with one photon at C and one at D.

    The returned probability includes any sub-normalization the state
    already carries (attenuation at preparation).
    """
    if s.photons != 2:
        raise ValueError("coincidence post-selection needs a two-photon state")
    if s.side == "input":
        raise ValueError("post-selection acts on the switch outputs C and D")
    vec = np.zeros(4, dtype=complex)
    for i, tc in enumerate(TimeBin):
        for j, td in enumerate(TimeBin):
            vec[2 * i + j] = s.amplitude([ModeIndex(Port.C, tc), ModeIndex(Port.D, td)])
    prob = float(np.vdot(vec, vec).real)
    if prob <= 1e-28:
        raise EmptyPostselectionError("no amplitude in the C-D coincidence subspace")
    return PostselectResult(vec / math.sqrt(prob), prob)


def run_gate(a: TimeBinQubitSpec, b: TimeBinQubitSpec,
             p: SwitchProfile | None = None) -> PostselectResult:
    """Full pipeline: prepare, switch, herald."""
    p = p or SwitchProfile()
    return postselect_coincidence(apply_switch(prepare_input_pair(a, b), p))


def gate_success_probability(a: TimeBinQubitSpec, b: TimeBinQubitSpec,
                             p: SwitchProfile | None = None) -> float:
    try:
        return run_gate(a, b, p).probability
    except EmptyPostselectionError:
        return 0.0


def ideal_cphase_apply(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got {rho.shape}")
    return CPHASE @ rho @ CPHASE


def cphase_output(a: TimeBinQubitSpec, b: TimeBinQubitSpec) -> np.ndarray:
    """Normalized ideal-gate output ``CP (|a> (x) |b>)``, attenuation ignored."""
    v = CPHASE @ np.kron(a.vector(), b.vector())
    return v / np.linalg.norm(v)


def effective_conditional_gate(p: SwitchProfile | None = None,
                               att1: float = ATT1_DEFAULT) -> np.ndarray:
    """Heralded (unnormalized) map from input qubit basis to C-D coincidence basis.

    Column ``k`` holds the coincidence amplitudes produced by the ``k``-th
    input basis state with early-bin attenuation ``att1`` on each photon.
    The matrix is diagonal when the switch passes the early bin (theta_t1 = 0).
    """
    p = p or SwitchProfile()
    half = [0.5 * p.theta_t1, 0.5 * p.theta_t2]
    att = [att1, 1.0]
    g = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            col = 2 * i + j
            w = att[i] * att[j]
            if i == j:
                g[col, col] = w * math.cos(2 * half[i])
            else:
                # A(bin i)->C with cos, B(bin j)->D with cos
                g[2 * i + j, col] += w * math.cos(half[i]) * math.cos(half[j])
                # A(bin i)->D with -sin, B(bin j)->C with sin
                g[2 * j + i, col] += -w * math.sin(half[i]) * math.sin(half[j])
    return g
