"""
Exact bosonic state algebra over the eight port/time-bin modes of the switch.

States are sparse maps from occupation tuples to complex amplitudes. The
occupation tuple always has eight entries in the canonical mode order

    (A,t1) (A,t2) (B,t1) (B,t2) (C,t1) (C,t2) (D,t1) (D,t2)

Linear-optical elements act by substituting each creation operator with a
linear combination of output creation operators, which is exact for any
photon number and needs no Fock-space truncation.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

import numpy as np

PRUNE_TOL = 1e-15
UNITARY_TOL = 1e-12
NORM_SLACK = 1e-12
MIN_NORM = 1e-14


class Port(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class TimeBin(Enum):
    T1 = "t1"
    T2 = "t2"


INPUT_PORTS = (Port.A, Port.B)
OUTPUT_PORTS = (Port.C, Port.D)


class ModeIndex(NamedTuple):
    """One optical mode, labelled by switch port and time bin."""

    port: Port
    timebin: TimeBin

    @property
    def index(self) -> int:
        """Position of the mode in the canonical eight-mode order."""
        return 2 * list(Port).index(self.port) + list(TimeBin).index(self.timebin)

    @classmethod
    def parse(cls, label: str) -> "ModeIndex":
        """Build a mode from a label such as ``"A,t1"`` or ``"Dt2"``."""
        text = label.replace(",", "").replace(" ", "")
        try:
            return cls(Port(text[0].upper()), TimeBin(text[1:].lower()))
        except (ValueError, IndexError):
            raise ValueError(f"cannot parse mode label {label!r}") from None

    def __str__(self) -> str:
        return f"{self.port.value},{self.timebin.value}"


MODES = tuple(ModeIndex(p, t) for p in Port for t in TimeBin)
N_MODES = len(MODES)
_INPUT_IDX = frozenset(m.index for m in MODES if m.port in INPUT_PORTS)
_OUTPUT_IDX = frozenset(m.index for m in MODES if m.port in OUTPUT_PORTS)


class ZeroNormError(ValueError):
    """Raised when a state is too close to zero to be normalized."""


def _as_mode(m: ModeIndex | str | int) -> ModeIndex:
    if isinstance(m, ModeIndex):
        return m
    if isinstance(m, str):
        return ModeIndex.parse(m)
    return MODES[int(m)]


def _check_occupation(occ: Sequence[int]) -> tuple[int, ...]:
    occ = tuple(int(n) for n in occ)
    if len(occ) != N_MODES:
        raise ValueError(f"occupation must have {N_MODES} entries, got {len(occ)}")
    if any(n < 0 for n in occ):
        raise ValueError(f"negative photon count in occupation {occ}")
    return occ


def _side(occ: tuple[int, ...]) -> str | None:
    on_in = any(occ[i] for i in _INPUT_IDX)
    on_out = any(occ[i] for i in _OUTPUT_IDX)
    if on_in and on_out:
        return "mixed"
    if on_in:
        return "input"
    if on_out:
        return "output"
    return None


@lru_cache(maxsize=None)
def basis_states(photons: int, side: str = "input") -> tuple[tuple[int, ...], ...]:
    """Enumerate occupations with a fixed photon number on one side of the switch.

    ``side`` is ``"input"`` (ports A, B) or ``"output"`` (ports C, D). The
    order is reverse lexicographic over the canonical mode order, so a single
    photon in the first mode of the side has index 0.
    """
    if side not in ("input", "output"):
        raise ValueError(f"side must be 'input' or 'output', got {side!r}")
    if photons < 0:
        raise ValueError("photon number must be nonnegative")
    offset = 0 if side == "input" else 4
    out = []
    for sub in itertools.product(range(photons, -1, -1), repeat=4):
        if sum(sub) == photons:
            occ = [0] * N_MODES
            occ[offset:offset + 4] = sub
            out.append(tuple(occ))
    return tuple(out)


@lru_cache(maxsize=None)
def _index_table(photons: int, side: str) -> dict[tuple[int, ...], int]:
    return {occ: i for i, occ in enumerate(basis_states(photons, side))}


def basis_index(occupation: Sequence[int]) -> int:
    """Stable index of an occupation within its photon-number and port sector."""
    occ = _check_occupation(occupation)
    side = _side(occ)
    if side == "mixed":
        raise ValueError(f"occupation {occ} mixes input and output ports")
    return _index_table(sum(occ), side or "input")[occ]


def basis_state(index: int, photons: int, side: str = "input") -> tuple[int, ...]:
    """Inverse of :func:`basis_index`."""
    states = basis_states(photons, side)
    if not 0 <= index < len(states):
        raise IndexError(f"index {index} out of range for {len(states)} basis states")
    return states[index]


@dataclass(frozen=True)
class FockState:
    """Sparse superposition of Fock basis states with a common photon number.

    Amplitudes below ``PRUNE_TOL`` are dropped on construction. The squared
    norm may be below one: sub-normalized states carry the probability of
    heralding or attenuation steps applied so far.
    """

    photons: int
    terms: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.photons not in (1, 2):
            raise ValueError(f"only 1- and 2-photon states are supported, got {self.photons}")
        clean: dict[tuple[int, ...], complex] = {}
        sides = set()
        for occ, amp in self.terms.items():
            occ = _check_occupation(occ)
            if sum(occ) != self.photons:
                raise ValueError(f"term {occ} does not hold {self.photons} photons")
            amp = complex(amp)
            if abs(amp) < PRUNE_TOL:
                continue
            clean[occ] = clean.get(occ, 0j) + amp
            sides.add(_side(occ))
        if "mixed" in sides or len(sides) > 1:
            raise ValueError("input ports (A,B) and output ports (C,D) cannot share one state")
        sq = sum(abs(a) ** 2 for a in clean.values())
        if sq > 1 + NORM_SLACK:
            raise ValueError(f"squared norm {sq!r} exceeds 1")
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: kv[0], reverse=True)))

    @classmethod
    def single(cls, mode, amplitude: complex = 1.0) -> "FockState":
        occ = [0] * N_MODES
        occ[_as_mode(mode).index] = 1
        return cls(1, {tuple(occ): amplitude})

    @classmethod
    def from_modes(cls, amplitudes: Mapping[tuple, complex]) -> "FockState":
        """Build a state from ``{(mode, mode, ...): amplitude}`` photon lists."""
        terms: dict[tuple[int, ...], complex] = {}
        photons = None
        for modes, amp in amplitudes.items():
            occ = [0] * N_MODES
            for m in modes:
                occ[_as_mode(m).index] += 1
            n = len(modes)
            if photons is not None and n != photons:
                raise ValueError("all terms must have the same photon number")
            photons = n
            terms[tuple(occ)] = terms.get(tuple(occ), 0j) + amp
        if photons is None:
            raise ValueError("need at least one term to infer the photon number")
        return cls(photons, terms)

    @property
    def side(self) -> str | None:
        for occ in self.terms:
            return _side(occ)
        return None

    def amplitude(self, occupation) -> complex:
        """Amplitude of one basis state; accepts an occupation tuple or a list of modes."""
        if len(occupation) == N_MODES and all(isinstance(n, (int, np.integer)) for n in occupation):
            occ = tuple(int(n) for n in occupation)
        else:
            occ_list = [0] * N_MODES
            for m in occupation:
                occ_list[_as_mode(m).index] += 1
            occ = tuple(occ_list)
        return self.terms.get(occ, 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def scaled(self, factor: complex) -> "FockState":
        return FockState(self.photons, {k: factor * v for k, v in self.terms.items()})

    def to_vector(self, side: str | None = None) -> np.ndarray:
        """Dense amplitude vector over :func:`basis_states` of this sector."""
        side = side or self.side or "input"
        table = _index_table(self.photons, side)
        vec = np.zeros(len(table), dtype=complex)
        for occ, amp in self.terms.items():
            vec[table[occ]] = amp
        return vec

    def to_json(self) -> str:
        doc = {
            "photons": self.photons,
            "terms": [
                {"occ": list(occ), "re": amp.real, "im": amp.imag}
                for occ, amp in self.terms.items()
            ],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "FockState":
        doc = json.loads(text)
        terms = {tuple(t["occ"]): complex(t["re"], t["im"]) for t in doc["terms"]}
        return cls(int(doc["photons"]), terms)


def product(a: FockState, b: FockState) -> FockState:
    """Joint state of two independent photon sources, i.e. the creation-operator product."""
    if a.photons + b.photons > 2:
        raise ValueError("product would exceed two photons")
    terms: dict[tuple[int, ...], complex] = {}
    for oa, xa in a.terms.items():
        for ob, xb in b.terms.items():
            occ = tuple(i + j for i, j in zip(oa, ob))
            # (a†)^n (a†)^m |0> / sqrt(n! m!) = sqrt((n+m)!/(n! m!)) |n+m>
            bose = math.prod(
                math.sqrt(math.comb(i + j, i)) for i, j in zip(oa, ob)
            )
            terms[occ] = terms.get(occ, 0j) + xa * xb * bose
    return FockState(a.photons + b.photons, terms)


def apply_linear_map(s: FockState, rows: Mapping) -> FockState:
    """Substitute creation operators: ``a†_m -> sum_j c_j a†_{out_j}`` for each ``m`` in ``rows``.

    ``rows`` maps a mode to a sequence of ``(out_mode, coefficient)`` pairs.
    Modes not listed pass through unchanged. The map need not be unitary
    (attenuation is a diagonal contraction), so callers check unitarity.
    """
    table: dict[int, list[tuple[int, complex]]] = {}
    for m, row in rows.items():
        table[_as_mode(m).index] = [(_as_mode(o).index, complex(c)) for o, c in row]

    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in s.terms.items():
        creators = [i for i, n in enumerate(occ) for _ in range(n)]
        norm_in = math.prod(math.factorial(n) for n in occ)
        choices = [table.get(i, [(i, 1.0 + 0j)]) for i in creators]
        for picks in itertools.product(*choices):
            coeff = amp
            new = [0] * N_MODES
            for o, c in picks:
                coeff *= c
                new[o] += 1
            if coeff == 0:
                continue
            # prod (a†)^n / sqrt(n!) |0>, and (a†)^m |0> = sqrt(m!) |m>
            coeff *= math.sqrt(math.prod(math.factorial(n) for n in new) / norm_in)
            key = tuple(new)
            out[key] = out.get(key, 0j) + coeff
    return FockState(s.photons, out)


def unitarity_residual(u) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def apply_mode_pair_unitary(s: FockState, m1, m2, u, out=None) -> FockState:
    """Mix two modes with a 2x2 unitary.

    Row ``r`` of ``u`` gives the image of the creation operator of input mode
    ``r``: ``a†_{m1} -> u[0,0] a†_{o1} + u[0,1] a†_{o2}`` and likewise for
    ``m2``. ``out`` relabels the output modes ``(o1, o2)`` and defaults to
    ``(m1, m2)``.
    """
    m1, m2 = _as_mode(m1), _as_mode(m2)
    if m1 == m2:
        raise ValueError("mode pair must consist of two distinct modes")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    res = unitarity_residual(u)
    if res > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (max |u^H u - I| = {res:.3e})")
    o1, o2 = (m1, m2) if out is None else (_as_mode(out[0]), _as_mode(out[1]))
    if o1 == o2:
        raise ValueError("output modes must be distinct")
    return apply_linear_map(s, {
        m1: [(o1, u[0, 0]), (o2, u[0, 1])],
        m2: [(o1, u[1, 0]), (o2, u[1, 1])],
    })


def attenuate(s: FockState, factors: Mapping) -> FockState:
    """Scale each photon in the listed modes by an amplitude factor in [0, 1]."""
    rows = {}
    for m, f in factors.items():
        if not 0 <= f <= 1:
            raise ValueError(f"attenuation factor {f} outside [0, 1]")
        rows[m] = [(m, f)]
    return apply_linear_map(s, rows)


def inner_product(a: FockState, b: FockState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.photons != b.photons:
        raise ValueError(f"photon numbers differ ({a.photons} vs {b.photons})")
    return sum((a.terms[k].conjugate() * v for k, v in b.terms.items() if k in a.terms), 0j)


def normalize(s: FockState) -> tuple[FockState, float]:
    """Return the unit-norm state and the norm it had before."""
    nrm = s.norm()
    if nrm <= MIN_NORM:
        raise ZeroNormError(f"state norm {nrm:.3e} is too small to normalize")
    return s.scaled(1.0 / nrm), nrm


def random_state(rng: np.random.Generator, photons: int = 2, side: str = "input",
                 norm: float = 1.0) -> FockState:
    """Haar-like random state in one sector, handy for property checks."""
    states = basis_states(photons, side)
    v = rng.normal(size=len(states)) + 1j * rng.normal(size=len(states))
    v *= norm / np.linalg.norm(v)
    return FockState(photons, dict(zip(states, v)))


def states_close(a: FockState, b: FockState, atol: float = 1e-12) -> bool:
    keys = set(a.terms) | set(b.terms)
    return all(abs(a.terms.get(k, 0j) - b.terms.get(k, 0j)) <= atol for k in keys)
