"""
Imperfections of the switch-based gate: quasi-static splitting-ratio drift,
accidental coincidences (multi-pair emission and dark counts), detector
efficiency and insertion loss.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .gate import (
    SwitchProfile,
    TimeBinQubitSpec,
    apply_switch,
    gate_success_probability,
    prepare_input_pair,
    run_gate,
    EmptyPostselectionError,
)
from .metrics import CPHASE_PLUS_PLUS, concurrence, fidelity_pure, partial_transpose_spectrum

RATE_CAVEAT = (
    "Advisory only: fiber coupling, bandpass filters, polarizers and the "
    "time-slot selection of the analysis interferometers are not modeled, "
    "so this overestimates the measured coincidence rate."
)


@dataclass(frozen=True)
class NoiseConfig:
    """Noise and loss budget for a fiber-coupled setup.

    ``sigma_theta`` is the standard deviation (radians) of a slow offset of
    the late-bin switch phase; ``eta_det`` are the C and D detector
    efficiencies; losses are per-photon insertion losses in dB.
    """

    sigma_theta: float = 0.0
    mu_pairs: float = 0.028
    rep_rate_hz: float = 2.5e8
    eta_det: tuple[float, float] = (0.57, 0.62)
    dark_cps: float = 40.0
    loss_interferometer_db: float = 2.0
    loss_switch_db: float = 7.7
    drift_grid_points: int = 21

    def __post_init__(self):
        object.__setattr__(self, "eta_det", tuple(float(e) for e in self.eta_det))
        if self.sigma_theta < 0:
            raise ValueError("sigma_theta must be nonnegative")
        if not 0 <= self.mu_pairs < 0.5:
            raise ValueError(f"mu_pairs = {self.mu_pairs} is not a weak-pumping value in [0, 0.5)")
        if self.rep_rate_hz <= 0:
            raise ValueError("rep_rate_hz must be positive")
        if len(self.eta_det) != 2 or not all(0 <= e <= 1 for e in self.eta_det):
            raise ValueError("eta_det must be two efficiencies in [0, 1]")
        if self.dark_cps < 0:
            raise ValueError("dark_cps must be nonnegative")
        if self.loss_interferometer_db < 0 or self.loss_switch_db < 0:
            raise ValueError("losses in dB must be nonnegative")
        _check_grid(self.drift_grid_points)

    @property
    def transmission(self) -> float:
        """Linear per-photon transmission through one interferometer and the switch."""
        return db_to_transmission(self.loss_interferometer_db + self.loss_switch_db)

    @classmethod
    def from_dict(cls, doc: dict) -> "NoiseConfig":
        doc = dict(doc)
        if "eta_det" in doc:
            doc["eta_det"] = tuple(doc["eta_det"])
        return cls(**{k: v for k, v in doc.items() if k in cls.__dataclass_fields__})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eta_det"] = list(self.eta_det)
        return d


@dataclass
class NoisyStateReport:
    rho: np.ndarray
    werner_p: float
    drift_average_applied: bool
    predicted_coincidence_rate_hz: float
    extra: dict = field(default_factory=dict)


def db_to_transmission(db: float) -> float:
    return 10.0 ** (-db / 10.0)


def _check_grid(points: int):
    if points < 1 or points % 2 == 0:
        raise ValueError(f"drift grid needs an odd number of points (center included), got {points}")


def drift_grid(sigma_theta: float, grid_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric offsets over +-4 sigma and normalized Gaussian weights."""
    _check_grid(grid_points)
    if sigma_theta == 0 or grid_points == 1:
        return np.zeros(1), np.ones(1)
    delta = np.linspace(-4 * sigma_theta, 4 * sigma_theta, grid_points)
    w = np.exp(-0.5 * (delta / sigma_theta) ** 2)
    return delta, w / w.sum()


def drift_averaged_state(a: TimeBinQubitSpec | None = None, b: TimeBinQubitSpec | None = None,
                         sigma_theta: float = 0.0, grid_points: int = 21,
                         profile: SwitchProfile | None = None) -> np.ndarray:
    """Heralded density matrix averaged over a slow offset of the late-bin phase.

    Each offset branch contributes its normalized heralded projector weighted
    by the Gaussian weight times its herald probability.
    """
    if sigma_theta < 0:
        raise ValueError("sigma_theta must be nonnegative")
    a = a or TimeBinQubitSpec.plus()
    b = b or TimeBinQubitSpec.plus()
    profile = profile or SwitchProfile()
    delta, w = drift_grid(sigma_theta, grid_points)
    rho = np.zeros((4, 4), dtype=complex)
    total = 0.0
    for d, wi in zip(delta, w):
        try:
            res = run_gate(a, b, profile.shifted(float(d)))
        except EmptyPostselectionError:
            continue
        weight = wi * res.probability
        rho += weight * np.outer(res.state, res.state.conj())
        total += weight
    if total <= 0:
        raise EmptyPostselectionError("no drift branch produced a coincidence")
    rho /= total
    return 0.5 * (rho + rho.conj().T)


def mean_output_photons(a: TimeBinQubitSpec | None = None, b: TimeBinQubitSpec | None = None,
                        profile: SwitchProfile | None = None) -> tuple[float, float]:
    """Mean photon number per pair reaching ports C and D (before detection)."""
    a = a or TimeBinQubitSpec.plus()
    b = b or TimeBinQubitSpec.plus()
    out = apply_switch(prepare_input_pair(a, b), profile or SwitchProfile())
    n_c = n_d = 0.0
    for occ, amp in out.terms.items():
        pr = abs(amp) ** 2
        n_c += pr * (occ[4] + occ[5])
        n_d += pr * (occ[6] + occ[7])
    return n_c, n_d


def coincidence_rates(cfg: NoiseConfig, a: TimeBinQubitSpec | None = None,
                      b: TimeBinQubitSpec | None = None) -> dict:
    """True and accidental coincidence rates (Hz).

    True coincidences come from single-pair pulses. Double-pair pulses give
    uncorrelated coincidences at the same heralding and detection odds per
    pulse, and dark counts pair with photon clicks or other dark counts
    inside a window of one repetition period.
    """
    a = a or TimeBinQubitSpec.plus()
    b = b or TimeBinQubitSpec.plus()
    mu, f = cfg.mu_pairs, cfg.rep_rate_hz
    t = cfg.transmission
    eta_c, eta_d = cfg.eta_det[0] * t, cfg.eta_det[1] * t
    p_gate = gate_success_probability(a, b)
    p1 = mu * math.exp(-mu)
    p2 = 0.5 * mu * mu * math.exp(-mu)
    r_true = f * p1 * p_gate * eta_c * eta_d
    r_multi = f * p2 * p_gate * eta_c * eta_d
    n_c, n_d = mean_output_photons(a, b)
    singles_c = f * mu * n_c * eta_c
    singles_d = f * mu * n_d * eta_d
    window = 1.0 / f
    d = cfg.dark_cps
    r_dark = window * (d * singles_d + d * singles_c + d * d)
    return {
        "true": r_true,
        "multi_pair": r_multi,
        "dark": r_dark,
        "accidental": r_multi + r_dark,
        "singles_c": singles_c,
        "singles_d": singles_d,
    }


def accidental_mixing(rho_signal, cfg: NoiseConfig) -> tuple[np.ndarray, float]:
    """Admix white noise in proportion to accidental coincidences.

    Returns ``p rho + (1 - p) I/4`` and ``p = R_true / (R_true + R_acc)``.
    """
    rates = coincidence_rates(cfg)
    total = rates["true"] + rates["accidental"]
    p = rates["true"] / total if total > 0 else 1.0
    rho = p * np.asarray(rho_signal, dtype=complex) + (1 - p) * np.eye(4) / 4
    return rho, float(p)


def coincidence_rate_estimate(cfg: NoiseConfig) -> dict:
    """Advisory heralded-coincidence rate ``mu f P_gate t_C t_D eta_C eta_D`` (Hz)."""
    t = cfg.transmission
    p_gate = gate_success_probability(TimeBinQubitSpec.plus(), TimeBinQubitSpec.plus())
    rate = cfg.mu_pairs * cfg.rep_rate_hz * p_gate * t * t * cfg.eta_det[0] * cfg.eta_det[1]
    return {"rate_hz": rate, "caveat": RATE_CAVEAT}


def noisy_gate_state(cfg: NoiseConfig, a: TimeBinQubitSpec | None = None,
                     b: TimeBinQubitSpec | None = None) -> NoisyStateReport:
    """Drift average followed by accidental mixing."""
    rho = drift_averaged_state(a, b, cfg.sigma_theta, cfg.drift_grid_points)
    rho, p = accidental_mixing(rho, cfg)
    return NoisyStateReport(
        rho=rho,
        werner_p=p,
        drift_average_applied=cfg.sigma_theta > 0,
        predicted_coincidence_rate_hz=coincidence_rate_estimate(cfg)["rate_hz"],
    )


SWEEP_HEADER = ["sigma_theta_rad", "fidelity", "concurrence", "min_pt_eigenvalue", "werner_p"]


def noise_sweep(sigmas, cfg: NoiseConfig | None = None, target=CPHASE_PLUS_PLUS,
                include_accidentals: bool = False) -> list[tuple[float, float, float, float, float]]:
    """One row of :data:`SWEEP_HEADER` per drift width, other settings from ``cfg``.

    By default the state columns describe the drift-averaged state alone and
    ``werner_p`` reports the white-noise weight the accidentals would add;
    ``include_accidentals=True`` evaluates the state after that admixture.
    """
    cfg = cfg or NoiseConfig()
    rows = []
    for s in sigmas:
        step = NoiseConfig.from_dict({**cfg.to_dict(), "sigma_theta": float(s)})
        rep = noisy_gate_state(step)
        if not include_accidentals:
            rep.rho = drift_averaged_state(sigma_theta=step.sigma_theta,
                                           grid_points=step.drift_grid_points)
        rows.append((
            float(s),
            fidelity_pure(rep.rho, target),
            concurrence(rep.rho),
            float(partial_transpose_spectrum(rep.rho)[0]),
            rep.werner_p,
        ))
    return rows
