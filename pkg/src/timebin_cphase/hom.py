"""
Hong-Ou-Mandel delay scans through the switch.

For the late bin the switch is a beam splitter with intensity reflectivity
``R = sin^2(theta/2)``; the early bin is passed straight through. Photon
distinguishability versus delay follows a Gaussian overlap
``v(tau) = exp(-tau^2 / (2 sigma^2))``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._rng import child_rng

BASELINE_SIGMAS = 3.0


class EstimationError(ValueError):
    """The scan does not contain the points a visibility estimate needs."""


def visibility_theory(R: float) -> float:
    """Ideal dip visibility ``2RT / (R^2 + T^2)`` for reflectivity ``R``."""
    if not 0.0 < R < 1.0:
        raise ValueError(f"reflectivity must lie in (0, 1), got {R}")
    T = 1.0 - R
    return 2 * R * T / (R * R + T * T)


def coincidence_probability(R, v):
    """Probability both outputs fire, given reflectivity ``R`` and overlap ``v``.

    Works elementwise on arrays. ``v = 0`` gives the classical value
    ``R^2 + T^2``; ``v = 1`` gives ``(T - R)^2 = cos^2(theta)``.
    """
    R = np.asarray(R, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any((R < 0) | (R > 1)):
        raise ValueError("reflectivity must lie in [0, 1]")
    if np.any((v < 0) | (v > 1)):
        raise ValueError("overlap must lie in [0, 1]")
    T = 1.0 - R
    p = R * R + T * T - 2 * R * T * v
    return float(p) if p.ndim == 0 else p


def reflectivity_from_theta(theta: float) -> float:
    return math.sin(0.5 * theta) ** 2


def theta_from_reflectivity(R: float) -> float:
    return 2.0 * math.asin(math.sqrt(R))


@dataclass(frozen=True)
class HomScanConfig:
    """Delay scan settings. ``mode`` is ``"t2_split"`` or ``"t1_pass"``."""

    R: float = 0.5
    delay_start: float = -60.0
    delay_stop: float = 60.0
    delay_count: int = 61
    sigma: float = 10.0
    shots_per_point: int = 100_000
    seed: int = 0
    mode: str = "t2_split"

    def __post_init__(self):
        if not 0.0 < self.R < 1.0:
            raise ValueError(f"reflectivity must lie in (0, 1), got {self.R}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.delay_count < 1:
            raise ValueError("need at least one delay")
        if self.shots_per_point < 1:
            raise ValueError("shots_per_point must be positive")
        if self.mode not in ("t2_split", "t1_pass"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def delays(self) -> np.ndarray:
        return np.linspace(self.delay_start, self.delay_stop, self.delay_count)

    @property
    def effective_R(self) -> float:
        # theta(t1) = 0: no mixing at all for the early bin
        return 0.0 if self.mode == "t1_pass" else self.R


@dataclass
class HomScanResult:
    delays: np.ndarray
    p_analytic: np.ndarray
    coincidences: np.ndarray
    shots: np.ndarray
    sigma: float
    R: float
    mode: str = "t2_split"
    sampled: bool = True
    V: float = float("nan")
    sigma_V: float = float("nan")
    config: dict = field(default_factory=dict)

    @property
    def flat(self) -> bool:
        """True when the analytic trace shows no dip at all."""
        return bool(np.ptp(self.p_analytic) < 1e-12)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delay_ps", "p_analytic", "coincidences", "shots"])
        counts_are_int = np.issubdtype(np.asarray(self.coincidences).dtype, np.integer)
        for d, p, k, n in zip(self.delays, self.p_analytic, self.coincidences, self.shots):
            k = int(k) if counts_are_int else format(float(k), ".17g")
            w.writerow([format(float(d), ".17g"), format(float(p), ".17g"), k, int(n)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"V": self.V, "sigma_V": self.sigma_V, "R": self.R}

    def summary_json(self) -> str:
        return json.dumps(self.summary())


def analytic_trace(cfg: HomScanConfig) -> np.ndarray:
    v = np.exp(-cfg.delays ** 2 / (2 * cfg.sigma ** 2))
    return coincidence_probability(np.full_like(v, cfg.effective_R), v)


def hom_scan(cfg: HomScanConfig, sample: bool = True) -> HomScanResult:
    """Run a delay scan.

    Each delay point draws ``Binomial(shots, p)`` from its own stream keyed by
    ``(seed, point index)``. With ``sample=False`` the expected counts
    ``p * shots`` are stored instead, giving a noise-free scan.
    """
    p = analytic_trace(cfg)
    shots = np.full(p.shape, cfg.shots_per_point, dtype=np.int64)
    if sample:
        k = np.array([
            child_rng(cfg.seed, "hom", i).binomial(cfg.shots_per_point, pi)
            for i, pi in enumerate(p)
        ], dtype=np.int64)
    else:
        k = p * shots
    res = HomScanResult(cfg.delays, p, k, shots, cfg.sigma, cfg.R, cfg.mode,
                        sampled=sample, config=asdict(cfg))
    try:
        res.V, res.sigma_V = visibility_estimate(res)
    except EstimationError:
        pass
    return res


def visibility_estimate(scan: HomScanResult) -> tuple[float, float]:
    """Dip visibility ``(baseline - minimum) / baseline`` with its standard error.

    Baseline points are those with ``|tau| > 3 sigma``; the minimum is taken
    over the remaining points. Errors propagate binomial standard errors of
    the minimum and of the baseline mean, and vanish for a noise-free scan.
    """
    tau = np.asarray(scan.delays, dtype=float)
    rate = np.asarray(scan.coincidences, dtype=float) / np.asarray(scan.shots, dtype=float)
    if scan.sampled:
        var = rate * (1 - rate) / np.asarray(scan.shots, dtype=float)
    else:
        var = np.zeros_like(rate)
    base = np.abs(tau) > BASELINE_SIGMAS * scan.sigma
    if base.sum() < 2:
        raise EstimationError(f"need at least 2 baseline points beyond {BASELINE_SIGMAS} sigma, got {base.sum()}")
    if (~base).sum() < 1:
        raise EstimationError("no points inside the dip window")
    b = rate[base].mean()
    if b <= 0:
        raise EstimationError("baseline coincidence rate is zero")
    var_b = var[base].sum() / base.sum() ** 2
    dip = np.flatnonzero(~base)
    i_min = dip[np.argmin(rate[dip])]
    m, var_m = rate[i_min], var[i_min]
    V = (b - m) / b
    sigma_V = math.sqrt(var_m / b ** 2 + var_b * m ** 2 / b ** 4)
    return float(V), float(sigma_V)
