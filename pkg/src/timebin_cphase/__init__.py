"""Simulation and analysis of a heralded time-bin controlled-phase gate."""

from .fock import MODES, FockState, ModeIndex, apply_mode_pair_unitary
from .gate import SwitchProfile, TimeBinQubitSpec, effective_conditional_gate, run_gate
from .hom import HomScanConfig, hom_scan, visibility_theory
from .metrics import CPHASE_PLUS_PLUS, metrics_report
from .noise import NoiseConfig, noise_sweep, noisy_gate_state
from .tomography import ProjectorSet, linear_inversion, mle_reconstruct, simulate_counts

__version__ = "0.1.0"

__all__ = [
    "CPHASE_PLUS_PLUS",
    "FockState",
    "HomScanConfig",
    "MODES",
    "ModeIndex",
    "NoiseConfig",
    "ProjectorSet",
    "SwitchProfile",
    "TimeBinQubitSpec",
    "apply_mode_pair_unitary",
    "effective_conditional_gate",
    "hom_scan",
    "linear_inversion",
    "metrics_report",
    "mle_reconstruct",
    "noise_sweep",
    "noisy_gate_state",
    "run_gate",
    "simulate_counts",
    "visibility_theory",
]
