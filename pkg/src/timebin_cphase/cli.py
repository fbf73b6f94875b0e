"""
Command-line front end: ``timebin-cphase <command> [options]``.

Every run is seeded and file based. JSON outputs embed ``schema_version``
and the fully resolved run configuration; CSV outputs get a JSON sidecar
with the same metadata. Exit codes: 0 success, 2 invalid arguments,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import gate, hom, metrics, noise, tomography
from .serialization import (
    SCHEMA_VERSION,
    check_density_matrix,
    csv_text,
    density_from_dict,
    density_to_dict,
    dumps,
    state_to_dict,
)

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3


class NumericalFailure(RuntimeError):
    pass


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _meta(args, command: str) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func" and not k.endswith("command")}
    cfg = {k: str(v) if isinstance(v, Path) else v for k, v in cfg.items()}
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg}


def _load_rho(path: Path) -> np.ndarray:
    doc = json.loads(Path(path).read_text())
    if "density_matrix" in doc:
        doc = doc["density_matrix"]
    return check_density_matrix(density_from_dict(doc), tol=1e-8)


def cmd_gate(args) -> int:
    a = gate.TimeBinQubitSpec.from_c1(args.c1a, args.phi_a, args.att1)
    b = gate.TimeBinQubitSpec.from_c1(args.c1b, args.phi_b, args.att1)
    profile = gate.SwitchProfile(args.theta1, args.theta2)
    res = gate.run_gate(a, b, profile)
    state = res.canonical_state()
    meta = _meta(args, "gate")
    _write(args.out / "gate_state.json", dumps({
        **meta,
        "state": state_to_dict(state),
        "success_probability": res.probability,
    }))
    _write(args.out / "gate_rho.json", dumps({
        **meta,
        "density_matrix": density_to_dict(np.outer(state, state.conj())),
    }))
    print(f"state = {np.round(state, 6)}  success probability = {res.probability:.6g}")
    return EXIT_OK


def cmd_hom(args) -> int:
    cfg = hom.HomScanConfig(
        R=args.ratio, delay_start=args.delay_min, delay_stop=args.delay_max,
        delay_count=args.delay_count, sigma=args.sigma, shots_per_point=args.shots,
        seed=args.seed, mode=args.mode.replace("-", "_"),
    )
    res = hom.hom_scan(cfg)
    _write(args.out / "hom_scan.csv", res.to_csv())
    summary = {
        **_meta(args, "hom"),
        **res.summary(),
        "visibility_theory": hom.visibility_theory(args.ratio) if cfg.mode == "t2_split" else 0.0,
        "flat": res.flat,
        "analytic_range": float(np.ptp(res.p_analytic)),
    }
    _write(args.out / "hom_scan.json", dumps(summary))
    print(f"V = {res.V:.4f} +- {res.sigma_V:.4f}  (flat trace: {res.flat})")
    return EXIT_OK


_STATES = {
    "ideal": lambda: np.outer(metrics.CPHASE_PLUS_PLUS, metrics.CPHASE_PLUS_PLUS.conj()),
    "mixed": lambda: np.eye(4, dtype=complex) / 4,
    "t1t1": lambda: np.diag([1, 0, 0, 0]).astype(complex),
}


def cmd_qst_simulate(args) -> int:
    rho = _load_rho(args.rho) if args.rho else _STATES[args.state]()
    counts = tomography.simulate_counts(rho, shots=args.shots, seed=args.seed)
    _write(args.out, dumps({**_meta(args, "qst simulate"), **counts.to_dict()}))
    print(f"wrote {len(counts.k)} settings x {args.shots} shots to {args.out}")
    return EXIT_OK


def cmd_qst_reconstruct(args) -> int:
    counts = tomography.CountsRecord.from_dict(json.loads(Path(args.counts).read_text()))
    if args.method == "mle":
        rep = tomography.mle_reconstruct(counts, tol=args.tol, max_iter=args.max_iter)
    else:
        rep = tomography.linear_inversion(counts)
    m = metrics.metrics_report(rep.estimate, args.target)
    _write(args.out, dumps({
        **_meta(args, "qst reconstruct"),
        "reconstruction": rep.to_dict(),
        "metrics": m.to_dict(),
    }))
    flag = "  NEGATIVE EIGENVALUES" if rep.min_eigenvalue < 0 else ""
    print(f"{args.method}: fidelity = {m.fidelity_to_target:.6f}  converged = {rep.converged}{flag}")
    if not rep.converged:
        raise NumericalFailure(f"reconstruction did not converge in {args.max_iter} iterations")
    return EXIT_OK


def cmd_metrics(args) -> int:
    rho = _load_rho(args.rho)
    m = metrics.metrics_report(rho, args.target)
    _write(args.out, dumps({**_meta(args, "metrics"), "metrics": m.to_dict()}))
    print(json.dumps(m.to_dict(), indent=2))
    return EXIT_OK


def _noise_config(args, sigma: float = 0.0) -> noise.NoiseConfig:
    return noise.NoiseConfig(
        sigma_theta=sigma, mu_pairs=args.mu, rep_rate_hz=args.rep_rate,
        eta_det=(args.eta_c, args.eta_d), dark_cps=args.dark_cps,
        loss_interferometer_db=args.loss_interferometer_db,
        loss_switch_db=args.loss_switch_db, drift_grid_points=args.grid_points,
    )


def cmd_noise_sweep(args) -> int:
    if args.sigma_step <= 0:
        raise ValueError("--sigma-step must be positive")
    n = int(math.floor((args.sigma_max - args.sigma_min) / args.sigma_step + 1e-9)) + 1
    if n < 1:
        raise ValueError("empty sigma range")
    sigmas = np.round(args.sigma_min + args.sigma_step * np.arange(n), 12)
    cfg = _noise_config(args)
    rows = noise.noise_sweep(sigmas, cfg, include_accidentals=args.include_accidentals)
    _write(args.out, csv_text(noise.SWEEP_HEADER, rows))
    rate = noise.coincidence_rate_estimate(cfg)
    _write(args.out.with_suffix(".json"), dumps({
        **_meta(args, "noise sweep"),
        "noise_config": cfg.to_dict(),
        "predicted_coincidence_rate_hz": rate["rate_hz"],
        "rate_caveat": rate["caveat"],
    }))
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(
        prog="timebin-cphase", formatter_class=fmt,
        description="Time-bin controlled-phase gate simulator.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gate", formatter_class=fmt,
                       help="run the heralded gate on two prepared qubits")
    g.add_argument("--c1a", type=float, default=1 / math.sqrt(2), help="t1 amplitude of qubit A")
    g.add_argument("--c1b", type=float, default=1 / math.sqrt(2), help="t1 amplitude of qubit B")
    g.add_argument("--phi-a", type=float, default=0.0, help="relative phase of qubit A (rad)")
    g.add_argument("--phi-b", type=float, default=0.0, help="relative phase of qubit B (rad)")
    g.add_argument("--att1", type=float, default=gate.ATT1_DEFAULT,
                   help="early-bin amplitude attenuation at preparation (sqrt(1/3))")
    g.add_argument("--theta1", type=float, default=0.0, help="switch phase during t1 (rad)")
    g.add_argument("--theta2", type=float, default=gate.THETA2_DEFAULT,
                   help="switch phase during t2 (rad), 2 arccos(1/sqrt3)")
    g.add_argument("--out", type=Path, default=Path("."), help="output directory")
    g.set_defaults(func=cmd_gate)

    h = sub.add_parser("hom", formatter_class=fmt, help="Hong-Ou-Mandel delay scan")
    h.add_argument("--ratio", type=float, default=0.5, help="late-bin reflectivity R")
    h.add_argument("--delay-min", type=float, default=-60.0, help="first delay (ps)")
    h.add_argument("--delay-max", type=float, default=60.0, help="last delay (ps)")
    h.add_argument("--delay-count", type=int, default=61, help="number of delays")
    h.add_argument("--sigma", type=float, default=10.0, help="overlap width (ps)")
    h.add_argument("--shots", type=int, default=100_000, help="trials per delay")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--mode", choices=["t2-split", "t1-pass"], default="t2-split")
    h.add_argument("--out", type=Path, default=Path("."), help="output directory")
    h.set_defaults(func=cmd_hom)

    q = sub.add_parser("qst", formatter_class=fmt, help="state tomography")
    qsub = q.add_subparsers(dest="qst_command", required=True)
    qs = qsub.add_parser("simulate", formatter_class=fmt, help="simulate tomography counts")
    qs.add_argument("--state", choices=sorted(_STATES), default="ideal",
                    help="built-in state (ideal = CP|++>)")
    qs.add_argument("--rho", type=Path, help="density-matrix JSON, overrides --state")
    qs.add_argument("--shots", type=int, default=100_000, help="trials per setting")
    qs.add_argument("--seed", type=int, default=0)
    qs.add_argument("--out", type=Path, default=Path("counts.json"))
    qs.set_defaults(func=cmd_qst_simulate)
    qr = qsub.add_parser("reconstruct", formatter_class=fmt, help="reconstruct a density matrix")
    qr.add_argument("--counts", type=Path, required=True)
    qr.add_argument("--method", choices=["mle", "linear"], default="mle")
    qr.add_argument("--target", choices=sorted(metrics.TARGETS), default="cphase_plus_plus")
    qr.add_argument("--tol", type=float, default=1e-10)
    qr.add_argument("--max-iter", type=int, default=5000)
    qr.add_argument("--out", type=Path, default=Path("reconstruction.json"))
    qr.set_defaults(func=cmd_qst_reconstruct)

    m = sub.add_parser("metrics", formatter_class=fmt, help="entanglement metrics of a density matrix")
    m.add_argument("--rho", type=Path, required=True)
    m.add_argument("--target", choices=sorted(metrics.TARGETS), default="cphase_plus_plus")
    m.add_argument("--out", type=Path, default=Path("metrics.json"))
    m.set_defaults(func=cmd_metrics)

    n = sub.add_parser("noise", formatter_class=fmt, help="noise model")
    nsub = n.add_subparsers(dest="noise_command", required=True)
    ns = nsub.add_parser("sweep", formatter_class=fmt, help="sweep the switch-drift width")
    ns.add_argument("--sigma-min", type=float, default=0.0, help="rad")
    ns.add_argument("--sigma-max", type=float, default=0.5, help="rad")
    ns.add_argument("--sigma-step", type=float, default=0.05, help="rad")
    ns.add_argument("--mu", type=float, default=0.028, help="mean pairs per pulse")
    ns.add_argument("--rep-rate", type=float, default=2.5e8, help="pulse rate (Hz)")
    ns.add_argument("--eta-c", type=float, default=0.57, help="detector efficiency at C")
    ns.add_argument("--eta-d", type=float, default=0.62, help="detector efficiency at D")
    ns.add_argument("--dark-cps", type=float, default=40.0, help="dark counts per second")
    ns.add_argument("--loss-interferometer-db", type=float, default=2.0,
                    help="insertion loss of one analysis interferometer (dB)")
    ns.add_argument("--loss-switch-db", type=float, default=7.7, help="switch insertion loss (dB)")
    ns.add_argument("--grid-points", type=int, default=21, help="odd drift grid size")
    ns.add_argument("--include-accidentals", action="store_true",
                    help="report the state after white-noise admixture")
    ns.add_argument("--out", type=Path, default=Path("noise_sweep.csv"),
                    help="CSV path; a .json sidecar is written next to it")
    ns.set_defaults(func=cmd_noise_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalFailure, gate.EmptyPostselectionError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
